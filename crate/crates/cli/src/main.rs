use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use granular_hermite::checks::run_checks;
use granular_hermite::io::{
    cache_header, cache_read, cache_read_matching, cache_write, emit_snapshot, load_config, write_series_csv, Driver,
    RunConfig,
};
use granular_hermite::solver::{haff_fit, heating_exact, run_haff, run_heating, run_homogeneous, run_inhomogeneous_with, Problem};
use granular_hermite::{assemble_tensor, configure_workers, CollisionTensor, KernelSpec, MultiIndex};

#[derive(Parser)]
#[command(name = "granular-hermite", version, about = "Hermite spectral solver for the inelastic Boltzmann equation")]
struct Cli {
    /// Worker threads for parallel sweeps (0: one per core).
    #[arg(long, global = true, env = "GRANULAR_HERMITE_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a collision tensor and write it to a cache file.
    Precompute {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        varpi: f64,
        #[arg(long)]
        e: f64,
        /// Kernel constant C in B = C|g|^(2(1-varpi)).
        #[arg(long = "const")]
        c_const: f64,
        #[arg(long, default_value_t = granular_hermite::coeff::DEFAULT_DROP_TOL)]
        drop_tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the problem described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Tensor cache; read when present, written after assembly otherwise.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the header and sparsity statistics of a cache file.
    Inspect {
        #[arg(long)]
        cache: PathBuf,
    },
    /// Run the built-in invariant checks.
    Validate,
}

type CliResult = Result<(), Box<dyn std::error::Error>>;

fn precompute(m: usize, varpi: f64, e: f64, c_const: f64, drop_tol: f64, out: &Path) -> CliResult {
    let kernel = KernelSpec::new(varpi, c_const, e)?;
    let start = Instant::now();
    let tensor = assemble_tensor(m, &kernel, drop_tol)?;
    cache_write(&tensor, out)?;
    println!("wrote {} ({} entries, order {m}) in {:.2} s", out.display(), tensor.nnz(), start.elapsed().as_secs_f64());
    Ok(())
}

fn inspect(path: &Path) -> CliResult {
    let h = cache_header(path)?;
    let t = cache_read(path)?;
    let n = granular_hermite::basis_size(h.m) as f64;
    let mut above = 0usize;
    let mut max_abs = 0.0f64;
    let mut per_degree = vec![0usize; h.m + 1];
    for (a, l, k, v) in t.entries() {
        let (a, l, k) = (MultiIndex::unrank(a as usize), MultiIndex::unrank(l as usize), MultiIndex::unrank(k as usize));
        if a.degree() < l.degree() + k.degree() {
            above += 1;
        }
        per_degree[a.degree() as usize] += 1;
        max_abs = max_abs.max(v.abs());
    }
    println!("file            {}", path.display());
    println!("format version  {}", h.version);
    println!("order m         {}", h.m);
    println!("kernel          varpi = {}, C = {}, e = {}", h.kernel.varpi, h.kernel.c_const, h.kernel.e);
    println!("drop tolerance  {:e}", h.drop_tol);
    println!("entries         {}", h.nnz);
    println!("fill ratio      {:.6e} of {} slots", h.nnz as f64 / (n * n * n), n * n * n);
    println!("max |A|         {max_abs:e}");
    println!(
        "entries with |alpha| < |lambda| + |kappa|: {above} ({:.2}%)",
        100.0 * above as f64 / (h.nnz.max(1) as f64)
    );
    if h.kernel.varpi == 1.0 {
        println!("maxwell sparsity: {}", if above == 0 { "consistent" } else { "VIOLATED" });
    }
    for (d, c) in per_degree.iter().enumerate() {
        println!("  degree {d:>2}: {c} entries");
    }
    Ok(())
}

fn obtain_tensor(cfg: &RunConfig, cli_cache: Option<&Path>) -> Result<CollisionTensor, Box<dyn std::error::Error>> {
    let m = &cfg.model;
    let path = cli_cache.map(Path::to_path_buf).or_else(|| cfg.cache.clone());
    if let Some(p) = &path {
        if p.exists() {
            let t = cache_read_matching(p, m.m0, &m.kernel)?;
            eprintln!("loaded tensor of order {} from {}", t.m(), p.display());
            return Ok(t);
        }
    }
    let start = Instant::now();
    let t = assemble_tensor(m.m0, &m.kernel, m.drop_tol)?;
    eprintln!("assembled tensor of order {} ({} entries) in {:.2} s", m.m0, t.nnz(), start.elapsed().as_secs_f64());
    if let Some(p) = &path {
        cache_write(&t, p)?;
        eprintln!("cached tensor at {}", p.display());
    }
    Ok(t)
}

fn run(config: &Path, cache: Option<&Path>, out_dir: &Path) -> CliResult {
    let cfg = load_config(config)?;
    fs::create_dir_all(out_dir)?;
    let tensor = obtain_tensor(&cfg, cache)?;
    let start = Instant::now();
    match cfg.driver {
        Driver::Inhomogeneous => {
            let mut count = 0usize;
            let result = run_inhomogeneous_with(&cfg.model, &tensor, |snap| {
                let path = out_dir.join(format!("snapshot_{count:05}.csv"));
                emit_snapshot(&snap.grid, snap.time, &path, &cfg.output_units)?;
                println!("t = {:.6e}  step {:>6}  mass {:.15e}  -> {}", snap.time, snap.step, snap.grid.total_mass(), path.display());
                count += 1;
                Ok(())
            });
            if let Err(fail) = result {
                if let Some(last) = &fail.last_good {
                    let path = out_dir.join("last_good.csv");
                    emit_snapshot(&last.grid, last.time, &path, &cfg.output_units)?;
                    eprintln!("last good state written to {}", path.display());
                }
                return Err(Box::new(fail));
            }
        }
        driver => {
            let series = match (driver, &cfg.model.problem) {
                (Driver::Heating, Problem::Homogeneous { heating, .. }) => run_heating(&cfg.model, &tensor, *heating)?,
                (Driver::Haff, _) => run_haff(&cfg.model, &tensor)?,
                _ => run_homogeneous(&cfg.model, &tensor)?,
            };
            let path = out_dir.join("series.csv");
            write_series_csv(BufWriter::new(File::create(&path)?), &series.times, &series.states, &cfg.output_units)?;
            let (t, theta) = *series.theta().last().expect("series has the initial sample");
            println!("t = {t:.6e}  theta = {theta:.10e}  -> {}", path.display());
            if let Problem::Homogeneous { theta0, heating } = cfg.model.problem {
                if driver == Driver::Heating && cfg.model.kernel.e < 1.0 {
                    let worst = series
                        .theta()
                        .iter()
                        .map(|&(t, th)| heating_exact(theta0, heating, cfg.model.kernel.e, t).map(|x| ((th - x) / x).abs()))
                        .collect::<Result<Vec<_>, _>>()?
                        .into_iter()
                        .fold(0.0, f64::max);
                    println!("max relative deviation from the closed-form temperature: {worst:.3e}");
                }
            }
            if driver == Driver::Haff {
                let fit = haff_fit(&series.theta())?;
                println!("fitted gamma0 = {:.6}  R^2 = {:.6}", fit.gamma0, fit.r_squared);
                if let Some(w) = fit.warning {
                    eprintln!("warning: {w}");
                }
            }
        }
    }
    eprintln!("run finished in {:.2} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn validate() -> CliResult {
    let mut failures = 0;
    for c in run_checks() {
        println!("{} {:<28} {} ({:.2} s)", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail, c.seconds);
        failures += usize::from(!c.passed);
    }
    if failures > 0 {
        return Err(format!("{failures} check(s) failed").into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_workers(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    let result = match &cli.command {
        Command::Precompute { m, varpi, e, c_const, drop_tol, out } => precompute(*m, *varpi, *e, *c_const, *drop_tol, out),
        Command::Run { config, cache, out_dir } => run(config, cache.as_deref(), out_dir),
        Command::Inspect { cache } => inspect(cache),
        Command::Validate => validate(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
