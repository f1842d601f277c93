//! Acceptance criteria A1–A10, one line per criterion.
//!
//! Run with `cargo test --test acceptance`; extra arguments such as `A3 A7`
//! restrict the run to those criteria.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use granular_hermite::coeff::{assemble_tensor, oracle_block, KernelSpec, OracleResolution, DEFAULT_DROP_TOL};
use granular_hermite::collision::{esbgk_spectrum_with_pivot, linear_spectrum, nu2_default, CollisionModelParams, Pivot};
use granular_hermite::hermite::{hermite_eval_1d, largest_hermite_root};
use granular_hermite::io::{compute_knudsen, PhysicalScales};
use granular_hermite::quadrature::gauss_hermite;
use granular_hermite::solver::{
    collision_substep, haff_fit, heating_exact, run_haff, run_heating, run_inhomogeneous, DomainConfig, InitialField,
    ModelConfig, Problem,
};
use granular_hermite::transport::{
    cfl_dt, convection_step, flux_jacobian, flux_vector, hll_flux, weno_reconstruct, BoundarySpec, GridField,
};
use granular_hermite::{basis_size, macro_from_state, project, ExpansionCenter, IndexSet, MultiIndex, SpectralState};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn error(e: impl std::fmt::Display) -> Verdict {
    verdict(false, format!("error: {e}"))
}

fn wiggle(i: usize) -> f64 {
    let x = (i as f64 * 12.9898 + 78.233).sin() * 43_758.545_3;
    2.0 * (x - x.floor()) - 1.0
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn a1_heating() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for e in [0.2, 0.5, 0.8] {
        let kernel = KernelSpec::maxwell(e);
        let tensor = match assemble_tensor(2, &kernel, DEFAULT_DROP_TOL) {
            Ok(t) => t,
            Err(err) => return error(err),
        };
        let cfg = ModelConfig::homogeneous(kernel, 1.0, 2, 2, 1e-3, 5.0);
        let series = match run_heating(&cfg, &tensor, 0.01) {
            Ok(s) => s,
            Err(err) => return error(err),
        };
        for (t, th) in series.theta() {
            let exact = heating_exact(1.0, 0.01, e, t).expect("e < 1");
            worst = worst.max(((th - exact) / exact).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(worst <= 2e-3 && secs < 5.0, format!("max relative error {worst:.3e} (limit 2e-3), {secs:.2} s (limit 5 s)"))
}

fn a2_cooling_rate() -> Verdict {
    let mut worst = 0.0f64;
    for e in [0.0, 0.2, 0.5, 0.8, 1.0] {
        let t = match assemble_tensor(2, &KernelSpec::maxwell(e), 0.0) {
            Ok(t) => t,
            Err(err) => return error(err),
        };
        let sum: f64 = (0..3).map(|k| t.get(MultiIndex::unit(k) + MultiIndex::unit(k), MultiIndex::ZERO, MultiIndex::ZERO)).sum();
        worst = worst.max((sum + 3.0 * (1.0 - e * e) / 8.0).abs());
    }
    verdict(worst <= 1e-10, format!("worst deviation {worst:.3e} (limit 1e-10)"))
}

fn a3_oracle() -> Verdict {
    let n = basis_size(2);
    // Exact in the Hermite and angular variables for total degree 6.
    let resolution = OracleResolution::for_degree(6);
    let mut worst = 0.0f64;
    for e in [0.2, 0.5, 0.9, 1.0] {
        for kernel in [KernelSpec::maxwell(e), KernelSpec::hard_sphere(e)] {
            let tensor = match assemble_tensor(2, &kernel, DEFAULT_DROP_TOL) {
                Ok(t) => t,
                Err(err) => return error(err),
            };
            let block = oracle_block(2, &kernel, resolution);
            if let Some(w) = block.warning {
                return verdict(false, w);
            }
            for a in 0..n {
                for l in 0..n {
                    for k in 0..n {
                        let (a, l, k) = (MultiIndex::unrank(a), MultiIndex::unrank(l), MultiIndex::unrank(k));
                        // Conserved rows are stored empty; compare what the
                        // quadratic form sees.
                        let (exact, quad) = if a.degree() <= 1 {
                            (tensor.get(a, l, k) + tensor.get(a, k, l), block.get(a, l, k) + block.get(a, k, l))
                        } else {
                            (tensor.get(a, l, k), block.get(a, l, k))
                        };
                        worst = worst.max((exact - quad).abs() / quad.abs().max(1.0));
                    }
                }
            }
        }
    }
    verdict(worst <= 1e-6, format!("8 kernels, worst scaled deviation {worst:.3e} (limit 1e-6)"))
}

fn a4_sparsity() -> Verdict {
    let m = 6;
    // Forbidden entries: |α| < |λ|+|κ| for Maxwell molecules, or any entry in
    // a conserved row. `raw` is their size with nothing dropped.
    let scan = |drop_tol: f64| -> granular_hermite::Result<(f64, usize)> {
        let mut worst = 0.0f64;
        let mut count = 0;
        for e in [0.3, 0.9] {
            let t = assemble_tensor(m, &KernelSpec::maxwell(e), drop_tol)?;
            for (a, l, k, v) in t.entries() {
                let (a, l, k) = (MultiIndex::unrank(a as usize), MultiIndex::unrank(l as usize), MultiIndex::unrank(k as usize));
                if a.degree() < l.degree() + k.degree() || a.degree() <= 1 {
                    worst = worst.max(v.abs());
                    count += 1;
                }
            }
        }
        Ok((worst, count))
    };
    let ((raw, _), (_, kept)) = match (scan(0.0), scan(DEFAULT_DROP_TOL)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(err), _) | (_, Err(err)) => return error(err),
    };
    verdict(
        kept == 0 && raw <= DEFAULT_DROP_TOL,
        format!("M = {m}: {kept} forbidden entries at drop tolerance {DEFAULT_DROP_TOL:e}; largest undropped residue {raw:.1e}"),
    )
}

fn a5_haff() -> Verdict {
    let start = Instant::now();
    let kernel = KernelSpec::hard_sphere(0.8);
    let tensor = match assemble_tensor(10, &kernel, DEFAULT_DROP_TOL) {
        Ok(t) => t,
        Err(err) => return error(err),
    };
    let cfg = ModelConfig::homogeneous(kernel, std::f64::consts::FRAC_1_SQRT_2, 10, 20, 0.01, 5.0);
    let fit = match run_haff(&cfg, &tensor).and_then(|s| haff_fit(&s.theta())) {
        Ok(f) => f,
        Err(err) => return error(err),
    };
    let rel = (fit.gamma0 - 0.135).abs() / 0.135;
    verdict(
        fit.r_squared >= 0.99 && rel <= 0.15,
        format!(
            "gamma0 = {:.5} ({:.1}% from 0.135, limit 15%), R² = {:.6}, {:.1} s",
            fit.gamma0,
            100.0 * rel,
            fit.r_squared,
            start.elapsed().as_secs_f64()
        ),
    )
}

/// `He_n(x) = n! Σ_m (−1)^m x^{n−2m} / (m! (n−2m)! 2^m)`.
fn hermite_explicit(n: usize, x: f64) -> f64 {
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    (0..=n / 2).map(|m| (-1f64).powi(m as i32) * x.powi((n - 2 * m) as i32) / (fact(m) * fact(n - 2 * m) * 2f64.powi(m as i32))).sum::<f64>()
        * fact(n)
}

fn hermite_derivative_explicit(n: usize, x: f64) -> f64 {
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    (0..=n / 2)
        .filter(|m| n > 2 * m)
        .map(|m| {
            let p = n - 2 * m;
            (-1f64).powi(m as i32) * p as f64 * x.powi(p as i32 - 1) / (fact(m) * fact(p) * 2f64.powi(m as i32))
        })
        .sum::<f64>()
        * fact(n)
}

fn a6_projection_conservation() -> Verdict {
    let m = 8;
    let basis = IndexSet::new(m);
    let a = ExpansionCenter::new([0.3, -0.2, 0.1], 1.4).unwrap();
    let b = ExpansionCenter::new([-0.1, 0.25, 0.0], 0.8).unwrap();
    let mut s = SpectralState::maxwellian(m, 1.3, a);
    for r in basis_size(2)..basis.len() {
        s.coeffs[r] = 0.02 * wiggle(r);
    }
    let round = match project(&s, &b, &basis).and_then(|p| project(&p, &a, &basis)) {
        Ok(back) => max_abs_diff(&s.coeffs, &back.coeffs),
        Err(err) => return error(err),
    };

    let e = 0.7;
    let tensor = match assemble_tensor(4, &KernelSpec::hard_sphere(e), 0.0) {
        Ok(t) => t,
        Err(err) => return error(err),
    };
    let params = CollisionModelParams::new(4, 6, 2.0, nu2_default(e), 2.0 / 3.0).unwrap();
    let mut cell = SpectralState::maxwellian(6, 1.1, ExpansionCenter::new([0.2, -0.1, 0.05], 1.2).unwrap());
    for r in basis_size(2)..basis_size(6) {
        cell.coeffs[r] = 0.02 * wiggle(7 * r);
    }
    let invariance = match (macro_from_state(&cell), collision_substep(&cell, &tensor, &params, 0.05, 0.5).and_then(|s| macro_from_state(&s))) {
        (Ok(x), Ok(y)) => (0..3).map(|k| (x.u[k] - y.u[k]).abs()).fold((x.rho - y.rho).abs(), f64::max),
        (Err(err), _) | (_, Err(err)) => return error(err),
    };

    let rule = gauss_hermite(24);
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let mut ortho = 0.0f64;
    for p in 0..=12 {
        for q in 0..=12 {
            let v = rule.integrate(|x| hermite_eval_1d(p, x) * hermite_eval_1d(q, x));
            let expect = if p == q { fact(p) } else { 0.0 };
            ortho = ortho.max((v - expect).abs() / (fact(p) * fact(q)).sqrt());
        }
    }
    let mut recur = 0.0f64;
    for n in 0..=12 {
        for x in [-3.7f64, -1.2, -0.3, 0.0, 0.45, 1.9, 4.1] {
            let scale = hermite_explicit(n, x.abs() + 1.0).abs().max(1.0);
            recur = recur.max((hermite_eval_1d(n, x) - hermite_explicit(n, x)).abs() / scale);
            if n >= 1 {
                let d = hermite_derivative_explicit(n, x) - n as f64 * hermite_eval_1d(n - 1, x);
                recur = recur.max(d.abs() / scale);
                let r = hermite_eval_1d(n + 1, x) - (x * hermite_eval_1d(n, x) - n as f64 * hermite_eval_1d(n - 1, x));
                recur = recur.max(r.abs() / scale);
            }
        }
    }
    verdict(
        round <= 1e-12 && invariance <= 1e-12 && ortho <= 1e-10 && recur <= 1e-10,
        format!("round trip {round:.1e}, ρ/u drift {invariance:.1e}, orthogonality {ortho:.1e}, recurrence/derivative {recur:.1e}"),
    )
}

fn weno_error(cells: usize) -> f64 {
    let h = 1.0 / cells as f64;
    let f = |x: f64| (2.0 * PI * x).sin() + 0.5 * (4.0 * PI * x).cos();
    let avg = |j: isize| {
        let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
        let prim = |x: f64| -(2.0 * PI * x).cos() / (2.0 * PI) + 0.5 * (4.0 * PI * x).sin() / (4.0 * PI);
        vec![(prim(b) - prim(a)) / h]
    };
    let mut err = 0.0;
    for j in 0..cells as isize {
        let (left, right) = weno_reconstruct(&avg(j - 1), &avg(j), &avg(j + 1));
        err += h * ((left[0] - f((j + 1) as f64 * h)).abs() + (right[0] - f(j as f64 * h)).abs());
    }
    err
}

fn a7_transport() -> Verdict {
    let m = 4;
    let mut g = GridField::<f64>::new(2, 8, 6, 1.0 / 8.0, 1.0 / 6.0, m, ExpansionCenter::standard()).unwrap();
    for (i, j) in g.cells().collect::<Vec<_>>() {
        for (r, c) in g.cell_mut(i, j).iter_mut().enumerate() {
            *c = if r == 0 { 1.0 + 0.3 * wiggle(i * 7 + j) } else { 0.05 * wiggle(100 * r + 10 * i + j) };
        }
    }
    let before = g.coefficient_totals();
    let dt = cfl_dt(&g, &g.center, m, 0.5);
    let conserv = match convection_step(&g, dt, &BoundarySpec::periodic()) {
        Ok(next) => max_abs_diff(&before, &next.coefficient_totals()) / before[0],
        Err(err) => return error(err),
    };

    let basis = IndexSet::new(5);
    let f: Vec<f64> = (0..basis.len()).map(wiggle).collect();
    let mut hll = 0.0f64;
    for u in [-9.0, -0.4, 0.0, 0.7, 9.0] {
        let c = ExpansionCenter::new([u, -u, 0.5 * u], 1.3).unwrap();
        for d in 0..3 {
            hll = hll.max(max_abs_diff(&hll_flux(&f, &f, &c, 5, d, &basis), &flux_vector(&f, &c, d, &basis)));
        }
    }

    let errs: Vec<f64> = [80, 160, 320, 640].iter().map(|&n| weno_error(n)).collect();
    let order = errs.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);

    let mut spectrum = 0.0f64;
    for m in 0..=8 {
        for (d, c) in [(0, ExpansionCenter::<f64>::new([0.4, 0.0, 0.0], 1.7).unwrap()), (1, ExpansionCenter::new([0.0, -1.1, 0.2], 0.6).unwrap())] {
            let bound = largest_hermite_root(m + 1) * c.t_bar.sqrt();
            match flux_jacobian(m, &c, d).eigenvalues() {
                Ok(eig) => {
                    for z in eig {
                        spectrum = spectrum.max(z.im.abs()).max(((z.re - c.u_bar[d]).abs() - bound).max(0.0));
                    }
                }
                Err(err) => return error(format!("{err:?}")),
            }
        }
    }
    verdict(
        conserv <= 1e-12 && hll <= 1e-13 && order >= 1.9 && spectrum <= 1e-8,
        format!("conservation {conserv:.1e}, HLL consistency {hll:.1e}, WENO order {order:.2}, spectrum excess {spectrum:.1e}"),
    )
}

fn a8_diffusion() -> Verdict {
    let start = Instant::now();
    let kernel = KernelSpec::hard_sphere(0.9);
    let tensor = match assemble_tensor(6, &kernel, DEFAULT_DROP_TOL) {
        Ok(t) => t,
        Err(err) => return error(err),
    };
    let mut initial = InitialField::uniform(1.0, [0.0; 3], 1.0);
    initial.rho_amplitude = 0.5;
    let mut cfg = ModelConfig::homogeneous(kernel, 1.0, 6, 10, 0.0, 0.1);
    cfg.output_interval = 0.01;
    cfg.problem = Problem::Inhomogeneous(DomainConfig {
        dims: 2,
        nx: 32,
        ny: 32,
        lx: 1.0,
        ly: 1.0,
        boundary: BoundarySpec::periodic(),
        center: ExpansionCenter::standard(),
        initial,
    });
    let snaps = match run_inhomogeneous(&cfg, &tensor) {
        Ok(s) => s,
        Err(fail) => return error(fail),
    };
    let mut mean_theta = Vec::new();
    let mut rho_var = Vec::new();
    for s in &snaps {
        let macros: Vec<_> = match s.grid.cells().map(|(i, j)| macro_from_state(&s.grid.state(i, j))).collect() {
            Ok(v) => v,
            Err(err) => return error(err),
        };
        let n = macros.len() as f64;
        mean_theta.push(macros.iter().map(|x| x.theta).sum::<f64>() / n);
        let mean_rho = macros.iter().map(|x| x.rho).sum::<f64>() / n;
        rho_var.push(macros.iter().map(|x| (x.rho - mean_rho).powi(2)).sum::<f64>() / n);
    }
    let m0 = snaps[0].grid.total_mass();
    let drift = snaps.iter().map(|s| (s.grid.total_mass() - m0).abs() / m0).fold(0.0, f64::max);
    let monotone = mean_theta.windows(2).all(|w| w[1] < w[0]);
    let (v0, v1) = (rho_var[0], *rho_var.last().unwrap());
    verdict(
        drift <= 1e-10 && monotone && v1 < v0 && (snaps.last().unwrap().time - 0.1).abs() < 1e-12,
        format!(
            "{} snapshots, mass drift {drift:.1e}, mean θ {:.6} -> {:.6} ({}), ρ variance {v0:.3e} -> {v1:.3e}, {:.1} s",
            snaps.len(),
            mean_theta[0],
            mean_theta.last().unwrap(),
            if monotone { "monotone" } else { "NOT monotone" },
            start.elapsed().as_secs_f64()
        ),
    )
}

fn a9_knudsen() -> Verdict {
    let a = compute_knudsen(&PhysicalScales::argon(1.132e-4));
    let b = compute_knudsen(&PhysicalScales::argon(5.662e-4));
    let worst = ((a - 1.0).abs()).max((b - 0.2).abs() / 0.2);
    verdict(worst <= 5e-3, format!("Kn = {a:.5} and {b:.5}, worst relative error {worst:.2e} (limit 5e-3)"))
}

fn a10_linear_model() -> Verdict {
    let center = ExpansionCenter::new([0.2, 0.0, -0.1], 0.9).unwrap();
    let mut s = SpectralState::maxwellian(6, 1.4, center);
    for r in basis_size(2)..basis_size(6) {
        s.coeffs[r] = 0.03 * wiggle(3 * r);
    }
    let tr = (0..3).map(|k| s.get(MultiIndex::unit(k) + MultiIndex::unit(k))).sum::<f64>() / 3.0;
    for k in 0..3 {
        let a = MultiIndex::unit(k) + MultiIndex::unit(k);
        s.set(a, s.get(a) - tr);
    }
    let nu2 = nu2_default(0.6);
    let mut worst = 0.0f64;
    for pr in [2.0 / 3.0, 1.0] {
        let params = CollisionModelParams::new(1, 6, 1.7, nu2, pr).unwrap();
        let q = match linear_spectrum(&s, &params) {
            Ok(q) => q,
            Err(err) => return error(err),
        };
        let rho = s.density();
        worst = q[..4].iter().fold(worst, |a, v| a.max(v.abs()));
        let trace: f64 = (0..3).map(|k| q[(MultiIndex::unit(k) + MultiIndex::unit(k)).rank()]).sum();
        worst = worst.max((trace + 3.0 * nu2 * rho * rho).abs());
    }
    let elastic = nu2_default(1.0);
    let stress = [[0.1, 0.02, -0.03], [0.02, -0.04, 0.05], [-0.03, 0.05, -0.06]];
    let mut pivot = 0.0f64;
    for m in [4, 8] {
        match (
            esbgk_spectrum_with_pivot(1.2, &stress, 2.0 / 3.0, m, Pivot::First),
            esbgk_spectrum_with_pivot(1.2, &stress, 2.0 / 3.0, m, Pivot::Last),
        ) {
            (Ok(a), Ok(b)) => pivot = pivot.max(max_abs_diff(&a, &b)),
            (Err(err), _) | (_, Err(err)) => return error(err),
        }
    }
    verdict(
        worst <= 1e-12 && elastic == 0.0 && pivot <= 1e-12,
        format!("identity residual {worst:.1e}, ν₂(1) = {elastic}, pivot difference {pivot:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("A1", a1_heating),
        ("A2", a2_cooling_rate),
        ("A3", a3_oracle),
        ("A4", a4_sparsity),
        ("A5", a5_haff),
        ("A6", a6_projection_conservation),
        ("A7", a7_transport),
        ("A8", a8_diffusion),
        ("A9", a9_knudsen),
        ("A10", a10_linear_model),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (id, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let v = check();
        println!("{id:<4} {} {} [{:.2} s]", if v.passed { "PASS" } else { "FAIL" }, v.detail, start.elapsed().as_secs_f64());
        failures += usize::from(!v.passed);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
