//! Time integration: the collision substep with re-centering, the split
//! convection/collision loop, homogeneous drivers and Haff-law fitting.

use std::fmt;
use std::sync::Arc;

use crate::coeff::{rescale_center, CollisionTensor, KernelSpec};
use crate::collision::{estimate_nu1, new_model_spectrum, nu2_default, CollisionModelParams};
use crate::error::{Error, Result};
use crate::hermite::ExpansionCenter;
use crate::index::IndexSet;
use crate::macrostate::{local_center_of, macro_from_state, MacroState};
use crate::scalar::Real;
use crate::state::{project, SpectralState};
use crate::transport::{apply_boundaries, cfl_dt, convection_step, BoundarySpec, GridField};

/// Explicit Euler stability bound on `Δt·ν₁f₀/Kn`.
pub const COLLISION_STEP_LIMIT: f64 = 0.9;

/// Order of the convection and collision sub-steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Splitting {
    /// Convection then collision.
    #[default]
    Lie,
    /// Half collision, convection, half collision.
    Strang,
}

/// Initial macroscopic field, `φ(x, y) = φ₀ [1 + a sin(2π k_x x/L_x) sin(2π k_y y/L_y)]`
/// for density and temperature; the `y` factor is dropped in 1D.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialField {
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
    pub rho_amplitude: f64,
    pub rho_modes: [u32; 2],
    pub theta_amplitude: f64,
    pub theta_modes: [u32; 2],
}

impl InitialField {
    pub fn uniform(rho: f64, u: [f64; 3], theta: f64) -> Self {
        InitialField { rho, u, theta, rho_amplitude: 0.0, rho_modes: [1, 1], theta_amplitude: 0.0, theta_modes: [1, 1] }
    }

    fn shape(dims: usize, modes: [u32; 2], x: f64, y: f64, lx: f64, ly: f64) -> f64 {
        let tau = 2.0 * std::f64::consts::PI;
        let sx = (tau * modes[0] as f64 * x / lx).sin();
        if dims == 1 {
            sx
        } else {
            sx * (tau * modes[1] as f64 * y / ly).sin()
        }
    }
}

/// Spatial setup of an inhomogeneous run.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainConfig {
    pub dims: usize,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub boundary: BoundarySpec,
    /// Convection center, fixed for the whole run.
    pub center: ExpansionCenter<f64>,
    pub initial: InitialField,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    /// Space-homogeneous gas, Maxwellian at rest with density one, optionally
    /// driven by the velocity-diffusion heating `ε Δ_v f`.
    Homogeneous { theta0: f64, heating: f64 },
    Inhomogeneous(DomainConfig),
}

/// Dimensionless model and run parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub kernel: KernelSpec,
    pub kn: f64,
    pub m0: usize,
    pub m: usize,
    /// Fixed `ν₁`; estimated from the tensor when absent.
    pub nu1: Option<f64>,
    /// Fixed `ν₂`; `2(1−e²)/(3√π)` when absent.
    pub nu2: Option<f64>,
    pub prandtl: f64,
    /// Homogeneous step, or an upper bound on the inhomogeneous step (0: none).
    pub dt: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub splitting: Splitting,
    /// Snapshot spacing; 0 records the initial and final states only.
    pub output_interval: f64,
    pub drop_tol: f64,
    pub problem: Problem,
}

impl ModelConfig {
    /// Homogeneous run with `M₀ = M = m`, Prandtl number 2/3 and no output
    /// thinning.
    pub fn homogeneous(kernel: KernelSpec, kn: f64, m0: usize, m: usize, dt: f64, t_end: f64) -> Self {
        ModelConfig {
            kernel,
            kn,
            m0,
            m,
            nu1: None,
            nu2: None,
            prandtl: 2.0 / 3.0,
            dt,
            t_end,
            cfl: 0.3,
            splitting: Splitting::Lie,
            output_interval: 0.0,
            drop_tol: crate::coeff::DEFAULT_DROP_TOL,
            problem: Problem::Homogeneous { theta0: 1.0, heating: 0.0 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::ConfigKey { key: name.into(), reason: format!("{v} must be positive") })
            }
        };
        positive("model.kn", self.kn)?;
        positive("time.t_end", self.t_end)?;
        positive("model.prandtl", self.prandtl)?;
        if self.m0 > self.m {
            return Err(Error::ConfigKey { key: "model.m0".into(), reason: format!("{} exceeds model.m = {}", self.m0, self.m) });
        }
        if !(self.dt >= 0.0 && self.dt.is_finite()) {
            return Err(Error::ConfigKey { key: "time.dt".into(), reason: format!("{} must be non-negative", self.dt) });
        }
        if !(self.output_interval >= 0.0 && self.output_interval.is_finite()) {
            return Err(Error::ConfigKey { key: "output.interval".into(), reason: "must be non-negative".into() });
        }
        match &self.problem {
            Problem::Homogeneous { theta0, heating } => {
                positive("initial.theta", *theta0)?;
                positive("time.dt", self.dt)?;
                if !(*heating >= 0.0 && heating.is_finite()) {
                    return Err(Error::ConfigKey { key: "heating.epsilon".into(), reason: "must be non-negative".into() });
                }
            }
            Problem::Inhomogeneous(d) => {
                if !(self.cfl > 0.0 && self.cfl < 1.0) {
                    return Err(Error::ConfigKey { key: "time.cfl".into(), reason: format!("{} must lie in (0, 1)", self.cfl) });
                }
                positive("grid.lx", d.lx)?;
                if d.dims == 2 {
                    positive("grid.ly", d.ly)?;
                }
                positive("initial.rho", d.initial.rho)?;
                positive("initial.theta", d.initial.theta)?;
                for (key, a) in [("initial.rho_amplitude", d.initial.rho_amplitude), ("initial.theta_amplitude", d.initial.theta_amplitude)] {
                    if !(a.abs() < 1.0) {
                        return Err(Error::ConfigKey { key: key.into(), reason: format!("|{a}| must be below one") });
                    }
                }
                d.boundary.validate()?;
                d.center.validate()?;
            }
        }
        Ok(())
    }

    /// Model parameters with `ν₁`, `ν₂` resolved against `tensor`.
    pub fn collision_params(&self, tensor: &CollisionTensor) -> Result<CollisionModelParams> {
        let nu1 = if self.m0 >= 2 {
            estimate_nu1(tensor, self.m0, self.nu1)?
        } else {
            self.nu1.ok_or_else(|| Error::ConfigKey { key: "model.nu1".into(), reason: "required when model.m0 < 2".into() })?
        };
        let nu2 = self.nu2.unwrap_or_else(|| nu2_default(self.kernel.e));
        CollisionModelParams::new(self.m0, self.m, nu1, nu2, self.prandtl)
    }
}

/// Collision update sharing one tensor, basis and parameter set across cells.
#[derive(Clone, Debug)]
pub struct CollisionStepper {
    tensor: CollisionTensor,
    params: CollisionModelParams,
    kn: f64,
    basis: Arc<IndexSet>,
}

impl CollisionStepper {
    /// `params.nu1`, `params.nu2` refer to the tensor's center temperature;
    /// both are rescaled with the tensor to each local temperature.
    pub fn new(tensor: &CollisionTensor, params: CollisionModelParams, kn: f64) -> Result<Self> {
        if !(kn > 0.0 && kn.is_finite()) {
            return Err(Error::Config(format!("Knudsen number {kn} must be positive")));
        }
        if params.m0 > tensor.m() {
            return Err(Error::Config(format!("quadratic band {} exceeds tensor order {}", params.m0, tensor.m())));
        }
        Ok(CollisionStepper { tensor: tensor.clone(), params, kn, basis: Arc::new(IndexSet::new(params.m)) })
    }

    pub fn params(&self) -> &CollisionModelParams {
        &self.params
    }

    pub fn basis(&self) -> &IndexSet {
        &self.basis
    }

    fn temperature_factor(&self, theta: f64) -> f64 {
        (theta / self.tensor.center_temperature()).powf(1.0 - self.tensor.kernel().varpi)
    }

    /// Relaxation stiffness `ν₁f₀/Kn` of a cell with density `rho` and
    /// temperature `theta`.
    pub fn stiffness(&self, rho: f64, theta: f64) -> f64 {
        self.params.nu1 * self.temperature_factor(theta) * rho / self.kn
    }

    /// Forward-Euler step of a state already expanded about its own `(u, θ)`:
    /// `f ← f + Δt (Q/Kn + (ε/θ) Σ_d f_{α−2e_d})`.
    pub fn local_step<T: Real>(&self, local: &SpectralState<T>, dt: f64, heating: f64) -> Result<SpectralState<T>> {
        if local.m != self.params.m {
            return Err(Error::Config(format!("state order {} differs from model order {}", local.m, self.params.m)));
        }
        let theta = local.center.t_bar.to_f64_lossy();
        let factor = self.temperature_factor(theta);
        let tensor = rescale_center(&self.tensor, theta / self.tensor.center_temperature())?;
        let params = CollisionModelParams { nu1: self.params.nu1 * factor, nu2: self.params.nu2 * factor, ..self.params };
        let q = new_model_spectrum(local, &tensor, &params)?;
        let mut next = local.clone();
        let rate = T::of(dt / self.kn);
        for (f, qa) in next.coeffs.iter_mut().zip(&q) {
            *f += rate * *qa;
        }
        if heating != 0.0 {
            let h = T::of(dt * heating / theta);
            for r in 0..local.coeffs.len() {
                for d in 0..3 {
                    let b = self.basis.minus2(d, r);
                    if b != crate::index::NONE {
                        next.coeffs[r] += h * local.coeffs[b as usize];
                    }
                }
            }
        }
        Ok(next)
    }

    /// Local center, project, collide, and return the updated state at its
    /// pre-update local center.
    pub fn recentered_step<T: Real>(&self, cell: &SpectralState<T>, dt: f64, heating: f64) -> Result<SpectralState<T>> {
        let local = local_center_of(cell)?;
        let at_local = project(cell, &local, &self.basis)?;
        let next = self.local_step(&at_local, dt, heating)?;
        if !next.is_finite() {
            return Err(Error::Stability { time: f64::NAN, detail: "non-finite coefficient after collision".into() });
        }
        match macro_from_state(&next) {
            Ok(_) => Ok(next),
            Err(Error::NonPositiveTemperature(t)) => {
                Err(Error::Stability { time: f64::NAN, detail: format!("temperature {t:e} after collision") })
            }
            Err(Error::NonPositiveDensity(r)) => {
                Err(Error::Stability { time: f64::NAN, detail: format!("density {r:e} after collision") })
            }
            Err(e) => Err(e),
        }
    }

    /// Collision update of one cell, returned at the cell's original center.
    pub fn substep<T: Real>(&self, cell: &SpectralState<T>, dt: f64) -> Result<SpectralState<T>> {
        let next = self.recentered_step(cell, dt, 0.0)?;
        project(&next, &cell.center, &self.basis)
    }
}

/// One collision update of `cell` over `dt` with collision scale `1/kn`.
pub fn collision_substep<T: Real>(
    cell: &SpectralState<T>,
    tensor: &CollisionTensor,
    params: &CollisionModelParams,
    dt: f64,
    kn: f64,
) -> Result<SpectralState<T>> {
    CollisionStepper::new(tensor, *params, kn)?.substep(cell, dt)
}

/// Coefficient field at the convection center for the configured initial data.
pub fn initial_grid(config: &ModelConfig, domain: &DomainConfig) -> Result<GridField<f64>> {
    let dx = domain.lx / domain.nx as f64;
    let dy = if domain.dims == 2 { domain.ly / domain.ny as f64 } else { dx };
    let mut grid = GridField::new(domain.dims, domain.nx, domain.ny, dx, dy, config.m, domain.center)?;
    let init = domain.initial;
    let cells: Vec<_> = grid.cells().collect();
    for (i, j) in cells {
        let (x, y) = grid.cell_center(i, j);
        let rho = init.rho * (1.0 + init.rho_amplitude * InitialField::shape(domain.dims, init.rho_modes, x, y, domain.lx, domain.ly));
        let theta =
            init.theta * (1.0 + init.theta_amplitude * InitialField::shape(domain.dims, init.theta_modes, x, y, domain.lx, domain.ly));
        let local = SpectralState::maxwellian(config.m, rho, ExpansionCenter::new(init.u, theta)?);
        grid.set_state(i, j, &local)?;
    }
    Ok(grid)
}

/// Field at one output time.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub time: f64,
    pub step: usize,
    pub grid: GridField<f64>,
}

/// Aborted inhomogeneous run.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    /// Last state that passed the finiteness check.
    pub last_good: Option<Box<Snapshot>>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.last_good {
            Some(s) => write!(f, "{} (last good state at t = {:e}, step {})", self.error, s.time, s.step),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<Error> for RunFailure {
    fn from(error: Error) -> Self {
        RunFailure { error, last_good: None }
    }
}

fn collide_grid(grid: &mut GridField<f64>, stepper: &CollisionStepper, dt: f64, time: f64) -> Result<()> {
    let center = grid.center;
    let m = grid.m;
    grid.par_map_cells(|_, _, coeffs| {
        let cell = SpectralState { m, coeffs: coeffs.to_vec(), center };
        let next = stepper.substep(&cell, dt).map_err(|e| match e {
            Error::Stability { detail, .. } => Error::Stability { time, detail },
            other => other,
        })?;
        coeffs.copy_from_slice(&next.coeffs);
        Ok(())
    })
}

fn stiffness_dt(grid: &GridField<f64>, stepper: &CollisionStepper) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, j) in grid.cells() {
        let mac = macro_from_state(&grid.state(i, j))?;
        worst = worst.max(stepper.stiffness(mac.rho, mac.theta));
    }
    Ok(if worst > 0.0 { COLLISION_STEP_LIMIT / worst } else { f64::INFINITY })
}

/// Split convection/collision loop with a fixed convection center.
/// `on_snapshot` sees the initial state, each output time and the final state.
pub fn run_inhomogeneous_with<F>(config: &ModelConfig, tensor: &CollisionTensor, mut on_snapshot: F) -> Result<(), RunFailure>
where
    F: FnMut(&Snapshot) -> Result<()>,
{
    config.validate()?;
    let Problem::Inhomogeneous(domain) = &config.problem else {
        return Err(Error::Config("run_inhomogeneous needs a spatial domain".into()).into());
    };
    let params = config.collision_params(tensor)?;
    let stepper = CollisionStepper::new(tensor, params, config.kn)?;
    let mut grid = initial_grid(config, domain)?;
    apply_boundaries(&mut grid, &domain.boundary)?;
    let mut snap = Snapshot { time: 0.0, step: 0, grid };
    on_snapshot(&snap)?;

    let t_end = config.t_end;
    let tol = 1e-12 * t_end;
    let mut next_output = if config.output_interval > 0.0 { config.output_interval.min(t_end) } else { t_end };
    while snap.time < t_end - tol {
        let good = snap.clone();
        let fail = |error: Error, good: &Snapshot| RunFailure { error, last_good: Some(Box::new(good.clone())) };
        let mut dt = cfl_dt(&snap.grid, &snap.grid.center, config.m, config.cfl);
        if config.dt > 0.0 {
            dt = dt.min(config.dt);
        }
        dt = dt.min(stiffness_dt(&snap.grid, &stepper).map_err(|e| fail(e, &good))?);
        dt = dt.min(next_output - snap.time);
        let time = snap.time + dt;
        let result = (|| -> Result<GridField<f64>> {
            let mut g = snap.grid.clone();
            match config.splitting {
                Splitting::Lie => {
                    g = convection_step(&g, dt, &domain.boundary)?;
                    collide_grid(&mut g, &stepper, dt, time)?;
                }
                Splitting::Strang => {
                    collide_grid(&mut g, &stepper, 0.5 * dt, time)?;
                    g = convection_step(&g, dt, &domain.boundary)?;
                    collide_grid(&mut g, &stepper, 0.5 * dt, time)?;
                }
            }
            if !g.is_finite() {
                return Err(Error::Stability { time, detail: "non-finite coefficient".into() });
            }
            Ok(g)
        })();
        let grid = result.map_err(|e| fail(e, &good))?;
        snap = Snapshot { time, step: snap.step + 1, grid };
        if snap.time >= next_output - tol {
            snap.time = next_output;
            on_snapshot(&snap).map_err(|e| fail(e, &good))?;
            next_output = if config.output_interval > 0.0 { (next_output + config.output_interval).min(t_end) } else { t_end };
        }
    }
    Ok(())
}

/// [`run_inhomogeneous_with`] collecting every snapshot.
pub fn run_inhomogeneous(config: &ModelConfig, tensor: &CollisionTensor) -> Result<Vec<Snapshot>, RunFailure> {
    let mut out = Vec::new();
    run_inhomogeneous_with(config, tensor, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Macroscopic history of a homogeneous run.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub states: Vec<MacroState<f64>>,
    /// Coefficients at the end of the run.
    pub last: SpectralState<f64>,
}

impl TimeSeries {
    pub fn theta(&self) -> Vec<(f64, f64)> {
        self.times.iter().zip(&self.states).map(|(&t, s)| (t, s.theta)).collect()
    }
}

/// Homogeneous forward-Euler integration, re-centering on the local `(u, θ)`
/// every step. Records every step, or every `output_interval` when set.
pub fn run_homogeneous(config: &ModelConfig, tensor: &CollisionTensor) -> Result<TimeSeries> {
    config.validate()?;
    let Problem::Homogeneous { theta0, heating } = config.problem else {
        return Err(Error::Config("homogeneous driver needs a homogeneous problem".into()));
    };
    let params = config.collision_params(tensor)?;
    let stepper = CollisionStepper::new(tensor, params, config.kn)?;
    let mut state = SpectralState::maxwellian(config.m, 1.0, ExpansionCenter::new([0.0; 3], theta0)?);
    let steps = (config.t_end / config.dt).round().max(1.0) as usize;
    let every = if config.output_interval > 0.0 { (config.output_interval / config.dt).round().max(1.0) as usize } else { 1 };
    let mut times = vec![0.0];
    let mut states = vec![macro_from_state(&state)?];
    for n in 1..=steps {
        let time = n as f64 * config.dt;
        state = stepper.recentered_step(&state, config.dt, heating).map_err(|e| match e {
            Error::Stability { detail, .. } => Error::Stability { time, detail },
            other => other,
        })?;
        if n % every == 0 || n == steps {
            times.push(time);
            states.push(macro_from_state(&state)?);
        }
    }
    Ok(TimeSeries { times, states, last: state })
}

/// Homogeneous run with heating `ε`.
pub fn run_heating(config: &ModelConfig, tensor: &CollisionTensor, epsilon: f64) -> Result<TimeSeries> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Config(format!("heating rate {epsilon} must be positive")));
    }
    let mut cfg = config.clone();
    let theta0 = match config.problem {
        Problem::Homogeneous { theta0, .. } => theta0,
        Problem::Inhomogeneous(_) => return Err(Error::Config("heating driver needs a homogeneous problem".into())),
    };
    cfg.problem = Problem::Homogeneous { theta0, heating: epsilon };
    run_homogeneous(&cfg, tensor)
}

/// Free cooling of hard spheres.
pub fn run_haff(config: &ModelConfig, tensor: &CollisionTensor) -> Result<TimeSeries> {
    if config.kernel.varpi != 0.5 {
        return Err(Error::Config(format!("free cooling expects hard spheres, got varpi = {}", config.kernel.varpi)));
    }
    let mut cfg = config.clone();
    let theta0 = match config.problem {
        Problem::Homogeneous { theta0, .. } => theta0,
        Problem::Inhomogeneous(_) => return Err(Error::Config("cooling driver needs a homogeneous problem".into())),
    };
    cfg.problem = Problem::Homogeneous { theta0, heating: 0.0 };
    run_homogeneous(&cfg, tensor)
}

/// `(θ₀ − 8ε/(1−e²)) exp(−(1−e²)t/4) + 8ε/(1−e²)`.
pub fn heating_exact(theta0: f64, epsilon: f64, e: f64, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return Err(Error::Config(format!("restitution {e} must lie in [0, 1) for a finite steady temperature")));
    }
    let loss = 1.0 - e * e;
    let steady = 8.0 * epsilon / loss;
    Ok((theta0 - steady) * (-loss * t / 4.0).exp() + steady)
}

/// Least-squares fit of `θ(0)/(1+γ₀t)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct HaffFit {
    pub gamma0: f64,
    pub r_squared: f64,
    pub warning: Option<String>,
}

const HAFF_UPPER: f64 = 10.0;

/// Minimizes `Σ(θ_i − θ(0)/(1+γt_i)²)²` over `γ ∈ [0, 10]`: a uniform scan
/// followed by golden-section refinement of the best bracket.
pub fn haff_fit(series: &[(f64, f64)]) -> Result<HaffFit> {
    if series.len() < 10 {
        return Err(Error::Config(format!("need at least 10 samples, got {}", series.len())));
    }
    if let Some(&(t, th)) = series.iter().find(|(t, th)| !(*th > 0.0) || !t.is_finite()) {
        return Err(Error::Config(format!("sample ({t}, {th}) is not a positive temperature")));
    }
    let theta0 = series[0].1;
    let sse = |g: f64| -> f64 {
        series
            .iter()
            .map(|&(t, th)| {
                let r = th - theta0 / (1.0 + g * t).powi(2);
                r * r
            })
            .sum()
    };
    let n = 4000;
    let h = HAFF_UPPER / n as f64;
    let best = (0..=n).min_by(|&a, &b| sse(a as f64 * h).total_cmp(&sse(b as f64 * h))).expect("non-empty scan");
    let (mut a, mut b) = ((best as f64 - 1.0).max(0.0) * h, (best as f64 + 1.0).min(n as f64) * h);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (sse(c), sse(d));
    while b - a > 1e-13 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = sse(d);
        }
    }
    let mut gamma0 = 0.5 * (a + b);
    for edge in [0.0, HAFF_UPPER] {
        if sse(edge) <= sse(gamma0) {
            gamma0 = edge;
        }
    }
    let mean = series.iter().map(|p| p.1).sum::<f64>() / series.len() as f64;
    let sst: f64 = series.iter().map(|p| (p.1 - mean).powi(2)).sum();
    let res = sse(gamma0);
    let r_squared = if sst > 0.0 { 1.0 - res / sst } else if res == 0.0 { 1.0 } else { 0.0 };
    let monotone = series.windows(2).all(|w| w[1].1 <= w[0].1);
    let warning = if !monotone {
        Some("temperature series is not monotonically decreasing; fit quality is questionable".into())
    } else if r_squared < 0.99 {
        Some(format!("poor fit, R² = {r_squared:.4}"))
    } else {
        None
    };
    Ok(HaffFit { gamma0, r_squared, warning })
}
