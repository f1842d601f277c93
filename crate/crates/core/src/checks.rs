//! Built-in invariant suite used by the `validate` command.

use std::time::Instant;

use crate::coeff::{assemble_tensor, KernelSpec};
use crate::collision::{esbgk_spectrum_with_pivot, linear_spectrum, nu2_default, CollisionModelParams, Pivot};
use crate::hermite::{hermite_eval_1d, largest_hermite_root, ExpansionCenter};
use crate::index::{basis_size, IndexSet, MultiIndex};
use crate::io::{cache_read, cache_write, compute_knudsen, PhysicalScales};
use crate::macrostate::macro_from_state;
use crate::quadrature::gauss_hermite;
use crate::solver::collision_substep;
use crate::state::{project, SpectralState};
use crate::transport::{convection_step, flux_jacobian, flux_vector, hll_flux, BoundarySpec, GridField};

/// Result of one check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn outcome(name: &'static str, start: Instant, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tol,
        detail: format!("worst deviation {worst:.3e} (limit {tol:.0e})"),
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn failed(name: &'static str, start: Instant, err: impl std::fmt::Display) -> CheckOutcome {
    CheckOutcome { name, passed: false, detail: err.to_string(), seconds: start.elapsed().as_secs_f64() }
}

/// Deterministic pseudo-random value in `[-1, 1)`.
fn wiggle(i: usize) -> f64 {
    let x = (i as f64 * 12.9898 + 78.233).sin() * 43_758.545_3;
    2.0 * (x - x.floor()) - 1.0
}

/// Maxwellian at `center_local` perturbed in its degree ≥ 3 moments.
fn sample_state(m: usize, center: ExpansionCenter<f64>) -> SpectralState<f64> {
    let mut s = SpectralState::maxwellian(m, 1.3, center);
    for r in basis_size(2)..basis_size(m) {
        s.coeffs[r] = 0.02 * wiggle(r);
    }
    s
}

fn hermite_orthogonality() -> CheckOutcome {
    let start = Instant::now();
    let rule = gauss_hermite(20);
    let mut worst = 0.0f64;
    for a in 0..=10 {
        for b in 0..=10 {
            let v = rule.integrate(|x| hermite_eval_1d(a, x) * hermite_eval_1d(b, x));
            let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
            let expect = if a == b { fact(a) } else { 0.0 };
            worst = worst.max((v - expect).abs() / (fact(a) * fact(b)).sqrt());
        }
    }
    outcome("hermite orthogonality", start, worst, 1e-10)
}

fn projection_round_trip() -> CheckOutcome {
    let start = Instant::now();
    let m = 8;
    let basis = IndexSet::new(m);
    let a = ExpansionCenter::new([0.3, -0.2, 0.1], 1.4).unwrap();
    let b = ExpansionCenter::new([-0.1, 0.25, 0.0], 0.8).unwrap();
    let s = sample_state(m, a);
    let back = project(&project(&s, &b, &basis).unwrap(), &a, &basis).unwrap();
    let worst = s.coeffs.iter().zip(&back.coeffs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    outcome("projection round trip", start, worst, 1e-12)
}

fn cooling_identity() -> CheckOutcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for e in [0.0, 0.2, 0.5, 0.8, 1.0] {
        let t = match assemble_tensor(2, &KernelSpec::maxwell(e), 0.0) {
            Ok(t) => t,
            Err(err) => return failed("maxwell cooling rate", start, err),
        };
        let sum: f64 = (0..3).map(|k| t.get(MultiIndex::unit(k) + MultiIndex::unit(k), MultiIndex::ZERO, MultiIndex::ZERO)).sum();
        worst = worst.max((sum + 3.0 * (1.0 - e * e) / 8.0).abs());
    }
    outcome("maxwell cooling rate", start, worst, 1e-10)
}

fn substep_conservation() -> CheckOutcome {
    let start = Instant::now();
    let e = 0.7;
    let tensor = match assemble_tensor(4, &KernelSpec::hard_sphere(e), 0.0) {
        Ok(t) => t,
        Err(err) => return failed("collision conservation", start, err),
    };
    let params = CollisionModelParams::new(4, 6, 2.0, nu2_default(e), 2.0 / 3.0).unwrap();
    let cell = sample_state(6, ExpansionCenter::standard());
    let before = macro_from_state(&cell).unwrap();
    match collision_substep(&cell, &tensor, &params, 0.05, 0.5).and_then(|s| macro_from_state(&s)) {
        Ok(after) => {
            let worst = (0..3).map(|k| (after.u[k] - before.u[k]).abs()).fold((after.rho - before.rho).abs(), f64::max);
            outcome("collision conservation", start, worst, 1e-12)
        }
        Err(err) => failed("collision conservation", start, err),
    }
}

fn periodic_conservation() -> CheckOutcome {
    let start = Instant::now();
    let m = 4;
    let mut g = GridField::<f64>::new(2, 8, 6, 1.0 / 8.0, 1.0 / 6.0, m, ExpansionCenter::standard()).unwrap();
    for (i, j) in g.cells().collect::<Vec<_>>() {
        for (r, c) in g.cell_mut(i, j).iter_mut().enumerate() {
            *c = if r == 0 { 1.0 + 0.3 * wiggle(i * 7 + j) } else { 0.05 * wiggle(100 * r + 10 * i + j) };
        }
    }
    let before = g.coefficient_totals();
    let dt = crate::transport::cfl_dt(&g, &g.center, m, 0.5);
    match convection_step(&g, dt, &BoundarySpec::periodic()) {
        Ok(next) => {
            let after = next.coefficient_totals();
            let worst = before.iter().zip(&after).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / before[0].abs();
            outcome("periodic conservativity", start, worst, 1e-12)
        }
        Err(err) => failed("periodic conservativity", start, err),
    }
}

fn hll_consistency() -> CheckOutcome {
    let start = Instant::now();
    let m = 5;
    let basis = IndexSet::new(m);
    let f: Vec<f64> = (0..basis.len()).map(wiggle).collect();
    let mut worst = 0.0f64;
    for u in [-9.0, -0.4, 0.0, 0.7, 9.0] {
        let c = ExpansionCenter::new([u, -u, 0.5 * u], 1.3).unwrap();
        for d in 0..3 {
            let a = hll_flux(&f, &f, &c, m, d, &basis);
            let b = flux_vector(&f, &c, d, &basis);
            worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
        }
    }
    outcome("hll consistency", start, worst, 1e-13)
}

fn flux_spectrum() -> CheckOutcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for m in [2, 5, 8] {
        let c = ExpansionCenter::<f64>::new([0.4, 0.0, 0.0], 1.7).unwrap();
        let bound = largest_hermite_root(m + 1) * c.t_bar.sqrt();
        match flux_jacobian(m, &c, 0).eigenvalues() {
            Ok(eig) => {
                for z in eig {
                    worst = worst.max(z.im.abs()).max(((z.re - c.u_bar[0]).abs() - bound).max(0.0));
                }
            }
            Err(err) => return failed("flux spectrum bound", start, format!("{err:?}")),
        }
    }
    outcome("flux spectrum bound", start, worst, 1e-8)
}

fn linear_identities() -> CheckOutcome {
    let start = Instant::now();
    let mut s = SpectralState::maxwellian(6, 1.4, ExpansionCenter::new([0.2, 0.0, -0.1], 0.9).unwrap());
    for r in basis_size(2)..basis_size(6) {
        s.coeffs[r] = 0.03 * wiggle(3 * r);
    }
    // Keep the state at its own center: zero the velocity and trace moments.
    let tr = (0..3).map(|k| MultiIndex::unit(k) + MultiIndex::unit(k)).map(|a| s.get(a)).sum::<f64>() / 3.0;
    for k in 0..3 {
        let a = MultiIndex::unit(k) + MultiIndex::unit(k);
        s.set(a, s.get(a) - tr);
    }
    let nu2 = nu2_default(0.6);
    let params = CollisionModelParams::new(1, 6, 1.7, nu2, 2.0 / 3.0).unwrap();
    let q = match linear_spectrum(&s, &params) {
        Ok(q) => q,
        Err(err) => return failed("linear model identities", start, err),
    };
    let rho = s.density();
    let mut worst = q[..4].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let trace: f64 = (0..3).map(|k| q[(MultiIndex::unit(k) + MultiIndex::unit(k)).rank()]).sum();
    worst = worst.max((trace + 3.0 * nu2 * rho * rho).abs());
    worst = worst.max(nu2_default(1.0).abs());
    let stress: [[f64; 3]; 3] = [[0.1, 0.02, -0.03], [0.02, -0.04, 0.05], [-0.03, 0.05, -0.06]];
    let a = esbgk_spectrum_with_pivot(1.2, &stress, 2.0 / 3.0, 8, Pivot::First).unwrap();
    let b = esbgk_spectrum_with_pivot(1.2, &stress, 2.0 / 3.0, 8, Pivot::Last).unwrap();
    worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
    outcome("linear model identities", start, worst, 1e-12)
}

fn knudsen_bookkeeping() -> CheckOutcome {
    let start = Instant::now();
    let a = (compute_knudsen(&PhysicalScales::argon(1.132e-4)) - 1.0).abs();
    let b = (compute_knudsen(&PhysicalScales::argon(5.662e-4)) - 0.2).abs() / 0.2;
    outcome("knudsen numbers", start, a.max(b), 5e-3)
}

fn cache_round_trip() -> CheckOutcome {
    let start = Instant::now();
    let result = (|| -> crate::Result<bool> {
        let t = assemble_tensor(3, &KernelSpec::hard_sphere(0.9), 1e-14)?;
        let path = std::env::temp_dir().join(format!("granular-hermite-check-{}.ibct", std::process::id()));
        cache_write(&t, &path)?;
        let back = cache_read(&path);
        let _ = std::fs::remove_file(&path);
        Ok(back? == t)
    })();
    match result {
        Ok(same) => CheckOutcome {
            name: "cache round trip",
            passed: same,
            detail: if same { "bit-identical".into() } else { "tensor changed".into() },
            seconds: start.elapsed().as_secs_f64(),
        },
        Err(err) => failed("cache round trip", start, err),
    }
}

/// Runs every check; each takes well under a second.
pub fn run_checks() -> Vec<CheckOutcome> {
    vec![
        hermite_orthogonality(),
        projection_round_trip(),
        cooling_identity(),
        substep_conservation(),
        periodic_conservation(),
        hll_consistency(),
        flux_spectrum(),
        linear_identities(),
        knudsen_bookkeeping(),
        cache_round_trip(),
    ]
}
