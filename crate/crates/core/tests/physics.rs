use granular_hermite::coeff::{assemble_tensor, KernelSpec};
use granular_hermite::solver::{run_heating, run_inhomogeneous, DomainConfig, InitialField, ModelConfig, Problem, Splitting};
use granular_hermite::transport::{BoundarySpec, SideKind};
use granular_hermite::{macro_from_state, CollisionTensor, ExpansionCenter, MacroState};

/// For Maxwell molecules the temperature equation closes on itself, so the
/// truncation order must not change θ(t).
#[test]
fn maxwell_temperature_ignores_truncation_order() {
    let e = 0.4;
    let kernel = KernelSpec::maxwell(e);
    let run = |m: usize| {
        let tensor = assemble_tensor(m, &kernel, 0.0).unwrap();
        let cfg = ModelConfig::homogeneous(kernel, 1.0, m, m, 1e-2, 2.0);
        run_heating(&cfg, &tensor, 0.02).unwrap().theta()
    };
    let (low, high) = (run(2), run(6));
    assert_eq!(low.len(), high.len());
    for ((_, a), (_, b)) in low.iter().zip(&high) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

fn couette(e: f64, splitting: Splitting, dt_cap: f64, t_end: f64) -> (ModelConfig, CollisionTensor) {
    let kernel = KernelSpec::hard_sphere(e);
    let tensor = assemble_tensor(3, &kernel, 0.0).unwrap();
    let mut cfg = ModelConfig::homogeneous(kernel, 0.5, 3, 5, dt_cap, t_end);
    cfg.splitting = splitting;
    let wall = |v: f64| SideKind::DiffusiveWall { u_w: [0.0, v, 0.0], theta_w: 1.0 };
    cfg.problem = Problem::Inhomogeneous(DomainConfig {
        dims: 1,
        nx: 16,
        ny: 1,
        lx: 1.0,
        ly: 1.0,
        boundary: BoundarySpec { x_lo: wall(-0.3), x_hi: wall(0.3), ..BoundarySpec::periodic() },
        center: ExpansionCenter::standard(),
        initial: InitialField::uniform(1.0, [0.0; 3], 1.0),
    });
    (cfg, tensor)
}

fn profile(cfg: &ModelConfig, tensor: &CollisionTensor) -> Vec<MacroState<f64>> {
    let snaps = run_inhomogeneous(cfg, tensor).unwrap();
    let g = &snaps.last().unwrap().grid;
    g.cells().map(|(i, j)| macro_from_state(&g.state(i, j)).unwrap()).collect()
}

#[test]
fn couette_profile_is_mirror_symmetric() {
    let (cfg, tensor) = couette(0.8, Splitting::Lie, 0.0, 0.3);
    let p = profile(&cfg, &tensor);
    let n = p.len();
    assert!(p.iter().any(|s| s.u[1].abs() > 1e-3), "walls must drive a shear flow");
    for i in 0..n / 2 {
        let (a, b) = (&p[i], &p[n - 1 - i]);
        assert!((a.rho - b.rho).abs() < 1e-10);
        assert!((a.theta - b.theta).abs() < 1e-10);
        assert!((a.u[1] + b.u[1]).abs() < 1e-10);
        assert!((a.u[0] + b.u[0]).abs() < 1e-10);
        assert!((a.sigma[0][1] - b.sigma[0][1]).abs() < 1e-10);
    }
    assert!(p[0].u[1] < 0.0 && p[n - 1].u[1] > 0.0);
}

#[test]
fn lie_and_strang_agree_to_first_order() {
    let gap = |dt: f64| {
        let (lie, tensor) = couette(0.8, Splitting::Lie, dt, 0.2);
        let (strang, _) = couette(0.8, Splitting::Strang, dt, 0.2);
        let (a, b) = (profile(&lie, &tensor), profile(&strang, &tensor));
        a.iter().zip(&b).map(|(x, y)| (x.theta - y.theta).abs().max((x.u[1] - y.u[1]).abs())).fold(0.0, f64::max)
    };
    let (coarse, fine) = (gap(4e-3), gap(2e-3));
    let ratio = coarse / fine;
    assert!(fine < coarse && (1.6..2.6).contains(&ratio), "gap {coarse:e} -> {fine:e}, ratio {ratio}");
}

#[test]
fn elastic_gas_between_matching_walls_stays_in_equilibrium() {
    let kernel = KernelSpec::hard_sphere(1.0);
    let tensor = assemble_tensor(3, &kernel, 0.0).unwrap();
    let mut cfg = ModelConfig::homogeneous(kernel, 1.0, 3, 5, 0.0, 0.1);
    let wall = SideKind::DiffusiveWall { u_w: [0.0; 3], theta_w: 1.3 };
    cfg.problem = Problem::Inhomogeneous(DomainConfig {
        dims: 1,
        nx: 10,
        ny: 1,
        lx: 1.0,
        ly: 1.0,
        boundary: BoundarySpec { x_lo: wall, x_hi: wall, ..BoundarySpec::periodic() },
        center: ExpansionCenter::standard(),
        initial: InitialField::uniform(0.7, [0.0; 3], 1.3),
    });
    for s in profile(&cfg, &tensor) {
        assert!((s.rho - 0.7).abs() < 1e-10 && (s.theta - 1.3).abs() < 1e-10 && s.u[0].abs() < 1e-10);
    }
}
