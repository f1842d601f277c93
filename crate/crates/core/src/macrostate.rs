//! Macroscopic fields from Hermite coefficients.

use crate::error::{Error, Result};
use crate::hermite::ExpansionCenter;
use crate::index::MultiIndex;
use crate::scalar::Real;
use crate::state::SpectralState;

/// Density, velocity, temperature, deviatoric stress and heat flux.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MacroState<T> {
    pub rho: T,
    pub u: [T; 3],
    pub theta: T,
    pub sigma: [[T; 3]; 3],
    pub q: [T; 3],
}

fn e2(k: usize, l: usize) -> MultiIndex {
    let mut a = [0u32; 3];
    a[k] += 1;
    a[l] += 1;
    MultiIndex(a)
}

/// Moments of the expansion about an arbitrary center.
///
/// With `w = v − ū` and `d = u − ū`, the raw moments are
/// `∫w_k f = √T̄ f_{e_k}`, `∫w_k w_l f = T̄(1+δ_kl) f_{e_k+e_l} + δ_kl ρT̄`
/// and `∫|w|²w_k f = T̄^{3/2}(6f_{3e_k} + 2Σ_{l≠k} f_{e_k+2e_l} + 5f_{e_k})`;
/// the central moments follow by expanding `v − u = w − d`.
pub fn macro_from_state<T: Real>(state: &SpectralState<T>) -> Result<MacroState<T>> {
    let rho = state.density();
    if !(rho > T::zero()) {
        return Err(Error::NonPositiveDensity(rho.to_f64_lossy()));
    }
    let t = state.center.t_bar;
    let st = t.sqrt();
    let two = T::of(2.0);
    let half = T::of(0.5);

    let mk: [T; 3] = [0, 1, 2].map(|k| st * state.get(MultiIndex::unit(k)));
    let d: [T; 3] = mk.map(|m| m / rho);
    let u: [T; 3] = [0, 1, 2].map(|k| state.center.u_bar[k] + d[k]);

    let mut mkl = [[T::zero(); 3]; 3];
    for k in 0..3 {
        for l in 0..3 {
            let f = state.get(e2(k, l));
            mkl[k][l] = if k == l { t * (two * f + rho) } else { t * f };
        }
    }
    let mut p = [[T::zero(); 3]; 3];
    for k in 0..3 {
        for l in 0..3 {
            p[k][l] = mkl[k][l] - rho * d[k] * d[l];
        }
    }
    let trace = p[0][0] + p[1][1] + p[2][2];
    let theta = trace / (T::of(3.0) * rho);
    if !(theta > T::zero()) {
        return Err(Error::NonPositiveTemperature(theta.to_f64_lossy()));
    }
    let mut sigma = [[T::zero(); 3]; 3];
    for k in 0..3 {
        for l in 0..3 {
            let sym = half * (p[k][l] + p[l][k]);
            sigma[k][l] = if k == l { sym - rho * theta } else { sym };
        }
    }

    let e2_total = mkl[0][0] + mkl[1][1] + mkl[2][2];
    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let d_dot_m = d[0] * mk[0] + d[1] * mk[1] + d[2] * mk[2];
    let t32 = t * st;
    let mut q = [T::zero(); 3];
    for k in 0..3 {
        let mut s3 = T::of(6.0) * state.get(MultiIndex::unit(k) + MultiIndex::unit(k) + MultiIndex::unit(k))
            + T::of(5.0) * state.get(MultiIndex::unit(k));
        for l in (0..3).filter(|&l| l != k) {
            s3 += two * state.get(MultiIndex::unit(k) + e2(l, l));
        }
        let dm = d[0] * mkl[k][0] + d[1] * mkl[k][1] + d[2] * mkl[k][2];
        q[k] = half * t32 * s3 - half * d[k] * e2_total - dm + d[k] * d_dot_m + half * d2 * mk[k]
            - half * d[k] * d2 * rho;
    }
    Ok(MacroState { rho, u, theta, sigma, q })
}

/// `(u, θ)` of the state as an expansion center.
pub fn local_center_of<T: Real>(state: &SpectralState<T>) -> Result<ExpansionCenter<T>> {
    let m = macro_from_state(state)?;
    ExpansionCenter::new(m.u, m.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::project;
    use crate::IndexSet;

    #[test]
    fn maxwellian_at_rest() {
        let s = SpectralState::maxwellian(3, 2.0_f64, ExpansionCenter::standard());
        let m = macro_from_state(&s).unwrap();
        assert_eq!(m.rho, 2.0);
        assert_eq!(m.u, [0.0; 3]);
        assert_eq!(m.theta, 1.0);
        assert_eq!(m.q, [0.0; 3]);
        assert!(m.sigma.iter().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn first_moment_shifts_velocity_and_cools() {
        let mut s = SpectralState::maxwellian(3, 1.0_f64, ExpansionCenter::standard());
        s.set(MultiIndex::new(1, 0, 0), 0.5);
        let m = macro_from_state(&s).unwrap();
        assert!((m.u[0] - 0.5).abs() < 1e-15);
        assert!((m.theta - (1.0 - 0.25 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn shifted_gaussian_recovers_its_center() {
        let basis = IndexSet::new(4);
        let s = SpectralState::maxwellian(4, 1.0_f64, ExpansionCenter::standard());
        let target = ExpansionCenter::new([0.5, 0.0, 0.0], 1.0).unwrap();
        let p = project(&s, &target, &basis).unwrap();
        let c = local_center_of(&p).unwrap();
        assert!(c.u_bar.iter().all(|u| u.abs() < 1e-12));
        assert!((c.t_bar - 1.0).abs() < 1e-12);
    }

    #[test]
    fn errors_on_unphysical_states() {
        let s = SpectralState::maxwellian(2, 0.0_f64, ExpansionCenter::standard());
        assert!(matches!(macro_from_state(&s), Err(Error::NonPositiveDensity(_))));
        let mut s = SpectralState::maxwellian(2, 1.0_f64, ExpansionCenter::standard());
        s.set(MultiIndex::new(1, 0, 0), 2.0);
        assert!(matches!(local_center_of(&s), Err(Error::NonPositiveTemperature(_))));
    }
}
