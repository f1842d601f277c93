//! Quadratic, linearized ES-BGK-plus-drift, and combined collision spectra.

use faer::Mat;

use crate::coeff::CollisionTensor;
use crate::error::{Error, Result};
use crate::index::{basis_size, MultiIndex};
use crate::scalar::Real;
use crate::state::SpectralState;

/// Relative tolerance on the local-frame conditions `f_{e_k} = 0`, `Σ f_{2e_k} = 0`.
pub const LOCAL_FRAME_TOL: f64 = 1e-8;

/// Parameters of the combined model: exact quadratic part for `|α| ≤ m0`,
/// linear relaxation for `m0 < |α| ≤ m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionModelParams {
    pub m0: usize,
    pub m: usize,
    pub nu1: f64,
    pub nu2: f64,
    pub prandtl: f64,
}

impl CollisionModelParams {
    pub fn new(m0: usize, m: usize, nu1: f64, nu2: f64, prandtl: f64) -> Result<Self> {
        if m0 > m {
            return Err(Error::Config(format!("quadratic band {m0} exceeds expansion order {m}")));
        }
        if !(nu1 > 0.0 && nu1.is_finite()) {
            return Err(Error::Config(format!("relaxation rate nu1 = {nu1} must be positive")));
        }
        if !(nu2 >= 0.0 && nu2.is_finite()) {
            return Err(Error::Config(format!("cooling rate nu2 = {nu2} must be non-negative")));
        }
        if !(prandtl > 0.0 && prandtl.is_finite()) {
            return Err(Error::Config(format!("Prandtl number {prandtl} must be positive")));
        }
        Ok(CollisionModelParams { m0, m, nu1, nu2, prandtl })
    }
}

/// `Q_α = Σ_{|λ|,|κ| ≤ band} A_αλκ f_λ f_κ` for `|α| ≤ band`.
///
/// The tensor must already be rescaled to the state's center temperature.
pub fn quadratic_spectrum<T: Real>(state: &SpectralState<T>, tensor: &CollisionTensor, band: usize) -> Result<Vec<T>> {
    if band > tensor.m() || band > state.m {
        return Err(Error::Config(format!(
            "quadratic band {band} exceeds tensor order {} or state order {}",
            tensor.m(),
            state.m
        )));
    }
    let t_state = state.center.t_bar.to_f64_lossy();
    let t_tensor = tensor.center_temperature();
    if (t_state - t_tensor).abs() > 1e-12 * t_state.abs().max(1.0) {
        return Err(Error::Config(format!(
            "collision tensor is scaled for center temperature {t_tensor}, state center has {t_state}"
        )));
    }
    let nb = basis_size(band) as u32;
    let f = &state.coeffs;
    let scale = T::of(tensor.scale());
    let mut out = vec![T::zero(); nb as usize];
    for (a, q) in out.iter_mut().enumerate() {
        let (cols, vals) = tensor.row_slices(a);
        let mut acc = T::zero();
        for (&(l, k), &v) in cols.iter().zip(vals) {
            if l >= nb {
                break;
            }
            if k < nb {
                acc += T::of(v) * f[l as usize] * f[k as usize];
            }
        }
        *q = acc * scale;
    }
    Ok(out)
}

/// Component used to unroll the ES-BGK recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pivot {
    First,
    Last,
}

/// Hermite coefficients of the ES-BGK Gaussian at the local center.
///
/// `stress` is the trace-free stress in units of the local temperature.
pub fn esbgk_spectrum<T: Real>(rho: T, stress: &[[T; 3]; 3], prandtl: T, m: usize) -> Result<Vec<T>> {
    esbgk_spectrum_with_pivot(rho, stress, prandtl, m, Pivot::First)
}

pub fn esbgk_spectrum_with_pivot<T: Real>(
    rho: T,
    stress: &[[T; 3]; 3],
    prandtl: T,
    m: usize,
    pivot: Pivot,
) -> Result<Vec<T>> {
    if !(rho > T::zero()) {
        return Err(Error::NonPositiveDensity(rho.to_f64_lossy()));
    }
    let n = basis_size(m);
    let mut out = vec![T::zero(); n];
    out[0] = rho;
    let factor = (T::one() - prandtl.recip()) / rho;
    for r in basis_size(1)..n {
        let alpha = MultiIndex::unrank(r);
        let mut candidates = (0..3).filter(|&d| alpha.get(d) > 0);
        let i = match pivot {
            Pivot::First => candidates.next(),
            Pivot::Last => candidates.last(),
        }
        .expect("nonzero index has a positive component");
        let below = alpha.shifted(i, -1).expect("alpha_i > 0");
        let mut acc = T::zero();
        for k in 0..3 {
            if let Some(prev) = below.shifted(k, -1) {
                acc += stress[i][k] * out[prev.rank()];
            }
        }
        out[r] = factor / T::of(alpha.get(i) as f64) * acc;
    }
    Ok(out)
}

fn check_local_frame<T: Real>(state: &SpectralState<T>) -> Result<()> {
    let f0 = state.density();
    if !(f0 > T::zero()) {
        return Err(Error::NonPositiveDensity(f0.to_f64_lossy()));
    }
    let tol = T::of(LOCAL_FRAME_TOL) * f0;
    for k in 0..3 {
        let fk = state.get(MultiIndex::unit(k));
        if fk.abs() > tol {
            return Err(Error::LocalFrame(format!("f_e{} = {fk} is not zero at the local center", k + 1)));
        }
    }
    let trace = (0..3).fold(T::zero(), |acc, k| acc + state.get(MultiIndex::unit(k) + MultiIndex::unit(k)));
    if trace.abs() > tol {
        return Err(Error::LocalFrame(format!("sum of f_2e_k = {trace} is not zero at the local center")));
    }
    Ok(())
}

/// Trace-free stress in units of θ: `(1+δ_kl) f_{e_k+e_l}` at the local center.
fn normalized_stress<T: Real>(state: &SpectralState<T>) -> [[T; 3]; 3] {
    let mut s = [[T::zero(); 3]; 3];
    for k in 0..3 {
        for l in 0..3 {
            let f = state.get(MultiIndex::unit(k) + MultiIndex::unit(l));
            s[k][l] = if k == l { T::of(2.0) * f } else { f };
        }
    }
    let third = (s[0][0] + s[1][1] + s[2][2]) / T::of(3.0);
    for (k, row) in s.iter_mut().enumerate() {
        row[k] -= third;
    }
    s
}

/// `Q_{L,α} = ν₁f₀(f_{G,α} − f_α) − ν₂f₀(|α|f_α + Σ_d f_{α−2e_d})` for `|α| ≤ m`.
///
/// The state must be expanded about its own `(u, θ)`.
pub fn linear_spectrum<T: Real>(state: &SpectralState<T>, params: &CollisionModelParams) -> Result<Vec<T>> {
    check_local_frame(state)?;
    let m = params.m.min(state.m);
    let f0 = state.density();
    let fg = esbgk_spectrum(f0, &normalized_stress(state), T::of(params.prandtl), m)?;
    let nu1 = T::of(params.nu1) * f0;
    let nu2 = T::of(params.nu2) * f0;
    let n = basis_size(m);
    let mut out = vec![T::zero(); n];
    for (r, q) in out.iter_mut().enumerate() {
        let alpha = MultiIndex::unrank(r);
        let fa = state.coeffs[r];
        let mut drift = T::of(alpha.degree() as f64) * fa;
        for d in 0..3 {
            if let Some(b) = alpha.shifted(d, -2) {
                drift += state.coeffs[b.rank()];
            }
        }
        *q = nu1 * (fg[r] - fa) - nu2 * drift;
    }
    Ok(out)
}

/// Quadratic spectrum on `|α| ≤ m0`, linear model on `m0 < |α| ≤ m`.
pub fn new_model_spectrum<T: Real>(
    state: &SpectralState<T>,
    tensor: &CollisionTensor,
    params: &CollisionModelParams,
) -> Result<Vec<T>> {
    if params.m > state.m {
        return Err(Error::Config(format!("model order {} exceeds state order {}", params.m, state.m)));
    }
    let mut out = vec![T::zero(); basis_size(params.m)];
    let quad = quadratic_spectrum(state, tensor, params.m0)?;
    out[..quad.len()].copy_from_slice(&quad);
    if params.m0 < params.m {
        let lin = linear_spectrum(state, params)?;
        let start = basis_size(params.m0);
        out[start..].copy_from_slice(&lin[start..]);
    }
    Ok(out)
}

/// Linearization of the quadratic part about a unit Maxwellian,
/// `L_αλ = A_{α,λ,0} + A_{α,0,λ}` over `2 ≤ |α|, |λ| ≤ m0`.
pub fn linearization_matrix(tensor: &CollisionTensor, m0: usize) -> Mat<f64> {
    let lo = basis_size(1);
    let n = basis_size(m0) - lo;
    let mut l = Mat::<f64>::zeros(n, n);
    for a in 0..n {
        let (cols, vals) = tensor.row_slices(a + lo);
        for (&(lr, kr), &v) in cols.iter().zip(vals) {
            let (lr, kr) = (lr as usize, kr as usize);
            if kr == 0 && lr >= lo && lr < lo + n {
                l[(a, lr - lo)] += v * tensor.scale();
            }
            if lr == 0 && kr >= lo && kr < lo + n {
                l[(a, kr - lo)] += v * tensor.scale();
            }
        }
    }
    l
}

/// Damping spectral radius of the quadratic band: the largest `|Re λ|` over
/// eigenvalues of [`linearization_matrix`] with negative real part.
pub fn estimate_nu1(tensor: &CollisionTensor, m0: usize, override_value: Option<f64>) -> Result<f64> {
    if let Some(v) = override_value {
        return Ok(v);
    }
    if m0 > tensor.m() {
        return Err(Error::Estimation(format!("band {m0} exceeds tensor order {}", tensor.m())));
    }
    if m0 < 2 {
        return Err(Error::Estimation("the quadratic band has no modes of degree two or more".into()));
    }
    let l = linearization_matrix(tensor, m0);
    let scale = (0..l.nrows())
        .flat_map(|i| (0..l.ncols()).map(move |j| (i, j)))
        .fold(0.0f64, |acc, (i, j)| acc.max(l[(i, j)].abs()));
    if scale == 0.0 {
        return Err(Error::Estimation("linearized collision matrix is identically zero".into()));
    }
    let eig = l
        .eigenvalues()
        .map_err(|e| Error::Estimation(format!("eigenvalue iteration failed: {e:?}")))?;
    let nu1 = eig.iter().filter(|z| z.re < -1e-12 * scale).map(|z| -z.re).fold(0.0f64, f64::max);
    if nu1 > 0.0 {
        Ok(nu1)
    } else {
        Err(Error::Estimation("linearized collision matrix has no damped modes".into()))
    }
}

/// `ν₂ = 2(1−e²)/(3√π)`.
pub fn nu2_default(e: f64) -> f64 {
    2.0 / (3.0 * std::f64::consts::PI.sqrt()) * (1.0 - e * e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{assemble_tensor, KernelSpec};
    use crate::hermite::ExpansionCenter;

    #[test]
    fn nu2_values() {
        assert_eq!(nu2_default(1.0), 0.0);
        assert!((nu2_default(0.0) - 0.376_126_389_031_837_5).abs() < 1e-15);
        assert!((nu2_default(0.9) - 0.071_464_013_916_049_1).abs() < 1e-15);
    }

    #[test]
    fn esbgk_examples() {
        let s = 0.3_f64;
        let stress = [[0.0, s, 0.0], [s, 0.0, 0.0], [0.0, 0.0, 0.0]];
        let fg = esbgk_spectrum(1.7, &stress, 2.0 / 3.0, 4).unwrap();
        assert!((fg[MultiIndex::new(1, 1, 0).rank()] + s / 2.0).abs() < 1e-15);
        let fg = esbgk_spectrum(2.0, &stress, 1.0, 5).unwrap();
        assert_eq!(fg[0], 2.0);
        assert!(fg[1..].iter().all(|&x| x == 0.0));
        assert!(esbgk_spectrum(0.0, &stress, 1.0, 2).is_err());
    }

    #[test]
    fn maxwell_cooling_through_spectrum() {
        let t = assemble_tensor(2, &KernelSpec::maxwell(0.5), 1e-14).unwrap();
        let s = SpectralState::maxwellian(2, 1.0_f64, ExpansionCenter::standard());
        let q = quadratic_spectrum(&s, &t, 2).unwrap();
        let sum: f64 = (0..3).map(|k| q[(MultiIndex::unit(k) + MultiIndex::unit(k)).rank()]).sum();
        assert!((sum + 0.28125).abs() < 1e-14);
    }

    #[test]
    fn center_mismatch_is_rejected() {
        let t = assemble_tensor(2, &KernelSpec::hard_sphere(0.5), 1e-14).unwrap();
        let s = SpectralState::maxwellian(2, 1.0_f64, ExpansionCenter::new([0.0; 3], 2.0).unwrap());
        assert!(matches!(quadratic_spectrum(&s, &t, 2), Err(Error::Config(_))));
        let t2 = crate::coeff::rescale_center(&t, 2.0).unwrap();
        assert!(quadratic_spectrum(&s, &t2, 2).is_ok());
        assert!(quadratic_spectrum(&s, &t2, 3).is_err());
    }

    #[test]
    fn linear_model_rejects_foreign_frame() {
        let mut s = SpectralState::maxwellian(4, 1.0_f64, ExpansionCenter::standard());
        s.set(MultiIndex::new(0, 1, 0), 0.1);
        let p = CollisionModelParams::new(2, 4, 1.0, 0.1, 2.0 / 3.0).unwrap();
        assert!(matches!(linear_spectrum(&s, &p), Err(Error::LocalFrame(_))));
    }

    #[test]
    fn nu1_override_and_scaling() {
        let t = assemble_tensor(3, &KernelSpec::maxwell(1.0), 1e-14).unwrap();
        assert_eq!(estimate_nu1(&t, 3, Some(4.25)).unwrap(), 4.25);
        let a = estimate_nu1(&t, 3, None).unwrap();
        let b = estimate_nu1(&t.scaled(3.0), 3, None).unwrap();
        assert!(a > 0.0);
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
    }
}
