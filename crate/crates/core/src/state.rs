//! Coefficient vectors and the change of expansion center.

use crate::error::{Error, Result};
use crate::hermite::ExpansionCenter;
use crate::index::{basis_size, MultiIndex, NONE};
use crate::scalar::Real;
use crate::IndexSet;

/// Hermite coefficients `f_α`, `|α| ≤ m`, stored by rank, together with the
/// expansion center they refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralState<T> {
    pub m: usize,
    pub coeffs: Vec<T>,
    pub center: ExpansionCenter<T>,
}

impl<T: Real> SpectralState<T> {
    pub fn zeros(m: usize, center: ExpansionCenter<T>) -> Self {
        SpectralState { m, coeffs: vec![T::zero(); basis_size(m)], center }
    }

    /// Maxwellian of density `rho` expressed at its own center.
    pub fn maxwellian(m: usize, rho: T, center: ExpansionCenter<T>) -> Self {
        let mut s = Self::zeros(m, center);
        s.coeffs[0] = rho;
        s
    }

    pub fn from_coeffs(coeffs: Vec<T>, center: ExpansionCenter<T>) -> Result<Self> {
        let mut m = 0;
        while basis_size(m) < coeffs.len() {
            m += 1;
        }
        if basis_size(m) != coeffs.len() {
            return Err(Error::Config(format!(
                "coefficient vector of length {} does not match any truncation order",
                coeffs.len()
            )));
        }
        Ok(SpectralState { m, coeffs, center })
    }

    pub fn get(&self, alpha: MultiIndex) -> T {
        if alpha.degree() as usize > self.m {
            return T::zero();
        }
        self.coeffs[alpha.rank()]
    }

    pub fn set(&mut self, alpha: MultiIndex, value: T) {
        self.coeffs[alpha.rank()] = value;
    }

    pub fn density(&self) -> T {
        self.coeffs[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// Re-expands `state` about `target`.
///
/// With `φ⁽⁰⁾_α = T̄₁^{|α|/2} f_α` and, for `l ≥ 1`,
/// `φ⁽ˡ⁾_α = (1/l) Σ_d [(ū₁−ū₂)_d φ⁽ˡ⁻¹⁾_{α−e_d} + ½(T̄₁−T̄₂) φ⁽ˡ⁻¹⁾_{α−2e_d}]`,
/// the new coefficients are `T̄₂^{−|α|/2} Σ_l φ⁽ˡ⁾_α`. The transform is
/// triangular in the degree, so truncation at `m` loses nothing.
pub fn project<T: Real>(state: &SpectralState<T>, target: &ExpansionCenter<T>, basis: &IndexSet) -> Result<SpectralState<T>> {
    target.validate()?;
    state.center.validate()?;
    let n = state.coeffs.len();
    debug_assert_eq!(basis.order(), state.m);
    let src = &state.center;
    let du = [0, 1, 2].map(|d| src.u_bar[d] - target.u_bar[d]);
    let half_dt = (src.t_bar - target.t_bar) / T::of(2.0);

    let sqrt_t1 = src.t_bar.sqrt();
    let inv_sqrt_t2 = target.t_bar.sqrt().recip();
    let mut pow1 = vec![T::one(); state.m + 1];
    let mut pow2 = vec![T::one(); state.m + 1];
    for k in 1..=state.m {
        pow1[k] = pow1[k - 1] * sqrt_t1;
        pow2[k] = pow2[k - 1] * inv_sqrt_t2;
    }

    let mut phi: Vec<T> = (0..n)
        .map(|r| state.coeffs[r] * pow1[basis.index(r).degree() as usize])
        .collect();
    let mut acc = phi.clone();
    let shift_free = du.iter().all(|x| x.is_zero()) && half_dt.is_zero();
    if !shift_free {
        let mut next = vec![T::zero(); n];
        for l in 1..=state.m {
            let inv_l = T::of_usize(l).recip();
            let mut any = false;
            for r in 0..n {
                let mut v = T::zero();
                for d in 0..3 {
                    let m1 = basis.minus(d, r);
                    if m1 != NONE {
                        v += du[d] * phi[m1 as usize];
                    }
                    let m2 = basis.minus2(d, r);
                    if m2 != NONE {
                        v += half_dt * phi[m2 as usize];
                    }
                }
                next[r] = v * inv_l;
                any |= !next[r].is_zero();
            }
            std::mem::swap(&mut phi, &mut next);
            if !any {
                break;
            }
            for r in 0..n {
                acc[r] += phi[r];
            }
        }
    }
    let coeffs = (0..n).map(|r| acc[r] * pow2[basis.index(r).degree() as usize]).collect();
    Ok(SpectralState { m: state.m, coeffs, center: *target })
}
