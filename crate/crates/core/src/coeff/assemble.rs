//! Exact assembly of the collision tensor.
//!
//! The monomial expansions behind `D` and `ψ` alternate in sign with terms
//! many orders of magnitude larger than their sum, so the whole chain runs in
//! double-double arithmetic and is rounded to `f64` once per entry.
//!
//! Every Gaussian moment reached from `D` or `ψ` has an even total power, so
//! `𝒱(k, β, μ₀+n) = G₀(2π)^{−3/2}·4π·W(k, β, n)` with
//! `G₀ = 2^{(1+μ₀)/2}Γ((3+μ₀)/2)` and
//! `W(k, β, n) = Σ_i 𝒞(β,i)·2^{p/2}(x₀)_{p/2}·s(i+k)`, `p = n+|i|+|k|`,
//! `x₀ = (3+μ₀)/2`, `s = 𝒮/4π`. All global constants are applied once at
//! the end.

use rayon::prelude::*;
use num_traits::FloatConst;
use twofloat::TwoFloat;

use super::closed_form::{binomial, c_coeff_int, hermite_table, pow2_half, sphere_ratio};
use super::tensor::CollisionTensor;
use super::KernelSpec;
use crate::error::{Error, Result};
use crate::index::{basis_size, MultiIndex};
use crate::scalar::{div, gamma, ipow, Real};

type Dd = TwoFloat;

pub const DEFAULT_DROP_TOL: f64 = 1e-14;

/// Largest order whose Hermite coefficients fit the integer tables.
const MAX_ORDER: usize = 27;

/// `γ̃(j, β)` for `|j| ≤ m`, `|β| ≤ 2m`, with `γ = K·γ̃`.
pub(crate) struct GammaTable {
    n2: usize,
    values: Vec<Dd>,
    /// `K = C·2^{5/2−ϖ}·G₀·(2π)^{−3/2}·(4π)²`.
    pub(crate) factor: Dd,
}

impl GammaTable {
    #[inline]
    fn get(&self, j_rank: usize, beta_rank: usize) -> Dd {
        self.values[j_rank * self.n2 + beta_rank]
    }

    #[cfg(test)]
    pub(crate) fn gamma(&self, j: MultiIndex, beta: MultiIndex) -> Dd {
        self.get(j.rank(), beta.rank()) * self.factor
    }
}

pub(crate) fn gamma_table(m: usize, kernel: &KernelSpec) -> GammaTable {
    let n = basis_size(m);
    let n2 = basis_size(2 * m);
    let n3 = basis_size(3 * m);
    let table = hermite_table();
    let mu0 = kernel.mu();
    let x0 = 0.5 * (3.0 + mu0);

    let s_tab: Vec<Dd> = (0..n3).map(|r| sphere_ratio::<Dd>(MultiIndex::unrank(r))).collect();
    // 2^q (x₀)_q for q ≤ 2m.
    let mut poch = vec![Dd::from(1.0); 2 * m + 1];
    for q in 1..poch.len() {
        poch[q] = poch[q - 1] * Dd::from(2.0) * (Dd::from(x0) + Dd::from((q - 1) as f64));
    }

    // binom(l,k)·a^{|k|}·b^{|l|−|k|}·s(l−k), grouped by l.
    let a = Dd::from(0.5) * (Dd::from(1.0) - Dd::from(kernel.e));
    let b = Dd::from(0.5) * (Dd::from(1.0) + Dd::from(kernel.e));
    let pairs: Vec<Vec<(usize, usize, Dd)>> = (0..n)
        .map(|lr| {
            let l = MultiIndex::unrank(lr);
            l.dominated_same_parity()
                .map(|k| {
                    let half_n = ((l.degree() - k.degree()) / 2) as usize;
                    let binom = (0..3).fold(Dd::from(1.0), |acc, d| acc * binomial::<Dd>(l.get(d), k.get(d)));
                    let rest = l.checked_sub(&k).expect("k below l");
                    let coef = binom * ipow(a, k.degree()) * ipow(b, 2 * half_n as u32) * s_tab[rest.rank()];
                    (k.rank(), half_n, coef)
                })
                .collect()
        })
        .collect();

    let columns: Vec<Vec<Dd>> = (0..n2)
        .into_par_iter()
        .map(|br| {
            let beta = MultiIndex::unrank(br);
            let parity = beta.parity();
            let terms: Vec<(Dd, usize, usize)> = beta
                .dominated_same_parity()
                .map(|i| (Dd::of_i128(table.multi(&beta, &i)), i.degree() as usize, i.rank()))
                .collect();
            let n_half = m / 2 + 1;
            let mut w = vec![Dd::from(0.0); n * n_half];
            for kr in 0..n {
                let k = MultiIndex::unrank(kr);
                if k.parity() != parity {
                    continue;
                }
                for h in 0..n_half {
                    let mut acc = Dd::from(0.0);
                    for &(c, i_deg, i_rank) in &terms {
                        let i = MultiIndex::unrank(i_rank);
                        let p = 2 * h + i_deg + k.degree() as usize;
                        acc += c * poch[p / 2] * s_tab[(i + k).rank()];
                    }
                    w[kr * n_half + h] = acc;
                }
            }
            // U(l) − W(l, 0): the D and ψ integrands expanded once per l.
            let mut u = vec![Dd::from(0.0); n];
            for lr in 0..n {
                if MultiIndex::unrank(lr).parity() != parity {
                    continue;
                }
                let mut acc = -w[lr * n_half];
                for &(kr, h, coef) in &pairs[lr] {
                    acc += coef * w[kr * n_half + h];
                }
                u[lr] = acc;
            }
            (0..n)
                .map(|jr| {
                    let j = MultiIndex::unrank(jr);
                    if j.parity() != parity {
                        return Dd::from(0.0);
                    }
                    j.dominated_same_parity()
                        .map(|l| Dd::of_i128(table.multi(&j, &l)) * u[l.rank()])
                        .fold(Dd::from(0.0), |x, y| x + y)
                })
                .collect()
        })
        .collect();

    let mut values = vec![Dd::from(0.0); n * n2];
    for (br, col) in columns.into_iter().enumerate() {
        for (jr, v) in col.into_iter().enumerate() {
            values[jr * n2 + br] = v;
        }
    }

    let two_pi = Dd::PI() * Dd::from(2.0);
    let four_pi = Dd::PI() * Dd::from(4.0);
    let g0 = pow2_half::<Dd>(1.0 + mu0) * gamma::<Dd>(x0);
    let factor = div(
        Dd::from(kernel.c_const) * pow2_half::<Dd>(5.0 - 2.0 * kernel.varpi) * g0 * four_pi * four_pi,
        two_pi * two_pi.sqrt(),
    );
    GammaTable { n2, values, factor }
}

/// Assembles `A_αλκ` for all `|α|, |λ|, |κ| ≤ m`, omitting entries with
/// `|A| ≤ drop_tol`.
pub fn assemble_tensor(m: usize, kernel: &KernelSpec, drop_tol: f64) -> Result<CollisionTensor> {
    kernel.validate()?;
    if m > MAX_ORDER {
        return Err(Error::Config(format!("expansion order {m} exceeds the supported maximum {MAX_ORDER}")));
    }
    if !(drop_tol >= 0.0) {
        return Err(Error::Config(format!("drop tolerance {drop_tol} must be non-negative")));
    }
    let n = basis_size(m);
    let gt = gamma_table(m, kernel);

    let c_tab: Vec<Dd> = {
        let w = m + 1;
        let mut v = vec![Dd::from(0.0); w * w * (2 * m + 1)];
        for l in 0..=m {
            for k in 0..=m {
                for lp in 0..=l + k {
                    v[(l * w + k) * (2 * m + 1) + lp] = Dd::of_i128(c_coeff_int(l as u32, k as u32, lp as u32));
                }
            }
        }
        v
    };
    let c_at = |l: u32, k: u32, lp: u32| c_tab[((l as usize) * (m + 1) + k as usize) * (2 * m + 1) + lp as usize];
    let inv_fact: Vec<Dd> = (0..n)
        .map(|r| {
            let j = MultiIndex::unrank(r);
            div(Dd::from(1.0), (0..3).fold(Dd::from(1.0), |acc, d| acc * factorial_dd(j.get(d))))
        })
        .collect();
    // 2^{−3/2} from the closed-form prefactor and the c coefficients.
    let global = gt.factor * Dd::SQRT_2() * Dd::from(0.25);
    let pow_half: Vec<Dd> = (0..=3 * m / 2).map(|q| Dd::from(0.5f64.powi(q as i32))).collect();

    let rows: Vec<Vec<(u32, u32, f64)>> = (0..n)
        .into_par_iter()
        .map(|ar| {
            let alpha = MultiIndex::unrank(ar);
            let mut row = Vec::new();
            // Mass and momentum rows: entries are zero or antisymmetric in
            // (λ, κ), so their contribution to Q vanishes identically.
            if alpha.degree() <= 1 {
                return row;
            }
            let sub: Vec<(MultiIndex, usize, Dd)> = alpha
                .dominated()
                .map(|lp| {
                    let j = alpha.checked_sub(&lp).expect("lp below alpha");
                    (lp, j.rank(), inv_fact[j.rank()])
                })
                .collect();
            for lr in 0..n {
                let lambda = MultiIndex::unrank(lr);
                for kr in 0..n {
                    let kappa = MultiIndex::unrank(kr);
                    if alpha.parity() ^ lambda.parity() ^ kappa.parity() != 0 {
                        continue;
                    }
                    let top = lambda + kappa;
                    let mut acc = Dd::from(0.0);
                    for &(lp, jr, ij) in &sub {
                        if !lp.le(&top) {
                            continue;
                        }
                        let c = c_at(lambda.0[0], kappa.0[0], lp.0[0])
                            * c_at(lambda.0[1], kappa.0[1], lp.0[1])
                            * c_at(lambda.0[2], kappa.0[2], lp.0[2]);
                        if c.hi() == 0.0 {
                            continue;
                        }
                        let kp = top.checked_sub(&lp).expect("lp below lambda + kappa");
                        acc += c * ij * gt.get(jr, kp.rank());
                    }
                    let total = (alpha.degree() + lambda.degree() + kappa.degree()) as usize / 2;
                    let value = (global * pow_half[total] * acc).hi();
                    if value.abs() > drop_tol {
                        row.push((lr as u32, kr as u32, value));
                    }
                }
            }
            row
        })
        .collect();

    Ok(CollisionTensor::from_rows(m, *kernel, drop_tol, rows))
}

fn factorial_dd(n: u32) -> Dd {
    (2..=n).fold(Dd::from(1.0), |acc, k| acc * Dd::from(k as f64))
}
