//! Hermite polynomial algebra: evaluation, monomial coefficients, the
//! weighted three-dimensional basis and the largest polynomial root.

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::quadrature::hermite_roots;
use crate::scalar::Real;

/// Expansion center `[ū, T̄]` of the Gaussian weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionCenter<T> {
    pub u_bar: [T; 3],
    pub t_bar: T,
}

impl<T: Real> ExpansionCenter<T> {
    pub fn new(u_bar: [T; 3], t_bar: T) -> Result<Self> {
        let c = ExpansionCenter { u_bar, t_bar };
        c.validate()?;
        Ok(c)
    }

    /// The reference center `[0, 1]`.
    pub fn standard() -> Self {
        ExpansionCenter { u_bar: [T::zero(); 3], t_bar: T::one() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_bar > T::zero() && self.t_bar.is_finite() && self.u_bar.iter().all(|u| u.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidCenter(format!(
                "center temperature must be positive and finite, got {:?}",
                self.t_bar
            )))
        }
    }

    pub fn cast<U: Real>(&self) -> ExpansionCenter<U> {
        ExpansionCenter {
            u_bar: self.u_bar.map(|u| U::of(u.to_f64_lossy())),
            t_bar: U::of(self.t_bar.to_f64_lossy()),
        }
    }

    /// Gaussian weight `ω_{ū,T̄}(v)`.
    pub fn weight(&self, v: &[T; 3]) -> T {
        let two = T::of(2.0);
        let r2 = (0..3).map(|d| (v[d] - self.u_bar[d]).powi(2)).fold(T::zero(), |a, b| a + b);
        (-r2 / (two * self.t_bar)).exp() / (two * T::PI() * self.t_bar).powf(T::of(1.5))
    }
}

/// Probabilists' Hermite polynomial `He_n(x)` by the three-term recurrence.
pub fn hermite_eval_1d<T: Real>(n: usize, x: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let next = x * cur - T::of_usize(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `He_0(x), …, He_n(x)`.
pub fn hermite_values<T: Real>(n: usize, x: T, out: &mut Vec<T>) {
    out.clear();
    out.push(T::one());
    if n == 0 {
        return;
    }
    out.push(x);
    for k in 1..n {
        let next = x * out[k] - T::of_usize(k) * out[k - 1];
        out.push(next);
    }
}

/// Integer coefficients of `He_0, …, He_n_max` in the monomial basis:
/// `table[n][k]` is the coefficient of `x^k` in `He_n`.
///
/// Exact in `i128` up to `n_max = 54`.
#[derive(Clone, Debug)]
pub struct HermiteCoeffTable {
    rows: Vec<Vec<i128>>,
}

impl HermiteCoeffTable {
    pub fn new(n_max: usize) -> Self {
        assert!(n_max <= 54, "monomial coefficients overflow i128 beyond degree 54");
        let mut rows: Vec<Vec<i128>> = vec![vec![1]];
        if n_max >= 1 {
            rows.push(vec![0, 1]);
        }
        for n in 1..n_max {
            let mut next = vec![0i128; n + 2];
            for (k, &c) in rows[n].iter().enumerate() {
                next[k + 1] += c;
            }
            for (k, &c) in rows[n - 1].iter().enumerate() {
                next[k] -= n as i128 * c;
            }
            rows.push(next);
        }
        HermiteCoeffTable { rows }
    }

    pub fn max_degree(&self) -> usize {
        self.rows.len() - 1
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> i128 {
        self.rows.get(n).and_then(|r| r.get(k)).copied().unwrap_or(0)
    }

    /// Product coefficient `𝒞(α, j) = Π_d 𝒞(α_d, j_d)`.
    pub fn multi(&self, alpha: &MultiIndex, j: &MultiIndex) -> i128 {
        (0..3).map(|d| self.get(alpha.get(d) as usize, j.get(d) as usize)).product()
    }
}

/// Coefficient of `x^k` in `He_n(x)`; zero when `k > n` or `n − k` is odd.
pub fn hermite_coeff(n: usize, k: usize) -> f64 {
    if k > n || (n - k) % 2 == 1 {
        return 0.0;
    }
    HermiteCoeffTable::new(n).get(n, k) as f64
}

/// `H_α^{ū,T̄}(v) = Π_d He_{α_d}((v_d − ū_d)/√T̄)`.
pub fn basis_eval<T: Real>(alpha: &MultiIndex, center: &ExpansionCenter<T>, v: &[T; 3]) -> T {
    let s = center.t_bar.sqrt();
    (0..3)
        .map(|d| hermite_eval_1d(alpha.get(d) as usize, (v[d] - center.u_bar[d]) / s))
        .fold(T::one(), |a, b| a * b)
}

/// Weighted basis function `ℋ_α = H_α^{ū,T̄} · ω_{ū,T̄}`.
pub fn basis_eval_weighted<T: Real>(alpha: &MultiIndex, center: &ExpansionCenter<T>, v: &[T; 3]) -> T {
    basis_eval(alpha, center, v) * center.weight(v)
}

/// Largest root `C_n` of `He_n`.
pub fn largest_hermite_root(n: usize) -> f64 {
    *hermite_roots(n).last().expect("n >= 1")
}
