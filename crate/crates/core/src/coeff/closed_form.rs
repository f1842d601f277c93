//! Direct evaluation of the sphere and Gaussian moments and the `D`, `ψ`,
//! `γ` and `c` coefficients, generic over the scalar type.
//!
//! These follow the nested summations literally. The tensor assembly uses a
//! factored, memoized form of the same chain; these functions are the
//! reference it is tested against.

use std::sync::OnceLock;

use super::KernelSpec;
use crate::hermite::HermiteCoeffTable;
use crate::index::MultiIndex;
use crate::scalar::{div, gamma, ipow, pow_sqrt2, Real};

pub(crate) fn hermite_table() -> &'static HermiteCoeffTable {
    static TABLE: OnceLock<HermiteCoeffTable> = OnceLock::new();
    TABLE.get_or_init(|| HermiteCoeffTable::new(54))
}

/// `n!!` with `(−1)!! = 0!! = 1`.
pub(crate) fn double_factorial<T: Real>(n: i64) -> T {
    let mut acc = T::one();
    let mut k = n;
    while k > 1 {
        acc *= T::of(k as f64);
        k -= 2;
    }
    acc
}

pub(crate) fn binomial<T: Real>(n: u32, k: u32) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    T::of_i128(acc as i128)
}

/// `2^{x/2}`, exact when `x` is an integer.
pub(crate) fn pow2_half<T: Real>(x: f64) -> T {
    if x.fract() == 0.0 {
        pow_sqrt2(x as i32)
    } else {
        T::of(2f64.powf(0.5 * x))
    }
}

/// `𝒮(κ)/4π`.
pub(crate) fn sphere_ratio<T: Real>(kappa: MultiIndex) -> T {
    if !kappa.is_even() {
        return T::zero();
    }
    let num = (0..3).fold(T::one(), |acc, d| acc * double_factorial::<T>(kappa.get(d) as i64 - 1));
    div(num, double_factorial::<T>(kappa.degree() as i64 + 1))
}

/// `∫_{S²} σ^κ dσ`.
pub fn sphere_moment<T: Real>(kappa: MultiIndex) -> T {
    T::of(4.0) * T::PI() * sphere_ratio::<T>(kappa)
}

/// `∫ v^κ H_α(v) |v|^μ ω(v) dv`.
pub fn gaussian_moment<T: Real>(kappa: MultiIndex, alpha: MultiIndex, mu: f64) -> T {
    let table = hermite_table();
    let mut acc = T::zero();
    for j in alpha.dominated_same_parity() {
        let s = sphere_moment::<T>(j + kappa);
        if s.is_zero() {
            continue;
        }
        let p = (j.degree() + kappa.degree()) as f64;
        acc += T::of_i128(table.multi(&alpha, &j)) * pow2_half::<T>(1.0 + mu + p) * gamma::<T>(0.5 * (3.0 + mu + p)) * s;
    }
    let two_pi = T::of(2.0) * T::PI();
    div(acc, two_pi * two_pi.sqrt())
}

/// `ψ(α, β, μ) = ∫∫ H_α(g) H_β(g) |g|^μ ω(g) dσ dg`.
pub fn coeff_psi<T: Real>(alpha: MultiIndex, beta: MultiIndex, mu: f64) -> T {
    let table = hermite_table();
    let mut acc = T::zero();
    for lambda in alpha.dominated_same_parity() {
        acc += T::of_i128(table.multi(&alpha, &lambda)) * gaussian_moment::<T>(lambda, beta, mu);
    }
    T::of(4.0) * T::PI() * acc
}

/// `D(α, β, μ) = ∫∫ H_α(g′) H_β(g) |g|^μ ω(g) dσ dg` with
/// `g′ = (1−e)/2·g + (1+e)/2·|g|σ`.
pub fn coeff_d<T: Real>(alpha: MultiIndex, beta: MultiIndex, mu: f64, kernel: &KernelSpec) -> T {
    let table = hermite_table();
    let half = T::of(0.5);
    let a = half * (T::one() - T::of(kernel.e));
    let b = half * (T::one() + T::of(kernel.e));
    let mut acc = T::zero();
    for lambda in alpha.dominated_same_parity() {
        let mut inner = T::zero();
        for kappa in lambda.dominated_same_parity() {
            let n = lambda.degree() - kappa.degree();
            let binom = (0..3).fold(T::one(), |acc, d| acc * binomial::<T>(lambda.get(d), kappa.get(d)));
            let rest = lambda.checked_sub(&kappa).expect("kappa below lambda");
            inner += binom
                * ipow(a, kappa.degree())
                * ipow(b, n)
                * sphere_moment::<T>(rest)
                * gaussian_moment::<T>(kappa, beta, n as f64 + mu);
        }
        acc += T::of_i128(table.multi(&alpha, &lambda)) * inner;
    }
    acc
}

/// `γ_κ^j = C·2^{5/2−ϖ}[D(j, κ, 2(1−ϖ)) − ψ(j, κ, 2(1−ϖ))]`.
pub fn gamma_coeff<T: Real>(kappa: MultiIndex, j: MultiIndex, kernel: &KernelSpec) -> T {
    let mu = kernel.mu();
    let diff = coeff_d::<T>(j, kappa, mu, kernel) - coeff_psi::<T>(j, kappa, mu);
    T::of(kernel.c_const) * pow2_half::<T>(5.0 - 2.0 * kernel.varpi) * diff
}

/// Integer part `Σ_s C(l,s) C(k,l′−s) (−1)^{k−l′+s}` of [`c_coeff`].
pub(crate) fn c_coeff_int(l: u32, k: u32, l_prime: u32) -> i128 {
    if l_prime > l + k {
        return 0;
    }
    let lo = l_prime.saturating_sub(k);
    let hi = l.min(l_prime);
    let mut acc: i128 = 0;
    for s in lo..=hi {
        let term = binomial::<f64>(l, s) as i128 * binomial::<f64>(k, l_prime - s) as i128;
        let sign_exp = k as i64 - l_prime as i64 + s as i64;
        acc += if sign_exp.rem_euclid(2) == 0 { term } else { -term };
    }
    acc
}

/// One-dimensional coefficient of the product transform
/// `H_l(v) H_k(v*) → H_{l′}(√2 h) H_{k′}(g/√2)`, with `k′ = l + k − l′`.
pub fn c_coeff<T: Real>(l: u32, k: u32, l_prime: u32) -> T {
    T::of_i128(c_coeff_int(l, k, l_prime)) * pow_sqrt2::<T>(-((l + k) as i32))
}
