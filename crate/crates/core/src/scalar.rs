//! Scalar abstraction shared by every numerical kernel in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar accepted by the solver kernels.
///
/// Implemented for `f32`, `f64` and the double-double type [`twofloat::TwoFloat`],
/// which the coefficient assembly uses to survive the alternating sums of the
/// monomial expansions.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssignOps + Debug + Display + Send + Sync + 'static
{
    #[inline]
    fn of(x: f64) -> Self {
        // `FromPrimitive::from_f64` truncates to an integer for some
        // extended-precision types; `NumCast` does not.
        <Self as num_traits::NumCast>::from(x).expect("finite f64 is representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    #[inline]
    fn of_i128(n: i128) -> Self {
        Self::from_i128(n).expect("i128 is representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + NumAssignOps + Debug + Display + Send + Sync + 'static
{
}

/// Γ(x) evaluated in `T`.
///
/// Half-integer and integer arguments are built from √π or 1 by the
/// recurrence, so they carry the full precision of `T`; other arguments go
/// through `libm::tgamma` and are therefore only f64-accurate.
pub fn gamma<T: Real>(x: f64) -> T {
    let twice = 2.0 * x;
    if x > 0.0 && twice.fract() == 0.0 && twice <= 340.0 {
        let (mut acc, mut arg) = if (twice as u64) % 2 == 0 {
            (T::one(), 1.0)
        } else {
            (T::PI().sqrt(), 0.5)
        };
        while arg < x {
            acc *= T::of(arg);
            arg += 1.0;
        }
        acc
    } else {
        T::of(libm::tgamma(x))
    }
}

/// `a / b` refined by one residual correction.
///
/// For `f32`/`f64` this is the plain quotient to within rounding; for
/// double-double it recovers full precision, which the type's own division
/// does not provide.
#[inline]
pub fn div<T: Real>(a: T, b: T) -> T {
    let q = a / b;
    q + (a - q * b) / b
}

/// `x^n` by repeated squaring, with `0^0 = 1`.
pub fn ipow<T: Real>(x: T, n: u32) -> T {
    let (mut acc, mut base, mut k) = (T::one(), x, n);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

/// 2^(p/2) in `T`, exact for integer `p`.
pub fn pow_sqrt2<T: Real>(p: i32) -> T {
    let e = p.div_euclid(2);
    let whole = if e >= 0 { ipow(T::of(2.0), e as u32) } else { ipow(T::of(0.5), e.unsigned_abs()) };
    if p.rem_euclid(2) == 1 {
        whole * T::SQRT_2()
    } else {
        whole
    }
}
