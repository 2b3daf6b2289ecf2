//! Scalar abstractions shared by the double, multiprecision and exact kernels.
//!
//! Every algorithm in this crate is written once against [`Field`] (exact
//! arithmetic is enough) or [`Real`] (needs `sqrt` and a notion of unit
//! roundoff). Constants are always produced "like" an existing value so that
//! multiprecision floats inherit the working precision of their operands.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Float, Rational};

/// An ordered field. Implemented for `f64`, [`rug::Float`] and [`rug::Rational`].
pub trait Field:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// The integer `v` at the working precision of `self`.
    fn int_like(&self, v: i64) -> Self;

    fn zero_like(&self) -> Self {
        self.int_like(0)
    }

    fn one_like(&self) -> Self {
        self.int_like(1)
    }

    fn is_zero(&self) -> bool;

    fn is_positive(&self) -> bool {
        *self > self.zero_like()
    }
}

/// A floating-point field with rounding.
pub trait Real: Field {
    /// `v` converted (exactly when the precision allows) to the precision of `self`.
    fn f64_like(&self, v: f64) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    /// `sqrt(self² + other²)` without intermediate overflow.
    fn hypot(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
    /// Half the distance from one to the next representable number.
    fn unit_roundoff(&self) -> Self;
    fn precision_bits(&self) -> u32;
    fn is_finite(&self) -> bool;

    /// `|self|` carrying the sign of `sign`.
    fn copysign(&self, sign: &Self) -> Self {
        let a = self.abs();
        if *sign < sign.zero_like() {
            -a
        } else {
            a
        }
    }
}

impl Field for f64 {
    fn int_like(&self, v: i64) -> Self {
        v as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Real for f64 {
    fn f64_like(&self, v: f64) -> Self {
        v
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn hypot(&self, other: &Self) -> Self {
        f64::hypot(*self, *other)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn unit_roundoff(&self) -> Self {
        f64::EPSILON / 2.0
    }

    fn precision_bits(&self) -> u32 {
        f64::MANTISSA_DIGITS
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Field for Float {
    fn int_like(&self, v: i64) -> Self {
        Float::with_val(self.prec(), v)
    }

    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
}

impl Real for Float {
    fn f64_like(&self, v: f64) -> Self {
        Float::with_val(self.prec(), v)
    }

    fn abs(&self) -> Self {
        Float::abs(self.clone())
    }

    fn sqrt(&self) -> Self {
        Float::sqrt(self.clone())
    }

    fn hypot(&self, other: &Self) -> Self {
        Float::hypot(self.clone(), other)
    }

    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }

    fn unit_roundoff(&self) -> Self {
        let mut u = Float::with_val(self.prec(), 1);
        u >>= self.prec();
        u
    }

    fn precision_bits(&self) -> u32 {
        self.prec()
    }

    fn is_finite(&self) -> bool {
        Float::is_finite(self)
    }
}

impl Field for Rational {
    fn int_like(&self, v: i64) -> Self {
        Rational::from(v)
    }

    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
}

/// `base^exp` by binary exponentiation (about `2·log2(exp)` roundings).
pub fn pow_u<T: Field>(base: &T, mut exp: u32) -> T {
    let mut acc = base.one_like();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * &sq;
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.clone() * &sq;
        }
    }
    acc
}

/// Rounds an exact rational to the nearest double.
pub fn rational_to_f64(r: &Rational) -> f64 {
    // `Rational::to_f64` truncates; a 53-bit `Float` rounds to nearest.
    Float::with_val(f64::MANTISSA_DIGITS, r).to_f64()
}

/// Relative distance `|a - b| / min(|a|, |b|)`; values below `1e-300` in
/// magnitude are compared absolutely.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().min(b.abs());
    let diff = (a - b).abs();
    if scale < 1e-300 {
        diff
    } else {
        diff / scale
    }
}
