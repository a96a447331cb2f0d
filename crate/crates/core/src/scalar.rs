//! Scalar abstractions.
//!
//! The closed-form layer only needs ring operations, so it is written against
//! [`Ring`] and can be evaluated exactly over integers and rationals, over
//! floats, or over truncated polynomials (see [`crate::poly::Poly4`]).
//! Anything that needs square roots or transcendental functions asks for
//! [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Float, FloatConst, NumCast, One, Zero};

/// Commutative ring with unit, closed under negation.
pub trait Ring:
    Copy
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i32(v: i32) -> Self;

    /// `false` for NaN or infinite values; exact types are always finite.
    fn is_finite_scalar(&self) -> bool {
        true
    }
}

macro_rules! impl_ring_int {
    ($($t:ty),*) => {$(
        impl Ring for $t {
            #[inline]
            fn from_i32(v: i32) -> Self {
                v as $t
            }
        }
    )*};
}

impl_ring_int!(i64, i128);

impl Ring for Ratio<i64> {
    fn from_i32(v: i32) -> Self {
        Ratio::from_integer(v as i64)
    }
}

impl Ring for Ratio<i128> {
    fn from_i32(v: i32) -> Self {
        Ratio::from_integer(v as i128)
    }
}

/// Floating point: f32 or f64.
pub trait Real: Ring + Float + FloatConst + Display + LowerExp + Send + Sync + 'static {
    /// Base tolerance for imaginary parts when classifying a spectrum.
    /// Scaled by `1 + spectral radius` at the call site; the gap tolerance
    /// is ten times this value.
    const CLASSIFY_TOL: f64;

    #[inline]
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("literal representable in every float type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty, $tol:expr) => {
        impl Ring for $t {
            #[inline]
            fn from_i32(v: i32) -> Self {
                v as $t
            }

            #[inline]
            fn is_finite_scalar(&self) -> bool {
                self.is_finite()
            }
        }

        impl Real for $t {
            const CLASSIFY_TOL: f64 = $tol;
        }
    };
}

impl_real!(f64, 1e-9);
impl_real!(f32, 1e-3);

/// Integer literal in any ring.
#[inline]
pub fn k<T: Ring>(v: i32) -> T {
    T::from_i32(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_agree_across_rings() {
        assert_eq!(k::<i64>(-7), -7);
        assert_eq!(k::<f32>(3), 3.0);
        assert_eq!(k::<Ratio<i64>>(5), Ratio::from_integer(5));
        assert_eq!(f64::lit(0.25), 0.25);
    }

    #[test]
    fn finiteness() {
        assert!(1.0f64.is_finite_scalar());
        assert!(!f64::NAN.is_finite_scalar());
        assert!(!f32::INFINITY.is_finite_scalar());
        assert!(i64::MAX.is_finite_scalar());
    }
}
