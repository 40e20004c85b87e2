//! Scalar abstractions.
//!
//! Two tiers are used throughout the crate:
//!
//! * [`Field`] is the minimum needed to evaluate interpolating polynomials at
//!   the stencil midpoint and to apply the dyadic (Aitken) coefficients. It is
//!   implemented for `f32`, `f64`, `Ratio<i64>` and `BigRational`, so the
//!   interpolation identities can be checked in exact arithmetic.
//! * [`Real`] adds everything the nonlinear machinery needs (powers,
//!   quadrature nodes, finiteness checks). Implemented for `f32` and `f64`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num};

/// Exact or floating-point arithmetic sufficient for polynomial evaluation.
pub trait Field: Num + Clone + Debug {
    /// Embeds an integer.
    fn from_int(v: i64) -> Self;

    /// Embeds an exact rational. Floating types round once.
    fn from_ratio(q: Ratio<i64>) -> Self {
        Self::from_int(*q.numer()) / Self::from_int(*q.denom())
    }

    /// Whether the value is a usable (finite) sample.
    fn is_finite_value(&self) -> bool {
        true
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            #[inline]
            fn from_int(v: i64) -> Self {
                v as $t
            }

            #[inline]
            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }
        }
    };
}

float_field!(f32);
float_field!(f64);

impl Field for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_ratio(q: Ratio<i64>) -> Self {
        q
    }
}

impl Field for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(q: Ratio<i64>) -> Self {
        BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
    }
}

/// Floating-point scalar used by the indicator, weight and interpolation paths.
pub trait Real:
    Field + Float + FromPrimitive + Copy + Send + Sync + Display + LowerExp + Sum + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Field + Float + FromPrimitive + Copy + Send + Sync + Display + LowerExp + Sum + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_embedding_is_exact() {
        let q = Ratio::new(5, 12);
        assert_eq!(<Ratio<i64> as Field>::from_ratio(q), q);
        let big = <BigRational as Field>::from_ratio(q);
        assert_eq!(big, BigRational::new(BigInt::from(5), BigInt::from(12)));
        assert!((f64::from_ratio(q) - 5.0 / 12.0).abs() == 0.0);
    }

    #[test]
    fn finiteness_only_flags_floats() {
        assert!(!f64::NAN.is_finite_value());
        assert!(!f32::INFINITY.is_finite_value());
        assert!(Ratio::new(1i64, 3).is_finite_value());
    }
}
