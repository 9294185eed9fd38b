//! Scalar abstractions shared by every tensor routine.
//!
//! Structural code and the exact algebra (absolute tensor, Z-decomposition,
//! diagonal similarity, characteristic polynomials) work over any [`Scalar`],
//! including [`BigRational`]. The iterative solvers need a [`Real`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// An ordered signed field element.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync + 'static {
    /// Exact rational value, when the scalar has one (every finite float does).
    fn to_rational(&self) -> Option<BigRational>;

    /// Lossy conversion used for reporting and floating cross-checks.
    fn to_f64_lossy(&self) -> f64;

    fn from_f64_lossy(v: f64) -> Self;
}

/// Floating point scalars (`f32`, `f64`) used by the numerical solvers.
pub trait Real: Scalar + Float + FromPrimitive + Display + Default {
    fn of(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite constant")
    }
}

impl Scalar for f64 {
    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn from_f64_lossy(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(f64::from(*self))
    }

    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }

    fn from_f64_lossy(v: f64) -> Self {
        v as f32
    }
}

impl Real for f64 {}
impl Real for f32 {}

impl Scalar for BigRational {
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
    }
}
