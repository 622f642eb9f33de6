//! Sharp Bohr-type radii for bounded analytic self-maps of the unit disk.
//!
//! The library computes the closed-form radii of several two-parameter
//! Bohr-type inequalities, evaluates the majorant and extremal functionals
//! behind them on the Möbius family `f(z) = (a - z)/(1 - az)`, and verifies
//! the inequalities and their sharpness numerically (supremum search,
//! witness search, empirical radius recovery by bisection).
//!
//! Core math is generic over the scalar type via [`Real`] (implemented for
//! `f32` and `f64`); concrete `f64` aliases live at the crate root.

pub mod functionals;
pub mod numerics;
pub mod radii;
pub mod series;
pub mod verify;

use std::fmt::{Debug, Display};

use num_traits::Float;

/// Scalar type for all core math. Implemented for `f32` and `f64`.
///
/// Default tolerances throughout the crate are tuned for `f64`; callers
/// using `f32` should widen them.
pub trait Real: Float + Display + Debug + Send + Sync + 'static {
    /// Lift an `f64` constant into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from(x).expect("constant representable in scalar type")
    }

    /// Round-trip into `f64`, for diagnostics and output.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub use functionals::FunctionalKind;
pub use radii::{Branch, Region, TheoremId, TheoremParams};
pub use verify::Verdict;

pub type ToleranceConfig64 = numerics::ToleranceConfig<f64>;
pub type Bracket64 = numerics::Bracket<f64>;
pub type TheoremParams64 = radii::TheoremParams<f64>;
pub type RadiusResult64 = radii::RadiusResult<f64>;
pub type MoebiusFamily64 = series::MoebiusFamily<f64>;
pub type CoefficientSeries64 = series::CoefficientSeries<f64>;
pub type VerifyConfig64 = verify::VerifyConfig<f64>;
pub type VerificationReport64 = verify::VerificationReport<f64>;
pub type WitnessResult64 = verify::WitnessResult<f64>;

pub type ToleranceConfig32 = numerics::ToleranceConfig<f32>;
pub type TheoremParams32 = radii::TheoremParams<f32>;
pub type RadiusResult32 = radii::RadiusResult<f32>;
