//! Lorentz-covariant deformed position/momentum algebra with a minimal length.
//!
//! - [`kinematics`]: metric, deformation constants, scalar-product weight.
//! - [`symbolic`]: exact normal-ordering engine and identity suites.
//! - [`dirac`]: the deformed (1+1)-dimensional Dirac oscillator.
//! - [`uncertainty`]: generalized uncertainty bounds and state moments.
//! - [`io`]: CSV/JSON serialization of spectra, grids and reports.
//!
//! Numerical code is generic over [`Real`] (`f32`/`f64`); kinematics and the
//! uncertainty formulas are generic over [`Scalar`] and also run on exact
//! [`Rational`]s.

pub mod dirac;
pub mod error;
pub mod io;
pub mod kinematics;
mod scalar;
pub mod symbolic;
pub mod uncertainty;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Exact coefficient polynomial.
pub type Poly = symbolic::CoeffPoly<Rational>;
/// Exact normal-ordered operator.
pub type Operator = symbolic::OperatorExpr<Rational>;
/// Exact operator algebra.
pub type ExactAlgebra = symbolic::Algebra<Rational>;

pub type DeformationParams = kinematics::DeformationParams<f64>;
pub type ExactDeformationParams = kinematics::DeformationParams<Rational>;
pub type MomentumVector = kinematics::MomentumVector<f64>;

pub type DOParams = dirac::DOParams<f64>;
pub type SpectrumLevel = dirac::SpectrumLevel<f64>;
pub type WavefunctionGrid = dirac::WavefunctionGrid<f64>;
pub type MomentSet = uncertainty::MomentSet<f64>;
pub type ExactMomentSet = uncertainty::MomentSet<Rational>;
