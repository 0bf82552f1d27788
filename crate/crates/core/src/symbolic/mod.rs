//! Exact term rewriting for normal-ordered differential operators in the
//! momentum representation, and the identity suites built on it.
//!
//! Conventions:
//! - `h` is the central symbol `iħ`; nothing ever splits it into `i` and `ħ`.
//! - `x^μ = -h g^{μν} ∂/∂p^ν`, so `[x^μ, p^ν] = -h g^{μν}`.
//! - `u = (1 - β p_ν p^ν)^{-1}` with `∂u/∂p^μ = 2 β p_μ u²`.
//! - Operators are stored with coefficients to the left of derivatives, terms
//!   ordered lexicographically by derivative multi-index and, inside each
//!   coefficient, lexicographically by exponent vector
//!   `(p^0, ..., p^D, h, β, β', γ, u, ε)`.

mod algebra;
mod operator;
mod poly;
mod verify;

pub use algebra::{Algebra, MetricMode, Param, PolyDisplay, Symbol, SymbolicParams};
pub use operator::{DerivIndex, OperatorExpr};
pub use poly::{CoeffPoly, Monomial};
pub use verify::{
    kempf_position, verify_algebra, verify_algebra_with, verify_kempf, verify_snyder, verify_poincare, verify_poincare_with,
    verify_reductions, verify_transformation, verify_transformations, AlgebraMutation,
    IdentityCheck, PoincareMutation, TransformationMutation, TransformationSpec,
    VerificationReport,
};
