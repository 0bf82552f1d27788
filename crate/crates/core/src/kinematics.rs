//! Shared kinematics: spacetime dimension and metric, deformation constants,
//! the Minkowski square, the momentum-space weight and the acceptability test.
//!
//! The metric signature is fixed to `(+, -, ..., -)`. Lowering and raising are
//! explicit calls; nothing in the crate contracts indices implicitly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sq, Real, Scalar};

/// A `(D+1)`-dimensional Minkowski spacetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spacetime {
    spatial_dims: usize,
}

impl Spacetime {
    pub fn new(spatial_dims: usize) -> Result<Self> {
        if spatial_dims == 0 {
            return Err(Error::InvalidParameter(
                "spatial dimension must be positive".into(),
            ));
        }
        Ok(Self { spatial_dims })
    }

    /// Spatial dimension `D`.
    pub fn spatial_dims(&self) -> usize {
        self.spatial_dims
    }

    /// Number of spacetime components, `D + 1`.
    pub fn components(&self) -> usize {
        self.spatial_dims + 1
    }

    /// Diagonal metric entry `g_{μμ}` (= `g^{μμ}`): `+1` for `μ = 0`, `-1` otherwise.
    pub fn metric(&self, mu: usize) -> i8 {
        assert!(mu <= self.spatial_dims, "index {mu} out of range");
        if mu == 0 {
            1
        } else {
            -1
        }
    }

    /// The full metric diagonal.
    pub fn signature(&self) -> Vec<i8> {
        (0..self.components()).map(|mu| self.metric(mu)).collect()
    }

    fn check<T>(&self, v: &[T]) -> Result<()> {
        if v.len() != self.components() {
            return Err(Error::DimensionMismatch {
                expected: self.components(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `v_μ = g_{μν} v^ν`.
    pub fn lower<T: Scalar>(&self, v: &MomentumVector<T>) -> Result<MomentumVector<T>> {
        self.check(&v.0)?;
        Ok(MomentumVector(
            v.0.iter()
                .enumerate()
                .map(|(mu, x)| if self.metric(mu) > 0 { x.clone() } else { -x.clone() })
                .collect(),
        ))
    }

    /// `v^μ = g^{μν} v_ν`; the diagonal metric is its own inverse.
    pub fn raise<T: Scalar>(&self, v: &MomentumVector<T>) -> Result<MomentumVector<T>> {
        self.lower(v)
    }
}

/// Deformation constants `β`, `β'` (both nonnegative) and `γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams<T> {
    pub beta: T,
    pub beta_prime: T,
    pub gamma: T,
}

impl<T: Scalar> DeformationParams<T> {
    pub fn new(beta: T, beta_prime: T, gamma: T) -> Result<Self> {
        if beta < T::zero() || beta_prime < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "beta ({beta}) and beta' ({beta_prime}) must be nonnegative"
            )));
        }
        Ok(Self {
            beta,
            beta_prime,
            gamma,
        })
    }

    /// Single-parameter deformation with `β' = γ = 0`.
    pub fn beta_only(beta: T) -> Result<Self> {
        Self::new(beta, T::zero(), T::zero())
    }

    pub fn undeformed() -> Self {
        Self {
            beta: T::zero(),
            beta_prime: T::zero(),
            gamma: T::zero(),
        }
    }

    /// `β + β'`, the combination entering the weight and the acceptability test.
    pub fn beta_sum(&self) -> T {
        self.beta.clone() + self.beta_prime.clone()
    }

    /// Exponent of the scalar-product weight,
    /// `α = [2β + β'(D+2) - 2γ] / [2(β + β')]`.
    pub fn alpha(&self, st: &Spacetime) -> Result<T> {
        let sum = self.beta_sum();
        if sum.is_zero() {
            return Err(Error::UndefinedParameter(
                "alpha requires beta + beta' > 0",
            ));
        }
        let two = T::one() + T::one();
        let d_plus_2 = T::from_usize(st.spatial_dims() + 2).expect("small integer");
        let num = two.clone() * self.beta.clone() + self.beta_prime.clone() * d_plus_2
            - two.clone() * self.gamma.clone();
        Ok(num / (two * sum))
    }

    /// `(β + β')(p⁰)² < 1`.
    pub fn is_acceptable(&self, p0: &T) -> bool {
        self.beta_sum() * sq(p0) < T::one()
    }

    /// Scalar-product weight `[1 - (β+β') p_ν p^ν]^{-α}`.
    ///
    /// In the undeformed limit the weight is identically 1.
    pub fn weight(&self, p: &MomentumVector<T>, st: &Spacetime) -> Result<T>
    where
        T: Real,
    {
        if self.beta_sum().is_zero() {
            return Ok(T::one());
        }
        let alpha = self.alpha(st)?;
        let base = T::one() - self.beta_sum() * minkowski_square(p, st)?;
        if base <= T::zero() {
            return Err(Error::Unacceptable(format!(
                "1 - (beta+beta') p.p = {base} is not positive"
            )));
        }
        Ok(base.powf(-alpha))
    }
}

/// Contravariant momentum `p^μ`, `μ = 0..=D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumVector<T>(pub Vec<T>);

impl<T: Scalar> MomentumVector<T> {
    pub fn new(components: Vec<T>) -> Self {
        Self(components)
    }

    pub fn energy(&self) -> &T {
        &self.0[0]
    }
}

/// `p_ν p^ν = (p⁰)² - Σᵢ (pⁱ)²`.
pub fn minkowski_square<T: Scalar>(p: &MomentumVector<T>, st: &Spacetime) -> Result<T> {
    st.check(&p.0)?;
    Ok(p.0
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (mu, x)| {
            if st.metric(mu) > 0 {
                acc + sq(x)
            } else {
                acc - sq(x)
            }
        }))
}
