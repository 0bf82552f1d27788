//! Generalized uncertainty bounds, minimal position uncertainties and
//! moments of computed Dirac-oscillator states.
//!
//! Spatial indices are 1-based (`1 ≤ i ≤ D`), matching the spacetime
//! component labels.
//!
//! # Minimal `ΔX^i` for isotropic spreads
//!
//! With `ΔP^j = ΔP` for every `j` the deformed relation reads
//! `ΔX^i ΔP ≥ (ħ/2)|A + BΔP²|` with
//! `A = 1 - β[⟨(P⁰)²⟩ - Σ_j⟨P^j⟩²] + β'⟨P^i⟩²` and `B = Dβ + β'`.
//! For `A > 0` the right side over `ΔP` is `(ħ/2)(A/ΔP + BΔP)`, whose minimum
//! sits at `ΔP = √(A/B)` and equals `ħ√(AB)`.

use serde::{Deserialize, Serialize};

use crate::dirac::{QuantumNumber, WavefunctionGrid};
use crate::dirac::derivative8;
use crate::error::{Error, Result};
use crate::kinematics::DeformationParams;
use crate::scalar::{sq, Real, Scalar};

/// First and second momentum moments of a state in `D` spatial dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSet<T> {
    mean_p: Vec<T>,
    spread_p: Vec<T>,
    meansq_p0: T,
}

impl<T: Scalar> MomentSet<T> {
    pub fn new(mean_p: Vec<T>, spread_p: Vec<T>, meansq_p0: T) -> Result<Self> {
        if mean_p.len() != spread_p.len() {
            return Err(Error::DimensionMismatch {
                expected: mean_p.len(),
                got: spread_p.len(),
            });
        }
        if mean_p.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one spatial dimension is required".into(),
            ));
        }
        if spread_p.iter().any(|s| *s < T::zero()) || meansq_p0 < T::zero() {
            return Err(Error::InvalidParameter(
                "spreads and <(P0)^2> must be nonnegative".into(),
            ));
        }
        Ok(Self {
            mean_p,
            spread_p,
            meansq_p0,
        })
    }

    /// All means and spreads zero.
    pub fn at_rest(dims: usize, meansq_p0: T) -> Result<Self> {
        Self::new(vec![T::zero(); dims], vec![T::zero(); dims], meansq_p0)
    }

    pub fn dims(&self) -> usize {
        self.mean_p.len()
    }

    pub fn mean_p(&self) -> &[T] {
        &self.mean_p
    }

    pub fn spread_p(&self) -> &[T] {
        &self.spread_p
    }

    pub fn meansq_p0(&self) -> &T {
        &self.meansq_p0
    }

    pub fn isotropic(&self) -> bool {
        self.spread_p.windows(2).all(|w| w[0] == w[1])
    }

    /// `⟨(P^j)²⟩ = (ΔP^j)² + ⟨P^j⟩²` for every `j`.
    pub fn meansq_p(&self) -> Vec<T> {
        self.mean_p
            .iter()
            .zip(&self.spread_p)
            .map(|(m, s)| sq(s) + sq(m))
            .collect()
    }

    /// Same means, every spread replaced by `delta_p`.
    pub fn with_spread(&self, delta_p: T) -> Self {
        Self {
            mean_p: self.mean_p.clone(),
            spread_p: vec![delta_p; self.dims()],
            meansq_p0: self.meansq_p0.clone(),
        }
    }

    /// Relabels spatial axes: component `j` of the result is component
    /// `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                got: perm.len(),
            });
        }
        let pick = |v: &[T]| perm.iter().map(|&j| v[j].clone()).collect();
        Self::new(pick(&self.mean_p), pick(&self.spread_p), self.meansq_p0.clone())
    }

    fn check_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.dims() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.dims(),
            });
        }
        Ok(i - 1)
    }
}

fn half<T: Scalar>() -> T {
    T::one() / (T::one() + T::one())
}

/// `(ħ/2)(1/ΔP + βΔP)`.
pub fn gup_bound<T: Real>(delta_p: T, beta: T, hbar: T) -> Result<T> {
    if !(delta_p > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "deltaP must be positive, got {delta_p}"
        )));
    }
    Ok(hbar / T::lit(2.0) * (T::one() / delta_p + beta * delta_p))
}

/// Location and value `(1/√β, ħ√β)` of the minimum of [`gup_bound`].
pub fn gup_minimum<T: Real>(beta: T, hbar: T) -> Result<(T, T)> {
    if !(beta > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "the bound has a minimum only for beta > 0, got {beta}"
        )));
    }
    Ok((T::one() / beta.sqrt(), hbar * beta.sqrt()))
}

/// `(ħ/2)|1 - β{⟨(P⁰)²⟩ - Σ_j[(ΔP^j)² + ⟨P^j⟩²]} + β'[(ΔP^i)² + ⟨P^i⟩²]|`.
pub fn ur_bound<T: Scalar>(
    m: &MomentSet<T>,
    params: &DeformationParams<T>,
    i: usize,
    hbar: T,
) -> Result<T> {
    let i = m.check_index(i)?;
    let spatial = m
        .mean_p
        .iter()
        .zip(&m.spread_p)
        .fold(T::zero(), |acc, (mean, spread)| acc + sq(spread) + sq(mean));
    let own = sq(&m.spread_p[i]) + sq(&m.mean_p[i]);
    let inner = T::one() - params.beta.clone() * (m.meansq_p0.clone() - spatial)
        + params.beta_prime.clone() * own;
    Ok(hbar * half::<T>() * inner.abs())
}

/// `(ħ/2)|1 - β⟨P_ρP^ρ⟩ + β'⟨(P^i)²⟩|` from second moments
/// `⟨(P⁰)²⟩` and `⟨(P^j)²⟩`.
pub fn ur_bound_compact<T: Scalar>(
    meansq_p0: T,
    meansq_p: &[T],
    params: &DeformationParams<T>,
    i: usize,
    hbar: T,
) -> Result<T> {
    if i == 0 || i > meansq_p.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: meansq_p.len(),
        });
    }
    let p_dot_p = meansq_p
        .iter()
        .fold(meansq_p0, |acc, x| acc - x.clone());
    let inner = T::one() - params.beta.clone() * p_dot_p
        + params.beta_prime.clone() * meansq_p[i - 1].clone();
    Ok(hbar * half::<T>() * inner.abs())
}

/// `A = 1 - β[⟨(P⁰)²⟩ - Σ_j⟨P^j⟩²] + β'⟨P^i⟩²`.
fn brace<T: Scalar>(m: &MomentSet<T>, params: &DeformationParams<T>, i: usize) -> T {
    let means = m.mean_p.iter().fold(T::zero(), |acc, x| acc + sq(x));
    T::one() - params.beta.clone() * (m.meansq_p0.clone() - means)
        + params.beta_prime.clone() * sq(&m.mean_p[i])
}

/// `ħ√((Dβ + β')A)` for isotropic spreads; see the module documentation.
pub fn min_delta_x<T: Real>(
    m: &MomentSet<T>,
    params: &DeformationParams<T>,
    i: usize,
    hbar: T,
) -> Result<T> {
    let idx = m.check_index(i)?;
    if !m.isotropic() {
        return Err(Error::InvalidParameter(
            "minimal deltaX needs equal spreads in every spatial direction".into(),
        ));
    }
    let a = brace(m, params, idx);
    if a <= T::zero() {
        return Err(Error::Unacceptable(format!(
            "1 - beta(<(P0)^2> - sum <P^j>^2) + beta' <P^i>^2 = {a} is not positive"
        )));
    }
    let b = T::of_usize(m.dims()) * params.beta + params.beta_prime;
    Ok(hbar * (b * a).sqrt())
}

/// `ur_bound / ΔP` with every spread set to `delta_p`: the least `ΔX^i`
/// compatible with that spread.
pub fn isotropic_delta_x_bound<T: Real>(
    m: &MomentSet<T>,
    params: &DeformationParams<T>,
    i: usize,
    hbar: T,
    delta_p: T,
) -> Result<T> {
    if !(delta_p > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "deltaP must be positive, got {delta_p}"
        )));
    }
    Ok(ur_bound(&m.with_spread(delta_p), params, i, hbar)? / delta_p)
}

/// `ħ√((Dβ + β')(1 - β⟨(P⁰)²⟩))`.
pub fn absolute_min_delta_x<T: Real>(
    params: &DeformationParams<T>,
    meansq_p0: T,
    dims: usize,
    hbar: T,
) -> Result<T> {
    let reduction = T::one() - params.beta * meansq_p0;
    if reduction <= T::zero() {
        return Err(Error::Unacceptable(format!(
            "beta <(P0)^2> = {} >= 1",
            params.beta * meansq_p0
        )));
    }
    let b = T::of_usize(dims) * params.beta + params.beta_prime;
    Ok(hbar * (b * reduction).sqrt())
}

/// Exact-arithmetic square of [`absolute_min_delta_x`] divided by `ħ²`.
pub fn absolute_min_delta_x_squared<T: Scalar>(
    params: &DeformationParams<T>,
    meansq_p0: T,
    dims: usize,
) -> Result<T> {
    let reduction = T::one() - params.beta.clone() * meansq_p0;
    if reduction <= T::zero() {
        return Err(Error::Unacceptable("beta <(P0)^2> >= 1".into()));
    }
    let d = T::from_usize(dims).expect("small integer");
    Ok((d * params.beta.clone() + params.beta_prime.clone()) * reduction)
}

/// Quadrature moments of a one-dimensional Dirac-oscillator state in units
/// `m = c = ħ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateMoments<T> {
    pub moments: MomentSet<T>,
    pub mean_p: T,
    pub meansq_p: T,
    /// Zero for real states; `X = i∂_q` is Hermitian under `dq`.
    pub mean_x: T,
    pub meansq_x: T,
    pub delta_x: T,
    pub delta_p: T,
}

/// Tolerance on `|norm - 1|` accepted by [`state_moments`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

/// Moments of `P = p̃` and `X = i f ∂/∂p̃ = i∂_q` under `∫ dp̃/f`; the sharp
/// energy gives `⟨(P⁰)²⟩ = (p̃⁰)²`.
pub fn state_moments<T: Real>(state: &WavefunctionGrid<T>) -> Result<StateMoments<T>> {
    let norm = state.norm_squared();
    if (norm - T::one()).abs() > T::lit(NORMALIZATION_TOLERANCE) {
        return Err(Error::Unnormalized(norm.to_f64().unwrap_or(f64::NAN)));
    }
    let g = &state.grid;
    let h = g.weight();
    let mut mean_p = T::zero();
    let mut meansq_p = T::zero();
    for j in 0..g.len() {
        let rho = state.psi1[j] * state.psi1[j] + state.psi2[j] * state.psi2[j];
        mean_p = mean_p + g.p[j] * rho;
        meansq_p = meansq_p + g.p[j] * g.p[j] * rho;
    }
    mean_p = mean_p * h;
    meansq_p = meansq_p * h;
    let meansq_x = [&state.psi1, &state.psi2]
        .iter()
        .map(|psi| {
            derivative8(psi, g.h)
                .iter()
                .fold(T::zero(), |s, &d| s + d * d)
                * h
        })
        .fold(T::zero(), |a, b| a + b);
    let delta_p = (meansq_p - mean_p * mean_p).max(T::zero()).sqrt();
    let mean_x = T::zero();
    let delta_x = (meansq_x - mean_x * mean_x).max(T::zero()).sqrt();
    let p0 = state.p0_tilde;
    let moments = MomentSet::new(vec![mean_p], vec![delta_p], p0 * p0)?;
    Ok(StateMoments {
        moments,
        mean_p,
        meansq_p,
        mean_x,
        meansq_x,
        delta_x,
        delta_p,
    })
}

/// Uncertainty report for one computed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport<T> {
    pub level: Option<QuantumNumber>,
    pub moments: MomentSet<T>,
    pub bound: T,
    #[serde(rename = "deltaX")]
    pub delta_x: T,
    #[serde(rename = "deltaP")]
    pub delta_p: T,
    pub product: T,
    /// `product - bound`.
    pub slack: T,
}

impl<T: Real> UncertaintyReport<T> {
    /// `ΔX·ΔP` against the deformed bound with `β = β̃`, `β' = γ = 0`.
    pub fn for_state(state: &WavefunctionGrid<T>) -> Result<Self> {
        let sm = state_moments(state)?;
        let params = DeformationParams::beta_only(state.params.beta_tilde())?;
        let bound = ur_bound(&sm.moments, &params, 1, T::one())?;
        let product = sm.delta_x * sm.delta_p;
        Ok(Self {
            level: state.qn(),
            moments: sm.moments,
            bound,
            delta_x: sm.delta_x,
            delta_p: sm.delta_p,
            product,
            slack: product - bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_limit() {
        let m = MomentSet::new(vec![0.3, -1.0], vec![0.2, 0.7], 4.0).unwrap();
        let p = DeformationParams::<f64>::undeformed();
        assert_eq!(ur_bound(&m, &p, 2, 1.0).unwrap(), 0.5);
        assert!(matches!(
            ur_bound(&m, &p, 3, 1.0),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        ));
        assert!(ur_bound(&m, &p, 0, 1.0).is_err());
    }

    #[test]
    fn only_energy_survives_at_rest() {
        let m = MomentSet::at_rest(3, 2.0).unwrap();
        let p = DeformationParams::new(0.1, 0.05, 0.0).unwrap();
        assert!((ur_bound(&m, &p, 1, 1.0).unwrap() - 0.5 * (1.0f64 - 0.2).abs()).abs() < 1e-15);
    }

    #[test]
    fn gup_examples() {
        assert_eq!(gup_bound(4.0, 0.0, 1.0).unwrap(), 0.125);
        let (dp, dx) = gup_minimum(0.25, 2.0).unwrap();
        assert_eq!(dp, 2.0);
        assert_eq!(dx, 1.0);
        assert_eq!(gup_bound(dp, 0.25, 2.0).unwrap(), dx);
        assert!(gup_bound(0.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn kempf_value_at_rest() {
        let p = DeformationParams::new(0.1, 0.3, 0.0).unwrap();
        let m = MomentSet::at_rest(3, 0.0).unwrap();
        let kempf = (3.0f64 * 0.1 + 0.3).sqrt();
        assert!((min_delta_x(&m, &p, 1, 1.0).unwrap() - kempf).abs() < 1e-15);
        assert_eq!(absolute_min_delta_x(&p, 0.0, 3, 1.0).unwrap(), kempf);
        let p = DeformationParams::new(0.0, 0.3, 0.0).unwrap();
        assert_eq!(absolute_min_delta_x(&p, 7.0, 2, 1.0).unwrap(), 0.3f64.sqrt());
    }

    #[test]
    fn refusals() {
        let p = DeformationParams::new(0.5, 0.0, 0.0).unwrap();
        assert!(matches!(
            absolute_min_delta_x(&p, 2.0, 1, 1.0),
            Err(Error::Unacceptable(_))
        ));
        let m = MomentSet::new(vec![0.0, 0.0], vec![0.1, 0.2], 0.5).unwrap();
        assert!(!m.isotropic());
        assert!(min_delta_x(&m, &p, 1, 1.0).is_err());
        let m = MomentSet::at_rest(1, 3.0).unwrap();
        assert!(matches!(min_delta_x(&m, &p, 1, 1.0), Err(Error::Unacceptable(_))));
        assert!(MomentSet::new(vec![0.0], vec![-1.0], 0.0).is_err());
    }
}
