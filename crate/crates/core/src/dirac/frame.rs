use serde::{Deserialize, Serialize};

use super::params::DOParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Finite-difference scheme for the eigenvalue sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Three-point second-order differences (tridiagonal, Sturm bisection).
    Central2,
    /// Five-point fourth-order differences; each second-order eigenpair is
    /// refined by Rayleigh-quotient iteration on the band operator.
    Central4,
}

impl Scheme {
    /// Formal order of the truncation error.
    pub fn order(&self) -> i32 {
        match self {
            Scheme::Central2 => 2,
            Scheme::Central4 => 4,
        }
    }
}

/// Discretization request: `intervals` uniform cells across the `q` domain,
/// `refinements` successive doublings for extrapolation, the scheme, and for
/// `β̃ = 0` the number of oscillator states the truncated box must hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub intervals: usize,
    pub refinements: usize,
    pub scheme: Scheme,
    pub box_states: usize,
}

impl GridSpec {
    pub const MIN_INTERVALS: usize = 64;

    pub fn new(intervals: usize, refinements: usize) -> Result<Self> {
        if intervals < Self::MIN_INTERVALS || !intervals.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid size must be even and at least {}, got {intervals}",
                Self::MIN_INTERVALS
            )));
        }
        Ok(Self {
            intervals,
            refinements,
            scheme: Scheme::Central4,
            box_states: 32,
        })
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_box_states(mut self, states: usize) -> Self {
        self.box_states = states;
        self
    }

    /// Interval counts of the refinement sequence, coarsest first.
    pub fn sequence(&self) -> Vec<usize> {
        (0..=self.refinements)
            .map(|r| self.intervals << r)
            .collect()
    }

    /// The finest grid of the sequence.
    pub fn finest(&self) -> usize {
        self.intervals << self.refinements
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            intervals: 256,
            refinements: 2,
            scheme: Scheme::Central4,
            box_states: 32,
        }
    }
}

/// The flat coordinate `q` in which the measure `dp̃/f` becomes `dq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Frame<T> {
    /// `β̃ > 0`: `q = (β̃c₀)^{-1/2} arctan(√(β̃/c₀) p̃)` on `(-q_max, q_max)`.
    Compact { beta_tilde: T, c0: T },
    /// `β̃ = 0`: `q = p̃` truncated to `(-L, L)`.
    Box { half_width: T },
}

impl<T: Real> Frame<T> {
    /// Frame of the energy-dependent problem at `p̃⁰`.
    pub fn for_level(params: &DOParams<T>, p0_tilde: T, spec: &GridSpec) -> Result<Self> {
        params.require_physical("discretization")?;
        let c0 = params.require_acceptable(p0_tilde)?;
        let b = params.beta_tilde();
        if b > T::zero() {
            Ok(Frame::Compact { beta_tilde: b, c0 })
        } else {
            // Hermite functions decay like exp(-(ξ - √(2k+1))²/2) beyond the
            // turning point; a margin of 9 puts the tail below 1e-17.
            let k = T::of_usize(2 * spec.box_states + 1);
            let half_width = params.omega_tilde().sqrt() * (k.sqrt() + T::lit(9.0));
            Ok(Frame::Box { half_width })
        }
    }

    /// `q_max = (π/2)(β̃c₀)^{-1/2}`, or the box half width.
    pub fn half_width(&self) -> T {
        match *self {
            Frame::Compact { beta_tilde, c0 } => T::FRAC_PI_2() / (beta_tilde * c0).sqrt(),
            Frame::Box { half_width } => half_width,
        }
    }

    pub fn c0(&self) -> T {
        match *self {
            Frame::Compact { c0, .. } => c0,
            Frame::Box { .. } => T::one(),
        }
    }

    pub fn beta_tilde(&self) -> T {
        match *self {
            Frame::Compact { beta_tilde, .. } => beta_tilde,
            Frame::Box { .. } => T::zero(),
        }
    }

    pub fn p_of_q(&self, q: T) -> T {
        match *self {
            Frame::Compact { beta_tilde, c0 } => {
                (c0 / beta_tilde).sqrt() * ((beta_tilde * c0).sqrt() * q).tan()
            }
            Frame::Box { .. } => q,
        }
    }

    pub fn q_of_p(&self, p: T) -> T {
        match *self {
            Frame::Compact { beta_tilde, c0 } => {
                ((beta_tilde / c0).sqrt() * p).atan() / (beta_tilde * c0).sqrt()
            }
            Frame::Box { .. } => p,
        }
    }

    /// `f(p̃) = c₀ + β̃p̃² = dp̃/dq`.
    pub fn f(&self, p: T) -> T {
        self.c0() + self.beta_tilde() * p * p
    }

    /// Uniform grid of `intervals` cells; only the interior nodes are kept
    /// (Dirichlet ends).
    pub fn grid(&self, intervals: usize) -> QGrid<T> {
        let l = self.half_width();
        let h = (l + l) / T::of_usize(intervals);
        let q: Vec<T> = (1..intervals).map(|j| -l + T::of_usize(j) * h).collect();
        let p: Vec<T> = q.iter().map(|&q| self.p_of_q(q)).collect();
        let f: Vec<T> = p.iter().map(|&p| self.f(p)).collect();
        QGrid {
            frame: *self,
            intervals,
            h,
            q,
            p,
            f,
        }
    }
}

/// Interior nodes of a uniform `q` grid with their `p̃` and `f` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QGrid<T> {
    pub frame: Frame<T>,
    pub intervals: usize,
    pub h: T,
    pub q: Vec<T>,
    pub p: Vec<T>,
    pub f: Vec<T>,
}

impl<T: Real> QGrid<T> {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Index of the node at `q = 0`.
    pub fn centre(&self) -> usize {
        self.intervals / 2 - 1
    }

    /// Quadrature weight of every node for `∫ dp̃/f (·) = ∫ dq (·)`.
    pub fn weight(&self) -> T {
        self.h
    }

    /// Same frame and node set, up to rounding.
    pub fn compatible_with(&self, other: &Self) -> bool {
        let close = |a: T, b: T| (a - b).abs() <= T::lit(64.0) * T::epsilon() * (a.abs() + b.abs());
        self.intervals == other.intervals
            && close(self.frame.half_width(), other.frame.half_width())
            && close(self.frame.c0(), other.frame.c0())
            && close(self.frame.beta_tilde(), other.frame.beta_tilde())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_round_trip_and_jacobian() {
        let params = DOParams::<f64>::new(0.5, 0.1).unwrap();
        let frame = Frame::for_level(&params, 1.05, &GridSpec::default()).unwrap();
        let c0: f64 = 1.0 - 0.5 * 1.05 * 1.05;
        assert!((frame.half_width() - std::f64::consts::FRAC_PI_2 / (0.5f64 * c0).sqrt()).abs() < 1e-14);
        for &p in &[-30.0, -1.0, 0.0, 0.2, 7.5] {
            let q = frame.q_of_p(p);
            assert!((frame.p_of_q(q) - p).abs() < 1e-12 * (1.0 + p.abs()));
            let dq = 1e-6;
            let dp = (frame.p_of_q(q + dq) - frame.p_of_q(q - dq)) / (2.0 * dq);
            assert!((dp - frame.f(p)).abs() < 1e-6 * frame.f(p));
        }
    }

    #[test]
    fn grid_is_symmetric_and_centred() {
        let params = DOParams::<f64>::new(0.1, 0.5).unwrap();
        let frame = Frame::for_level(&params, 1.0, &GridSpec::default()).unwrap();
        let g = frame.grid(64);
        assert_eq!(g.len(), 63);
        assert!(g.q[g.centre()].abs() < 1e-14);
        assert!((g.q[0] + g.q[62]).abs() < 1e-13);
        assert!(g.f.iter().all(|&f| f >= frame.c0()));
    }

    #[test]
    fn unacceptable_energy_is_rejected() {
        let params = DOParams::<f64>::new(0.5, 0.1).unwrap();
        assert!(matches!(
            Frame::for_level(&params, 1.5, &GridSpec::default()),
            Err(Error::Unacceptable(_))
        ));
        assert!(GridSpec::new(32, 2).is_err());
        assert!(GridSpec::new(65, 2).is_err());
    }
}
