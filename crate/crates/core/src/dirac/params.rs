use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Whether `β̃ ≥ 1` is admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `β̃ < 1`; every output is physical.
    Physical,
    /// Any `β̃ ≥ 0`; formulas are evaluated verbatim and outputs with `β̃ ≥ 1`
    /// are labelled unphysical.
    Diagnostic,
}

/// Dimensional constants used to convert dimensionless outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalUnits<T> {
    pub mass: T,
    pub c: T,
    pub hbar: T,
}

impl<T: Real> PhysicalUnits<T> {
    pub fn new(mass: T, c: T, hbar: T) -> Result<Self> {
        for (name, v) in [("mass", mass), ("c", c), ("hbar", hbar)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { mass, c, hbar })
    }

    /// `mc²`.
    pub fn rest_energy(&self) -> T {
        self.mass * self.c * self.c
    }

    /// `mc`.
    pub fn momentum_scale(&self) -> T {
        self.mass * self.c
    }

    /// Compton length `a = ħ/(mc)`.
    pub fn length_scale(&self) -> T {
        self.hbar / (self.mass * self.c)
    }
}

/// Dirac-oscillator parameters: `β̃ = βm²c²`, `ω̃ = ħω/(mc²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DOParams<T> {
    beta_tilde: T,
    omega_tilde: T,
    regime: Regime,
    units: Option<PhysicalUnits<T>>,
}

impl<T: Real> DOParams<T> {
    /// Physical-mode parameters; rejects `β̃ ≥ 1`.
    pub fn new(beta_tilde: T, omega_tilde: T) -> Result<Self> {
        Self::with_regime(beta_tilde, omega_tilde, Regime::Physical)
    }

    /// Diagnostic-mode parameters; any `β̃ ≥ 0`.
    pub fn diagnostic(beta_tilde: T, omega_tilde: T) -> Result<Self> {
        Self::with_regime(beta_tilde, omega_tilde, Regime::Diagnostic)
    }

    pub fn with_regime(beta_tilde: T, omega_tilde: T, regime: Regime) -> Result<Self> {
        if !(beta_tilde >= T::zero()) || !beta_tilde.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta_tilde must be finite and nonnegative, got {beta_tilde}"
            )));
        }
        if !(omega_tilde > T::zero()) || !omega_tilde.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega_tilde must be finite and positive, got {omega_tilde}"
            )));
        }
        if regime == Regime::Physical && beta_tilde >= T::one() {
            return Err(Error::Unphysical(format!(
                "beta_tilde = {beta_tilde} >= 1: |E| would decrease with n; use diagnostic mode"
            )));
        }
        Ok(Self {
            beta_tilde,
            omega_tilde,
            regime,
            units: None,
        })
    }

    /// Builds the dimensionless pair from `β`, `ω` and the dimensional constants.
    pub fn from_physical(
        beta: T,
        omega: T,
        units: PhysicalUnits<T>,
        regime: Regime,
    ) -> Result<Self> {
        let mc = units.momentum_scale();
        let beta_tilde = beta * mc * mc;
        let omega_tilde = units.hbar * omega / units.rest_energy();
        Ok(Self::with_regime(beta_tilde, omega_tilde, regime)?.with_units(units))
    }

    pub fn with_units(mut self, units: PhysicalUnits<T>) -> Self {
        self.units = Some(units);
        self
    }

    pub fn beta_tilde(&self) -> T {
        self.beta_tilde
    }

    pub fn omega_tilde(&self) -> T {
        self.omega_tilde
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn units(&self) -> Option<&PhysicalUnits<T>> {
        self.units.as_ref()
    }

    /// False when `β̃ ≥ 1`.
    pub fn is_physical(&self) -> bool {
        self.beta_tilde < T::one()
    }

    /// Dimensional `β = β̃/(mc)²`, when units are attached.
    pub fn beta(&self) -> Option<T> {
        self.units.map(|u| {
            let mc = u.momentum_scale();
            self.beta_tilde / (mc * mc)
        })
    }

    /// Dimensional `ω = ω̃ mc²/ħ`, when units are attached.
    pub fn omega(&self) -> Option<T> {
        self.units
            .map(|u| self.omega_tilde * u.rest_energy() / u.hbar)
    }

    /// `mc²`, or `1` without units.
    pub fn rest_energy(&self) -> T {
        self.units.map_or(T::one(), |u| u.rest_energy())
    }

    /// `c₀ = 1 - β̃(p̃⁰)²`.
    pub fn c0(&self, p0_tilde: T) -> T {
        T::one() - self.beta_tilde * p0_tilde * p0_tilde
    }

    /// `f(p̃) = c₀ + β̃p̃²`.
    pub fn f(&self, p0_tilde: T, p_tilde: T) -> T {
        self.c0(p0_tilde) + self.beta_tilde * p_tilde * p_tilde
    }

    pub(crate) fn require_physical(&self, what: &str) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::Unphysical(format!(
                "{what} requires beta_tilde < 1, got {}",
                self.beta_tilde
            )))
        }
    }

    /// `c₀ > 0`, as required for a positive weight.
    pub(crate) fn require_acceptable(&self, p0_tilde: T) -> Result<T> {
        let c0 = self.c0(p0_tilde);
        if c0 > T::zero() {
            Ok(c0)
        } else {
            Err(Error::Unacceptable(format!(
                "1 - beta_tilde p0^2 = {c0} <= 0 at p0_tilde = {p0_tilde}"
            )))
        }
    }
}

/// Level label `(n, τ)`: `n ≥ 0` for `τ = +1`, `n ≥ 1` for `τ = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumber {
    n: u64,
    tau: i8,
}

impl QuantumNumber {
    pub fn new(n: u64, tau: i8) -> Result<Self> {
        match tau {
            1 => Ok(Self { n, tau }),
            -1 if n >= 1 => Ok(Self { n, tau }),
            _ => Err(Error::InvalidQuantumNumber { n, tau }),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn tau(&self) -> i8 {
        self.tau
    }

    /// Levels up to `n_max` in table order: `τ = +1` first, then `τ = -1`.
    pub fn all(n_max: u64) -> Vec<Self> {
        let plus = (0..=n_max).map(|n| Self { n, tau: 1 });
        let minus = (1..=n_max).map(|n| Self { n, tau: -1 });
        plus.chain(minus).collect()
    }
}

impl std::fmt::Display for QuantumNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n, if self.tau > 0 { "+" } else { "-" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_rule() {
        assert!(QuantumNumber::new(0, 1).is_ok());
        assert!(QuantumNumber::new(3, -1).is_ok());
        assert!(matches!(
            QuantumNumber::new(0, -1),
            Err(Error::InvalidQuantumNumber { n: 0, tau: -1 })
        ));
        assert!(QuantumNumber::new(2, 0).is_err());
        assert_eq!(QuantumNumber::all(5).len(), 11);
    }

    #[test]
    fn physical_mode_refuses_large_beta() {
        assert!(matches!(
            DOParams::<f64>::new(1.0, 0.1),
            Err(Error::Unphysical(_))
        ));
        assert!(DOParams::<f64>::diagnostic(1.5, 0.1).is_ok());
        assert!(DOParams::<f64>::new(-0.1, 0.1).is_err());
        assert!(DOParams::<f64>::new(0.1, 0.0).is_err());
    }

    #[test]
    fn dimensional_round_trip() {
        let units = PhysicalUnits::new(2.0, 3.0, 0.5).unwrap();
        let p = DOParams::<f64>::from_physical(0.01, 4.0, units, Regime::Physical).unwrap();
        assert!((p.beta_tilde() - 0.36).abs() < 1e-15);
        assert!((p.omega_tilde() - 0.5 * 4.0 / 18.0).abs() < 1e-15);
        assert!((p.beta().unwrap() - 0.01).abs() < 1e-15);
        assert!((p.omega().unwrap() - 4.0).abs() < 1e-14);
        assert!((units.length_scale() - 0.5 / 6.0).abs() < 1e-15);
    }
}
