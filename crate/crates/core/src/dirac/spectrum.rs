use serde::{Deserialize, Serialize};

use super::params::{DOParams, QuantumNumber, Regime};
use crate::scalar::Real;

/// One bound-state level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLevel<T> {
    pub qn: QuantumNumber,
    /// `K = ω̃n(2 + β̃ω̃n)`.
    pub k: T,
    pub p0_tilde: T,
    /// `e_n = K c₀`, equal to `(p̃⁰)² - 1` at the self-consistent `p̃⁰`.
    pub e_n: T,
    /// `E/mc² = p̃⁰`.
    pub e_over_mc2: T,
    /// Dimensional energy when units are attached.
    pub energy: Option<T>,
    /// `(c/√β - |E|)/mc²`, evaluated without cancellation; `None` for `β̃ = 0`.
    pub gap_to_bound: Option<T>,
    pub physical: bool,
}

/// `K = ω̃n(2 + β̃ω̃n)`.
pub fn k_factor<T: Real>(params: &DOParams<T>, n: u64) -> T {
    let x = params.omega_tilde() * T::lit(n as f64);
    x * (T::lit(2.0) + params.beta_tilde() * x)
}

/// `1 + β̃ω̃n`; its square equals `1 + β̃K`.
fn shift<T: Real>(params: &DOParams<T>, n: u64) -> T {
    T::one() + params.beta_tilde() * params.omega_tilde() * T::lit(n as f64)
}

/// `e_n(p̃⁰) = K (1 - β̃(p̃⁰)²)`.
pub fn e_formula<T: Real>(params: &DOParams<T>, n: u64, p0_tilde: T) -> T {
    k_factor(params, n) * params.c0(p0_tilde)
}

/// Self-consistent `p̃⁰ = τ√((1+K)/(1+β̃K))`.
pub fn p0_allowed<T: Real>(params: &DOParams<T>, qn: QuantumNumber) -> T {
    let k = k_factor(params, qn.n());
    let tau = T::lit(f64::from(qn.tau()));
    tau * (T::one() + k).sqrt() / shift(params, qn.n())
}

/// `τβ̃^{-1/2}(1 + (β̃-1)/(1+β̃ω̃n)²)^{1/2}`, evaluated literally; `None` for `β̃ = 0`.
pub fn p0_bounded_form<T: Real>(params: &DOParams<T>, qn: QuantumNumber) -> Option<T> {
    let b = params.beta_tilde();
    if b == T::zero() {
        return None;
    }
    let s = shift(params, qn.n());
    let tau = T::lit(f64::from(qn.tau()));
    Some(tau / b.sqrt() * (T::one() + (b - T::one()) / (s * s)).sqrt())
}

/// Relative difference between [`p0_allowed`] and [`p0_bounded_form`].
pub fn p0_cross_check<T: Real>(params: &DOParams<T>, qn: QuantumNumber) -> Option<T> {
    let a = p0_allowed(params, qn);
    p0_bounded_form(params, qn).map(|b| ((a - b) / a).abs())
}

/// `E_{n,τ}` in units of `mc²` (dimensional when units are attached).
///
/// Uses `E = τ mc² √(1+K)/(1+β̃ω̃n)`, identical to the bounded form
/// `τ(c/√β)(1 + (β̃-1)/(1+β̃ω̃n)²)^{1/2}` and valid down to `β̃ = 0`, where it
/// reduces to `τ mc² √(1+2ω̃n)`. Physical-mode parameters never carry `β̃ ≥ 1`.
pub fn energy<T: Real>(params: &DOParams<T>, qn: QuantumNumber) -> T {
    p0_allowed(params, qn) * params.rest_energy()
}

/// `(c/√β - |E|)/mc² = β̃^{-1/2} r/(1 + √(1-r))` with `r = (1-β̃)/(1+β̃ω̃n)²`.
pub fn gap_to_bound<T: Real>(params: &DOParams<T>, n: u64) -> Option<T> {
    let b = params.beta_tilde();
    if b == T::zero() {
        return None;
    }
    let s = shift(params, n);
    let r = (T::one() - b) / (s * s);
    Some(r / (T::one() + (T::one() - r).sqrt()) / b.sqrt())
}

pub fn level<T: Real>(params: &DOParams<T>, qn: QuantumNumber) -> SpectrumLevel<T> {
    let p0 = p0_allowed(params, qn);
    SpectrumLevel {
        qn,
        k: k_factor(params, qn.n()),
        p0_tilde: p0,
        e_n: e_formula(params, qn.n(), p0),
        e_over_mc2: p0,
        energy: params.units().map(|u| p0 * u.rest_energy()),
        gap_to_bound: gap_to_bound(params, qn.n()),
        physical: params.is_physical(),
    }
}

/// All levels up to `n_max` with the monotonicity and boundedness verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable<T> {
    pub regime: Regime,
    pub levels: Vec<SpectrumLevel<T>>,
    /// `|E|` fails to increase strictly with `n` along some `τ` branch.
    pub monotonicity_violated: bool,
    /// Every `|E|` lies in `[mc², c/√β)`.
    pub bounded: bool,
    /// Largest relative disagreement of the two closed forms for `p̃⁰`.
    pub closed_form_discrepancy: T,
}

impl<T: Real> SpectrumTable<T> {
    /// Labels every level unphysical.
    pub fn unphysical(&self) -> bool {
        self.levels.iter().any(|l| !l.physical)
    }
}

pub fn spectrum_table<T: Real>(params: &DOParams<T>, n_max: u64) -> SpectrumTable<T> {
    let levels: Vec<_> = QuantumNumber::all(n_max)
        .into_iter()
        .map(|qn| level(params, qn))
        .collect();
    let mut monotonicity_violated = false;
    for tau in [1i8, -1] {
        let branch: Vec<_> = levels.iter().filter(|l| l.qn.tau() == tau).collect();
        for w in branch.windows(2) {
            let increasing = match (w[0].gap_to_bound, w[1].gap_to_bound) {
                (Some(g0), Some(g1)) => g1 < g0,
                _ => w[1].p0_tilde.abs() > w[0].p0_tilde.abs(),
            };
            if !increasing {
                monotonicity_violated = true;
            }
        }
    }
    let bounded = levels.iter().all(|l| {
        l.p0_tilde.abs() >= T::one() && l.gap_to_bound.is_none_or(|g| g > T::zero())
    });
    let closed_form_discrepancy = levels
        .iter()
        .filter_map(|l| p0_cross_check(params, l.qn))
        .fold(T::zero(), T::max);
    SpectrumTable {
        regime: params.regime(),
        levels,
        monotonicity_violated,
        bounded,
        closed_form_discrepancy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qn(n: u64, tau: i8) -> QuantumNumber {
        QuantumNumber::new(n, tau).unwrap()
    }

    #[test]
    fn e_formula_examples() {
        let p = DOParams::<f64>::new(0.0, 0.5).unwrap();
        assert_eq!(e_formula(&p, 3, 7.0), 3.0);
        let p = DOParams::<f64>::new(0.5, 0.1).unwrap();
        assert_eq!(e_formula(&p, 0, 1.3), 0.0);
        let p0 = p0_allowed(&p, qn(2, 1));
        let e = e_formula(&p, 2, p0);
        assert!((e - (p0 * p0 - 1.0)).abs() < 1e-15);
        assert!((e - 0.42 * (1.0 - 0.5 * 1.42 / 1.21)).abs() < 1e-15);
    }

    #[test]
    fn p0_examples() {
        let p = DOParams::<f64>::new(0.5, 0.1).unwrap();
        assert_eq!(p0_allowed(&p, qn(0, 1)), 1.0);
        let p0 = p0_allowed(&p, qn(2, 1));
        assert!((p0 * p0 - 1.42 / 1.21).abs() < 1e-15);
        assert!((p0 - 1.083_307_4).abs() < 1e-6);
        assert!(p0_cross_check(&p, qn(2, 1)).unwrap() < 1e-15);
        assert!((p0_allowed(&p, qn(2, -1)) + p0).abs() == 0.0);

        let d = DOParams::<f64>::diagnostic(1.0, 0.3).unwrap();
        for n in [1, 5, 40] {
            assert!((p0_allowed(&d, qn(n, 1)) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ground_energy_is_rest_energy() {
        let units = super::super::params::PhysicalUnits::new(2.0, 3.0, 1.0).unwrap();
        let p = DOParams::<f64>::new(0.3, 0.2).unwrap().with_units(units);
        assert_eq!(energy(&p, qn(0, 1)), 18.0);
    }

    #[test]
    fn undeformed_limit_form() {
        let p = DOParams::<f64>::new(0.0, 0.1).unwrap();
        for n in 0..10 {
            let e = energy(&p, qn(n, 1));
            assert!((e - (1.0 + 0.2 * n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn table_counts_and_flags() {
        let t = spectrum_table(&DOParams::<f64>::new(0.5, 0.1).unwrap(), 5);
        assert_eq!(t.levels.len(), 11);
        assert_eq!(t.levels.iter().filter(|l| l.qn.tau() == 1).count(), 6);
        assert!(!t.monotonicity_violated && t.bounded && !t.unphysical());

        let t = spectrum_table(&DOParams::<f64>::diagnostic(1.5, 0.1).unwrap(), 5);
        assert!(t.monotonicity_violated && t.unphysical());
        assert!(t.levels[2].p0_tilde < t.levels[1].p0_tilde);
    }
}
