use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::eigen::{eigensolve_partner, eigenvector, Factorization};
use super::frame::{Frame, GridSpec, QGrid};
use super::params::{DOParams, QuantumNumber};
use super::spectrum::{e_formula, level, p0_allowed, SpectrumLevel};
use super::stencil::{derivative6, derivative8, interpolate};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `B⁺ = p̃ - ω̃∂_q` or `B⁻ = p̃ + ω̃∂_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ladder {
    Raising,
    Lowering,
}

/// Relative derivative-error estimate above which a ladder result is
/// flagged as under-resolved.
pub const LADDER_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LadderResult<T> {
    pub values: Vec<T>,
    /// `ω̃ max|D₈ψ - D₆ψ|`, relative to `max|B^±ψ|`.
    pub derivative_error: T,
    pub warning: Option<String>,
}

/// Applies `B^±` to samples on `grid`.
pub fn apply_ladder<T: Real>(
    grid: &QGrid<T>,
    omega: T,
    sign: Ladder,
    values: &[T],
) -> LadderResult<T> {
    assert_eq!(values.len(), grid.len(), "values must be sampled on the grid");
    let d8 = derivative8(values, grid.h);
    let d6 = derivative6(values, grid.h);
    let s = match sign {
        Ladder::Raising => -omega,
        Ladder::Lowering => omega,
    };
    let out: Vec<T> = values
        .iter()
        .zip(&grid.p)
        .zip(&d8)
        .map(|((&v, &p), &d)| p * v + s * d)
        .collect();
    let scale = out
        .iter()
        .chain(values)
        .fold(T::zero(), |m, &x| m.max(x.abs()));
    let diff = d8
        .iter()
        .zip(&d6)
        .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
    let derivative_error = if scale > T::zero() {
        omega * diff / scale
    } else {
        T::zero()
    };
    let warning = (derivative_error > T::lit(LADDER_TOLERANCE)).then(|| {
        format!(
            "grid too coarse: estimated relative derivative error {:e} on {} intervals",
            derivative_error.to_f64().unwrap_or(f64::NAN),
            grid.intervals
        )
    });
    LadderResult {
        values: out,
        derivative_error,
        warning,
    }
}

/// Diagnostics stored with every computed state. Residual norms are relative
/// to `‖ψ₁‖` in the weighted norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata<T> {
    /// `‖B⁺ψ₂ - (p̃⁰-1)ψ₁‖`.
    pub residual_upper: T,
    /// `‖B⁻ψ₁ - (p̃⁰+1)ψ₂‖`.
    pub residual_lower: T,
    /// `‖B⁺B⁻ψ₁ - e_n ψ₁‖` with `e_n` from the closed form.
    pub eigen_residual: T,
    /// Rayleigh quotient of the discrete eigenvector, if one was computed.
    pub numerical_eigenvalue: Option<T>,
    pub nodes: usize,
    pub derivative_error: T,
    pub warnings: Vec<String>,
}

/// Two-component state sampled at the nodes of a `q` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid<T> {
    pub params: DOParams<T>,
    pub level: Option<SpectrumLevel<T>>,
    pub p0_tilde: T,
    pub grid: QGrid<T>,
    pub psi1: Vec<T>,
    pub psi2: Vec<T>,
    pub metadata: GridMetadata<T>,
}

fn weighted_norm<T: Real>(h: T, v: &[T]) -> T {
    (v.iter().fold(T::zero(), |s, &x| s + x * x) * h).sqrt()
}

impl<T: Real> WavefunctionGrid<T> {
    pub fn qn(&self) -> Option<QuantumNumber> {
        self.level.map(|l| l.qn)
    }

    /// `Σ weight (ψ₁² + ψ₂²)`, the quadrature of `∫ dp̃/f (|ψ₁|² + |ψ₂|²)`.
    pub fn norm_squared(&self) -> T {
        let s = self
            .psi1
            .iter()
            .zip(&self.psi2)
            .fold(T::zero(), |s, (&a, &b)| s + a * a + b * b);
        s * self.grid.weight()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_squared().sqrt();
        if n > T::zero() {
            for x in self.psi1.iter_mut().chain(self.psi2.iter_mut()) {
                *x = *x / n;
            }
        }
    }

    pub fn ladder_apply(&self, sign: Ladder, values: &[T]) -> LadderResult<T> {
        apply_ladder(&self.grid, self.params.omega_tilde(), sign, values)
    }

    /// Quadrature weight per node for `∫ dp̃/f`.
    pub fn weights(&self) -> Vec<T> {
        vec![self.grid.weight(); self.grid.len()]
    }

    /// Re-samples both components at the nodes of `target` by eight-point
    /// interpolation in this state's own `q` coordinate.
    pub fn resample_onto(&self, target: &QGrid<T>) -> Self {
        let own = &self.grid;
        let l = own.frame.half_width();
        let sample = |v: &[T]| -> Vec<T> {
            target
                .p
                .iter()
                .map(|&p| {
                    let q = own.frame.q_of_p(p);
                    if q.abs() >= l {
                        T::zero()
                    } else {
                        interpolate(v, own.q[0], own.h, q)
                    }
                })
                .collect()
        };
        Self {
            params: self.params,
            level: self.level,
            p0_tilde: self.p0_tilde,
            grid: target.clone(),
            psi1: sample(&self.psi1),
            psi2: sample(&self.psi2),
            metadata: self.metadata.clone(),
        }
    }

    fn finish_metadata(&mut self, numerical_eigenvalue: Option<T>, nodes: usize) {
        let omega = self.params.omega_tilde();
        let h = self.grid.h;
        let p0 = self.p0_tilde;
        let up = self.ladder_apply(Ladder::Raising, &self.psi2);
        let down = self.ladder_apply(Ladder::Lowering, &self.psi1);
        let upup = apply_ladder(&self.grid, omega, Ladder::Raising, &down.values);
        let e = match self.level {
            Some(l) => l.e_n,
            None => p0 * p0 - T::one(),
        };
        let scale = weighted_norm(h, &self.psi1);
        let rel = |r: Vec<T>| weighted_norm(h, &r) / scale;
        let residual_upper = rel(up
            .values
            .iter()
            .zip(&self.psi1)
            .map(|(&b, &a)| b - (p0 - T::one()) * a)
            .collect());
        let residual_lower = rel(down
            .values
            .iter()
            .zip(&self.psi2)
            .map(|(&b, &a)| b - (p0 + T::one()) * a)
            .collect());
        let eigen_residual = rel(upup
            .values
            .iter()
            .zip(&self.psi1)
            .map(|(&b, &a)| b - e * a)
            .collect());
        let warnings = [&up, &down]
            .iter()
            .filter_map(|r| r.warning.clone())
            .collect();
        self.metadata = GridMetadata {
            residual_upper,
            residual_lower,
            eigen_residual,
            numerical_eigenvalue,
            nodes,
            derivative_error: up.derivative_error.max(down.derivative_error),
            warnings,
        };
    }
}

/// `ψ₁ ∝ (c₀ + β̃p̃²)^{-1/(2β̃ω̃)}` (Gaussian `exp(-p̃²/(2ω̃))` at `β̃ = 0`),
/// `ψ₂ = 0`, normalized, on the finest grid of `spec`.
pub fn ground_state<T: Real>(
    params: &DOParams<T>,
    p0_tilde: T,
    spec: &GridSpec,
) -> Result<WavefunctionGrid<T>> {
    let frame = Frame::for_level(params, p0_tilde, spec)?;
    let grid = frame.grid(spec.finest());
    let b = params.beta_tilde();
    let w = params.omega_tilde();
    let psi1: Vec<T> = grid
        .p
        .iter()
        .zip(&grid.f)
        .map(|(&p, &f)| {
            if b > T::zero() {
                (-(f / frame.c0()).ln() / (T::lit(2.0) * b * w)).exp()
            } else {
                (-p * p / (T::lit(2.0) * w)).exp()
            }
        })
        .collect();
    let n = grid.len();
    let mut state = WavefunctionGrid {
        params: *params,
        level: None,
        p0_tilde,
        grid,
        psi1,
        psi2: vec![T::zero(); n],
        metadata: empty_metadata(),
    };
    state.normalize();
    state.finish_metadata(None, 0);
    Ok(state)
}

fn empty_metadata<T: Real>() -> GridMetadata<T> {
    GridMetadata {
        residual_upper: T::zero(),
        residual_lower: T::zero(),
        eigen_residual: T::zero(),
        numerical_eigenvalue: None,
        nodes: 0,
        derivative_error: T::zero(),
        warnings: Vec::new(),
    }
}

/// State `(n, τ)` on the finest grid of `spec`.
///
/// `ψ₁` is eigenvector `n` of `B⁺B⁻` at `p̃⁰_{n,τ}`, phased to be positive at
/// `p̃ = 0` (even `n`) or to rise through it (odd `n`); `ψ₂ = B⁻ψ₁/(p̃⁰+1)`.
pub fn wavefunction<T: Real>(
    params: &DOParams<T>,
    qn: QuantumNumber,
    spec: &GridSpec,
) -> Result<WavefunctionGrid<T>> {
    let lvl = level(params, qn);
    if qn.n() == 0 {
        let mut state = ground_state(params, lvl.p0_tilde, spec)?;
        state.level = Some(lvl);
        state.finish_metadata(None, 0);
        return Ok(state);
    }
    let index = usize::try_from(qn.n())
        .map_err(|_| Error::InvalidParameter(format!("n = {} too large", qn.n())))?;
    let v = eigenvector(
        params,
        lvl.p0_tilde,
        index,
        spec.finest(),
        Factorization::Factorized,
    )?;
    let grid = v.grid;
    let c = grid.centre();
    let flip = if index % 2 == 0 {
        v.values[c] < T::zero()
    } else {
        v.values[c + 1] < v.values[c - 1]
    };
    let psi1: Vec<T> = if flip {
        v.values.iter().map(|&x| -x).collect()
    } else {
        v.values
    };
    let down = apply_ladder(&grid, params.omega_tilde(), Ladder::Lowering, &psi1);
    let denom = lvl.p0_tilde + T::one();
    let psi2 = down.values.iter().map(|&x| x / denom).collect();
    let mut state = WavefunctionGrid {
        params: *params,
        level: Some(lvl),
        p0_tilde: lvl.p0_tilde,
        grid,
        psi1,
        psi2,
        metadata: empty_metadata(),
    };
    state.normalize();
    state.finish_metadata(Some(v.eigenvalue), v.nodes);
    Ok(state)
}

/// `Σ_c ⟨ψ_c^a|ψ_c^b⟩` under the weight `1/f(p̃, p̃⁰)` of `weight_level`.
///
/// Both states must live on the same grid; see
/// [`WavefunctionGrid::resample_onto`].
pub fn inner_product<T: Real>(
    a: &WavefunctionGrid<T>,
    b: &WavefunctionGrid<T>,
    weight_level: QuantumNumber,
) -> Result<Complex<T>> {
    if !a.grid.compatible_with(&b.grid) {
        return Err(Error::IncompatibleGrids(format!(
            "{} vs {} intervals, half widths {} vs {}",
            a.grid.intervals,
            b.grid.intervals,
            a.grid.frame.half_width(),
            b.grid.frame.half_width()
        )));
    }
    let params = &a.params;
    let p0w = p0_allowed(params, weight_level);
    params.require_acceptable(p0w)?;
    let mut sum = T::zero();
    for j in 0..a.grid.len() {
        let p = a.grid.p[j];
        let ratio = a.grid.f[j] / params.f(p0w, p);
        sum = sum + ratio * (a.psi1[j] * b.psi1[j] + a.psi2[j] * b.psi2[j]);
    }
    Ok(Complex::new(sum * a.grid.weight(), T::zero()))
}

/// Cross-level inner product with a quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap<T> {
    pub value: Complex<T>,
    /// Same quantity with half the intervals.
    pub coarse: Complex<T>,
    pub error_estimate: T,
}

/// Computes `a` and `b` on their own grids, re-samples both onto the frame of
/// `weight_level`, and repeats with half the resolution to estimate the error.
pub fn overlap<T: Real>(
    params: &DOParams<T>,
    a: QuantumNumber,
    b: QuantumNumber,
    weight_level: QuantumNumber,
    spec: &GridSpec,
) -> Result<Overlap<T>> {
    let at = |intervals: usize| -> Result<Complex<T>> {
        let s = GridSpec {
            intervals,
            refinements: 0,
            ..*spec
        };
        let p0w = p0_allowed(params, weight_level);
        let target = Frame::for_level(params, p0w, &s)?.grid(intervals);
        let sa = wavefunction(params, a, &s)?.resample_onto(&target);
        let sb = wavefunction(params, b, &s)?.resample_onto(&target);
        inner_product(&sa, &sb, weight_level)
    };
    let value = at(spec.finest())?;
    let coarse = at(spec.finest() / 2)?;
    Ok(Overlap {
        value,
        coarse,
        error_estimate: (value - coarse).norm(),
    })
}

/// Outcome of the search for a normalizable `(n, τ) = (0, -1)` state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeSearch<T> {
    /// Lowest eigenvalue of `B⁻B⁺` at `p̃⁰ = -1`; a solution needs it to vanish.
    pub partner_floor: T,
    /// `e_1` at the same `p̃⁰`, the natural scale of the floor.
    pub gap: T,
    pub found: bool,
}

/// At `p̃⁰ = -1`, `e = 0` and the coupled equations force `B⁻B⁺ψ₂ = 0` with
/// `B⁺ψ₂ = -2ψ₁`. The partner operator is positive definite, so the floor
/// stays at the scale of the first gap and no normalizable solution exists.
pub fn search_tau_minus_zero_mode<T: Real>(
    params: &DOParams<T>,
    spec: &GridSpec,
) -> Result<ZeroModeSearch<T>> {
    let p0 = -T::one();
    let sol = eigensolve_partner(params, p0, 1, spec)?;
    let partner_floor = sol.eigenvalues[0];
    let gap = e_formula(params, 1, p0);
    Ok(ZeroModeSearch {
        partner_floor,
        gap,
        found: partner_floor.abs() < T::lit(1e-6) * gap,
    })
}
