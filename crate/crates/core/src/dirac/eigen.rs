use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::banded::BandMatrix;
use super::frame::{Frame, GridSpec, QGrid, Scheme};
use super::params::DOParams;
use super::stencil::{SecondDerivative, D2_ORDER4, D2_ORDER8};
use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Operator ordering: `H = B⁺B⁻` or its partner `B⁻B⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factorization {
    Factorized,
    Partner,
}

/// `V(q) = p̃² ∓ ω̃f(p̃)`, so that `B^∓B^± = -ω̃²∂_q² + V`.
pub fn potential<T: Real>(omega: T, factorization: Factorization, p: T, f: T) -> T {
    match factorization {
        Factorization::Factorized => p * p - omega * f,
        Factorization::Partner => p * p + omega * f,
    }
}

fn second_order_matrix<T: Real>(
    grid: &QGrid<T>,
    omega: T,
    factorization: Factorization,
) -> SymTridiagonal<T> {
    let kinetic = omega * omega / (grid.h * grid.h);
    let diag = grid
        .p
        .iter()
        .zip(&grid.f)
        .map(|(&p, &f)| kinetic * T::lit(2.0) + potential(omega, factorization, p, f))
        .collect();
    SymTridiagonal::new(diag, vec![-kinetic; grid.len() - 1])
}

fn band_operator<T: Real>(
    grid: &QGrid<T>,
    omega: T,
    factorization: Factorization,
    stencil: &SecondDerivative,
) -> BandMatrix<T> {
    let n = grid.len();
    let kinetic = omega * omega / (grid.h * grid.h);
    let mut a = BandMatrix::zeros(n, stencil.off.len());
    for i in 0..n {
        let v = potential(omega, factorization, grid.p[i], grid.f[i]);
        a.set(i, i, v - kinetic * T::lit(stencil.centre));
        for (k, &w) in stencil.off.iter().enumerate() {
            let j = i + k + 1;
            if j < n {
                a.set(i, j, -kinetic * T::lit(w));
                a.set(j, i, -kinetic * T::lit(w));
            }
        }
    }
    a
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Rayleigh-quotient iteration from a unit vector `v`.
fn rayleigh_refine<T: Real>(a: &BandMatrix<T>, mut v: Vec<T>) -> (T, Vec<T>) {
    let mut sigma = dot(&v, &a.apply(&v));
    for _ in 0..3 {
        let w = a.solve_shifted(sigma, &v);
        let norm = dot(&w, &w).sqrt();
        v = w.into_iter().map(|x| x / norm).collect();
        sigma = dot(&v, &a.apply(&v));
    }
    (sigma, v)
}

/// The `k` lowest eigenvalues on one grid, with node counts of the
/// corresponding eigenvectors when they were formed.
fn grid_eigenvalues<T: Real>(
    grid: &QGrid<T>,
    omega: T,
    factorization: Factorization,
    k: usize,
    scheme: Scheme,
) -> (Vec<T>, Vec<usize>) {
    let tri = second_order_matrix(grid, omega, factorization);
    let coarse = tri.lowest_eigenvalues(k);
    match scheme {
        Scheme::Central2 => (coarse, Vec::new()),
        Scheme::Central4 => {
            let band = band_operator(grid, omega, factorization, &D2_ORDER4);
            coarse
                .into_iter()
                .map(|lambda| {
                    let (sigma, v) = rayleigh_refine(&band, tri.eigenvector(lambda));
                    (sigma, count_nodes(&v))
                })
                .unzip()
        }
    }
}

/// Lowest eigenvalues on a refinement sequence with Richardson extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution<T> {
    pub factorization: Factorization,
    pub scheme: Scheme,
    pub p0_tilde: T,
    pub frame: Frame<T>,
    /// Interval counts, coarsest first.
    pub grids: Vec<usize>,
    /// `raw[g][k]`: eigenvalue `k` on grid `g`.
    pub raw: Vec<Vec<T>>,
    /// Richardson-extrapolated from the two finest grids at the scheme's order.
    pub eigenvalues: Vec<T>,
    /// `log₂` of successive difference ratios over the three finest grids.
    pub observed_order: Vec<Option<T>>,
    /// `|extrapolated - finest|`.
    pub extrapolation_error: Vec<T>,
    pub log: String,
}

/// The `k` lowest eigenvalues of `B⁺B⁻` at fixed `p̃⁰`.
pub fn eigensolve_factorized<T: Real>(
    params: &DOParams<T>,
    p0_tilde: T,
    k: usize,
    spec: &GridSpec,
) -> Result<EigenSolution<T>> {
    eigensolve(params, p0_tilde, k, spec, Factorization::Factorized)
}

/// The `k` lowest eigenvalues of the partner `B⁻B⁺` at fixed `p̃⁰`.
pub fn eigensolve_partner<T: Real>(
    params: &DOParams<T>,
    p0_tilde: T,
    k: usize,
    spec: &GridSpec,
) -> Result<EigenSolution<T>> {
    eigensolve(params, p0_tilde, k, spec, Factorization::Partner)
}

pub fn eigensolve<T: Real>(
    params: &DOParams<T>,
    p0_tilde: T,
    k: usize,
    spec: &GridSpec,
    factorization: Factorization,
) -> Result<EigenSolution<T>> {
    let frame = Frame::for_level(params, p0_tilde, &spec.with_box_states(spec.box_states.max(k)))?;
    let omega = params.omega_tilde();
    let grids = spec.sequence();
    let mut log = String::new();
    let mut raw: Vec<Vec<T>> = Vec::with_capacity(grids.len());
    let mut misordered = false;
    for &n in &grids {
        let (ev, nodes) = grid_eigenvalues(&frame.grid(n), omega, factorization, k, spec.scheme);
        let _ = writeln!(log, "N={n:>8}: {ev:?}");
        if !nodes.is_empty() && nodes.iter().enumerate().any(|(i, &m)| i != m) {
            let _ = writeln!(log, "  node counts {nodes:?} do not match ascending order");
            misordered = true;
        }
        raw.push(ev);
    }
    let gain = T::lit(2f64.powi(spec.scheme.order()));

    let g = raw.len();
    let mut eigenvalues = raw[g - 1].clone();
    let mut extrapolation_error = vec![T::zero(); k];
    let mut observed_order = vec![None; k];
    if g >= 2 {
        for i in 0..k {
            let (c, fine) = (raw[g - 2][i], raw[g - 1][i]);
            eigenvalues[i] = (gain * fine - c) / (gain - T::one());
            extrapolation_error[i] = (eigenvalues[i] - fine).abs();
        }
    }
    let mut failed = misordered;
    if g >= 3 {
        for i in 0..k {
            let d1 = (raw[g - 3][i] - raw[g - 2][i]).abs();
            let d2 = (raw[g - 2][i] - raw[g - 1][i]).abs();
            let floor = T::lit(256.0) * T::epsilon() * (raw[g - 1][i].abs() + omega);
            if d1 > floor && d2 > floor {
                let order = (d1 / d2).log2();
                observed_order[i] = Some(order);
                if !(order >= T::one()) {
                    failed = true;
                }
            }
        }
    }
    let _ = writeln!(log, "extrapolated: {eigenvalues:?}");
    let _ = writeln!(log, "observed order: {observed_order:?}");
    if failed {
        return Err(Error::NonConvergence { log });
    }
    Ok(EigenSolution {
        factorization,
        scheme: spec.scheme,
        p0_tilde,
        frame,
        grids,
        raw,
        eigenvalues,
        observed_order,
        extrapolation_error,
        log,
    })
}

/// One eigenvector refined to eighth order on a single grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenVector<T> {
    pub grid: QGrid<T>,
    pub eigenvalue: T,
    /// Unit Euclidean norm.
    pub values: Vec<T>,
    pub nodes: usize,
}

/// Eigenvector number `index` (ascending eigenvalue) of the chosen ordering.
///
/// The second-order matrix brackets the eigenpair; Rayleigh-quotient
/// iteration on the eighth-order band matrix then refines it.
pub fn eigenvector<T: Real>(
    params: &DOParams<T>,
    p0_tilde: T,
    index: usize,
    intervals: usize,
    factorization: Factorization,
) -> Result<EigenVector<T>> {
    let spec = GridSpec::new(intervals, 0)?.with_box_states(index.max(GridSpec::default().box_states));
    let frame = Frame::for_level(params, p0_tilde, &spec)?;
    let grid = frame.grid(intervals);
    let omega = params.omega_tilde();
    let coarse = second_order_matrix(&grid, omega, factorization);
    let lambda = *coarse
        .lowest_eigenvalues(index + 1)
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty grid".into()))?;

    let fine = band_operator(&grid, omega, factorization, &D2_ORDER8);
    let (sigma, v) = rayleigh_refine(&fine, coarse.eigenvector(lambda));
    let nodes = count_nodes(&v);
    Ok(EigenVector {
        grid,
        eigenvalue: sigma,
        values: v,
        nodes,
    })
}

/// Sign changes, ignoring samples below `1e-8` of the peak.
pub fn count_nodes<T: Real>(v: &[T]) -> usize {
    let peak = v.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let cut = peak * T::lit(1e-8);
    let mut last = T::zero();
    let mut nodes = 0;
    for &x in v.iter().filter(|x| x.abs() > cut) {
        if last != T::zero() && (x > T::zero()) != (last > T::zero()) {
            nodes += 1;
        }
        last = x;
    }
    nodes
}
