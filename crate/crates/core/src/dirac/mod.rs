//! The (1+1)-dimensional Dirac oscillator in the deformed algebra with
//! `D = 1`, `β' = γ = 0`.
//!
//! Everything is dimensionless: momenta in units of `mc`, energies in units
//! of `mc²`, `β̃ = βm²c²`, `ω̃ = ħω/(mc²)`. The weight of the scalar product is
//! `1/f` with `f(p̃) = c₀ + β̃p̃²` and `c₀ = 1 - β̃(p̃⁰)²`.
//!
//! Numerics work in `q(p̃) = (β̃c₀)^{-1/2} arctan(√(β̃/c₀) p̃)`, where
//! `dp̃/f = dq` and `B^± = p̃(q) ∓ ω̃∂_q`. The ladder products become
//! Schrödinger operators `-ω̃²∂_q² + p̃² ∓ ω̃f` on `(-q_max, q_max)` with
//! Dirichlet ends. At `β̃ = 0` the map is the identity and the line is
//! truncated to a box.
//!
//! Eigenvalues come from second-order differences (optionally refined to
//! fourth order) with Richardson extrapolation over a doubling sequence;
//! eigenvectors are refined with an eighth-order operator.

mod banded;
mod eigen;
mod frame;
mod params;
mod spectrum;
mod stencil;
mod tridiag;
mod wavefunction;

pub use banded::BandMatrix;
pub use eigen::{
    count_nodes, eigensolve, eigensolve_factorized, eigensolve_partner, eigenvector, potential,
    EigenSolution, EigenVector, Factorization,
};
pub use frame::{Frame, GridSpec, QGrid, Scheme};
pub use params::{DOParams, PhysicalUnits, QuantumNumber, Regime};
pub use spectrum::{
    e_formula, energy, gap_to_bound, k_factor, level, p0_allowed, p0_bounded_form,
    p0_cross_check, spectrum_table, SpectrumLevel, SpectrumTable,
};
pub use stencil::{derivative6, derivative8, interpolate, second_derivative8};
pub use tridiag::SymTridiagonal;
pub use wavefunction::{
    apply_ladder, ground_state, inner_product, overlap, search_tau_minus_zero_mode, wavefunction,
    GridMetadata, Ladder, LadderResult, Overlap, WavefunctionGrid, ZeroModeSearch,
    LADDER_TOLERANCE,
};
