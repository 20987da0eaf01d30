//! Simulator for post-selected non-Hermitian Ising chains.
//!
//! The library builds the non-Hermitian Hamiltonians
//! `H = Σ_i [h_i σ^z_i + g σ^x_i + iγ(1 + σ^y_i)] + Σ_i J_i σ^z_i σ^z_{i+1}`
//! (and the two-level analogue `M₀ + ib`), diagonalizes them, classifies the
//! spectrum as PT-unbroken ("mixed") or PT-broken ("pure"), evolves pure and
//! mixed states under `T = exp(-iHt)`, computes the dephased steady state and
//! its purity, solves the Weiss mean-field theory of the transition, and
//! drives reproducible `(γ, J, L)` parameter scans.
//!
//! Conventions fixed across the crate (see module docs for details):
//!
//! * Site 0 is the most significant bit of the computational-basis index.
//! * The anti-Hermitian term carries the sign `+iγ(1 + σ^y_i)`; the dominant
//!   mode is the eigenvalue with the largest imaginary part. Normalized
//!   observables are invariant under `γ → -γ` (the spectrum conjugates).
//! * Entropies are in bits (base-2 logarithms).
//! * Open boundary conditions by default; periodic available.

pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod linalg;
pub mod meanfield;
pub mod operators;
pub mod scan;
pub mod spectral;
pub mod steady_state;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix; dimension is `2^L` for an `L`-site register.
pub type CMatrix = ndarray::Array2<C64>;

/// Dense real matrix.
pub type RMatrix = ndarray::Array2<f64>;
