//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site index {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("site indices collide: {0}")]
    SiteCollision(usize),

    #[error("system size must be at least 1 site")]
    EmptyRegister,

    #[error("{sites} sites exceeds the configured maximum of {max} (set PTSIM_MAX_L to raise)")]
    DimensionOverflow { sites: usize, max: usize },

    #[error("field list has {got} entries, expected {expected}")]
    FieldCountMismatch { got: usize, expected: usize },

    #[error("coupling list has {got} entries, expected {expected}")]
    CouplingCountMismatch { got: usize, expected: usize },

    #[error("eigensolver failed to converge for a {dim}x{dim} matrix: {detail}")]
    EigFailure { dim: usize, detail: String },

    #[error("linear algebra error: {0}")]
    Linalg(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("propagator unavailable: eigenbasis ill-conditioned (condition {condition:.3e}) and the direct matrix exponential also failed: {detail}")]
    PropagatorFailure { condition: f64, detail: String },

    #[error("exponent {0:.3e} too large for a representable propagator; use the evolution API which rescales internally")]
    PropagatorOverflow(f64),

    #[error("state norm underflowed and rescaling failed")]
    NormUnderflow,

    #[error("density matrix has (near-)zero trace")]
    ZeroTrace,

    #[error("state is not normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("cut {cut} out of range for {sites} sites (need 1 <= cut <= L-1)")]
    CutOutOfRange { cut: usize, sites: usize },

    #[error("spectrum is PT-broken; the dephased steady state requires the mixed phase (use the dominant-projector branch)")]
    BrokenPhase,

    #[error("need at least {need} data points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("degenerate fit: all abscissae equal")]
    DegenerateFit,

    #[error("invalid bisection bracket: both ends classify as {0}")]
    InvalidBracket(&'static str),

    #[error("no self-consistent root with |m| <= 1: beyond the mean-field transition")]
    BeyondMeanFieldTransition,

    #[error("mean-field parameters require a nonzero transverse field g")]
    ZeroTransverseField,

    #[error("time series does not decay: spectrum looks mixed, no purification rate to fit")]
    NonDecayingSeries,

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
