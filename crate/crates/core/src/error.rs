use thiserror::Error;

/// Errors produced by the symbolic engine and the numerical verification layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unresolved symbol `{0}` during numeric evaluation")]
    UnresolvedSymbol(String),

    #[error("monomial `{0}` has zero rotation frequency (secular term); remove it with split_diagonal first")]
    ZeroFrequency(String),

    #[error("resonance: monomial `{0}` rotates at a symbolically vanishing frequency combination")]
    Resonance(String),

    #[error("harmonic term {index} has zero frequency")]
    ZeroHarmonicFrequency { index: usize },

    #[error("operator is not diagonal: found off-diagonal monomial `{0}`")]
    NotDiagonal(String),

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("invalid free Hamiltonian: {0}")]
    InvalidFreeHamiltonian(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("extremum at {phi} is a maximum, not a minimum")]
    NotAMinimum { phi: f64 },

    #[error("no Kerr-free point in range")]
    NoKerrFreePoint,

    #[error("Fock truncation too small: leakage {leakage:.3e} exceeds {threshold:.1e}; try dim >= {suggested_dim}")]
    Leakage {
        leakage: f64,
        threshold: f64,
        suggested_dim: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
