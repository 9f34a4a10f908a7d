use thiserror::Error;

use crate::graphs::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid letter {0}: word letters are 1, 2 or 3")]
    InvalidLetter(u8),

    #[error("invalid corner index {0}: corners are 1, 2 or 3")]
    InvalidCorner(u8),

    #[error("level {level} exceeds the maximum level {max}")]
    LevelTooLarge { level: usize, max: usize },

    #[error("{what} requires level >= {min}, got {level}")]
    LevelTooSmall {
        what: &'static str,
        level: usize,
        min: usize,
    },

    #[error("vertex {0} is not in the graph")]
    VertexNotFound(String),

    #[error("hole of depth {depth} is too deep for level {level}")]
    HoleTooDeep { depth: usize, level: usize },

    #[error("side corners must differ (got {0} twice)")]
    DegenerateSide(u8),

    #[error("word {word} is longer than level {level}")]
    WordTooLong { word: String, level: usize },

    #[error("function lives on {found_family}_{found_level}, expected {expected_family}_{expected_level}")]
    DomainMismatch {
        expected_family: Family,
        expected_level: usize,
        found_family: Family,
        found_level: usize,
    },

    #[error("function has {found} values but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value in vertex function")]
    NonFinite,

    #[error("complex preimage: discriminant {discriminant} < 0 for target {target}")]
    ComplexPreimage { target: f64, discriminant: f64 },

    #[error("spectral parameter {z} is exceptional: {reason}")]
    Exceptional { z: f64, reason: String },

    #[error("eigen-equation residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("preimage depth {depth} exceeds the maximum depth {max}")]
    DepthTooLarge { depth: usize, max: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix dimension {dim} exceeds the oracle cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("computed spectrum has {computed} eigenvalues, oracle has {oracle}")]
    CountMismatch { computed: usize, oracle: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}
