use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from its conjugate partner by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("basis is not orthonormal: |<g{i}|g{j}> - delta| = {deviation:e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("energy expectation has imaginary part {0:e}")]
    ComplexExpectation(f64),

    #[error("density matrix is not diagonal in the mixture basis (off-diagonal {0:e})")]
    NotDiagonalInBasis(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The timing condition holds identically; no transition time can be selected.
    #[error("timing undefined: the violating-sector amplitude condition holds identically (no energy-violating states)")]
    TimingUndefined,

    #[error("unstable integration: dt * max exit rate = {0} exceeds 0.5")]
    UnstableStep(f64),

    #[error("no unique fixed point in the undamped regime")]
    NoUniqueFixedPoint,
}

pub type Result<T> = std::result::Result<T, Error>;
