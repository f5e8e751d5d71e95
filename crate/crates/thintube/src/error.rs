//! Crate-wide error type.

use thiserror::Error;

/// All failure modes of the library, grouped by subsystem.
#[derive(Debug, Error)]
pub enum Error {
    // geometry
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("curve speed vanishes near parameter {theta:.6} (|p'| = {speed:.3e})")]
    VanishingSpeed { theta: f64, speed: f64 },
    #[error("curve intersects itself (segments {i} and {j})")]
    SelfIntersectingCurve { i: usize, j: usize },
    #[error("half-width {epsilon} is not below the curvature radius {rho}")]
    CurvatureOverlap { epsilon: f64, rho: f64 },
    #[error("tube of half-width {epsilon} overlaps itself between arcs near s={s_a:.6} and s={s_b:.6}")]
    TubeSelfIntersection { epsilon: f64, s_a: f64, s_b: f64 },
    #[error("half-width must be positive, got {0}")]
    NonPositiveHalfWidth(f64),

    // coefficient
    #[error("quadrature order must be at least 2, got {0}")]
    QuadratureOrderTooSmall(usize),
    #[error("transverse coordinate {0} outside [-1, 1]")]
    TransverseOutOfRange(f64),
    #[error("effective-coefficient extrapolation did not settle (relative change {0:.3e} > 1e-3)")]
    ExtrapolationDiverged(f64),
    #[error("point ({x:.6}, {y:.6}) outside the tabulated grid")]
    OutsideTabulatedGrid { x: f64, y: f64 },
    #[error("expression parse error at byte {pos}: {msg}")]
    ExprParse { pos: usize, msg: String },
    #[error("tabulated grid file malformed: {0}")]
    TabulatedFormat(String),
    #[error("coefficient value {value:.6e} at (s={s:.4}, t={t:.4}) is not positive")]
    NonPositiveCoefficient { value: f64, s: f64, t: f64 },

    // assembly
    #[error("mesh too coarse: need n_s >= {min_s} and n_t >= {min_t}, got {n_s} x {n_t}")]
    MeshTooCoarse {
        min_s: usize,
        min_t: usize,
        n_s: usize,
        n_t: usize,
    },
    #[error("transverse cell count must be even, got {0}")]
    OddTransverseCells(usize),
    #[error("vector length {got} does not match expected {expected}")]
    SizeMismatch { expected: usize, got: usize },

    // solvers
    #[error("factorization failed: matrix not positive definite at block {block}, pivot {pivot:.3e}")]
    FactorizationFailed { block: usize, pivot: f64 },
    #[error("eigensolver did not reach residual {tol:.1e} within {iterations} iterations (best {achieved:.3e})")]
    EigenNonConvergence {
        tol: f64,
        iterations: usize,
        achieved: f64,
    },
    #[error("requested {k} eigenpairs from a pencil of dimension {dim}")]
    TooManyEigenpairs { k: usize, dim: usize },
    #[error("input vector has zero norm")]
    ZeroInput,

    // sweep
    #[error("epsilon list is empty")]
    EmptyEpsilons,
    #[error("refinement study needs at least 3 levels, got {0}")]
    TooFewLevels(usize),
    #[error("rate fit needs at least 3 usable points, got {0}")]
    TooFewPoints(usize),
    #[error("mesh of {nodes} nodes exceeds the memory guard ({limit} nodes)")]
    MemoryGuard { nodes: usize, limit: usize },

    // config / io
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),
    #[error("config field `{field}`: {msg}")]
    ConfigValidation { field: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit-code class for the command line front end:
    /// `1` for validation problems (bad input, inadmissible geometry),
    /// `2` for numerical failures discovered while computing.
    pub fn exit_class(&self) -> i32 {
        match self {
            Error::FactorizationFailed { .. }
            | Error::EigenNonConvergence { .. }
            | Error::ExtrapolationDiverged(_) => 2,
            _ => 1,
        }
    }
}
