use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("J(z)^2 + Id has norm {defect:.3e}, above tolerance {tol:.1e}")]
    NotAlmostComplex { defect: f64, tol: f64 },
    #[error("J_st + J(z) is singular; normalize coordinates first")]
    SingularStructure,
    #[error("complex matrix norm {norm:.4} is not below 1")]
    NormTooLarge { norm: f64 },
    #[error("coordinate change is singular at the point")]
    SingularTransform,
    #[error("gradient unavailable: {0}")]
    GradientUnavailable(String),
    #[error("evaluation point {point} lies within {radius:.2e} of grid node")]
    SingularityTooClose { point: String, radius: f64 },
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("cutoff function rejected: {0}")]
    BadCutoff(String),
    #[error("Picard step ratio stayed >= 1 (last ratio {ratio:.3}) after {iterations} iterations")]
    NoContraction { ratio: f64, iterations: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },
    #[error("tangent direction not restored (angle defect {defect:.3e})")]
    DirectionLost { defect: f64 },
    #[error("boundary gluing stalled at residual {residual:.3e}")]
    BoundaryMismatch { residual: f64 },
    #[error("point is not in the wedge: {0}")]
    NotInWedge(String),
    #[error("inversion failed, best residual {residual:.3e}")]
    InversionFailed { residual: f64 },
    #[error("cone direction does not point into the wedge: {0}")]
    DirectionNotInterior(String),
    #[error("disc leaves the wedge at {nodes} interior nodes")]
    DiscExitsWedge { nodes: usize },
    #[error("pair point {0} lies outside the declared disc")]
    PairOutsideDisc(String),
    #[error("approach sequence violates the Stolz condition at step {step}")]
    ApproachTangential { step: usize },
    #[error("curves are not tangent at the edge point (ratio {ratio:.3e})")]
    NotTangent { ratio: f64 },
    #[error("transversal disc misses the curve at parameter {t:.6}")]
    TransversalMiss { t: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
