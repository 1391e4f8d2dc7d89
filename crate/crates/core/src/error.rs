use crate::polyring::PolyParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("curve {0} does not pass through the origin")]
    CurveNotThroughOrigin(String),
    #[error("curve {0} is constant")]
    ConstantCurve(String),
    #[error("degenerate normalization: r_z(0) = 0")]
    DegenerateNormalization,
    #[error("component {index} does not vanish at the origin and is not flagged as constant")]
    ComponentNotVanishing { index: usize },
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("infinite type along the tangent line: every f component vanishes identically on (0, t)")]
    InfiniteTypeAlongLine,
    #[error("refused: hypothesis (hypo) failed: {0}; pass --force to run anyway")]
    HypothesisFailed(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("fixed-point boundary solve did not converge at radius {radius}; shrink the radius")]
    BoundarySolve { radius: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("polynomial {field}: {source}")]
    Poly {
        field: String,
        #[source]
        source: PolyParseError,
    },
    #[error("spec file line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
