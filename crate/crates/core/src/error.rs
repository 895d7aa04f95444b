use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("division by zero")]
    DivisionByZero,

    #[error("division by a non-rational radical is not supported")]
    UnsupportedDivision,

    #[error("cannot certify squarefree part of {value}: no factor found below trial-division bound {bound}")]
    FactorizationBound { value: String, bound: u64 },

    #[error("radical key overflow while multiplying sqrt({0}) * sqrt({1})")]
    RadicalOverflow(u64, u64),

    #[error("sign of {0} cannot be decided exactly")]
    UndecidableSign(String),

    #[error("irrep {0} is not reachable within tensor degree {1}")]
    NotReachable(String, usize),

    #[error("depth of {label} exceeds cap {cap}")]
    DepthBoundExceeded { label: String, cap: usize },

    #[error("labels belong to different groups: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("result is not rational: {0}")]
    NonRationalResult(String),

    #[error("sector {0} has multiplicity > 1; use the block form")]
    MultiplicityPresent(String),

    #[error("Wigner 6j triangle condition violated: {0}")]
    TriangleViolation(String),

    #[error("6j pattern not supported: {0}")]
    UnsupportedSixJ(String),

    #[error("linear program is infeasible")]
    InfeasibleInput,

    #[error("no value in the scanned range is feasible")]
    InfeasibleAll,

    #[error("codewords {0} and {1} are not orthogonal")]
    NonOrthogonalCodewords(usize, usize),

    #[error("invalid code specification: {0}")]
    InvalidCodeSpec(String),

    #[error("not a projector: {0}")]
    NotAProjector(String),

    #[error("problem too large for brute force: {0}")]
    TooLarge(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
