use thiserror::Error;

use crate::forms::Signature;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("form must have positive dimension")]
    EmptyForm,

    #[error("Gram matrix is not square")]
    NotSquare,

    #[error("Gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("radicand {0} is not a positive non-square integer")]
    InvalidRadicand(u64),

    #[error("mixed radicands √{left} and √{right}")]
    RadicandMismatch { left: u64, right: u64 },

    #[error("zero vector is not allowed here")]
    ZeroVector,

    #[error("vector is not primitive (gcd of entries is {gcd}); divide it by {gcd} first")]
    NotPrimitive { gcd: String },

    #[error("direction has non-negative norm {norm}; sign reversal needs a negative direction")]
    NonNegativeDirection { norm: String },

    #[error("form has signature {0}, expected exactly one negative direction and no kernel")]
    NotIndexOne(Signature),

    #[error("form has signature {0}, expected positive definite")]
    NotPositiveDefinite(Signature),

    #[error("Gram matrix is not integral")]
    NotIntegral,

    #[error("Gram matrix has irrational entries; this operation needs a rational Gram")]
    NotRational,

    #[error("splitting is not direct: q(v) = {norm}, det[v | basis(v^⊥)] = {index_det}")]
    SplittingNotDirect { norm: String, index_det: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line is not in the plane spanned by the frame")]
    LineOutsidePlane,

    #[error("enumeration budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
