use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("{0} is not {1}-local")]
    NotPLocal(String, u32),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("pair is not in R: s and t disagree modulo the radical")]
    NotInR,
    #[error("form is degenerate")]
    Degenerate,
    #[error("not a sublattice")]
    NotSublattice,
    #[error("not sigma-invariant: {0}")]
    NotSigmaInvariant(String),
    #[error("invalid sigma action: {0}")]
    InvalidAction(String),
    #[error("inconsistent decomposition type: {0}")]
    InconsistentType(String),
    #[error("lattice is not a free R-module")]
    NotFree,
    #[error("vector lies in the radical")]
    InRadical,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("lattice is not elementary: witness {witness:?}")]
    NotElementary { witness: Vec<String> },
    #[error("sublattice is not a unimodular summand")]
    NotUnimodularSummand,
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("cancelled")]
    Cancelled,
    #[error("parse error: {0}")]
    Parse(String),
}
