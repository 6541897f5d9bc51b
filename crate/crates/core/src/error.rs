use thiserror::Error;

/// Errors raised by the algebra, decomposition and solver operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed monoid table: {0}")]
    MalformedTable(String),
    #[error("addition is not associative: ({a}+{b})+{c} != {a}+({b}+{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element 0 is not an identity: fails for element {element}")]
    NoIdentityAtZero { element: usize },
    #[error("addition is not commutative: {a}+{b} != {b}+{a}")]
    NotCommutative { a: usize, b: usize },
    #[error("carrier of order {order} is too large (limit {limit})")]
    CarrierTooLarge { order: usize, limit: usize },
    #[error("element set is not closed: {a}+{b}={sum} is outside the set")]
    NotClosed { a: usize, b: usize, sum: usize },
    #[error("element set does not contain the identity")]
    MissingIdentity,
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("element {value} is out of range for order {order}")]
    OutOfRange { value: usize, order: usize },
    #[error("expected {expected} cells, got {got}")]
    CellCountMismatch { expected: usize, got: usize },
    #[error("invalid arity {0}")]
    InvalidArity(usize),
    #[error("{0:?} is not a permutation of the tuple positions")]
    NotAPermutation(Vec<usize>),
    #[error("argument index {index} is invalid for arity {arity}")]
    BadIndex { index: usize, arity: usize },
    #[error("invalid extension positions: {0}")]
    BadPositions(String),
    #[error("indicator faithfulness {actual} is below the required {required}")]
    FaithfulnessTooLow { required: usize, actual: usize },
    #[error("carrier order {order} is too small for decomposition (need at least 3)")]
    OrderTooSmall { order: usize },
    #[error("no solution found within a budget of {budget} terms ({nodes} search nodes)")]
    NoSolutionWithinBudget { budget: usize, nodes: u64 },
    #[error("unsupported arity {0}")]
    UnsupportedArity(usize),
    #[error("decomposition does not tabulate to the relation it claims to represent")]
    DecompositionMismatch,
    #[error("malformed expression: {0}")]
    MalformedExpr(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
