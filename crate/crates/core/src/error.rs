use thiserror::Error;

/// Every failure the library can report.
///
/// Element indices carried in messages are 1-based, matching the file formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("relations induce a directed cycle through element {0}")]
    Cycle(usize),
    #[error("element {element} is outside 1..={n}")]
    Range { element: usize, n: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("a module must be non-empty")]
    EmptySet,
    #[error("not a partition of the ground set: {0}")]
    Partition(String),
    #[error("not a modular partition: {0}")]
    NotModular(String),
    #[error("block numbering does not orient the quotient transitively (blocks {0}, {1}, {2})")]
    NotTransitivelyOrientable(usize, usize, usize),
    #[error("binomial coefficient undefined for ({0}, {1})")]
    Domain(i64, i64),
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("skeleton shape mismatch: {0}")]
    Shape(String),
    #[error("joined-skeleton conditions violated: {0}")]
    Condition(String),
    #[error("not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("not a tournament: {0}")]
    NotTournament(String),
    #[error("tournament contains a directed cycle")]
    Cyclic,
    #[error("independent counts disagree: {0}")]
    Mismatch(String),
    #[error("no reverse-edge set on {n} vertices achieves {target}; nearest achievable: {hint}")]
    Infeasible {
        n: usize,
        target: String,
        hint: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
