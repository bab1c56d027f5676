use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid election: {0}")]
    InvalidElection(String),

    #[error("candidate index {index} out of range (m = {m})")]
    CandidateOutOfRange { index: usize, m: usize },

    #[error("voter index {index} out of range (n = {n})")]
    VoterOutOfRange { index: usize, n: usize },

    #[error("invalid committee: {0}")]
    InvalidCommittee(String),

    /// An exhaustive search hit its node or size cap before it could finish.
    #[error("exact computation infeasible: {0}")]
    SearchLimit(String),

    #[error("invalid domain witness: {0}")]
    InvalidWitness(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
