use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("not in group: {0}")]
    NotInGroup(String),
    #[error("element does not belong to this group family")]
    FamilyMismatch,
    #[error("ball of radius {radius} exceeds the member cap of {cap}")]
    BallTooLarge { radius: usize, cap: usize },
    #[error("{0} lies in the distinguished subgroup; E(g,h) is then infinite")]
    NotInComplement(String),
    #[error("bad test set: {0}")]
    BadC(String),
    #[error("the identity never escapes the domain chain")]
    IdentityInput,
    #[error("operator is not supported in the distinguished subgroup: {0}")]
    SupportViolation(String),
    #[error("{0} is not in the distinguished subgroup")]
    NotInGamma0(String),
    #[error("alpha_{k} fixes {vector}; the action has a nontrivial fixed point")]
    FixedPointExists { k: i64, vector: String },
    #[error("certificate not applicable: {0}")]
    NotApplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, PairError>;
