use thiserror::Error;

/// Every failure the workbench can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),
    #[error("no point strictly between {0} and {1}")]
    NoPointBetween(String, String),
    #[error("invalid automorphism datum: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid condition: {0}")]
    InvalidCondition(String),
    #[error("map is not order preserving: {0}")]
    NotOrderPreserving(String),
    #[error("conjugated support {0} leaves the ideal")]
    ImageNotInIdeal(String),
    #[error("group is not an intersection of pointwise stabilizers: {0}")]
    UnsupportedGroupShape(String),
    #[error("no ideal member covers support {0}")]
    NoWitness(String),
    #[error("support {0} is not covered by the ideal")]
    NotInIdeal(String),
    #[error("unsatisfiable constraints: {0}")]
    Unsatisfiable(String),
    #[error("closure exceeded the bound of {0} elements")]
    NonTerminating(usize),
    #[error("conditions {0} and {1} are compatible")]
    NotAnAntichain(String, String),
    #[error("coordinate {0} is outside the truncated domain")]
    CoordinateOutOfDomain(String),
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    EnumerationBudgetExceeded { needed: u64, budget: u64 },
    #[error("hereditary symmetry certification failed: {0}")]
    HsCertificationFailed(String),
    #[error("family index {0} occurs twice")]
    DuplicateIndex(u64),
    #[error("choice name is not well defined: {0}")]
    WellDefinednessFailure(String),
    #[error("formula cannot be expanded: {0}")]
    UnsupportedFormula(String),
    #[error("bound product n*m is zero")]
    ZeroBound,
    #[error("value {value} is not below {bound}")]
    NotInRange { value: u64, bound: u64 },
    #[error("split of {0} is not a pair of based functions")]
    NotInImage(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("sequence of odd length {0} cannot be deinterleaved")]
    OddLength(usize),
    #[error("row tags differ: {0} vs {1}")]
    TagMismatch(u64, u64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(a: impl std::fmt::Display, b: impl std::fmt::Display) -> Error {
    Error::VariantMismatch(format!("{a} vs {b}"))
}
