use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} out of range for degree {1}")]
    PointOutOfRange(usize, usize),
    #[error("point {0} repeated within a cycle list")]
    RepeatedPoint(usize),
    #[error("generators have mismatched degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("group order exceeds cap {0}")]
    OrderCapExceeded(usize),
    #[error("subgroup count exceeds cap {0}")]
    SubgroupCapExceeded(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("given set is not a subgroup")]
    NotASubgroup,
    #[error("given subgroup is not normal")]
    NotNormal,
    #[error("operation not defined for the trivial group")]
    TrivialGroup,
    #[error("group is not soluble (a chief factor is nonabelian)")]
    NonSolubleInput,
    #[error("invalid group expression: {0}")]
    BadGroupSpec(String),
    #[error("invalid constructor argument: {0}")]
    BadConstructor(String),
    #[error("chief factor module too large for endomorphism enumeration ({0} candidate maps)")]
    ModuleTooLarge(u128),
    #[error("requested precision unattainable within iteration cap")]
    PrecisionUnattainable,
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("witness construction failed: {0}")]
    WitnessFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
