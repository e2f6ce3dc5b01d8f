use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division is not exact")]
    NonExactDivision,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("inadmissible triple ({0}, {1}, {2})")]
    InadmissibleTriple(i64, i64, i64),
    #[error("twist exponent is not an integer")]
    NonIntegerExponent,
    #[error("series is zero to the working depth")]
    AllZero,
    #[error("series has a non-unit leading coefficient")]
    NonUnitLeading,
    #[error("terms do not lie on a common q-grid")]
    OffGrid,
    #[error("order-{order} rows failed to stabilise at color {color}: agreement {agreement}, required {required}")]
    NotStabilized {
        order: usize,
        color: u32,
        agreement: usize,
        required: usize,
    },
    #[error("resource limit exceeded: estimated {estimated} bytes, budget {budget} bytes")]
    ResourceLimit { estimated: u64, budget: u64 },
    #[error("arity mismatch: {0} strands against {1}")]
    ArityMismatch(usize, usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid pretzel specification: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
