use thiserror::Error;

/// Errors raised by the numeric and arithmetic operations of this crate.
///
/// Every variant names the violated precondition so that callers (the CLI in
/// particular) can report it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {at} is within {distance:e} of a pole")]
    PoleProximity {
        function: &'static str,
        at: String,
        distance: f64,
    },

    #[error("{function}: domain error: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function}: {a} is not coprime to {modulus}")]
    NotCoprime {
        function: &'static str,
        a: i64,
        modulus: u64,
    },

    #[error("{function}: {n} is not prime")]
    NotPrime { function: &'static str, n: u64 },

    #[error(
        "character mod {modulus} has conductor {conductor}; a primitive character is required"
    )]
    NotPrimitive { modulus: u64, conductor: u64 },

    #[error("{what} = {value} is outside the supported range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}
