use std::path::PathBuf;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} must be nonzero")]
    Zero(&'static str),

    #[error("radicand {0} is a perfect square")]
    SquareRadicand(BigInt),

    #[error("{0} is not a valid discriminant (must be nonzero and ≡ 0, 1 mod 4)")]
    BadDiscriminant(BigInt),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(BigInt),

    #[error("discriminant {0} does not fit the form-enumeration range")]
    DiscriminantOutOfRange(BigInt),

    #[error("form enumeration for discriminant {discriminant} exceeds the cap of {cap} forms")]
    TooLarge { discriminant: i64, cap: u64 },

    #[error("form ({a}, {b}, {c}) is not a reduced indefinite form")]
    NotReduced { a: i64, b: i64, c: i64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("element ({a} + {b}√{m})/2 is not an algebraic integer")]
    NonIntegral { a: BigInt, b: BigInt, m: BigInt },

    #[error("norm {0} is not a perfect cube")]
    NormNotCube(BigInt),

    #[error("3-adic ramification criterion not applicable: v3(a) >= 2 and v3(b) >= 3")]
    CriterionNotApplicable,

    #[error("parameter must be a positive integer, got {0}")]
    NonPositiveParameter(BigInt),

    #[error("leading coefficient must be nonzero")]
    DegenerateCurve,

    #[error("curve is singular")]
    SingularCurve,

    #[error("point is not on the curve")]
    OffCurve,

    #[error("theorem contradiction: {0}")]
    TheoremContradiction(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
