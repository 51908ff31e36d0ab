use num_bigint::BigUint;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The factorization work budget ran out before the input was fully split.
    /// Signals an input beyond desk scale, not a bug.
    #[error("factorization budget exhausted while splitting {value}")]
    BudgetExceeded { value: BigUint },

    /// A field-spec document violated one of the load-time invariants.
    #[error("invalid field spec: {0}")]
    SpecInvalid(String),

    /// The prime divides the discriminant of the defining polynomial.
    #[error("prime {p} ramifies in {field}")]
    RamifiedPrime { p: u64, field: String },

    /// The prime divides the denominator of the element, or is excluded.
    #[error("cannot reduce modulo {p}: {reason}")]
    BadPrime { p: u64, reason: String },

    /// The residue shares a factor with p, so it has no multiplicative order.
    #[error("element is a zero divisor modulo {p}")]
    NotInvertible { p: u64 },

    /// The operation is only implemented for cyclic groups of order 2, 3, 4,
    /// or requires conjugation maps the spec does not carry.
    #[error("unsupported Galois group: {0}")]
    UnsupportedGroup(String),

    /// An element failed the full-rank condition required by a scan.
    #[error("element generates a multiplicative module of deficient rank")]
    RankDeficient,
}

pub type Result<T> = std::result::Result<T, Error>;
