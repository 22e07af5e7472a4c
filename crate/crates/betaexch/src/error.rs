//! Crate-wide error type.
//!
//! Every fallible operation in the crate reports through [`Error`]. The CLI
//! maps variants onto its exit-code contract: configuration and input-format
//! problems exit 2, domain violations exit 3, hypothesis violations exit 4,
//! exact-identity failures exit 5, and undecidable numerical states
//! (precision cap reached) exit 1.

use num_bigint::BigInt;
use thiserror::Error;

/// Errors produced by the exact-arithmetic kernel and the verification
/// pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A defining polynomial was not monic.
    #[error("polynomial is not monic (leading coefficient {lead})")]
    NotMonic { lead: BigInt },

    /// A defining polynomial had a repeated root.
    #[error("polynomial is not squarefree (gcd with derivative has degree {gcd_degree})")]
    NotSquarefree { gcd_degree: usize },

    /// Inversion exposed a nontrivial factor of the defining polynomial.
    /// Irreducibility is checked lazily; this carries the witness.
    #[error("defining polynomial is reducible; discovered factor {factor}")]
    ReducibleDetected { factor: String },

    /// Division by the zero element of a number field.
    #[error("division by zero field element")]
    DivisionByZero,

    /// A certified computation could not resolve within the precision cap.
    #[error("precision cap of {cap_bits} bits exhausted during {context}")]
    PrecisionExhausted { cap_bits: u32, context: String },

    /// A ball comparison against the recursion threshold straddled the
    /// threshold at the precision cap. Reported, never silently resolved.
    #[error("threshold comparison unresolved at index {index} (precision cap {cap_bits} bits)")]
    ThresholdTieUnresolved { index: usize, cap_bits: u32 },

    /// Input to the greedy digit map lay outside its domain.
    #[error("value out of range for digit expansion: {what}")]
    OutOfRange { what: String },

    /// A digit statistic was requested past the available digit horizon.
    #[error("insufficient digits: need {needed}, have {available}")]
    InsufficientDigits { needed: usize, available: usize },

    /// Every supplied digit was zero; the represented value is 0 and the
    /// exchange machinery does not apply.
    #[error("all digits are zero")]
    AllZero,

    /// The digit sequence does not start at its first nonzero entry.
    #[error("digit sequence is not reduced (first digit is zero)")]
    NotReduced,

    /// A convolution or linear-form value was requested beyond the
    /// precomputed horizon.
    #[error("index {index} exceeds computed horizon {horizon}")]
    HorizonExceeded { index: usize, horizon: usize },

    /// The shift passed to the gap recursion does not lie strictly inside
    /// the requested gap interval, so the recursion step is not licensed.
    #[error("shift R = {r} is not in the interior of gap interval {h}")]
    NotInGapInterior { r: usize, h: usize },

    /// Scaled relation coefficient `B_k` is not an algebraic integer:
    /// divisibility hypothesis (ii) fails at `k`.
    #[error("integrality hypothesis fails at coefficient index {k}")]
    HypothesisIiViolated { k: usize },

    /// The non-integrality hypothesis (iii) fails: the orbit of the constant
    /// coefficient hits an algebraic integer at the witness exponent.
    #[error("non-integrality hypothesis fails at exponent n = {witness}")]
    HypothesisIiiViolated { witness: u64 },

    /// A linear-form value vanished exactly. On data satisfying the
    /// hypotheses this is impossible, so a zero exposes a forged or
    /// inconsistent instance.
    #[error("linear form vanishes exactly at shift R = {r}")]
    ZeroLinearForm { r: usize },

    /// An identity that must hold exactly failed. Always a bug or forged
    /// input; aborts the pipeline.
    #[error("exact identity failed: {what}")]
    IdentityFailure { what: String },

    /// Malformed configuration file or command-line input.
    #[error("invalid configuration: {what}")]
    InvalidConfig { what: String },

    /// Malformed digit file, or digits violating the declared bound.
    #[error("invalid digit file: {what}")]
    DigitFile { what: String },

    /// Filesystem error while reading inputs or writing reports.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI contract: 0 success, 2 input error, 3 domain
    /// error, 4 hypothesis violation, 5 exact-identity failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotMonic { .. }
            | Error::NotSquarefree { .. }
            | Error::InvalidConfig { .. }
            | Error::DigitFile { .. }
            | Error::Io(_) => 2,
            Error::OutOfRange { .. }
            | Error::AllZero
            | Error::NotReduced
            | Error::InsufficientDigits { .. }
            | Error::DivisionByZero
            | Error::ReducibleDetected { .. }
            | Error::HorizonExceeded { .. }
            | Error::NotInGapInterior { .. } => 3,
            Error::HypothesisIiViolated { .. }
            | Error::HypothesisIiiViolated { .. }
            | Error::ZeroLinearForm { .. } => 4,
            Error::IdentityFailure { .. } => 5,
            Error::PrecisionExhausted { .. } | Error::ThresholdTieUnresolved { .. } => 1,
        }
    }
}
