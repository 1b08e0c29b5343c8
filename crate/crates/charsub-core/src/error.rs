use alloc::string::String;
use core::fmt;

/// Crate-wide error type. Every failure is a precondition violation or a
/// resource cap, never a silent wrong answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Denominator zero in a rational input.
    ZeroDenominator,
    /// An element or character whose coordinate count does not match the
    /// ambient group shape.
    ShapeMismatch { expected: usize, got: usize },
    /// A structural precondition of an operation does not hold; the message
    /// names the violated condition.
    Precondition(String),
    /// An enumeration would exceed the configured cap.
    EnumerationCap { cap: u64, needed: u64 },
    /// A search or refinement budget was exhausted without a decision.
    BudgetExhausted(String),
    /// Arithmetic left the fixed-width range reserved for finite-group data.
    Overflow,
    /// The operation is defined for a different sequence variant.
    WrongSequenceKind { expected: &'static str },
    /// An explicit element set that was claimed to be a subgroup is not
    /// closed under the group operation.
    NotClosed,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDenominator => write!(f, "denominator is zero"),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "coordinate count {got} does not match ambient rank {expected}")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::EnumerationCap { cap, needed } => {
                write!(f, "enumeration of {needed} items exceeds cap {cap}")
            }
            Error::BudgetExhausted(what) => write!(f, "budget exhausted: {what}"),
            Error::Overflow => write!(f, "fixed-width integer overflow in group arithmetic"),
            Error::WrongSequenceKind { expected } => {
                write!(f, "operation requires a {expected} sequence")
            }
            Error::NotClosed => write!(f, "element set is not closed under the group operation"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
