use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An element, character or observable does not belong to the given
    /// group or system.
    Mismatch(String),
    /// Input violates a documented precondition.
    InvalidInput(String),
    /// A finite set or representation would exceed the configured budget.
    SizeLimit { what: &'static str, size: u128, budget: u128 },
    /// The requested operation is not available for this variant.
    Unsupported(String),
    /// Text could not be parsed by the canonical grammar.
    Parse(String),
    /// Not enough data to produce the requested quantity.
    Degenerate(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Mismatch(m) => write!(f, "mismatch: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::SizeLimit { what, size, budget } => {
                write!(f, "{what} has size {size}, exceeding budget {budget}")
            }
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Degenerate(m) => write!(f, "degenerate: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
