use thiserror::Error;

/// Failure modes shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the range where an operation or closed form is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Operands disagree in ring, field, or variable count.
    #[error("type error: {0}")]
    Type(String),
    /// A denominator vanishes in F_p.
    #[error("singular: {0}")]
    Singular(String),
    /// A computation would exceed its configured term or cell budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Two routes that must agree produced different values.
    #[error("identity violated: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}

macro_rules! type_err {
    ($($arg:tt)*) => { $crate::error::Error::Type(format!($($arg)*)) };
}

macro_rules! singular {
    ($($arg:tt)*) => { $crate::error::Error::Singular(format!($($arg)*)) };
}

pub(crate) use domain;
pub(crate) use singular;
pub(crate) use type_err;
