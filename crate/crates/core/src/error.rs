use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument lies outside the domain of the operation.
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    /// The graph or environment lacks a required structural property
    /// (strong connectivity, reachability, an exit from a set, ...).
    #[error("structural error: {0}")]
    Structural(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// A configured resource guard (path enumeration, step budget) tripped.
    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
