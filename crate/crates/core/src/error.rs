use alloc::string::String;
use core::fmt;

/// Errors raised by the solvers and data model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Bad argument: index out of range, eps outside its interval, wrong agent count.
    Input(String),
    /// An allocation is not a partition of the goods.
    Structure(String),
    /// The exact oracle was asked for more goods than its cap allows.
    TooManyGoods { goods: usize, cap: usize },
    /// A runtime invariant failed. Always a bug if it fires.
    Invariant(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::Structure(msg) => write!(f, "malformed allocation: {msg}"),
            Error::TooManyGoods { goods, cap } => write!(
                f,
                "{goods} goods exceed the exact-oracle cap of {cap}; use ptas mode"
            ),
            Error::Invariant(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
