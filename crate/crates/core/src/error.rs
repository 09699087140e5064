use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument does not hold.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// No solver iterate carries exactly the requested number of positive coefficients.
    #[error(
        "no iterate has support size {requested}; attained support sizes: {attained:?} \
         (raise max_outer or choose another m)"
    )]
    SupportNotAttained { requested: usize, attained: Vec<usize> },

    #[error("unknown reference table `{0}` (expected one of table1_a25, table1_a50, table1_a75, table2_a25, table2_a50, table2_a75)")]
    UnknownTable(String),

    #[error("unknown preset `{0}` (expected rational_power or expsum_stretched)")]
    UnknownPreset(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
