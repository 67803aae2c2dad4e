use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error ({what}): {msg}")]
    Parse { what: &'static str, msg: String },

    /// The rotation number is not known to enough bits to reach the
    /// requested continued-fraction scale.
    #[error("insufficient precision: need a convergent denominator q_k > {required_q}, but only {available_bits} bits of the rotation number are known")]
    Precision { required_q: u128, available_bits: u32 },

    #[error("slope underflow in piecewise-linear map (min slope {0:e})")]
    SlopeUnderflow(f64),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A builder postcondition failed; the offending value is reported.
    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(what: &'static str, msg: impl Into<String>) -> Self {
        Error::Parse { what, msg: msg.into() }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
