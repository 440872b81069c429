use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its physical or structural domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Control, pilot and downlink overhead consume the whole coherence interval.
    #[error("overhead exceeds the coherence interval (pre-log factor {prelog})")]
    InfeasibleOverhead { prelog: f64 },

    /// The frame cannot hold the requested pilots and control symbols.
    #[error("coherence interval of {tau} samples cannot hold the frame: {reason}")]
    InfeasibleFrame { tau: u64, reason: String },

    /// Combined gain and polarization factor is zero; no finite power closes the link.
    #[error("drone is out of coverage (zero effective gain)")]
    OutOfCoverage,

    #[error("position is at the origin")]
    ZeroVector,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Fails with [`Error::InvalidParameter`] unless `value` is finite and strictly positive.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}
