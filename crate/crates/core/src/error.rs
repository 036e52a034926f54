use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time {t} outside the valid range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("integration failed after t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error("auxiliary solution eta collapsed towards zero at t = {t} (eta = {value})")]
    EtaCollapse { t: f64, value: f64 },

    #[error("wave-packet width alpha collapsed towards zero at t = {t} (alpha = {value})")]
    AlphaCollapse { t: f64, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("reparametrization is not strictly increasing near t = {t}")]
    NonMonotone { t: f64 },

    #[error("wave function reached the box boundary at t = {t} (edge/max ratio {ratio:e})")]
    BoundaryContamination { t: f64, ratio: f64 },

    #[error("packet does not fit the spatial grid: {0}")]
    PacketTooWide(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures that originate in the numerics rather than in the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::IntegrationFailure { .. }
                | Error::EtaCollapse { .. }
                | Error::AlphaCollapse { .. }
                | Error::NonMonotone { .. }
                | Error::BoundaryContamination { .. }
                | Error::NonFinite(_)
        )
    }
}
