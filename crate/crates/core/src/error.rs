use thiserror::Error;

use crate::curve::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {param} is outside the curve's domain: {reason}")]
    Domain { param: f64, reason: &'static str },

    #[error("non-finite {0}")]
    NonFinite(&'static str),

    #[error("curve is not regular at s = {0}: zero velocity")]
    ZeroVelocity(f64),

    #[error(
        "kernel is singular: |x(s) - x(u)| = {distance:e} at well-separated parameters \
         s = {s}, u = {u} (self-intersection)"
    )]
    SingularKernel { s: f64, u: f64, distance: f64 },

    #[error("curve failed validation: {0}")]
    Validation(Box<ValidationReport>),

    #[error("invalid spline input: {0}")]
    Spline(String),

    #[error("operation requires a {expected} curve")]
    Topology { expected: &'static str },

    #[error("invalid value for `{field}`: {message}")]
    Spec { field: String, message: String },

    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),

    #[error(
        "asymptotic velocities differ by {mismatch:e}; the photon number diverges in the \
         infrared (initial and final velocities must be identified)"
    )]
    InfraredDivergence { mismatch: f64 },

    #[error(
        "radiated spectrum does not vanish at low frequency (ratio {0:e}); the asymptotic \
         velocities are not identified"
    )]
    InfraredSpectrum(f64),

    #[error("worldline is not timelike: speed {speed} at t = {t}")]
    Superluminal { t: f64, speed: f64 },

    #[error("boost velocity |beta| = {0} must be below 1")]
    BoostVelocity(f64),

    #[error("point coincides with the inversion center")]
    AtInversionCenter,

    #[error("{0}")]
    Inversion(String),

    #[error("objective entered the penalty region: {0}")]
    Penalty(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            field: field.into(),
            message: message.into(),
        }
    }
}
