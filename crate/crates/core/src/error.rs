use thiserror::Error;

/// Failures raised by the library. Numeric payloads are widened to `f64` for reporting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate point: <z> = 0 in a linear monopole field is the kink of the effective potential, where the field and its first-order correction vanish")]
    DegeneratePoint,

    #[error("degenerate trap: omega = 0 leaves the z sector unconfined (the saturated spread and the minimum shift diverge)")]
    DegenerateTrap,

    #[error("degenerate field: <B> = 0, transverse saturation is undefined")]
    DegenerateField,

    #[error("original-mode saturation needs e<B> > 0, got e<B> = {0}; use corrected mode")]
    ModeDomain(f64),

    #[error("kink point: the corrected effective potential is not differentiable at z = 0")]
    KinkPoint,

    #[error("linear-system oracle requires a constant field; the monopole field couples means and moments bilinearly")]
    NotLinear,

    #[error("operation requires a linear monopole field (B^z = mu z)")]
    UnsupportedField,

    #[error("step size underflow at t = {time}: dt = {dt} fell below dt_min")]
    StepUnderflow { time: f64, dt: f64 },

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("matrix exponential overflow")]
    Overflow,
}

impl Error {
    /// True for errors caused by bad user input rather than by the physics or the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::InvalidArgument(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
