//! Complex arithmetic, principal-branch elementary functions and the
//! Lanczos gamma kit, generic over the scalar precision.

mod complex;
mod double_double;
mod gamma;
mod real;
mod scalar;

pub use complex::{complex_cos, complex_sin, principal_sqrt, Complex};
pub use double_double::{DoubleDouble, ParseDoubleDoubleError};
pub use gamma::{
    gamma, log_gamma, log_gamma_real, reciprocal_gamma, LANCZOS_COEFFS, LANCZOS_ERROR_BOUND,
    LANCZOS_G,
};
pub use real::{MathConstants, PrecisionKind, Real, EULER_GAMMA_DIGITS, PI_DIGITS};
pub use scalar::ComplexScalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("{op}: domain error: {detail}")]
    Domain { op: &'static str, detail: String },
    #[error("{op}: result exceeds the scalar range (argument magnitude {magnitude:e})")]
    Overflow { op: &'static str, magnitude: f64 },
    #[error("{op}: non-finite argument")]
    NonFinite { op: &'static str },
}
