//! Population inversion of the Jaynes-Cummings model: truncated series,
//! the resonant envelope approximation, the Abel-Plana integral
//! decompositions and the low-temperature corrections.

mod config;
mod integrals;
mod kernels;
mod limits;
mod series;
mod thermal;
mod timeseries;

pub use config::{
    theta_of_beta, JcmConfig, SeriesSpec, ThermalConfig, ThetaValues, DEFAULT_N_MAX, PERTURBATIVE_LIMIT,
};
pub use integrals::{
    const_plateau, i1_integral, i2_integral, identity_lhs, identity_rhs, j1_integral, j2_integral,
    j2_romberg, revival_integrand_reference, sigma_z_integral, sigma_z_resonant_integral, Evaluated,
    IntegralEngine, IntegralSpec, RevivalFamily, ESCALATION_THRESHOLD, EXTENDED_CANCELLATION_LIMIT,
    STANDARD_CANCELLATION_LIMIT,
};
pub use limits::{
    i2_limit, identity_limit, j2_limit, richardson_revival_limit, RICHARDSON_START,
};
pub use series::{
    envelope_approximation, envelope_factor, pg_series, poisson_weights, shifted_series, sigma_z_resonant_series,
    sigma_z_series,
};
pub use thermal::{p1_correction, p2_correction, pg_thermal, q_g, Mode, P2Convention, ThermalValue};
pub use timeseries::{time_grid, Provenance, TimeSeries};

use crate::abel_plana::AbelPlanaError;
use crate::complex_special::{PrecisionKind, SpecialError};
use crate::quadrature::QuadError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JcmError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "{op} at t = {t}: cancellation {cancellation:.3e} exceeds the {precision} precision limit {limit:.1e}"
    )]
    PrecisionLoss {
        op: &'static str,
        t: f64,
        cancellation: f64,
        limit: f64,
        precision: PrecisionKind,
    },
    #[error("{op} at t = {t}: {detail}")]
    NonFinite {
        op: &'static str,
        t: f64,
        detail: String,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Transform(#[from] AbelPlanaError),
}

impl JcmError {
    /// True for errors caused by insufficient working precision.
    pub fn is_precision_loss(&self) -> bool {
        matches!(self, JcmError::PrecisionLoss { .. })
    }
}
