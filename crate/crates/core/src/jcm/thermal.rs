//! Low-temperature corrections to `P_g` for a thermal coherent field,
//! to second order in `theta(beta)`.

use super::config::{JcmConfig, SeriesSpec, ThermalConfig};
use super::integrals::IntegralEngine;
use super::series::shifted_series;
use super::JcmError;

/// How the shifted probabilities `Q^{(l)}` are evaluated.
#[derive(Clone, Copy, Debug)]
pub enum Mode<'a> {
    Series(SeriesSpec),
    Integral(&'a IntegralEngine),
}

/// Reading of the second-order coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum P2Convention {
    /// `P_g(beta) = P_g + theta P1 + theta^2 P2 / 2` with `P2` the bare bracket.
    #[default]
    ExpansionConsistent,
    /// `P2` carries an extra `theta^2 / 2`, so it enters at order `theta^4`.
    AsPrinted,
}

/// One thermal sample and its parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalValue {
    pub pg: f64,
    pub p1: f64,
    pub p2: f64,
    /// `pg + theta p1 + theta^2 p2 / 2`.
    pub value: f64,
    /// The expansion left `[0, 1]`: a sign of perturbative breakdown.
    pub outside_unit_interval: bool,
}

/// `Q^{(l)}_g(t)`; `Q^{(0)} = P_g`.
pub fn q_g(l: u32, t: f64, cfg: &JcmConfig, mode: Mode<'_>) -> Result<f64, JcmError> {
    match mode {
        Mode::Series(spec) => shifted_series(l, t, cfg, &spec),
        Mode::Integral(engine) => {
            if engine.config() != cfg {
                return Err(JcmError::InvalidConfig(
                    "integral engine was built for a different configuration".into(),
                ));
            }
            Ok(engine.q_integral(l, t)?.value)
        }
    }
}

struct Qs {
    q0: f64,
    q1: f64,
    q2: f64,
}

fn shifted_triplet(t: f64, cfg: &JcmConfig, mode: Mode<'_>, need_q2: bool) -> Result<Qs, JcmError> {
    Ok(Qs {
        q0: q_g(0, t, cfg, mode)?,
        q1: q_g(1, t, cfg, mode)?,
        q2: if need_q2 { q_g(2, t, cfg, mode)? } else { 0.0 },
    })
}

fn p1_from(q: &Qs, alpha: f64, g: f64) -> f64 {
    2.0 * alpha * g * (q.q0 - q.q1)
}

fn p2_from(q: &Qs, alpha: f64, g: f64) -> f64 {
    let a2 = alpha * alpha;
    let g2 = g * g;
    2.0 * (2.0 * a2 * g2 - g2 - 1.0) * q.q0 - 2.0 * a2 * (4.0 * g2 + 1.0) * q.q1 + 4.0 * a2 * g2 * q.q2
}

fn convention_factor(conv: P2Convention, theta: f64) -> f64 {
    match conv {
        P2Convention::ExpansionConsistent => 1.0,
        P2Convention::AsPrinted => 0.5 * theta * theta,
    }
}

/// `P^{(1)}_g = 2 alpha gamma (P_g - Q^{(1)}_g)`, without the factor `theta`.
pub fn p1_correction(t: f64, cfg: &JcmConfig, thermal: &ThermalConfig, mode: Mode<'_>) -> Result<f64, JcmError> {
    let q = shifted_triplet(t, cfg, mode, false)?;
    Ok(p1_from(&q, cfg.alpha(), thermal.gamma_tilde()))
}

/// `P^{(2)}_g = 2(2 alpha^2 gamma^2 - gamma^2 - 1) P_g - 2 alpha^2 (4 gamma^2 + 1) Q^{(1)}_g
/// + 4 alpha^2 gamma^2 Q^{(2)}_g`.
pub fn p2_correction(
    t: f64,
    cfg: &JcmConfig,
    thermal: &ThermalConfig,
    mode: Mode<'_>,
    convention: P2Convention,
) -> Result<f64, JcmError> {
    let q = shifted_triplet(t, cfg, mode, true)?;
    Ok(p2_from(&q, cfg.alpha(), thermal.gamma_tilde()) * convention_factor(convention, thermal.theta()))
}

/// `P_g(beta; t)` to second order in `theta`.
pub fn pg_thermal(
    t: f64,
    cfg: &JcmConfig,
    thermal: &ThermalConfig,
    mode: Mode<'_>,
    convention: P2Convention,
) -> Result<ThermalValue, JcmError> {
    let th = thermal.theta();
    let q = shifted_triplet(t, cfg, mode, true)?;
    let g = thermal.gamma_tilde();
    let p1 = p1_from(&q, cfg.alpha(), g);
    let p2 = p2_from(&q, cfg.alpha(), g) * convention_factor(convention, th);
    let value = if th == 0.0 { q.q0 } else { q.q0 + th * p1 + 0.5 * th * th * p2 };
    Ok(ThermalValue {
        pg: q.q0,
        p1,
        p2,
        value,
        outside_unit_interval: !(0.0..=1.0).contains(&value),
    })
}
