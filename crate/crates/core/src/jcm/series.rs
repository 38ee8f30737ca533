//! Truncated Fock-state sums and the resonant envelope approximation.

use super::config::{JcmConfig, SeriesSpec};
use super::JcmError;

/// Tolerance on `P_g` leaving `[0, 1]` through rounding.
const PROBABILITY_SLACK: f64 = 1e-12;

/// Poisson weights `e^{-alpha^2} alpha^{2n} / n!` for `n = 0..=n_max`.
pub fn poisson_weights(alpha: f64, n_max: usize) -> Vec<f64> {
    let a2 = alpha * alpha;
    let mut w = Vec::with_capacity(n_max + 1);
    if a2 < 700.0 {
        let mut cur = (-a2).exp();
        w.push(cur);
        for n in 1..=n_max {
            cur *= a2 / n as f64;
            w.push(cur);
        }
    } else {
        // e^{-a2} underflows: recurse outward from the mode with w_mode = 1
        // and normalise over the whole support, which sums to one.
        let mode = a2.floor() as usize;
        let hi = n_max.max(mode + (40.0 * a2.sqrt()) as usize + 40);
        let mut u = vec![0.0; hi + 1];
        u[mode] = 1.0;
        for n in mode + 1..=hi {
            u[n] = u[n - 1] * a2 / n as f64;
        }
        for n in (0..mode).rev() {
            u[n] = u[n + 1] * (n + 1) as f64 / a2;
        }
        let total: f64 = u.iter().sum();
        w.extend(u[..=n_max].iter().map(|x| x / total));
    }
    w
}

fn require_nonnegative_time(t: f64, op: &'static str) -> Result<(), JcmError> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(JcmError::Domain(format!("{op}: time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// `cos^2(u sqrt(s)) + (c/s) sin^2(u sqrt(s))`, with `c/s := 0` when `c = 0`.
#[inline]
pub(crate) fn bracket(u: f64, s: f64, c: f64) -> f64 {
    let (sn, cs) = (u * s.sqrt()).sin_cos();
    let ratio = if c == 0.0 { 0.0 } else { c / s };
    cs * cs + ratio * sn * sn
}

/// `e^{-alpha^2} sum_n alpha^{2n}/n! [cos^2(sqrt(c+n+l)|kappa|t) + c/(c+n+l) sin^2(...)]`.
/// `l = 0` gives `P_g(t)`.
pub fn shifted_series(l: u32, t: f64, cfg: &JcmConfig, spec: &SeriesSpec) -> Result<f64, JcmError> {
    require_nonnegative_time(t, "series")?;
    spec.validate(cfg.alpha())?;
    let c = cfg.c();
    let u = cfg.kappa().abs() * t;
    let w = poisson_weights(cfg.alpha(), spec.n_max);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (n, wn) in w.iter().enumerate() {
        let term = wn * bracket(u, c + n as f64 + l as f64, c);
        // Neumaier
        let s = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - s) + term;
        } else {
            comp += (term - s) + sum;
        }
        sum = s;
    }
    let p = sum + comp;
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(JcmError::NonFinite {
            op: "shifted_series",
            t,
            detail: format!("probability {p} outside [0, 1]"),
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Ground-state probability `P_g(t)`.
pub fn pg_series(t: f64, cfg: &JcmConfig, spec: &SeriesSpec) -> Result<f64, JcmError> {
    shifted_series(0, t, cfg, spec)
}

/// `<sigma_z(t)> = 1 - 2 P_g(t)`.
pub fn sigma_z_series(t: f64, cfg: &JcmConfig, spec: &SeriesSpec) -> Result<f64, JcmError> {
    Ok(1.0 - 2.0 * pg_series(t, cfg, spec)?)
}

/// Resonant form `-e^{-alpha^2} sum_n alpha^{2n}/n! cos(2 sqrt(n) |kappa| t)`.
pub fn sigma_z_resonant_series(t: f64, cfg: &JcmConfig, spec: &SeriesSpec) -> Result<f64, JcmError> {
    require_nonnegative_time(t, "sigma_z_resonant_series")?;
    if !cfg.is_resonant() {
        return Err(JcmError::Domain("the cosine form holds only at delta_omega = 0".into()));
    }
    spec.validate(cfg.alpha())?;
    let u = cfg.kappa().abs() * t;
    let sum: f64 = poisson_weights(cfg.alpha(), spec.n_max)
        .iter()
        .enumerate()
        .map(|(n, w)| w * (2.0 * (n as f64).sqrt() * u).cos())
        .sum();
    Ok(-sum)
}

/// `exp[alpha^2 (cos(t/|alpha|) - 1)]`, the collapse/revival envelope.
pub fn envelope_factor(t: f64, cfg: &JcmConfig) -> Result<f64, JcmError> {
    check_envelope(t, cfg)?;
    let a = cfg.alpha().abs();
    let u = cfg.kappa().abs() * t;
    Ok((cfg.alpha_sq() * ((u / a).cos() - 1.0)).exp())
}

fn check_envelope(t: f64, cfg: &JcmConfig) -> Result<(), JcmError> {
    require_nonnegative_time(t, "envelope_approximation")?;
    if !cfg.is_resonant() {
        return Err(JcmError::Domain("the envelope approximation is derived only at delta_omega = 0".into()));
    }
    if cfg.alpha() == 0.0 {
        return Err(JcmError::Domain("the envelope approximation needs alpha != 0".into()));
    }
    Ok(())
}

/// `-exp[alpha^2 (cos(t/|alpha|) - 1)] cos(|alpha| t + alpha^2 sin(t/|alpha|))`.
pub fn envelope_approximation(t: f64, cfg: &JcmConfig) -> Result<f64, JcmError> {
    let env = envelope_factor(t, cfg)?;
    let a = cfg.alpha().abs();
    let u = cfg.kappa().abs() * t;
    Ok(-env * (a * u + cfg.alpha_sq() * (u / a).sin()).cos())
}
