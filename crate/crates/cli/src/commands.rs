//! The four subcommands. Each returns the text to emit; rows are computed in
//! parallel and written in time order.

use std::f64::consts::PI;
use std::fmt::Write as _;

use jcm_core::jcm::{
    envelope_approximation, i2_limit, identity_rhs, pg_series, pg_thermal, q_g, richardson_revival_limit,
    sigma_z_series, time_grid, Evaluated, IntegralEngine, JcmConfig, JcmError, Mode, RevivalFamily,
};
use rayon::prelude::*;

use crate::config::{ModeArg, RunConfig};

/// Why a command did not succeed, with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid parameters: exit 2.
    Usage(String),
    /// A value could not be computed: exit 3.
    Numerical(String),
    /// `check` found a failing metric: exit 1.
    Check,
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<JcmError> for Failure {
    fn from(e: JcmError) -> Self {
        match e {
            JcmError::InvalidConfig(_) | JcmError::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

/// Output text plus an optional failure discovered after the data was written.
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub failure: Option<Failure>,
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn times(rc: &RunConfig) -> Result<Vec<f64>, Failure> {
    Ok(time_grid(rc.t_start, rc.t_end, rc.t_steps)?)
}

fn is_unit_resonant(cfg: &JcmConfig) -> bool {
    cfg.delta_omega() == 0.0 && cfg.kappa() == 1.0
}

fn ensure_finite(t: f64, values: &[f64]) -> Result<(), Failure> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("non-finite value at t = {t}")))
    }
}

fn csv(rc: &RunConfig, extra_header: &[(String, String)], columns: &[&str], rows: &[Row]) -> String {
    let mut out = rc.header();
    for (k, v) in extra_header {
        let _ = writeln!(out, "# {k}={v}");
    }
    let _ = writeln!(out, "t,{}", columns.join(","));
    for row in rows {
        match row {
            Row::Values(t, vals) => {
                let cells: Vec<String> = vals.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "{},{}", num(*t), cells.join(","));
            }
            Row::Marker(t, msg) => {
                let _ = writeln!(out, "# precision-loss t={} {msg}", num(*t));
            }
        }
    }
    out
}

enum Cell {
    Num(f64),
    Text(&'static str),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x:e}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

enum Row {
    Values(f64, Vec<Cell>),
    Marker(f64, String),
}

/// `t, sigma_z_series[, envelope]`.
pub fn series(rc: &RunConfig) -> Result<Outcome, Failure> {
    let cfg = rc.jcm;
    rc.series.validate(cfg.alpha())?;
    let with_envelope = cfg.is_resonant() && cfg.alpha() != 0.0;
    let ts = times(rc)?;
    let rows: Result<Vec<Row>, Failure> = ts
        .par_iter()
        .map(|&t| {
            let mut vals = vec![sigma_z_series(t, &cfg, &rc.series)?];
            if with_envelope {
                vals.push(envelope_approximation(t, &cfg)?);
            }
            ensure_finite(t, &vals)?;
            Ok(Row::Values(t, vals.into_iter().map(Cell::Num).collect()))
        })
        .collect();
    let mut columns = vec!["sigma_z_series"];
    if with_envelope {
        columns.push("envelope");
    }
    Ok(Outcome {
        text: csv(rc, &[], &columns, &rows?),
        warnings: vec![],
        failure: None,
    })
}

fn engine(rc: &RunConfig) -> Result<IntegralEngine, Failure> {
    Ok(IntegralEngine::new(rc.jcm, rc.integrals, rc.t_end)?)
}

fn merge(a: &Evaluated, b: &Evaluated) -> Evaluated {
    Evaluated {
        value: f64::NAN,
        cancellation: a.cancellation.max(b.cancellation),
        precision: a.precision.promote(b.precision),
        escalated: a.escalated || b.escalated,
    }
}

fn precision_cell(e: &Evaluated) -> Cell {
    Cell::Text(e.precision.as_str())
}

/// Resonant (`kappa = 1, delta_omega = 0`): `t, J1, J2, sigma_z_integral`.
/// Otherwise: `t, I1_term, I2_term, sigma_z_integral, plateau` with the
/// terms scaled by `e^{-alpha^2}`. Both end with conditioning columns.
pub fn integrals(rc: &RunConfig) -> Result<Outcome, Failure> {
    let eng = engine(rc)?;
    let cfg = rc.jcm;
    let resonant = is_unit_resonant(&cfg);
    let ts = times(rc)?;
    let constant = -0.5 * (-cfg.alpha_sq()).exp();
    let compute = |t: f64| -> Result<(Vec<f64>, Evaluated), JcmError> {
        if resonant {
            let a = eng.j1(t)?;
            let b = eng.j2(t)?;
            Ok((vec![a.value, b.value, constant + a.value + b.value], merge(&a, &b)))
        } else {
            let s1 = eng.i1_scaled(0, t)?;
            let s2 = eng.i2_scaled(0, t)?;
            let sz = 1.0 - (-cfg.alpha_sq()).exp() - 2.0 * s1.value + 4.0 * s2.value;
            Ok((vec![s1.value, s2.value, sz, 1.0 - 2.0 * s1.value], merge(&s1, &s2)))
        }
    };
    let rows: Vec<Result<Row, Failure>> = ts
        .par_iter()
        .map(|&t| match compute(t) {
            Ok((vals, diag)) => {
                ensure_finite(t, &vals)?;
                let mut cells: Vec<Cell> = vals.into_iter().map(Cell::Num).collect();
                cells.push(Cell::Num(diag.cancellation));
                cells.push(precision_cell(&diag));
                Ok(Row::Values(t, cells))
            }
            Err(e @ JcmError::PrecisionLoss { .. }) => Ok(Row::Marker(t, e.to_string())),
            Err(e) => Err(e.into()),
        })
        .collect();
    let rows: Vec<Row> = rows.into_iter().collect::<Result<_, _>>()?;
    let lost = rows.iter().filter(|r| matches!(r, Row::Marker(..))).count();

    let mut extra = vec![("y_engine".to_string(), num(eng.y_upper()))];
    let columns: Vec<&str> = if resonant {
        extra.push(("constant_term".into(), num(constant)));
        vec!["J1", "J2", "sigma_z_integral", "cancellation", "precision"]
    } else {
        extra.push(("const_plateau".into(), num(eng.const_plateau()?.value)));
        vec!["I1_term", "I2_term", "sigma_z_integral", "plateau", "cancellation", "precision"]
    };
    let failure = (lost > 0).then(|| {
        Failure::Numerical(format!(
            "{lost} of {} rows lost to cancellation under the {:?} precision policy",
            rows.len(),
            rc.precision
        ))
    });
    Ok(Outcome {
        text: csv(rc, &extra, &columns, &rows),
        warnings: vec![],
        failure,
    })
}

/// `t, P1, P2, pg_thermal, sigma_z_thermal`.
pub fn thermal(rc: &RunConfig) -> Result<Outcome, Failure> {
    let cfg = rc.jcm;
    let eng;
    let mode = match rc.mode {
        ModeArg::Series => {
            rc.series.validate(cfg.alpha())?;
            Mode::Series(rc.series)
        }
        ModeArg::Integral => {
            eng = engine(rc)?;
            Mode::Integral(&eng)
        }
    };
    let ts = times(rc)?;
    let rows: Result<Vec<(Row, bool)>, Failure> = ts
        .par_iter()
        .map(|&t| {
            let v = pg_thermal(t, &cfg, &rc.thermal, mode, rc.convention)?;
            let vals = vec![v.p1, v.p2, v.value, 1.0 - 2.0 * v.value];
            ensure_finite(t, &vals)?;
            Ok((Row::Values(t, vals.into_iter().map(Cell::Num).collect()), v.outside_unit_interval))
        })
        .collect();
    let rows = rows?;
    let outside = rows.iter().filter(|r| r.1).count();
    let rows: Vec<Row> = rows.into_iter().map(|r| r.0).collect();
    let mut warnings = Vec::new();
    if let Some(w) = rc.thermal.perturbative_warning(cfg.alpha()) {
        warnings.push(w);
    }
    if outside > 0 {
        warnings.push(format!("pg_thermal leaves [0, 1] at {outside} of {} samples", rows.len()));
    }
    let extra: Vec<(String, String)> = warnings.iter().map(|w| ("warning".to_string(), w.clone())).collect();
    Ok(Outcome {
        text: csv(rc, &extra, &["P1", "P2", "pg_thermal", "sigma_z_thermal"], &rows),
        warnings,
        failure: None,
    })
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check_identity(rc: &RunConfig, eng: &IntegralEngine) -> Check {
    let rhs = identity_rhs(&rc.jcm);
    match eng.identity_lhs() {
        Ok(lhs) => {
            let rel = ((lhs.value - rhs) / rhs).abs();
            Check {
                name: "summation identity",
                pass: rel < 1e-6,
                detail: format!("lhs {:e}, rhs {rhs:e}, relative error {rel:.3e} (< 1e-6)", lhs.value),
            }
        }
        Err(e) => Check {
            name: "summation identity",
            pass: false,
            detail: e.to_string(),
        },
    }
}

const AGREEMENT_TOL: f64 = 1e-4;
const COLLAPSE_BOUND: f64 = 1e-3;

fn check_agreement(rc: &RunConfig, eng: &IntegralEngine, ts: &[f64]) -> Result<Check, Failure> {
    let cfg = rc.jcm;
    let resonant = is_unit_resonant(&cfg);
    let diffs: Vec<Result<f64, JcmError>> = ts
        .par_iter()
        .map(|&t| {
            let s = sigma_z_series(t, &cfg, &rc.series)?;
            let v = if resonant {
                eng.sigma_z_resonant_integral(t)?
            } else {
                eng.sigma_z_integral(t)?
            };
            Ok((s - v.value).abs())
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut at = rc.t_start;
    for (&t, d) in ts.iter().zip(diffs) {
        match d {
            Ok(d) => {
                if d > worst || d.is_nan() {
                    worst = d;
                    at = t;
                }
            }
            Err(e @ (JcmError::PrecisionLoss { .. } | JcmError::NonFinite { .. })) => {
                return Ok(Check {
                    name: "series vs integral form",
                    pass: false,
                    detail: e.to_string(),
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Check {
        name: "series vs integral form",
        pass: worst < AGREEMENT_TOL,
        detail: format!(
            "max |difference| {worst:.4e} at t = {at:.4} over {} samples (< {AGREEMENT_TOL:e})",
            ts.len()
        ),
    })
}

fn check_collapse(rc: &RunConfig, eng: &IntegralEngine, ts: &[f64]) -> Result<Option<Check>, Failure> {
    let cfg = rc.jcm;
    if !is_unit_resonant(&cfg) {
        return Ok(None);
    }
    // the collapse window ends halfway to the first revival at 2 pi |alpha|
    let end = (4.0 * PI).min(PI * cfg.alpha().abs());
    let window: Vec<f64> = ts.iter().copied().filter(|&t| t <= end + 1e-12).collect();
    if window.is_empty() {
        return Ok(None);
    }
    let diffs: Result<Vec<f64>, JcmError> = window
        .par_iter()
        .map(|&t| Ok((sigma_z_series(t, &cfg, &rc.series)? - eng.j1(t)?.value).abs()))
        .collect();
    let worst = diffs?.into_iter().fold(0.0, f64::max);
    Ok(Some(Check {
        name: "collapse residual",
        pass: worst <= COLLAPSE_BOUND,
        detail: format!(
            "max |series - J1| on [0, {:.4}] = {worst:.5e} (<= {COLLAPSE_BOUND:e})",
            window.last().copied().unwrap_or(0.0)
        ),
    }))
}

fn check_limits(rc: &RunConfig) -> Result<Check, Failure> {
    let cfg = rc.jcm;
    let mut worst: f64 = 0.0;
    for t in [rc.t_start, 0.5 * (rc.t_start + rc.t_end), rc.t_end] {
        for l in 0..3 {
            let a = i2_limit(l, t, &cfg)?;
            let r = richardson_revival_limit(RevivalFamily::Inversion { l }, t, &cfg)?;
            worst = worst.max((a - r).abs() / a.abs().max(1e-3));
        }
    }
    Ok(Check {
        name: "y -> 0 limits",
        pass: worst < 1e-6,
        detail: format!("analytic vs extrapolated, l = 0..2, relative {worst:.3e} (< 1e-6)"),
    })
}

fn check_q0(rc: &RunConfig, eng: &IntegralEngine, ts: &[f64]) -> Result<Check, Failure> {
    let cfg = rc.jcm;
    let mut series_equal = true;
    let mut worst: f64 = 0.0;
    let sample: Vec<f64> = ts.iter().step_by((ts.len() / 8).max(1)).copied().collect();
    for &t in &sample {
        series_equal &= q_g(0, t, &cfg, Mode::Series(rc.series))? == pg_series(t, &cfg, &rc.series)?;
        match (q_g(0, t, &cfg, Mode::Integral(eng)), eng.pg_integral(t)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b.value).abs()),
            (Err(e), _) | (_, Err(e)) if e.is_precision_loss() => {}
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
    }
    Ok(Check {
        name: "Q0 = P_g",
        pass: series_equal && worst < 1e-12,
        detail: format!("series identical: {series_equal}; integral difference {worst:.2e} (< 1e-12)"),
    })
}

/// Identity, residual and limit checks; one `PASS`/`FAIL` line each.
pub fn check(rc: &RunConfig) -> Result<Outcome, Failure> {
    rc.series.validate(rc.jcm.alpha())?;
    let eng = engine(rc)?;
    let ts = times(rc)?;
    let mut checks = vec![check_identity(rc, &eng), check_agreement(rc, &eng, &ts)?];
    if let Some(c) = check_collapse(rc, &eng, &ts)? {
        checks.push(c);
    }
    checks.push(check_limits(rc)?);
    checks.push(check_q0(rc, &eng, &ts)?);
    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(text, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    Ok(Outcome {
        text,
        warnings: vec![],
        failure: (failed > 0).then_some(Failure::Check),
    })
}
