//! Integral representations of `P_g` and `<sigma_z>`.
//!
//! Every quantity is computed in "scaled" form (multiplied by `e^{-alpha^2}`).
//! Unscaled `I_1, I_2` are recovered by multiplying with `e^{alpha^2}`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use crate::complex_special::{DoubleDouble, PrecisionKind, Real};
use crate::quadrature::{integrate_romberg, IntegralResult, QuadValue, QuadratureSpec, Rule};

use super::config::JcmConfig;
use super::kernels::{CollapseShape, Kernels, RevivalShape};
use super::limits::{family_limit_in, j2_limit_in};
use super::series::bracket;
use super::JcmError;

pub use super::limits::{revival_integrand_reference, RevivalFamily};

/// Cancellation tolerated by `f64` arithmetic, in output units.
pub const STANDARD_CANCELLATION_LIMIT: f64 = 1e12;
/// Cancellation tolerated by double-double arithmetic.
pub const EXTENDED_CANCELLATION_LIMIT: f64 = 1e28;
/// Default cancellation above which an escalating evaluation switches to
/// extended precision. The `f64` error is roughly `cancellation * 1e-15`,
/// so this keeps escalated results accurate to about `1e-7`.
pub const ESCALATION_THRESHOLD: f64 = 1e8;

fn limit_for(p: PrecisionKind) -> f64 {
    match p {
        PrecisionKind::Standard => STANDARD_CANCELLATION_LIMIT,
        PrecisionKind::Extended => EXTENDED_CANCELLATION_LIMIT,
    }
}

/// Grids and precision policy for the two integral families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralSpec {
    /// Collapse (`x`) integrals. Simpson by default.
    pub x: QuadratureSpec,
    /// Revival (`y`) integrals. Bode by default. `upper_limit` is a floor;
    /// the engine raises it to cover the integrand peak.
    pub y: QuadratureSpec,
    /// Retry an integral in extended precision when the standard result is
    /// too ill-conditioned, instead of failing.
    pub escalate: bool,
    /// Cancellation that triggers the retry. Ignored without `escalate`.
    pub escalate_at: f64,
}

impl Default for IntegralSpec {
    fn default() -> Self {
        Self {
            x: QuadratureSpec::simpson(),
            y: QuadratureSpec::bode(),
            escalate: true,
            escalate_at: ESCALATION_THRESHOLD,
        }
    }
}

impl IntegralSpec {
    /// `f64` only; ill-conditioned integrals are errors.
    pub fn standard() -> Self {
        Self {
            escalate: false,
            ..Self::default()
        }
    }

    /// Double-double from the start.
    pub fn extended() -> Self {
        Self {
            x: QuadratureSpec::simpson().with_precision(PrecisionKind::Extended),
            y: QuadratureSpec::bode().with_precision(PrecisionKind::Extended),
            escalate: false,
            escalate_at: ESCALATION_THRESHOLD,
        }
    }

    /// Step `10^-4` on both axes.
    pub fn fidelity() -> Self {
        Self {
            x: QuadratureSpec::fidelity(Rule::Simpson),
            y: QuadratureSpec::fidelity(Rule::Bode),
            escalate: true,
            escalate_at: ESCALATION_THRESHOLD,
        }
    }

    pub fn with_steps(self, dx: f64, dy: f64) -> Self {
        Self {
            x: self.x.with_step(dx),
            y: self.y.with_step(dy),
            ..self
        }
    }

    pub fn with_precision(self, precision: PrecisionKind) -> Self {
        Self {
            x: self.x.with_precision(precision),
            y: self.y.with_precision(precision),
            ..self
        }
    }

    pub fn with_escalation(self, escalate: bool) -> Self {
        Self { escalate, ..self }
    }

    /// Precision the first attempt runs in.
    pub fn starting_precision(&self) -> PrecisionKind {
        self.x.precision.promote(self.y.precision)
    }

    pub fn with_escalation_threshold(self, escalate_at: f64) -> Self {
        Self { escalate_at, ..self }
    }

    pub fn validate(&self) -> Result<(), JcmError> {
        if !(self.escalate_at >= 1.0) {
            return Err(JcmError::InvalidConfig(format!(
                "escalation threshold must be >= 1, got {}",
                self.escalate_at
            )));
        }
        self.x.validate()?;
        self.y.validate()?;
        if self.x.rule == Rule::Romberg || self.y.rule == Rule::Romberg {
            return Err(JcmError::InvalidConfig(
                "the precomputed engine needs a fixed-step rule (simpson or bode)".into(),
            ));
        }
        Ok(())
    }
}

/// A value with the conditioning of the computation that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    /// Largest partial sum relative to the output scale (at least 1).
    pub cancellation: f64,
    /// Precision of the final attempt.
    pub precision: PrecisionKind,
    /// True when a standard attempt was rejected and redone in extended.
    pub escalated: bool,
}

impl Evaluated {
    fn combine(self, other: Evaluated, value: f64) -> Self {
        Self {
            value,
            cancellation: self.cancellation.max(other.cancellation),
            precision: self.precision.promote(other.precision),
            escalated: self.escalated || other.escalated,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Job {
    Collapse(CollapseShape, u32),
    Revival(RevivalFamily),
}

/// Peak-aware truncation: `max(Y_0, 4 y*)`, `y* = 2 u^2 / (9 pi^2)`, snapped
/// up to a whole number of rule panels.
fn revival_upper(y_spec: &QuadratureSpec, u_max: f64) -> f64 {
    let peak = 2.0 * u_max * u_max / (9.0 * PI * PI);
    let want = y_spec.upper_limit.max(4.0 * peak);
    let panel = y_spec.step * y_spec.rule.interval_multiple() as f64;
    let n = (want / panel * (1.0 - 1e-9)).ceil().max(1.0);
    n * panel
}

/// Reusable evaluator: precomputes everything that does not depend on `t`
/// for times up to `t_max`.
pub struct IntegralEngine {
    cfg: JcmConfig,
    spec: IntegralSpec,
    t_max: f64,
    y_upper: f64,
    standard: OnceLock<Arc<Kernels<f64>>>,
    extended: OnceLock<Arc<Kernels<DoubleDouble>>>,
}

impl std::fmt::Debug for IntegralEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegralEngine")
            .field("cfg", &self.cfg)
            .field("spec", &self.spec)
            .field("t_max", &self.t_max)
            .field("y_upper", &self.y_upper)
            .finish()
    }
}

impl IntegralEngine {
    pub fn new(cfg: JcmConfig, spec: IntegralSpec, t_max: f64) -> Result<Self, JcmError> {
        cfg.require_nonzero_alpha("integral representation")?;
        spec.validate()?;
        if !(t_max >= 0.0) || !t_max.is_finite() {
            return Err(JcmError::Domain(format!("t_max must be finite and >= 0, got {t_max}")));
        }
        let y_upper = revival_upper(&spec.y, cfg.kappa().abs() * t_max);
        Ok(Self {
            cfg,
            spec,
            t_max,
            y_upper,
            standard: OnceLock::new(),
            extended: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &JcmConfig {
        &self.cfg
    }

    pub fn spec(&self) -> &IntegralSpec {
        &self.spec
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Truncation of the `y` integrals.
    pub fn y_upper(&self) -> f64 {
        self.y_upper
    }

    fn y_spec(&self) -> QuadratureSpec {
        self.spec.y.with_upper_limit(self.y_upper)
    }

    fn standard_kernels(&self) -> &Kernels<f64> {
        self.standard.get_or_init(|| {
            Arc::new(Kernels::new(self.cfg.alpha(), self.cfg.c(), self.spec.x, self.y_spec(), self.y_upper))
        })
    }

    fn extended_kernels(&self) -> &Kernels<DoubleDouble> {
        self.extended.get_or_init(|| {
            Arc::new(Kernels::new(self.cfg.alpha(), self.cfg.c(), self.spec.x, self.y_spec(), self.y_upper))
        })
    }

    fn check_time(&self, t: f64) -> Result<(), JcmError> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(JcmError::Domain(format!("time must be finite and >= 0, got {t}")));
        }
        if t > self.t_max * (1.0 + 1e-12) {
            return Err(JcmError::Domain(format!(
                "t = {t} exceeds the engine's t_max = {}; build a new engine",
                self.t_max
            )));
        }
        Ok(())
    }

    fn run_job<R>(&self, k: &Kernels<R>, job: Job, t: f64) -> Result<IntegralResult<R>, JcmError>
    where
        R: Real + QuadValue<Real = R>,
    {
        let u = R::from_f64(self.cfg.kappa().abs()) * R::from_f64(t);
        match job {
            Job::Collapse(shape, l) => k.collapse_integral(shape, l, u),
            Job::Revival(family) => {
                let scale = R::from_f64(-self.cfg.alpha_sq()).exp();
                let limit = family_limit_in::<R>(family, t, &self.cfg) * scale;
                let (shape, l) = match family {
                    RevivalFamily::Inversion { l } => (RevivalShape::Inversion, l),
                    RevivalFamily::Resonant => (RevivalShape::Resonant, 0),
                    RevivalFamily::Unit => (RevivalShape::Unit, 0),
                };
                k.revival_integral(shape, l, u, limit)
            }
        }
    }

    /// Evaluate one scaled integral under the precision policy. `weight` is
    /// its coefficient in the final observable, which sets the output scale.
    fn evaluate(&self, op: &'static str, job: Job, t: f64, weight: f64) -> Result<Evaluated, JcmError> {
        let measure = |max_partial: f64, value: f64| -> f64 {
            let w = weight.abs();
            ((max_partial * w) / (value * w).abs().max(1.0)).max(1.0)
        };
        let mut precision = self.spec.starting_precision();
        let mut escalated = false;
        loop {
            let (value, cancel) = match precision {
                PrecisionKind::Standard => {
                    let r = self.run_job(self.standard_kernels(), job, t)?;
                    (r.value, measure(r.max_partial_sum, r.value))
                }
                PrecisionKind::Extended => {
                    let r = self.run_job(self.extended_kernels(), job, t)?;
                    (r.value.to_f64(), measure(r.max_partial_sum, r.value.to_f64()))
                }
            };
            if !value.is_finite() {
                return Err(JcmError::NonFinite {
                    op,
                    t,
                    detail: "integral is not finite".into(),
                });
            }
            let limit = limit_for(precision);
            let retry = self.spec.escalate && precision == PrecisionKind::Standard;
            if retry && cancel > self.spec.escalate_at.min(limit) {
                precision = PrecisionKind::Extended;
                escalated = true;
                continue;
            }
            if cancel <= limit {
                return Ok(Evaluated {
                    value,
                    cancellation: cancel,
                    precision,
                    escalated,
                });
            }
            return Err(JcmError::PrecisionLoss {
                op,
                t,
                cancellation: cancel,
                limit,
                precision,
            });
        }
    }

    /// `e^{-alpha^2} I_1^{(l)}(t)`.
    pub fn i1_scaled(&self, l: u32, t: f64) -> Result<Evaluated, JcmError> {
        self.check_time(t)?;
        self.evaluate("i1_integral", Job::Collapse(CollapseShape::Inversion, l), t, 2.0)
    }

    /// `e^{-alpha^2} I_2^{(l)}(t)`.
    pub fn i2_scaled(&self, l: u32, t: f64) -> Result<Evaluated, JcmError> {
        self.check_time(t)?;
        self.evaluate("i2_integral", Job::Revival(RevivalFamily::Inversion { l }), t, 4.0)
    }

    fn unscale(&self, e: Evaluated) -> Evaluated {
        Evaluated {
            value: e.value * self.cfg.alpha_sq().exp(),
            ..e
        }
    }

    pub fn i1(&self, l: u32, t: f64) -> Result<Evaluated, JcmError> {
        Ok(self.unscale(self.i1_scaled(l, t)?))
    }

    pub fn i2(&self, l: u32, t: f64) -> Result<Evaluated, JcmError> {
        Ok(self.unscale(self.i2_scaled(l, t)?))
    }

    /// `1 - e^{-alpha^2} [1 + 2 I_1^{(0)} - 4 I_2^{(0)}]`.
    pub fn sigma_z_integral(&self, t: f64) -> Result<Evaluated, JcmError> {
        let s1 = self.i1_scaled(0, t)?;
        let s2 = self.i2_scaled(0, t)?;
        let v = 1.0 - (-self.cfg.alpha_sq()).exp() - 2.0 * s1.value + 4.0 * s2.value;
        Ok(s1.combine(s2, v))
    }

    /// `P_g` from its integral form: `(1 - sigma_z) / 2`.
    pub fn pg_integral(&self, t: f64) -> Result<Evaluated, JcmError> {
        let s = self.sigma_z_integral(t)?;
        Ok(Evaluated {
            value: 0.5 * (1.0 - s.value),
            ..s
        })
    }

    /// `Q^{(l)} = e^{-alpha^2} [F(c+l)/2 + I_1^{(l)} - 2 I_2^{(l)}]`.
    pub fn q_integral(&self, l: u32, t: f64) -> Result<Evaluated, JcmError> {
        let s1 = self.i1_scaled(l, t)?;
        let s2 = self.i2_scaled(l, t)?;
        let c = self.cfg.c();
        let u = self.cfg.kappa().abs() * t;
        let f0 = if l == 0 && c == 0.0 { 1.0 } else { bracket(u, c + l as f64, c) };
        let v = (-self.cfg.alpha_sq()).exp() * 0.5 * f0 + s1.value - 2.0 * s2.value;
        Ok(s1.combine(s2, v))
    }

    /// `J_1(t) = -e^{-alpha^2} int |alpha|^{2x}/Gamma(x+1) cos(2 sqrt(x) t) dx`.
    pub fn j1(&self, t: f64) -> Result<Evaluated, JcmError> {
        self.cfg.require_unit_resonant("j1_integral")?;
        self.check_time(t)?;
        let e = self.evaluate("j1_integral", Job::Collapse(CollapseShape::Resonant, 0), t, 1.0)?;
        Ok(Evaluated { value: -e.value, ..e })
    }

    /// `J_2(t) = 2 e^{-alpha^2} int Im[|alpha|^{2iy}/Gamma(1+iy) cos(2 sqrt(iy) t)] / (e^{2 pi y} - 1) dy`.
    pub fn j2(&self, t: f64) -> Result<Evaluated, JcmError> {
        self.cfg.require_unit_resonant("j2_integral")?;
        self.check_time(t)?;
        let e = self.evaluate("j2_integral", Job::Revival(RevivalFamily::Resonant), t, 2.0)?;
        Ok(Evaluated {
            value: 2.0 * e.value,
            ..e
        })
    }

    /// `-e^{-alpha^2}/2 + J_1(t) + J_2(t)`.
    pub fn sigma_z_resonant_integral(&self, t: f64) -> Result<Evaluated, JcmError> {
        let a = self.j1(t)?;
        let b = self.j2(t)?;
        let v = -0.5 * (-self.cfg.alpha_sq()).exp() + a.value + b.value;
        Ok(a.combine(b, v))
    }

    /// `1 - e^{-alpha^2} int |alpha|^{2x}/Gamma(1+x) (1 + c/(c+x)) dx`.
    pub fn const_plateau(&self) -> Result<Evaluated, JcmError> {
        let e = self.evaluate("const_plateau", Job::Collapse(CollapseShape::Plateau, 0), 0.0, 1.0)?;
        Ok(Evaluated {
            value: 1.0 - e.value,
            ..e
        })
    }

    /// `(1/2) int |alpha|^{2x}/Gamma(x+1) dx - int Im[|alpha|^{2iy}/Gamma(1+iy)] / (e^{2 pi y} - 1) dy`,
    /// which equals `-1/4 + e^{alpha^2}/2`.
    pub fn identity_lhs(&self) -> Result<Evaluated, JcmError> {
        let x = self.evaluate("identity", Job::Collapse(CollapseShape::Unit, 0), 0.0, 0.5)?;
        let y = self.evaluate("identity", Job::Revival(RevivalFamily::Unit), 0.0, 1.0)?;
        let scaled = 0.5 * x.value - y.value;
        Ok(x.combine(y, scaled * self.cfg.alpha_sq().exp()))
    }
}

fn one_shot(cfg: &JcmConfig, spec: &IntegralSpec, t: f64) -> Result<IntegralEngine, JcmError> {
    IntegralEngine::new(*cfg, *spec, t.max(0.0))
}

/// `I_1^{(l)}(t) = int |alpha|^{2x}/Gamma(x+1) [cos^2(sqrt(x+c+l)|kappa|t) + c/(x+c+l) sin^2(...)] dx`.
pub fn i1_integral(l: u32, t: f64, cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, t)?.i1(l, t)?.value)
}

/// `I_2^{(l)}(t)`, the revival companion of [`i1_integral`].
pub fn i2_integral(l: u32, t: f64, cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, t)?.i2(l, t)?.value)
}

pub fn sigma_z_integral(t: f64, cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, t)?.sigma_z_integral(t)?.value)
}

pub fn j1_integral(t: f64, cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, t)?.j1(t)?.value)
}

pub fn j2_integral(t: f64, cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, t)?.j2(t)?.value)
}

pub fn sigma_z_resonant_integral(t: f64, cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, t)?.sigma_z_resonant_integral(t)?.value)
}

pub fn const_plateau(cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, 0.0)?.const_plateau()?.value)
}

pub fn identity_lhs(cfg: &JcmConfig, spec: &IntegralSpec) -> Result<f64, JcmError> {
    Ok(one_shot(cfg, spec, 0.0)?.identity_lhs()?.value)
}

/// `-1/4 + e^{alpha^2}/2`.
pub fn identity_rhs(cfg: &JcmConfig) -> f64 {
    -0.25 + 0.5 * cfg.alpha_sq().exp()
}

/// `J_2(t)` by adaptive Romberg integration in `f64`, with the integrand built
/// from the generic complex functions. Used to exhibit the failure of naive
/// quadrature once the integrand's cancellation outgrows double precision.
pub fn j2_romberg(
    t: f64,
    cfg: &JcmConfig,
    y_upper: f64,
    max_levels: usize,
    tol: f64,
) -> Result<IntegralResult<f64>, JcmError> {
    cfg.require_unit_resonant("j2_romberg")?;
    cfg.require_nonzero_alpha("j2_romberg")?;
    let scale = 2.0 * (-cfg.alpha_sq()).exp();
    let limit = scale * j2_limit_in::<f64>(t, cfg);
    let mut err = None;
    let res = integrate_romberg(
        |y: f64| {
            if y == 0.0 {
                return limit;
            }
            match revival_integrand_reference(RevivalFamily::Resonant, y, t, cfg) {
                Ok(v) => scale * v,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        y_upper,
        max_levels,
        tol,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(res?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jcm::series::{pg_series, shifted_series, sigma_z_series};
    use crate::jcm::SeriesSpec;

    fn engine(cfg: JcmConfig, t_max: f64) -> IntegralEngine {
        IntegralEngine::new(cfg, IntegralSpec::default(), t_max).unwrap()
    }

    #[test]
    fn truncation_is_peak_aware() {
        let spec = QuadratureSpec::bode();
        assert_eq!(revival_upper(&spec, 0.0), 100.0);
        assert_eq!(revival_upper(&spec, 8.0 * PI), 100.0);
        let big = revival_upper(&spec, 40.0 * PI);
        assert!(big >= 4.0 * 2.0 * 1600.0 / 9.0);
        let panels = big / (spec.step * 4.0);
        assert!((panels - panels.round()).abs() < 1e-6);
    }

    #[test]
    fn kernels_match_reference_integrand() {
        // Bode on a coarse grid with the reference integrand vs the kernel path.
        let cfg = JcmConfig::new(1.0, 2.0, 3.0).unwrap();
        let spec = IntegralSpec::default().with_steps(1e-3, 0.01);
        let eng = IntegralEngine::new(cfg, spec, 7.0).unwrap();
        for l in [0u32, 1, 2] {
            for t in [0.0, 2.0, 7.0] {
                let got = eng.i2_scaled(l, t).unwrap().value;
                let fam = RevivalFamily::Inversion { l };
                let scale = (-cfg.alpha_sq()).exp();
                let lim = scale * family_limit_in::<f64>(fam, t, &cfg);
                let direct = crate::quadrature::integrate_grid::<f64, _>(
                    &crate::quadrature::Grid::new(0.0, eng.y_upper(), &spec.y).unwrap(),
                    |i, y| if i == 0 { lim } else { scale * revival_integrand_reference(fam, y, t, &cfg).unwrap() },
                )
                .unwrap()
                .value;
                assert!((got - direct).abs() < 1e-13, "l={l} t={t}: {got} vs {direct}");
            }
        }
    }

    #[test]
    fn initial_values() {
        let cfg = JcmConfig::resonant(4.0).unwrap();
        let eng = engine(cfg, 1.0);
        assert!((eng.sigma_z_integral(0.0).unwrap().value + 1.0).abs() < 1e-6);
        assert!((eng.sigma_z_resonant_integral(0.0).unwrap().value + 1.0).abs() < 1e-6);
        let det = engine(JcmConfig::new(1.0, 4.0, 4.0).unwrap(), 0.0);
        assert!((det.sigma_z_integral(0.0).unwrap().value + 1.0).abs() < 1e-6);
        for l in 0..3 {
            assert!((det.q_integral(l, 0.0).unwrap().value - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn resonant_constant_term() {
        let v = -0.5 * (-16f64).exp();
        assert!((v + 5.63e-8).abs() < 5e-11);
    }

    #[test]
    fn small_amplitude_agrees_with_series() {
        let cfg = JcmConfig::resonant(2.0).unwrap();
        let s = SeriesSpec::default();
        let eng = engine(cfg, 5.0 * PI);
        for k in 0..=10 {
            let t = 0.5 * PI * k as f64;
            let series = sigma_z_series(t, &cfg, &s).unwrap();
            let a = eng.sigma_z_integral(t).unwrap().value;
            let b = eng.sigma_z_resonant_integral(t).unwrap().value;
            assert!((a - series).abs() < 1e-5, "t={t}: I form {a} vs {series}");
            assert!((b - series).abs() < 1e-5, "t={t}: J form {b} vs {series}");
        }
    }

    #[test]
    fn shifted_forms_agree_with_series() {
        let cfg = JcmConfig::new(1.0, 1.5, 2.5).unwrap();
        let eng = engine(cfg, 6.0);
        let s = SeriesSpec::default();
        for l in 0..3 {
            for t in [0.5, 3.0, 6.0] {
                let a = eng.q_integral(l, t).unwrap().value;
                let b = shifted_series(l, t, &cfg, &s).unwrap();
                assert!((a - b).abs() < 1e-6, "l={l} t={t}: {a} vs {b}");
            }
        }
        let p = eng.pg_integral(3.0).unwrap().value;
        assert!((p - pg_series(3.0, &cfg, &s).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn identity_holds() {
        for alpha in [1.0, 2.0] {
            let cfg = JcmConfig::resonant(alpha).unwrap();
            let lhs = identity_lhs(&cfg, &IntegralSpec::default()).unwrap();
            let rhs = identity_rhs(&cfg);
            assert!(((lhs - rhs) / rhs).abs() < 1e-6, "alpha={alpha}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn i1_bounded_by_twice_unit_integral() {
        let cfg = JcmConfig::new(1.0, 2.0, 2.0).unwrap();
        let eng = engine(cfg, 10.0);
        let unit = eng.evaluate("unit", Job::Collapse(CollapseShape::Unit, 0), 0.0, 1.0).unwrap().value;
        let bound = 2.0 * unit * cfg.alpha_sq().exp();
        for l in [0, 3, 10] {
            for t in [0.0, 4.0, 10.0] {
                let v = eng.i1(l, t).unwrap().value;
                assert!(v > 0.0 && v <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn precision_policy() {
        let cfg = JcmConfig::resonant(4.0).unwrap();
        let t = 7.5 * PI;
        let std = IntegralEngine::new(cfg, IntegralSpec::standard(), t).unwrap();
        let err = std.j2(t).unwrap_err();
        assert!(err.is_precision_loss(), "{err}");
        let auto = IntegralEngine::new(cfg, IntegralSpec::default().with_steps(1e-3, 0.004), t).unwrap();
        let e = auto.j2(t).unwrap();
        assert!(e.escalated && e.precision == PrecisionKind::Extended);
        assert!(std.j2(t + 1.0).is_err());
    }

    #[test]
    fn domain_checks() {
        let zero = JcmConfig::resonant(0.0).unwrap();
        assert!(IntegralEngine::new(zero, IntegralSpec::default(), 1.0).is_err());
        let det = JcmConfig::new(1.0, 1.0, 2.0).unwrap();
        assert!(engine(det, 1.0).j1(0.5).is_err());
        assert!(engine(JcmConfig::resonant(2.0).unwrap(), 1.0).i1(0, -1.0).is_err());
        let bad = IntegralSpec::default();
        let bad = IntegralSpec {
            y: bad.y.with_rule(Rule::Romberg),
            ..bad
        };
        assert!(IntegralEngine::new(JcmConfig::resonant(2.0).unwrap(), bad, 1.0).is_err());
    }
}
