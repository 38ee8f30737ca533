//! Composite Newton-Cotes quadrature (Simpson, Bode) and Romberg
//! extrapolation on fixed grids, with compensated accumulation in a fixed
//! left-to-right order so that results are bit-reproducible.
//!
//! Composite weights, for a grid `x_i = a + i h`, `i = 0..=n`:
//!
//! * Simpson (`n` even): `h/3 * (1, 4, 2, 4, ..., 2, 4, 1)`
//! * Bode (`n` a multiple of 4): `2h/45 * (7, 32, 12, 32, 14, 32, 12, 32, 14, ..., 32, 12, 32, 7)`
//!
//! Nodes are computed as `a + i h` in the working precision of the
//! integrand, never accumulated.

use std::fmt;

use crate::complex_special::{Complex, DoubleDouble, PrecisionKind, Real};

/// Truncation used for semi-infinite integrals unless overridden.
pub const DEFAULT_UPPER_LIMIT: f64 = 100.0;
/// Default step, chosen so that full time series run in minutes.
pub const DEFAULT_STEP: f64 = 1e-3;
/// The step of the `10^6`-point reference grid on `[0, 100]`.
pub const FIDELITY_STEP: f64 = 1e-4;
pub const DEFAULT_ROMBERG_LEVELS: usize = 20;
pub const DEFAULT_ROMBERG_TOL: f64 = 1e-8;

/// Relative slack when deciding whether `(b - a) / step` is already an
/// integer.
const INTERVAL_SLACK: f64 = 1e-9;
/// Hard ceiling on grid size to catch runaway step choices.
const MAX_INTERVALS: usize = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Simpson,
    Bode,
    Romberg,
}

impl Rule {
    /// The interval count must be a multiple of this.
    pub fn interval_multiple(self) -> usize {
        match self {
            Rule::Simpson => 2,
            Rule::Bode => 4,
            Rule::Romberg => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Simpson => "simpson",
            Rule::Bode => "bode",
            Rule::Romberg => "romberg",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Rule {
    type Err = QuadError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "simpson" => Ok(Rule::Simpson),
            "bode" | "boole" => Ok(Rule::Bode),
            "romberg" => Ok(Rule::Romberg),
            _ => Err(QuadError::InvalidSpec(format!("unknown rule {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("invalid quadrature specification: {0}")]
    InvalidSpec(String),
    #[error("integrand is not finite at x = {x:e}")]
    NonFiniteSample { x: f64 },
    #[error(
        "Romberg table did not converge after {levels} levels: last diagonal {last:?}, previous {previous:?}"
    )]
    RombergNotConverged {
        levels: usize,
        /// `(re, im)` of the last diagonal entry.
        last: (f64, f64),
        previous: (f64, f64),
    },
}

/// Rule, truncation and step for one family of integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// Truncation point of semi-infinite integrals.
    pub upper_limit: f64,
    pub step: f64,
    /// Precision the caller should evaluate in. The generic routines take
    /// their working precision from the integrand's value type; this field
    /// drives run-time dispatch in the layers above.
    pub precision: PrecisionKind,
}

impl QuadratureSpec {
    pub fn new(rule: Rule, upper_limit: f64, step: f64, precision: PrecisionKind) -> Result<Self, QuadError> {
        let spec = Self {
            rule,
            upper_limit,
            step,
            precision,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn simpson() -> Self {
        Self {
            rule: Rule::Simpson,
            upper_limit: DEFAULT_UPPER_LIMIT,
            step: DEFAULT_STEP,
            precision: PrecisionKind::Standard,
        }
    }

    pub fn bode() -> Self {
        Self {
            rule: Rule::Bode,
            ..Self::simpson()
        }
    }

    /// The reference grid: step `10^-4` on `[0, 100]`.
    pub fn fidelity(rule: Rule) -> Self {
        Self {
            rule,
            step: FIDELITY_STEP,
            ..Self::simpson()
        }
    }

    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }

    pub fn with_upper_limit(self, upper_limit: f64) -> Self {
        Self { upper_limit, ..self }
    }

    pub fn with_precision(self, precision: PrecisionKind) -> Self {
        Self { precision, ..self }
    }

    pub fn with_rule(self, rule: Rule) -> Self {
        Self { rule, ..self }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(QuadError::InvalidSpec(format!("step must be positive, got {}", self.step)));
        }
        if !(self.upper_limit.is_finite() && self.upper_limit > 0.0) {
            return Err(QuadError::InvalidSpec(format!(
                "upper limit must be positive, got {}",
                self.upper_limit
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::simpson()
    }
}

/// Values that can be integrated: real or complex, in either precision.
pub trait QuadValue: Copy + Send + Sync + fmt::Debug {
    type Real: Real;
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: Self::Real) -> Self;
    /// Magnitude as `f64`, for diagnostics.
    fn magnitude(self) -> f64;
    fn is_finite(self) -> bool;
    /// `(re, im)` as `f64`.
    fn parts(self) -> (f64, f64);
    /// Neumaier's compensated addition of `x` into `(sum, comp)`.
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self);
}

fn neumaier<R: Real>(sum: &mut R, comp: &mut R, x: R) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

macro_rules! real_quad_value {
    ($t:ty) => {
        impl QuadValue for $t {
            type Real = $t;
            #[inline]
            fn zero() -> Self {
                <$t as Real>::zero()
            }
            #[inline]
            fn add(self, other: Self) -> Self {
                self + other
            }
            #[inline]
            fn sub(self, other: Self) -> Self {
                self - other
            }
            #[inline]
            fn scale(self, k: Self) -> Self {
                self * k
            }
            #[inline]
            fn magnitude(self) -> f64 {
                Real::abs(self).to_f64()
            }
            #[inline]
            fn is_finite(self) -> bool {
                Real::is_finite(self)
            }
            #[inline]
            fn parts(self) -> (f64, f64) {
                (self.to_f64(), 0.0)
            }
            #[inline]
            fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
                neumaier(sum, comp, x);
            }
        }
    };
}

macro_rules! complex_quad_value {
    ($t:ty) => {
        impl QuadValue for Complex<$t> {
            type Real = $t;
            #[inline]
            fn zero() -> Self {
                Complex::zero()
            }
            #[inline]
            fn add(self, other: Self) -> Self {
                self + other
            }
            #[inline]
            fn sub(self, other: Self) -> Self {
                self - other
            }
            #[inline]
            fn scale(self, k: $t) -> Self {
                Complex::scale(self, k)
            }
            #[inline]
            fn magnitude(self) -> f64 {
                self.abs().to_f64()
            }
            #[inline]
            fn is_finite(self) -> bool {
                Complex::is_finite(self)
            }
            #[inline]
            fn parts(self) -> (f64, f64) {
                (self.re.to_f64(), self.im.to_f64())
            }
            #[inline]
            fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
                neumaier(&mut sum.re, &mut comp.re, x.re);
                neumaier(&mut sum.im, &mut comp.im, x.im);
            }
        }
    };
}

real_quad_value!(f64);
real_quad_value!(DoubleDouble);
complex_quad_value!(f64);
complex_quad_value!(DoubleDouble);

/// Outcome of one quadrature, with conditioning diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralResult<V> {
    pub value: V,
    pub evaluations: usize,
    /// `max |running partial sum| / |value|`, at least 1. Infinite when
    /// the value is exactly zero but some partial sum was not.
    pub cancellation_magnitude: f64,
    /// Largest magnitude reached by the weighted running sum.
    pub max_partial_sum: f64,
    pub step_used: f64,
    /// True when the requested step was shrunk to fit the rule.
    pub step_adjusted: bool,
    pub intervals: usize,
    /// `|f(upper_limit)|` for semi-infinite integrals.
    pub tail_estimate: Option<f64>,
    /// Romberg levels used, when applicable.
    pub romberg_levels: Option<usize>,
}

impl<V: QuadValue> IntegralResult<V> {
    /// Cancellation measured against `max(|value|, scale)`, for callers whose
    /// result is added to terms of size `scale`.
    pub fn cancellation_against(&self, scale: f64) -> f64 {
        let denom = self.value.magnitude().max(scale.abs());
        if denom == 0.0 {
            return if self.max_partial_sum == 0.0 { 1.0 } else { f64::INFINITY };
        }
        (self.max_partial_sum / denom).max(1.0)
    }
}

fn cancellation(max_partial: f64, value: f64) -> f64 {
    if value == 0.0 {
        if max_partial == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (max_partial / value).max(1.0)
    }
}

/// A uniform grid compatible with a Newton-Cotes rule.
#[derive(Clone, Copy, Debug)]
pub struct Grid<R> {
    pub a: R,
    pub b: R,
    pub h: R,
    pub intervals: usize,
    pub rule: Rule,
    pub step_adjusted: bool,
}

impl<R: Real> Grid<R> {
    /// Grid on `[a, b]` with spacing at most `spec.step`. The interval count
    /// is rounded up to the rule's multiple; the step then shrinks and
    /// `step_adjusted` is set. Endpoints are never moved.
    pub fn new(a: R, b: R, spec: &QuadratureSpec) -> Result<Self, QuadError> {
        spec.validate()?;
        if spec.rule == Rule::Romberg {
            return Err(QuadError::InvalidSpec(
                "Romberg has no fixed grid; use integrate_romberg".into(),
            ));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(QuadError::InvalidSpec(format!("need a < b, got [{a}, {b}]")));
        }
        let width = (b - a).to_f64();
        if spec.step > width * (1.0 + INTERVAL_SLACK) {
            return Err(QuadError::InvalidSpec(format!(
                "step {} exceeds the interval width {width}",
                spec.step
            )));
        }
        let raw = width / spec.step;
        let m = spec.rule.interval_multiple();
        let mut n = (raw * (1.0 - INTERVAL_SLACK)).ceil() as usize;
        n = n.max(1).div_ceil(m) * m;
        if n > MAX_INTERVALS {
            return Err(QuadError::InvalidSpec(format!("{n} intervals exceeds the grid ceiling")));
        }
        let step_adjusted = (raw - n as f64).abs() > INTERVAL_SLACK * raw;
        let h = (b - a) / R::from_f64(n as f64);
        Ok(Self {
            a,
            b,
            h,
            intervals: n,
            rule: spec.rule,
            step_adjusted,
        })
    }

    #[inline]
    pub fn node(&self, i: usize) -> R {
        if i == self.intervals {
            self.b
        } else {
            self.a + self.h.mul_f64(i as f64)
        }
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer weight of node `i`, before the common factor.
    #[inline]
    pub fn integer_weight(&self, i: usize) -> f64 {
        let n = self.intervals;
        match self.rule {
            Rule::Simpson => {
                if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                }
            }
            Rule::Bode => {
                if i == 0 || i == n {
                    7.0
                } else {
                    match i % 4 {
                        1 | 3 => 32.0,
                        2 => 12.0,
                        _ => 14.0,
                    }
                }
            }
            Rule::Romberg => unreachable!("romberg grids are rejected at construction"),
        }
    }

    /// Common factor multiplying the integer weights.
    pub fn factor(&self) -> R {
        match self.rule {
            Rule::Simpson => self.h / R::from_f64(3.0),
            Rule::Bode => self.h.mul_f64(2.0) / R::from_f64(45.0),
            Rule::Romberg => unreachable!("romberg grids are rejected at construction"),
        }
    }

    /// Full weight of node `i`.
    pub fn weight(&self, i: usize) -> R {
        self.factor().mul_f64(self.integer_weight(i))
    }
}

/// Integrate samples `f(i, x_i)` over a prepared grid.
pub fn integrate_grid<V, F>(grid: &Grid<V::Real>, mut f: F) -> Result<IntegralResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(usize, V::Real) -> V,
{
    let mut sum = V::zero();
    let mut comp = V::zero();
    let mut max_partial = 0.0f64;
    for i in 0..=grid.intervals {
        let x = grid.node(i);
        let fx = f(i, x);
        if !fx.is_finite() {
            return Err(QuadError::NonFiniteSample { x: x.to_f64() });
        }
        let term = fx.scale(<V::Real as Real>::from_f64(grid.integer_weight(i)));
        V::compensated_add(&mut sum, &mut comp, term);
        let running = sum.add(comp).magnitude();
        if running > max_partial {
            max_partial = running;
        }
    }
    let factor = grid.factor();
    let value = sum.add(comp).scale(factor);
    let max_partial = max_partial * factor.to_f64();
    Ok(IntegralResult {
        value,
        evaluations: grid.intervals + 1,
        cancellation_magnitude: cancellation(max_partial, value.magnitude()),
        max_partial_sum: max_partial,
        step_used: grid.h.to_f64(),
        step_adjusted: grid.step_adjusted,
        intervals: grid.intervals,
        tail_estimate: None,
        romberg_levels: None,
    })
}

/// Composite rule on `[a, b]`. With `Rule::Romberg` this runs
/// [`integrate_romberg`] with the default levels and tolerance.
pub fn integrate<V, F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<IntegralResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(V::Real) -> V,
{
    if spec.rule == Rule::Romberg {
        spec.validate()?;
        return integrate_romberg(f, a, b, DEFAULT_ROMBERG_LEVELS, DEFAULT_ROMBERG_TOL);
    }
    let r = |x: f64| <V::Real as Real>::from_f64(x);
    let grid = Grid::new(r(a), r(b), spec)?;
    integrate_grid(&grid, |_, x| f(x))
}

/// `integrate(f, 0, spec.upper_limit, spec)` plus the tail diagnostic
/// `|f(upper_limit)|`.
pub fn integrate_semi_infinite<V, F>(mut f: F, spec: &QuadratureSpec) -> Result<IntegralResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(V::Real) -> V,
{
    let upper = <V::Real as Real>::from_f64(spec.upper_limit);
    let mut tail = None;
    let mut res = integrate(
        |x| {
            let v = f(x);
            if x == upper {
                tail = Some(v.magnitude());
            }
            v
        },
        0.0,
        spec.upper_limit,
        spec,
    )?;
    res.tail_estimate = Some(match tail {
        Some(t) => t,
        None => f(upper).magnitude(),
    });
    Ok(res)
}

/// Romberg extrapolation of the trapezoid rule. Converged when two
/// successive diagonal entries differ by less than `tol` (absolute).
pub fn integrate_romberg<V, F>(
    mut f: F,
    a: f64,
    b: f64,
    max_levels: usize,
    tol: f64,
) -> Result<IntegralResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(V::Real) -> V,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidSpec(format!("need a < b, got [{a}, {b}]")));
    }
    if max_levels == 0 || !(tol > 0.0) {
        return Err(QuadError::InvalidSpec("Romberg needs max_levels >= 1 and tol > 0".into()));
    }
    let r = |x: f64| <V::Real as Real>::from_f64(x);
    let (ar, br) = (r(a), r(b));
    let width = br - ar;
    let mut eval = |x: V::Real| -> Result<V, QuadError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFiniteSample { x: x.to_f64() })
        }
    };

    let mut evaluations = 2usize;
    let mut max_partial = 0.0f64;
    let half = r(0.5);
    let mut trap = eval(ar)?.add(eval(br)?).scale(width * half);
    max_partial = max_partial.max(trap.magnitude());
    let mut prev_row = vec![trap];
    let mut intervals = 1usize;
    for level in 1..=max_levels {
        let h = width / r((2 * intervals) as f64);
        let mut sum = V::zero();
        let mut comp = V::zero();
        for k in 0..intervals {
            let x = ar + h.mul_f64((2 * k + 1) as f64);
            V::compensated_add(&mut sum, &mut comp, eval(x)?);
            max_partial = max_partial.max(sum.add(comp).magnitude() * h.to_f64());
        }
        evaluations += intervals;
        intervals *= 2;
        trap = trap.scale(half).add(sum.add(comp).scale(h));
        let mut row = Vec::with_capacity(level + 1);
        row.push(trap);
        let mut four_k = 1.0f64;
        for j in 1..=level {
            four_k *= 4.0;
            let d = row[j - 1].sub(prev_row[j - 1]);
            row.push(row[j - 1].add(d.scale(r(1.0 / (four_k - 1.0)))));
        }
        let last = row[level];
        let previous = prev_row[level - 1];
        let diff = last.sub(previous).magnitude();
        if diff < tol {
            return Ok(IntegralResult {
                value: last,
                evaluations,
                cancellation_magnitude: cancellation(max_partial, last.magnitude()),
                max_partial_sum: max_partial,
                step_used: h.to_f64(),
                step_adjusted: false,
                intervals,
                tail_estimate: None,
                romberg_levels: Some(level),
            });
        }
        if level == max_levels {
            return Err(QuadError::RombergNotConverged {
                levels: level,
                last: last.parts(),
                previous: previous.parts(),
            });
        }
        prev_row = row;
    }
    unreachable!("loop returns at max_levels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(rule: Rule, step: f64) -> QuadratureSpec {
        QuadratureSpec::simpson().with_rule(rule).with_step(step)
    }

    fn ulps(a: f64, b: f64) -> f64 {
        (a - b).abs() / (f64::EPSILON * b.abs().max(f64::MIN_POSITIVE))
    }

    #[test]
    fn exactness_examples() {
        let r = integrate(|x: f64| x * x * x, 0.0, 1.0, &spec(Rule::Simpson, 0.5)).unwrap();
        assert_eq!(r.intervals, 2);
        assert!(ulps(r.value, 0.25) <= 2.0);
        let r = integrate(|x: f64| x.powi(5), 0.0, 1.0, &spec(Rule::Bode, 0.25)).unwrap();
        assert_eq!(r.intervals, 4);
        assert!(ulps(r.value, 1.0 / 6.0) <= 2.0);
    }

    #[test]
    fn monomial_exactness_degrees() {
        for d in 0..=3 {
            let r = integrate(|x: f64| x.powi(d), 0.0, 2.0, &spec(Rule::Simpson, 0.1)).unwrap();
            let exact = 2f64.powi(d + 1) / (d + 1) as f64;
            assert!(ulps(r.value, exact) < 64.0, "simpson degree {d}");
        }
        for d in 0..=5 {
            let r = integrate(|x: f64| x.powi(d), 0.0, 2.0, &spec(Rule::Bode, 0.1)).unwrap();
            let exact = 2f64.powi(d + 1) / (d + 1) as f64;
            assert!(ulps(r.value, exact) < 64.0, "bode degree {d}");
        }
        let r = integrate(|x: f64| x.powi(4), 0.0, 1.0, &spec(Rule::Simpson, 0.5)).unwrap();
        assert!((r.value - 0.2).abs() > 1e-3);
    }

    #[test]
    fn exponential_on_long_interval() {
        let r = integrate(|x: f64| (-x).exp(), 0.0, 100.0, &QuadratureSpec::simpson()).unwrap();
        assert!((r.value - (1.0 - (-100f64).exp())).abs() < 1e-12);
        assert_eq!(r.evaluations, 100_001);
        assert!(!r.step_adjusted);
    }

    #[test]
    fn semi_infinite_tail_diagnostic() {
        let r = integrate_semi_infinite(|x: f64| (-x).exp(), &QuadratureSpec::bode()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let tail = r.tail_estimate.unwrap();
        assert!((tail / (-100f64).exp() - 1.0).abs() < 1e-12);
        let z = integrate_semi_infinite(|_: f64| 0.0, &QuadratureSpec::bode()).unwrap();
        assert_eq!(z.value, 0.0);
        assert_eq!(z.tail_estimate, Some(0.0));
        assert_eq!(z.cancellation_magnitude, 1.0);
    }

    #[test]
    fn step_adjustment_is_reported() {
        let r = integrate(|x: f64| x, 0.0, 1.0, &spec(Rule::Bode, 0.3)).unwrap();
        assert!(r.step_adjusted);
        assert_eq!(r.intervals, 4);
        assert!((r.step_used - 0.25).abs() < 1e-15);
        assert!(integrate(|x: f64| x, 0.0, 1.0, &spec(Rule::Simpson, 2.0)).is_err());
        assert!(integrate(|x: f64| x, 1.0, 1.0, &spec(Rule::Simpson, 0.1)).is_err());
        assert!(QuadratureSpec::new(Rule::Simpson, 100.0, -1.0, PrecisionKind::Standard).is_err());
        assert!(QuadratureSpec::new(Rule::Bode, 0.0, 0.1, PrecisionKind::Standard).is_err());
    }

    #[test]
    fn non_finite_sample_reports_abscissa() {
        let e = integrate(|x: f64| 1.0 / (x - 0.5), 0.0, 1.0, &spec(Rule::Simpson, 0.25)).unwrap_err();
        assert_eq!(e, QuadError::NonFiniteSample { x: 0.5 });
    }

    #[test]
    fn convergence_orders() {
        let exact = std::f64::consts::E - 1.0;
        let err = |rule, h| (integrate(|x: f64| x.exp(), 0.0, 1.0, &spec(rule, h)).unwrap().value - exact).abs();
        let s = err(Rule::Simpson, 0.1) / err(Rule::Simpson, 0.05);
        assert!((0.7 * 16.0..=1.3 * 16.0).contains(&s), "simpson ratio {s}");
        let b = err(Rule::Bode, 0.25) / err(Rule::Bode, 0.125);
        assert!((0.7 * 64.0..=1.3 * 64.0).contains(&b), "bode ratio {b}");
    }

    #[test]
    fn romberg_examples() {
        let r = integrate_romberg(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 20, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        let one = integrate_romberg(|_: f64| 1.0, 0.0, 1.0, 20, 1e-8).unwrap();
        assert_eq!(one.value, 1.0);
        assert_eq!(one.romberg_levels, Some(1));
        let e = integrate_romberg(|x: f64| (1e4 * x * x).sin() * 1e9, 0.0, 10.0, 6, 1e-8).unwrap_err();
        assert!(matches!(e, QuadError::RombergNotConverged { levels: 6, .. }));
    }

    #[test]
    fn extended_precision_grid() {
        let r = integrate(
            |x: DoubleDouble| (-x).exp(),
            0.0,
            1.0,
            &spec(Rule::Bode, 1e-3),
        )
        .unwrap();
        let exact = DoubleDouble::ONE - (-DoubleDouble::ONE).exp();
        // Bode error at h = 1e-3 is about 2h^6/945 f^(6) ~ 1e-21
        assert!((r.value - exact).abs().to_f64() < 1e-20);
    }

    #[test]
    fn complex_values_integrate_componentwise() {
        let r = integrate(
            |x: f64| Complex::new(x.cos(), x.sin()),
            0.0,
            std::f64::consts::FRAC_PI_2,
            &spec(Rule::Bode, 1e-3),
        )
        .unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-14 && (r.value.im - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cancellation_magnitude_tracks_interference() {
        let r = integrate(|x: f64| (20.0 * x).cos() * 1e6 + 1.0, 0.0, std::f64::consts::PI, &spec(Rule::Simpson, 1e-3)).unwrap();
        assert!(r.cancellation_magnitude > 1e3);
        assert!(r.cancellation_against(1e6) < 2.0);
    }

    #[test]
    fn deterministic() {
        let s = spec(Rule::Bode, 1e-3);
        let a = integrate(|x: f64| (x * 7.3).sin() * x.exp(), 0.0, 3.0, &s).unwrap();
        let b = integrate(|x: f64| (x * 7.3).sin() * x.exp(), 0.0, 3.0, &s).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    proptest! {
        #[test]
        fn linearity(
            p in proptest::collection::vec(-3f64..3.0, 4),
            q in proptest::collection::vec(-3f64..3.0, 4),
            al in -2f64..2.0,
            be in -2f64..2.0,
        ) {
            let poly = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |acc, k| acc * x + k);
            let s = spec(Rule::Simpson, 0.125);
            let f = integrate(|x: f64| poly(&p, x), 0.0, 1.0, &s).unwrap().value;
            let g = integrate(|x: f64| poly(&q, x), 0.0, 1.0, &s).unwrap().value;
            let h = integrate(|x: f64| al * poly(&p, x) + be * poly(&q, x), 0.0, 1.0, &s).unwrap().value;
            let scale = (al * f).abs() + (be * g).abs() + 1.0;
            prop_assert!((h - (al * f + be * g)).abs() <= 8.0 * f64::EPSILON * scale);
        }
    }
}
