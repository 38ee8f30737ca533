//! Sums turned into integral pairs by the Abel-Plana formula.
//!
//! * finite: `phi(n1)/2 + phi(n1+1) + ... + phi(n2)/2 =
//!   int_{n1}^{n2} phi - i int_0^inf [phi(n2+iy) - phi(n1+iy) - phi(n2-iy) + phi(n1-iy)] / (e^{2 pi y} - 1) dy`
//! * semi-infinite: `phi(0)/2 + sum_{n>=1} phi(n) = int_0^inf phi + i int_0^inf [phi(iy) - phi(-iy)] / (e^{2 pi y} - 1) dy`
//! * factorial-weighted, for `f` real on the real axis:
//!   `sum_{n>=0} f(n+c)/n! = f(c)/2 + int_0^inf f(x+c)/Gamma(x+1) dx - 2 int_0^inf Im[f(c+iy)/Gamma(1+iy)] / (e^{2 pi y} - 1) dy`
//!
//! The correction integrand is `0/0` at `y = 0`. Callers may supply its
//! limit; otherwise it is extrapolated from `y = h, h/2, h/4, h/8`.

use crate::complex_special::{reciprocal_gamma, Complex, PrecisionKind, Real};
use crate::quadrature::{integrate_grid, Grid, QuadError, QuadValue, QuadratureSpec, Rule};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AbelPlanaError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integrand overflow at {axis} = {x:e} in {precision} precision; retry in extended precision")]
    Escalation {
        axis: &'static str,
        x: f64,
        precision: PrecisionKind,
    },
    #[error(transparent)]
    Quadrature(QuadError),
}

/// Grids for the two integrals of a transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformSpec {
    /// Integral along the real axis.
    pub line: QuadratureSpec,
    /// Integral along the imaginary direction.
    pub correction: QuadratureSpec,
}

impl TransformSpec {
    pub fn new(line: QuadratureSpec, correction: QuadratureSpec) -> Self {
        Self { line, correction }
    }
}

impl Default for TransformSpec {
    /// Simpson along the line, Bode for the correction, both on `[0, 100]`
    /// with step `10^-3`.
    fn default() -> Self {
        Self {
            line: QuadratureSpec::simpson(),
            correction: QuadratureSpec::bode(),
        }
    }
}

impl From<QuadratureSpec> for TransformSpec {
    /// Use one grid for both integrals.
    fn from(spec: QuadratureSpec) -> Self {
        Self {
            line: spec,
            correction: spec,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformResult<R> {
    pub line_integral: Complex<R>,
    pub correction_integral: Complex<R>,
    /// Explicit half-weight terms outside the two integrals. Zero for the
    /// finite and semi-infinite forms, whose half-weights are part of the sum.
    pub boundary_terms: Complex<R>,
    /// `boundary_terms + line_integral + correction_integral`.
    pub total: Complex<R>,
    pub evaluations: usize,
    pub line_cancellation: f64,
    pub correction_cancellation: f64,
    /// `|integrand|` at the line truncation point, for semi-infinite forms.
    pub line_tail: Option<f64>,
}

impl<R: Real> TransformResult<R> {
    fn assemble(
        line: crate::quadrature::IntegralResult<Complex<R>>,
        correction: crate::quadrature::IntegralResult<Complex<R>>,
        boundary_terms: Complex<R>,
        line_tail: Option<f64>,
    ) -> Self {
        Self {
            line_integral: line.value,
            correction_integral: correction.value,
            boundary_terms,
            total: boundary_terms + line.value + correction.value,
            evaluations: line.evaluations + correction.evaluations,
            line_cancellation: line.cancellation_magnitude,
            correction_cancellation: correction.cancellation_magnitude,
            line_tail,
        }
    }
}

/// `1 / (e^{2 pi y} - 1)` without overflow for large `y`.
pub fn bose_weight<R: Real>(y: R) -> R {
    let two_pi_y = (R::pi() * y).mul_f64(2.0);
    let em = (-two_pi_y).exp();
    em / -((-two_pi_y).exp_m1())
}

/// Extrapolate `g(y) -> g(0)` from `g(h), g(h/2), g(h/4), g(h/8)` with
/// Neville's scheme (polynomial in `y`).
pub fn richardson_limit<V, F>(mut g: F, h: V::Real) -> V
where
    V: QuadValue,
    F: FnMut(V::Real) -> V,
{
    const LEVELS: usize = 4;
    let mut ys = [h; LEVELS];
    let mut table = [V::zero(); LEVELS];
    let mut y = h;
    for k in 0..LEVELS {
        ys[k] = y;
        table[k] = g(y);
        y = y.mul_f64(0.5);
    }
    // P_{i..j}(0) = (y_j P_{i..j-1} - y_i P_{i+1..j}) / (y_j - y_i)
    for m in 1..LEVELS {
        for i in 0..LEVELS - m {
            let j = i + m;
            let num = table[i].scale(ys[j]).sub(table[i + 1].scale(ys[i]));
            table[i] = num.scale(<V::Real as Real>::one() / (ys[j] - ys[i]));
        }
    }
    table[0]
}

fn map_quad(err: QuadError, axis: &'static str, precision: PrecisionKind) -> AbelPlanaError {
    match err {
        QuadError::NonFiniteSample { x } => AbelPlanaError::Escalation { axis, x, precision },
        other => AbelPlanaError::Quadrature(other),
    }
}

fn require_fixed_grid(spec: &TransformSpec) -> Result<(), AbelPlanaError> {
    for s in [&spec.line, &spec.correction] {
        if s.rule == Rule::Romberg {
            return Err(AbelPlanaError::Quadrature(QuadError::InvalidSpec(
                "transforms use fixed-grid rules".into(),
            )));
        }
        s.validate().map_err(AbelPlanaError::Quadrature)?;
    }
    Ok(())
}

/// Integrate `g` over `[0, Y]`, replacing the `y = 0` sample by `limit`
/// (or a Richardson extrapolation of `g`).
fn correction_integral<R, G>(
    mut g: G,
    spec: &QuadratureSpec,
    limit: Option<Complex<R>>,
) -> Result<crate::quadrature::IntegralResult<Complex<R>>, AbelPlanaError>
where
    R: Real,
    Complex<R>: QuadValue<Real = R>,
    G: FnMut(R) -> Complex<R>,
{
    let grid = Grid::new(R::zero(), R::from_f64(spec.upper_limit), spec).map_err(AbelPlanaError::Quadrature)?;
    let y0 = match limit {
        Some(v) => v,
        None => richardson_limit(&mut g, grid.h),
    };
    integrate_grid(&grid, |i, y| if i == 0 { y0 } else { g(y) }).map_err(|e| map_quad(e, "y", R::KIND))
}

/// Finite Abel-Plana formula on `[n1, n2]`.
pub fn finite_transform<R, F>(
    phi: F,
    n1: i64,
    n2: i64,
    spec: &TransformSpec,
    y0_limit: Option<Complex<R>>,
) -> Result<TransformResult<R>, AbelPlanaError>
where
    R: Real,
    Complex<R>: QuadValue<Real = R>,
    F: Fn(Complex<R>) -> Complex<R>,
{
    if n1 >= n2 {
        return Err(AbelPlanaError::Domain(format!("need n1 < n2, got {n1} >= {n2}")));
    }
    require_fixed_grid(spec)?;
    let (a, b) = (R::from_f64(n1 as f64), R::from_f64(n2 as f64));
    let line_grid = Grid::new(a, b, &spec.line).map_err(AbelPlanaError::Quadrature)?;
    let line = integrate_grid(&line_grid, |_, x| phi(Complex::from_real(x))).map_err(|e| map_quad(e, "x", R::KIND))?;
    let g = |y: R| {
        let up = Complex::new(R::zero(), y);
        let d = phi(up + b) - phi(up + a) - phi(up.conj() + b) + phi(up.conj() + a);
        // -i d
        Complex::new(d.im, -d.re).scale(bose_weight(y))
    };
    let correction = correction_integral(g, &spec.correction, y0_limit)?;
    Ok(TransformResult::assemble(line, correction, Complex::zero(), None))
}

/// Semi-infinite Abel-Plana formula: `phi(0)/2 + sum_{n>=1} phi(n)`.
pub fn semi_infinite_transform<R, F>(
    phi: F,
    spec: &TransformSpec,
    y0_limit: Option<Complex<R>>,
) -> Result<TransformResult<R>, AbelPlanaError>
where
    R: Real,
    Complex<R>: QuadValue<Real = R>,
    F: Fn(Complex<R>) -> Complex<R>,
{
    require_fixed_grid(spec)?;
    let upper = R::from_f64(spec.line.upper_limit);
    let line_grid = Grid::new(R::zero(), upper, &spec.line).map_err(AbelPlanaError::Quadrature)?;
    let mut tail = 0.0;
    let line = integrate_grid(&line_grid, |i, x| {
        let v = phi(Complex::from_real(x));
        if i == line_grid.intervals {
            tail = v.abs().to_f64();
        }
        v
    })
    .map_err(|e| map_quad(e, "x", R::KIND))?;
    let g = |y: R| {
        let up = Complex::new(R::zero(), y);
        let d = phi(up) - phi(up.conj());
        d.mul_i().scale(bose_weight(y))
    };
    let correction = correction_integral(g, &spec.correction, y0_limit)?;
    Ok(TransformResult::assemble(line, correction, Complex::zero(), Some(tail)))
}

/// Factorial-weighted formula: `sum_{n>=0} f(n+c)/n!` for `f` real on the
/// real axis and `c >= 0`. The supplied `y0_limit` is the limit of
/// `-2 Im[f(c+iy)/Gamma(1+iy)] / (e^{2 pi y} - 1)`.
pub fn factorial_weighted_transform<R, F>(
    f: F,
    c: f64,
    spec: &TransformSpec,
    y0_limit: Option<R>,
) -> Result<TransformResult<R>, AbelPlanaError>
where
    R: Real,
    Complex<R>: QuadValue<Real = R>,
    F: Fn(Complex<R>) -> Complex<R>,
{
    if !(c >= 0.0) || !c.is_finite() {
        return Err(AbelPlanaError::Domain(format!("shift c must be >= 0, got {c}")));
    }
    require_fixed_grid(spec)?;
    let cr = R::from_f64(c);
    let nan = Complex::new(R::from_f64(f64::NAN), R::zero());
    let upper = R::from_f64(spec.line.upper_limit);
    let line_grid = Grid::new(R::zero(), upper, &spec.line).map_err(AbelPlanaError::Quadrature)?;
    let mut tail = 0.0;
    let line = integrate_grid(&line_grid, |i, x| {
        let w = reciprocal_gamma(Complex::from_real(x + R::one())).unwrap_or(nan);
        let v = f(Complex::from_real(x + cr)) * w;
        if i == line_grid.intervals {
            tail = v.abs().to_f64();
        }
        v
    })
    .map_err(|e| map_quad(e, "x", R::KIND))?;
    let g = |y: R| {
        let rg = reciprocal_gamma(Complex::new(R::one(), y)).unwrap_or(nan);
        let v = f(Complex::new(cr, y)) * rg;
        Complex::from_real((v.im * bose_weight(y)).mul_f64(-2.0))
    };
    let correction = correction_integral(g, &spec.correction, y0_limit.map(Complex::from_real))?;
    let boundary = f(Complex::from_real(cr)).scale(R::from_f64(0.5));
    Ok(TransformResult::assemble(line, correction, boundary, Some(tail)))
}
