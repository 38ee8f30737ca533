//! Precomputed integrand factors for the collapse (`x`) and revival (`y`)
//! integrals. Everything that does not depend on `t` is evaluated once per
//! grid node; a time sample then costs one cosine per `x` node and two
//! exponentials plus one sine-cosine pair per `y` node.
//!
//! All kernels carry the prefactor `e^{-alpha^2}`, so sums stay of order
//! one until cancellation makes them grow.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::complex_special::{log_gamma, log_gamma_real, Complex, Real};
use crate::quadrature::{integrate_grid, Grid, IntegralResult, QuadValue, QuadratureSpec};

use super::JcmError;

/// `x`-integrand shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CollapseShape {
    /// `cos^2(u r) + q sin^2(u r)`, `r = sqrt(x + s)`, `q = c/(x + s)`.
    Inversion,
    /// `cos(2 u sqrt(x))`.
    Resonant,
    /// `1 + q`: the time average of `2 x Inversion`.
    Plateau,
    /// `1`.
    Unit,
}

/// `y`-integrand shapes: `Im[e^L (A + B cos(2 u r))]` with `r = sqrt(s + iy)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RevivalShape {
    /// `A = (1+q)/2`, `B = (1-q)/2`, `q = c/(s + iy)`.
    Inversion,
    /// `A = 0`, `B = 1`.
    Resonant,
    /// `A = 1`, `B = 0`.
    Unit,
}

/// `e^{-alpha^2} |alpha|^{2x} / Gamma(x+1)` on the `x` grid.
pub(crate) struct CollapseBase<R> {
    pub grid: Grid<R>,
    pub density: Vec<R>,
}

/// `sqrt(x + s)` and `c / (x + s)` for one shift `s = c + l`.
pub(crate) struct CollapseShift<R> {
    pub root: Vec<R>,
    pub ratio: Vec<R>,
}

/// `e^L` on the `y` grid, `L = 2iy ln|alpha| - ln Gamma(1+iy) - ln(e^{2 pi y} - 1) - alpha^2`.
/// Node 0 is unused (the caller supplies the analytic limit).
pub(crate) struct RevivalBase<R> {
    pub grid: Grid<R>,
    pub rho: Vec<R>,
    pub cis_phi: Vec<Complex<R>>,
}

/// Per-shift revival factors.
pub(crate) struct RevivalShift<R> {
    pub sigma: Vec<R>,
    pub tau: Vec<R>,
    /// `B = (1 - q)/2` for the inversion shape.
    pub b: Vec<Complex<R>>,
    /// `Im[e^L (1 + q)/2]`, the time-independent part of the inversion shape.
    pub static_inversion: Vec<R>,
}

type Slot<T> = Arc<OnceLock<Result<Arc<T>, JcmError>>>;

/// Lazily built kernels for one precision.
pub(crate) struct Kernels<R> {
    alpha: f64,
    c: f64,
    x_spec: QuadratureSpec,
    y_spec: QuadratureSpec,
    y_upper: f64,
    collapse: OnceLock<Result<Arc<CollapseBase<R>>, JcmError>>,
    collapse_shift: Mutex<BTreeMap<u32, Slot<CollapseShift<R>>>>,
    revival: OnceLock<Result<Arc<RevivalBase<R>>, JcmError>>,
    revival_shift: Mutex<BTreeMap<u32, Slot<RevivalShift<R>>>>,
}

fn slot<T>(map: &Mutex<BTreeMap<u32, Slot<T>>>, key: u32) -> Slot<T> {
    let mut guard = map.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(key).or_default().clone()
}

impl<R: Real> Kernels<R>
where
    R: QuadValue<Real = R>,
{
    pub fn new(alpha: f64, c: f64, x_spec: QuadratureSpec, y_spec: QuadratureSpec, y_upper: f64) -> Self {
        Self {
            alpha,
            c,
            x_spec,
            y_spec,
            y_upper,
            collapse: OnceLock::new(),
            collapse_shift: Mutex::new(BTreeMap::new()),
            revival: OnceLock::new(),
            revival_shift: Mutex::new(BTreeMap::new()),
        }
    }

    fn ln_abs_alpha(&self) -> R {
        R::from_f64(self.alpha.abs()).ln()
    }

    fn alpha_sq(&self) -> R {
        let a = R::from_f64(self.alpha);
        a * a
    }

    pub fn collapse(&self) -> Result<Arc<CollapseBase<R>>, JcmError> {
        self.collapse
            .get_or_init(|| {
                let grid = Grid::new(<R as Real>::zero(), R::from_f64(self.x_spec.upper_limit), &self.x_spec)?;
                let two_ln_a = self.ln_abs_alpha().mul_f64(2.0);
                let a2 = self.alpha_sq();
                let mut density = Vec::with_capacity(grid.len());
                for i in 0..grid.len() {
                    let x = grid.node(i);
                    let lg = log_gamma_real(x + R::one())?;
                    density.push((two_ln_a * x - lg - a2).exp());
                }
                Ok(Arc::new(CollapseBase { grid, density }))
            })
            .clone()
    }

    pub fn collapse_shift(&self, l: u32) -> Result<Arc<CollapseShift<R>>, JcmError> {
        let base = self.collapse()?;
        slot(&self.collapse_shift, l)
            .get_or_init(|| {
                let c = R::from_f64(self.c);
                let s = c + R::from_f64(l as f64);
                let n = base.grid.len();
                let mut root = Vec::with_capacity(n);
                let mut ratio = Vec::with_capacity(n);
                for i in 0..n {
                    let w = base.grid.node(i) + s;
                    root.push(w.sqrt());
                    ratio.push(if self.c == 0.0 { <R as Real>::zero() } else { c / w });
                }
                Ok(Arc::new(CollapseShift { root, ratio }))
            })
            .clone()
    }

    pub fn revival(&self) -> Result<Arc<RevivalBase<R>>, JcmError> {
        self.revival
            .get_or_init(|| {
                let grid = Grid::new(<R as Real>::zero(), R::from_f64(self.y_upper), &self.y_spec)?;
                let two_ln_a = self.ln_abs_alpha().mul_f64(2.0);
                let a2 = self.alpha_sq();
                let n = grid.len();
                let mut rho = Vec::with_capacity(n);
                let mut cis_phi = Vec::with_capacity(n);
                rho.push(<R as Real>::zero());
                cis_phi.push(Complex::zero());
                for i in 1..n {
                    let y = grid.node(i);
                    let lg = log_gamma(Complex::new(R::one(), y))?;
                    // ln[1/(e^{2 pi y} - 1)] without underflow
                    let two_pi_y = (R::pi() * y).mul_f64(2.0);
                    let lw = -two_pi_y - (-((-two_pi_y).exp_m1())).ln();
                    rho.push(lw - a2 - lg.re);
                    cis_phi.push(Complex::cis(two_ln_a * y - lg.im));
                }
                Ok(Arc::new(RevivalBase { grid, rho, cis_phi }))
            })
            .clone()
    }

    pub fn revival_shift(&self, l: u32) -> Result<Arc<RevivalShift<R>>, JcmError> {
        let base = self.revival()?;
        slot(&self.revival_shift, l)
            .get_or_init(|| {
                let c = R::from_f64(self.c);
                let s = c + R::from_f64(l as f64);
                let half = R::from_f64(0.5);
                let n = base.grid.len();
                let mut sigma = Vec::with_capacity(n);
                let mut tau = Vec::with_capacity(n);
                let mut b = Vec::with_capacity(n);
                let mut static_inversion = Vec::with_capacity(n);
                for i in 0..n {
                    let w = Complex::new(s, base.grid.node(i));
                    let r = w.principal_sqrt();
                    sigma.push(r.re);
                    tau.push(r.im);
                    let q = if self.c == 0.0 {
                        Complex::zero()
                    } else {
                        Complex::from_real(c) / w
                    };
                    b.push((Complex::one() - q).scale(half));
                    let e_l = base.cis_phi[i].scale(base.rho[i].exp());
                    static_inversion.push((e_l * (Complex::one() + q)).im * half);
                }
                Ok(Arc::new(RevivalShift {
                    sigma,
                    tau,
                    b,
                    static_inversion,
                }))
            })
            .clone()
    }

    /// `int_0^X density * shape dx`.
    pub fn collapse_integral(&self, shape: CollapseShape, l: u32, u: R) -> Result<IntegralResult<R>, JcmError> {
        let base = self.collapse()?;
        let half = R::from_f64(0.5);
        let res = match shape {
            CollapseShape::Unit => integrate_grid(&base.grid, |i, _| base.density[i])?,
            CollapseShape::Plateau => {
                let sh = self.collapse_shift(l)?;
                integrate_grid(&base.grid, |i, _| base.density[i] * (R::one() + sh.ratio[i]))?
            }
            CollapseShape::Inversion => {
                let sh = self.collapse_shift(l)?;
                let two_u = u.mul_f64(2.0);
                integrate_grid(&base.grid, |i, _| {
                    let q = sh.ratio[i];
                    let cos2 = (two_u * sh.root[i]).cos();
                    base.density[i] * ((R::one() + q) + (R::one() - q) * cos2) * half
                })?
            }
            CollapseShape::Resonant => {
                let sh = self.collapse_shift(0)?;
                let two_u = u.mul_f64(2.0);
                integrate_grid(&base.grid, |i, _| base.density[i] * (two_u * sh.root[i]).cos())?
            }
        };
        Ok(res)
    }

    /// `int_0^Y Im[e^L (A + B cos(2 u r))] dy`, with `limit` at `y = 0`.
    pub fn revival_integral(
        &self,
        shape: RevivalShape,
        l: u32,
        u: R,
        limit: R,
    ) -> Result<IntegralResult<R>, JcmError> {
        let base = self.revival()?;
        if shape == RevivalShape::Unit {
            return Ok(integrate_grid(&base.grid, |i, _| {
                if i == 0 {
                    limit
                } else {
                    base.cis_phi[i].im * base.rho[i].exp()
                }
            })?);
        }
        let sh = self.revival_shift(l)?;
        let two_u = u.mul_f64(2.0);
        let half = R::from_f64(0.5);
        Ok(integrate_grid(&base.grid, |i, _| {
            if i == 0 {
                return limit;
            }
            // e^L cos(2ur) = [e^{rho - 2u tau} cis(phi + 2u sigma) + e^{rho + 2u tau} cis(phi - 2u sigma)] / 2
            let (st, ct) = (two_u * sh.sigma[i]).sin_cos();
            let ut = two_u * sh.tau[i];
            let e_minus = (base.rho[i] - ut).exp();
            let e_plus = (base.rho[i] + ut).exp();
            let cp = base.cis_phi[i];
            let plus_re = cp.re * ct - cp.im * st;
            let plus_im = cp.im * ct + cp.re * st;
            let minus_re = cp.re * ct + cp.im * st;
            let minus_im = cp.im * ct - cp.re * st;
            let s_im = (e_minus * plus_im + e_plus * minus_im) * half;
            match shape {
                RevivalShape::Resonant => s_im,
                _ => {
                    let s_re = (e_minus * plus_re + e_plus * minus_re) * half;
                    let b = sh.b[i];
                    sh.static_inversion[i] + b.re * s_im + b.im * s_re
                }
            }
        })?)
    }
}
