//! `y -> 0` limits of the revival integrands.
//!
//! Near `y = 0`, `|alpha|^{2iy} / Gamma(1+iy) = 1 + iy (2 ln|alpha| + gamma) + O(y^2)`
//! and `1/(e^{2 pi y} - 1) = 1/(2 pi y) + O(1)`. For an integrand
//! `Im[|alpha|^{2iy}/Gamma(1+iy) F(s + iy)] / (e^{2 pi y} - 1)` with `F` real on
//! the real axis this gives the limit `[(2 ln|alpha| + gamma) F(s) + F'(s)] / (2 pi)`.

use crate::abel_plana::{bose_weight, richardson_limit};
use crate::complex_special::{complex_cos, complex_sin, reciprocal_gamma, Complex, DoubleDouble, Real};

use super::config::JcmConfig;
use super::JcmError;

/// Which revival integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RevivalFamily {
    /// The `I_2^{(l)}` bracket `cos^2(sqrt(c+l+iy)|kappa|t) + c/(c+l+iy) sin^2(...)`.
    Inversion { l: u32 },
    /// The `J_2` factor `cos(2 sqrt(iy) t)`.
    Resonant,
    /// The bare weight, as in the summation identity.
    Unit,
}

/// Largest `y` used by the Richardson cross-check; halved three times.
pub const RICHARDSON_START: f64 = 1e-4;

/// `2 ln|alpha| + gamma`.
pub(crate) fn a0<R: Real>(alpha: f64) -> R {
    R::from_f64(alpha.abs()).ln().mul_f64(2.0) + R::euler_gamma()
}

/// `F(s)` and `F'(s)` for the inversion bracket at `u = |kappa| t`.
pub(crate) fn inversion_bracket_and_slope<R: Real>(u: R, s: R, c: R) -> (R, R) {
    if s == R::zero() {
        return (R::one(), -(u * u));
    }
    let rs = s.sqrt();
    let (sn, cs) = (u * rs).sin_cos();
    let sin2 = (sn * cs).mul_f64(2.0);
    let d_cos_sq = -(u * sin2) / rs.mul_f64(2.0);
    if c == R::zero() {
        return (cs * cs, d_cos_sq);
    }
    let f = cs * cs + c / s * sn * sn;
    let fp = d_cos_sq + c * ((u * sin2) / (s * rs).mul_f64(2.0) - sn * sn / (s * s));
    (f, fp)
}

/// Limit of the `I_2^{(l)}` integrand in working precision `R`.
pub(crate) fn i2_limit_in<R: Real>(l: u32, t: f64, cfg: &JcmConfig) -> R {
    let u = R::from_f64(cfg.kappa().abs()) * R::from_f64(t);
    let c = R::from_f64(cfg.c());
    let s = c + R::from_f64(l as f64);
    let (f, fp) = inversion_bracket_and_slope(u, s, c);
    (a0::<R>(cfg.alpha()) * f + fp) / (R::pi().mul_f64(2.0))
}

pub(crate) fn j2_limit_in<R: Real>(t: f64, cfg: &JcmConfig) -> R {
    let t = R::from_f64(t);
    (a0::<R>(cfg.alpha()) - (t * t).mul_f64(2.0)) / R::pi().mul_f64(2.0)
}

pub(crate) fn identity_limit_in<R: Real>(cfg: &JcmConfig) -> R {
    a0::<R>(cfg.alpha()) / R::pi().mul_f64(2.0)
}

pub(crate) fn family_limit_in<R: Real>(family: RevivalFamily, t: f64, cfg: &JcmConfig) -> R {
    match family {
        RevivalFamily::Inversion { l } => i2_limit_in(l, t, cfg),
        RevivalFamily::Resonant => j2_limit_in(t, cfg),
        RevivalFamily::Unit => identity_limit_in(cfg),
    }
}

/// `y -> 0` limit of the `I_2^{(l)}` integrand. For `c > 0, l = 0` this is
/// `[-1 + 2 c gamma + cos(2 sqrt(c) |kappa| t) + 4 c ln|alpha|] / (4 c pi)`.
pub fn i2_limit(l: u32, t: f64, cfg: &JcmConfig) -> Result<f64, JcmError> {
    cfg.require_nonzero_alpha("i2_limit")?;
    Ok(i2_limit_in::<DoubleDouble>(l, t, cfg).to_f64())
}

/// `y -> 0` limit of the `J_2` integrand: `(2 ln|alpha| + gamma - 2 t^2) / (2 pi)`.
pub fn j2_limit(t: f64, cfg: &JcmConfig) -> Result<f64, JcmError> {
    cfg.require_nonzero_alpha("j2_limit")?;
    Ok(j2_limit_in::<DoubleDouble>(t, cfg).to_f64())
}

/// `y -> 0` limit of `Im[|alpha|^{2iy}/Gamma(1+iy)] / (e^{2 pi y} - 1)`.
pub fn identity_limit(cfg: &JcmConfig) -> Result<f64, JcmError> {
    cfg.require_nonzero_alpha("identity_limit")?;
    Ok(identity_limit_in::<DoubleDouble>(cfg).to_f64())
}

/// The revival integrand at one `y > 0`, assembled from the generic complex
/// functions (principal square root, complex cosine, reciprocal gamma).
/// Without the `e^{-alpha^2}` prefactor.
pub fn revival_integrand_reference<R>(family: RevivalFamily, y: R, t: f64, cfg: &JcmConfig) -> Result<R, JcmError>
where
    R: Real,
{
    cfg.require_nonzero_alpha("revival_integrand_reference")?;
    let two_ln_a = R::from_f64(cfg.alpha().abs()).ln().mul_f64(2.0);
    let power = Complex::cis(two_ln_a * y);
    let rg = reciprocal_gamma(Complex::new(R::one(), y))?;
    let u = R::from_f64(cfg.kappa().abs()) * R::from_f64(t);
    let factor = match family {
        RevivalFamily::Unit => Complex::one(),
        RevivalFamily::Resonant => {
            let r = Complex::new(R::zero(), y).principal_sqrt();
            complex_cos(r.scale(u.mul_f64(2.0)))?
        }
        RevivalFamily::Inversion { l } => {
            let c = R::from_f64(cfg.c());
            let w = Complex::new(c + R::from_f64(l as f64), y);
            let arg = w.principal_sqrt().scale(u);
            let cs = complex_cos(arg)?;
            let sn = complex_sin(arg)?;
            let mut f = cs * cs;
            if cfg.c() != 0.0 {
                f += Complex::from_real(c) / w * sn * sn;
            }
            f
        }
    };
    Ok((power * rg * factor).im * bose_weight(y))
}

/// Extrapolate the reference integrand to `y = 0` from
/// `y = 10^-4, 5 10^-5, 2.5 10^-5, 1.25 10^-5` (in extended precision).
pub fn richardson_revival_limit(family: RevivalFamily, t: f64, cfg: &JcmConfig) -> Result<f64, JcmError> {
    cfg.require_nonzero_alpha("richardson_revival_limit")?;
    let mut err = None;
    let v: DoubleDouble = richardson_limit(
        |y: DoubleDouble| match revival_integrand_reference(family, y, t, cfg) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                DoubleDouble::from_f64(f64::NAN)
            }
        },
        DoubleDouble::from_f64(RICHARDSON_START),
    );
    match err {
        Some(e) => Err(e),
        None => Ok(v.to_f64()),
    }
}
