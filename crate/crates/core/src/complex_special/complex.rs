//! Complex numbers over any [`Real`] scalar, with principal-branch
//! elementary functions.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::real::Real;
use super::SpecialError;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn from_real(re: R) -> Self {
        Self { re, im: R::zero() }
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> Self {
        Self {
            re: R::from_f64(re),
            im: R::from_f64(im),
        }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::from_real(R::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(R::one())
    }

    #[inline]
    pub fn i() -> Self {
        Self::new(R::zero(), R::one())
    }

    /// `e^{i theta}`.
    #[inline]
    pub fn cis(theta: R) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    #[inline]
    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> R {
        self.re.hypot(self.im)
    }

    /// Argument in `(-pi, pi]`.
    #[inline]
    pub fn arg(self) -> R {
        self.im.atan2(self.re)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    #[inline]
    pub fn scale(self, k: R) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    #[inline]
    pub fn mul_i(self) -> Self {
        Self::new(-self.im, self.re)
    }

    #[inline]
    pub fn recip(self) -> Self {
        Self::one() / self
    }

    pub fn exp(self) -> Self {
        Self::cis(self.im).scale(self.re.exp())
    }

    /// Principal logarithm, imaginary part in `(-pi, pi]`.
    pub fn ln(self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    /// Principal square root: branch cut on the negative real axis,
    /// `Re >= 0`, and the cut itself maps to the upper half-plane
    /// (so `sqrt(-1) = i`).
    pub fn principal_sqrt(self) -> Self {
        let zero = R::zero();
        if self.re == zero && self.im == zero {
            return Self::zero();
        }
        let half = R::from_f64(0.5);
        let r = self.abs();
        if self.re >= zero {
            let t = ((r + self.re) * half).sqrt();
            Self::new(t, self.im / (t + t))
        } else {
            let t = ((r - self.re) * half).sqrt();
            let im = if self.im.is_sign_negative() { -t } else { t };
            Self::new(self.im.abs() / (t + t), im)
        }
    }

    pub fn to_f64(self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn convert<S: Real>(self) -> Complex<S> {
        Complex::new(S::from_f64(self.re.to_f64()), S::from_f64(self.im.to_f64()))
    }
}

impl Complex<f64> {
    /// Widen to another precision without rounding.
    pub fn widen<S: Real>(self) -> Complex<S> {
        Complex::new(S::from_f64(self.re), S::from_f64(self.im))
    }
}

fn cosh_sinh_checked<R: Real>(y: R, op: &'static str) -> Result<(R, R), SpecialError> {
    let (s, c) = y.sinh_cosh();
    if c.is_finite() && s.is_finite() {
        Ok((s, c))
    } else {
        Err(SpecialError::Overflow {
            op,
            magnitude: y.abs().to_f64(),
        })
    }
}

/// `cos z = cos x cosh y - i sin x sinh y`.
pub fn complex_cos<R: Real>(z: Complex<R>) -> Result<Complex<R>, SpecialError> {
    let (sx, cx) = z.re.sin_cos();
    let (sh, ch) = cosh_sinh_checked(z.im, "complex_cos")?;
    Ok(Complex::new(cx * ch, -(sx * sh)))
}

/// `sin z = sin x cosh y + i cos x sinh y`.
pub fn complex_sin<R: Real>(z: Complex<R>) -> Result<Complex<R>, SpecialError> {
    let (sx, cx) = z.re.sin_cos();
    let (sh, ch) = cosh_sinh_checked(z.im, "complex_sin")?;
    Ok(Complex::new(sx * ch, cx * sh))
}

pub fn principal_sqrt<R: Real>(z: Complex<R>) -> Complex<R> {
    z.principal_sqrt()
}

impl<R: Real> fmt::Display for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        Self::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl<R: Real> Div for Complex<R> {
    type Output = Self;
    /// Smith's algorithm, avoiding overflow in `|b|^2`.
    fn div(self, b: Self) -> Self {
        if b.re.abs() >= b.im.abs() {
            let r = b.im / b.re;
            let d = b.re + b.im * r;
            Self::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = b.re / b.im;
            let d = b.re * r + b.im;
            Self::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

impl<R: Real> Add<R> for Complex<R> {
    type Output = Self;
    #[inline]
    fn add(self, b: R) -> Self {
        Self::new(self.re + b, self.im)
    }
}

impl<R: Real> Sub<R> for Complex<R> {
    type Output = Self;
    #[inline]
    fn sub(self, b: R) -> Self {
        Self::new(self.re - b, self.im)
    }
}

impl<R: Real> Mul<R> for Complex<R> {
    type Output = Self;
    #[inline]
    fn mul(self, b: R) -> Self {
        self.scale(b)
    }
}

impl<R: Real> Div<R> for Complex<R> {
    type Output = Self;
    #[inline]
    fn div(self, b: R) -> Self {
        Self::new(self.re / b, self.im / b)
    }
}

impl<R: Real> AddAssign for Complex<R> {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl<R: Real> SubAssign for Complex<R> {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl<R: Real> MulAssign for Complex<R> {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_special::DoubleDouble;
    use proptest::prelude::*;

    type C = Complex<f64>;

    #[test]
    fn sqrt_examples() {
        assert_eq!(C::from_f64(4.0, 0.0).principal_sqrt(), C::from_f64(2.0, 0.0));
        let r = C::i().principal_sqrt();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.re - h).abs() < 2e-16 && (r.im - h).abs() < 2e-16);
        assert_eq!(C::from_f64(-1.0, 0.0).principal_sqrt(), C::i());
        assert_eq!(C::zero().principal_sqrt(), C::zero());
    }

    #[test]
    fn trig_examples() {
        let c0 = complex_cos(C::zero()).unwrap();
        let s0 = complex_sin(C::zero()).unwrap();
        assert_eq!((c0.re, c0.im), (1.0, 0.0));
        assert_eq!((s0.re, s0.im), (0.0, 0.0));
        let cpi = complex_cos(C::from_f64(0.0, std::f64::consts::PI)).unwrap();
        assert!((cpi.re - std::f64::consts::PI.cosh()).abs() < 1e-14);
        assert!((cpi.re - 11.5920).abs() < 1e-4);
        let s = complex_sin(C::from_f64(std::f64::consts::FRAC_PI_2, 1.0)).unwrap();
        assert!((s.re - 1f64.cosh()).abs() < 1e-15 && s.im.abs() < 1e-15);
        assert!((s.re - 1.5431).abs() < 1e-4);
    }

    #[test]
    fn trig_overflow_signals() {
        assert!(complex_cos(C::from_f64(0.3, 700.0)).unwrap().is_finite());
        assert!(complex_cos(C::from_f64(0.3, -700.0)).unwrap().is_finite());
        assert!(matches!(
            complex_cos(C::from_f64(0.3, 720.0)),
            Err(SpecialError::Overflow { .. })
        ));
        assert!(complex_sin(C::from_f64(0.0, -800.0)).is_err());
    }

    #[test]
    fn exp_ln_inverse() {
        let z = C::from_f64(0.7, -2.3);
        let w = z.ln().exp();
        assert!((w - z).abs() < 1e-15);
        assert!((C::from_f64(-1.0, 0.0).ln().im - std::f64::consts::PI).abs() < 1e-16);
    }

    #[test]
    fn division_handles_large_denominators() {
        let b = C::from_f64(1e300, 1e300);
        let q = C::from_f64(1e300, 0.0) / b;
        assert!((q.re - 0.5).abs() < 1e-15 && (q.im + 0.5).abs() < 1e-15);
    }

    #[test]
    fn extended_sqrt_roundtrip() {
        let z = Complex::<DoubleDouble>::from_f64(-3.0, 1e-5);
        let r = z.principal_sqrt();
        let back = r * r - z;
        assert!(back.abs().to_f64() < 1e-30);
    }

    fn ulp_dist(a: C, b: C) -> f64 {
        let scale = a.abs().max(b.abs()) * f64::EPSILON;
        if scale == 0.0 {
            0.0
        } else {
            (a - b).abs() / scale
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn sqrt_squared_recovers_input(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let z = C::from_f64(re, im);
            let r = z.principal_sqrt();
            prop_assert!(r.re >= 0.0);
            prop_assert!(ulp_dist(r * r, z) <= 4.0, "z={z} r={r}");
        }
    }
}
