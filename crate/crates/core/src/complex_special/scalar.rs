//! Precision-tagged complex values for callers that choose the precision
//! at run time.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::complex::{complex_cos, complex_sin, Complex};
use super::double_double::DoubleDouble;
use super::gamma::{log_gamma, reciprocal_gamma};
use super::real::PrecisionKind;
use super::SpecialError;

/// A complex value in either precision kind. Binary operations on mixed
/// kinds promote to [`PrecisionKind::Extended`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexScalar {
    Standard(Complex<f64>),
    Extended(Complex<DoubleDouble>),
}

impl ComplexScalar {
    /// Fails if either part is not finite.
    pub fn new(re: f64, im: f64, kind: PrecisionKind) -> Result<Self, SpecialError> {
        let z = Complex::new(re, im);
        if !z.is_finite() {
            return Err(SpecialError::NonFinite {
                op: "ComplexScalar::new",
            });
        }
        Ok(match kind {
            PrecisionKind::Standard => Self::Standard(z),
            PrecisionKind::Extended => Self::Extended(z.widen()),
        })
    }

    pub fn precision_kind(&self) -> PrecisionKind {
        match self {
            Self::Standard(_) => PrecisionKind::Standard,
            Self::Extended(_) => PrecisionKind::Extended,
        }
    }

    pub fn re(&self) -> f64 {
        self.to_f64().re
    }

    pub fn im(&self) -> f64 {
        self.to_f64().im
    }

    pub fn to_f64(&self) -> Complex<f64> {
        match self {
            Self::Standard(z) => *z,
            Self::Extended(z) => z.to_f64(),
        }
    }

    pub fn to_extended(&self) -> Complex<DoubleDouble> {
        match self {
            Self::Standard(z) => z.widen(),
            Self::Extended(z) => *z,
        }
    }

    pub fn promote(self, kind: PrecisionKind) -> Self {
        match (self, kind) {
            (Self::Standard(z), PrecisionKind::Extended) => Self::Extended(z.widen()),
            (s, _) => s,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Self::Standard(z) => z.is_finite(),
            Self::Extended(z) => z.is_finite(),
        }
    }

    /// Returns `self` if finite, otherwise an error naming `op`.
    pub fn checked(self, op: &'static str) -> Result<Self, SpecialError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(SpecialError::NonFinite { op })
        }
    }

    pub fn conj(self) -> Self {
        self.map(|z| z.conj(), |z| z.conj())
    }

    pub fn abs(self) -> f64 {
        match self {
            Self::Standard(z) => z.abs(),
            Self::Extended(z) => z.abs().hi(),
        }
    }

    pub fn principal_sqrt(self) -> Self {
        self.map(|z| z.principal_sqrt(), |z| z.principal_sqrt())
    }

    pub fn cos(self) -> Result<Self, SpecialError> {
        self.try_map(complex_cos, complex_cos)
    }

    pub fn sin(self) -> Result<Self, SpecialError> {
        self.try_map(complex_sin, complex_sin)
    }

    pub fn log_gamma(self) -> Result<Self, SpecialError> {
        self.try_map(log_gamma, log_gamma)
    }

    pub fn reciprocal_gamma(self) -> Result<Self, SpecialError> {
        self.try_map(reciprocal_gamma, reciprocal_gamma)
    }

    fn map(
        self,
        f: impl FnOnce(Complex<f64>) -> Complex<f64>,
        g: impl FnOnce(Complex<DoubleDouble>) -> Complex<DoubleDouble>,
    ) -> Self {
        match self {
            Self::Standard(z) => Self::Standard(f(z)),
            Self::Extended(z) => Self::Extended(g(z)),
        }
    }

    fn try_map(
        self,
        f: impl FnOnce(Complex<f64>) -> Result<Complex<f64>, SpecialError>,
        g: impl FnOnce(Complex<DoubleDouble>) -> Result<Complex<DoubleDouble>, SpecialError>,
    ) -> Result<Self, SpecialError> {
        Ok(match self {
            Self::Standard(z) => Self::Standard(f(z)?),
            Self::Extended(z) => Self::Extended(g(z)?),
        })
    }

    fn binary(
        self,
        rhs: Self,
        f: impl FnOnce(Complex<f64>, Complex<f64>) -> Complex<f64>,
        g: impl FnOnce(Complex<DoubleDouble>, Complex<DoubleDouble>) -> Complex<DoubleDouble>,
    ) -> Self {
        match (self, rhs) {
            (Self::Standard(a), Self::Standard(b)) => Self::Standard(f(a, b)),
            (a, b) => Self::Extended(g(a.to_extended(), b.to_extended())),
        }
    }
}

impl From<Complex<f64>> for ComplexScalar {
    fn from(z: Complex<f64>) -> Self {
        Self::Standard(z)
    }
}

impl From<Complex<DoubleDouble>> for ComplexScalar {
    fn from(z: Complex<DoubleDouble>) -> Self {
        Self::Extended(z)
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Standard(z) => write!(f, "{z}"),
            Self::Extended(z) => write!(f, "{z}"),
        }
    }
}

impl Neg for ComplexScalar {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z, |z| -z)
    }
}

macro_rules! promoting_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for ComplexScalar {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                self.binary(rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }
    };
}

promoting_op!(Add, add, +);
promoting_op!(Sub, sub, -);
promoting_op!(Mul, mul, *);
promoting_op!(Div, div, /);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_arithmetic_promotes() {
        let a = ComplexScalar::new(1.0, 2.0, PrecisionKind::Standard).unwrap();
        let b = ComplexScalar::new(0.5, -1.0, PrecisionKind::Extended).unwrap();
        assert_eq!((a + b).precision_kind(), PrecisionKind::Extended);
        assert_eq!((b * a).precision_kind(), PrecisionKind::Extended);
        assert_eq!((a - a).precision_kind(), PrecisionKind::Standard);
        let q = (a / b).to_f64();
        let expect = Complex::new(1.0, 2.0) / Complex::new(0.5, -1.0);
        assert!((q - expect).abs() < 1e-15);
    }

    #[test]
    fn non_finite_is_rejected() {
        assert!(ComplexScalar::new(f64::NAN, 0.0, PrecisionKind::Standard).is_err());
        let big = ComplexScalar::new(1e308, 0.0, PrecisionKind::Standard).unwrap();
        assert!((big * big).checked("square").is_err());
    }

    #[test]
    fn extended_reproduces_standard() {
        for &(re, im) in &[(1.0, 1.0), (3.5, -2.0), (0.2, 3.0)] {
            let s = ComplexScalar::new(re, im, PrecisionKind::Standard).unwrap();
            let e = s.promote(PrecisionKind::Extended);
            for (x, y) in [
                (s.reciprocal_gamma().unwrap(), e.reciprocal_gamma().unwrap()),
                (s.cos().unwrap(), e.cos().unwrap()),
                (s.principal_sqrt(), e.principal_sqrt()),
            ] {
                let d = (x.to_f64() - y.to_f64()).abs() / y.abs();
                assert!(d < 3e-15, "{x} vs {y}");
            }
        }
    }
}
