//! Scalar abstraction shared by the standard (`f64`) and extended
//! ([`DoubleDouble`]) precision kinds.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::double_double::DoubleDouble;

/// Which scalar representation a value or computation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrecisionKind {
    /// IEEE-754 binary64, about 16 significant digits.
    Standard,
    /// Double-double, about 32 significant digits.
    Extended,
}

impl PrecisionKind {
    /// Mixed-kind arithmetic promotes to the wider kind.
    pub fn promote(self, other: Self) -> Self {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PrecisionKind::Standard => "standard",
            PrecisionKind::Extended => "extended",
        }
    }
}

impl Display for PrecisionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Real scalar with the elementary functions the integrands need.
///
/// Implementations must be deterministic: the same inputs give bit-identical
/// outputs on every call.
pub trait Real:
    Copy
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const KIND: PrecisionKind;
    /// Unit roundoff of the representation.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    /// Nearest `f64`.
    fn to_f64(self) -> f64;
    /// Parse a decimal literal, keeping every digit the representation can hold.
    fn from_decimal(s: &str) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn pi() -> Self;
    fn ln_2pi() -> Self;
    /// Euler-Mascheroni constant.
    fn euler_gamma() -> Self;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    /// `exp(x) - 1` without cancellation near zero.
    fn exp_m1(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan2(self, x: Self) -> Self;
    fn floor(self) -> Self;
    fn is_finite(self) -> bool;
    fn is_sign_negative(self) -> bool;

    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn sinh_cosh(self) -> (Self, Self) {
        let half = Self::from_f64(0.5);
        if self.abs().to_f64() < 0.5 {
            // sinh via expm1 keeps relative accuracy near zero
            let em = self.exp_m1();
            let en = (-self).exp_m1();
            let s = (em - en) * half;
            let c = Self::one() + (em + en) * half;
            (s, c)
        } else {
            let e = self.exp();
            let inv = Self::one() / e;
            ((e - inv) * half, (e + inv) * half)
        }
    }
    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return Self::zero();
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }
    fn mul_f64(self, k: f64) -> Self {
        self * Self::from_f64(k)
    }
    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
    fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Real for f64 {
    const KIND: PrecisionKind = PrecisionKind::Standard;
    const EPSILON: f64 = f64::EPSILON / 2.0;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    fn from_decimal(s: &str) -> Self {
        s.trim()
            .replace(' ', "")
            .parse()
            .unwrap_or_else(|_| panic!("invalid decimal literal {s:?}"))
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn ln_2pi() -> Self {
        1.837_877_066_409_345_5
    }
    fn euler_gamma() -> Self {
        0.577_215_664_901_532_9
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn exp_m1(self) -> Self {
        f64::exp_m1(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    #[inline]
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    #[inline]
    fn floor(self) -> Self {
        f64::floor(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn is_sign_negative(self) -> bool {
        f64::is_sign_negative(self)
    }
    #[inline]
    fn sinh_cosh(self) -> (Self, Self) {
        (self.sinh(), self.cosh())
    }
    #[inline]
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
    #[inline]
    fn mul_f64(self, k: f64) -> Self {
        self * k
    }
}

/// Physical and mathematical constants in the requested precision.
#[derive(Clone, Copy, Debug)]
pub struct MathConstants<R> {
    pub euler_gamma: R,
    pub pi: R,
}

impl<R: Real> MathConstants<R> {
    pub fn new() -> Self {
        Self {
            euler_gamma: R::euler_gamma(),
            pi: R::pi(),
        }
    }
}

impl<R: Real> Default for MathConstants<R> {
    fn default() -> Self {
        Self::new()
    }
}

/// Digits of the Euler-Mascheroni constant used to build every precision kind.
pub const EULER_GAMMA_DIGITS: &str = "0.57721566490153286060651209008240243104215933593992";
pub const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510";

pub(crate) fn euler_gamma_dd() -> DoubleDouble {
    DoubleDouble::from_decimal(EULER_GAMMA_DIGITS)
}
