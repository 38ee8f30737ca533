//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! with `|lo| <= ulp(hi) / 2`, giving roughly 106 significand bits.
//!
//! The error-free transformations follow Dekker and Knuth; the
//! transcendental functions use argument reduction followed by Taylor
//! series evaluated entirely in double-double.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::real::{euler_gamma_dd, PrecisionKind, Real};

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

const PI: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::PI, 1.2246467991473532e-16);
const TWO_PI: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::TAU, 2.4492935982947064e-16);
const HALF_PI: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::FRAC_PI_2, 6.123233995736766e-17);
const HALF_PI_TAIL: f64 = -1.4973849048591698e-33;
const LN2: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::LN_2, 2.3190468138462996e-17);
const LN_2PI: DoubleDouble = DoubleDouble::from_parts(1.8378770664093456, -7.756588316134483e-17);
const EULER: DoubleDouble = DoubleDouble::from_parts(0.5772156649015329, -4.942915152430645e-18);

/// Terms smaller than this relative to the running sum are dropped.
const SERIES_CUTOFF: f64 = 1e-34;

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Build from an already-normalised pair.
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    /// Exact sum of two doubles.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        let s2 = s2 + self.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }

    #[inline]
    fn mul_by_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    #[inline]
    fn div_by_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let e = e + self.lo - p2;
        let q2 = (s + e) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    #[inline]
    fn square(self) -> Self {
        let (p1, p2) = two_prod(self.hi, self.hi);
        let p2 = p2 + 2.0 * self.hi * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    /// Multiply by `2^k` exactly (barring overflow or underflow).
    fn ldexp(self, k: i32) -> Self {
        let scale = |x: f64, k: i32| -> f64 {
            if k > 1000 {
                x * 2f64.powi(1000) * 2f64.powi(k - 1000)
            } else if k < -1000 {
                x * 2f64.powi(-1000) * 2f64.powi(k + 1000)
            } else {
                x * 2f64.powi(k)
            }
        };
        Self {
            hi: scale(self.hi, k),
            lo: scale(self.lo, k),
        }
    }

    /// Taylor series of `exp(r) - 1` for `|r|` well below one.
    fn expm1_small(r: Self) -> Self {
        let mut term = r;
        let mut sum = r;
        let mut k = 2.0;
        loop {
            term = (term * r).div_by_f64(k);
            sum += term;
            if term.hi.abs() <= SERIES_CUTOFF * sum.hi.abs() || k > 40.0 {
                break;
            }
            k += 1.0;
        }
        sum
    }

    /// `exp(x) - 1` after reducing `x = k ln2 + r` and halving `r` nine times.
    fn exp_parts(self) -> (Self, i32) {
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_by_f64(k);
        let r = r.ldexp(-9);
        let mut s = Self::expm1_small(r);
        for _ in 0..9 {
            // e^{2r} - 1 = (e^r - 1)(e^r - 1 + 2)
            s = s * s.add_f64(2.0);
        }
        (s, k as i32)
    }

    /// `sin` and `cos` on `|r| <= pi/4`.
    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        if r.hi == 0.0 {
            return (Self::ZERO, Self::ONE);
        }
        let r2 = r.square();
        let mut term = r;
        let mut sin = r;
        let mut k = 2.0;
        loop {
            term = -(term * r2).div_by_f64(k * (k + 1.0));
            sin += term;
            if term.hi.abs() <= SERIES_CUTOFF * sin.hi.abs() || k > 60.0 {
                break;
            }
            k += 2.0;
        }
        let cos = (Self::ONE - sin.square()).sqrt_dd();
        (sin, cos)
    }

    fn sqrt_dd(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from_parts(f64::NAN, f64::NAN)
            };
        }
        let q = self.hi.sqrt();
        let (p, e) = two_prod(q, q);
        let diff = (self - Self::from_parts(p, e)).hi;
        let (hi, lo) = quick_two_sum(q, diff / (2.0 * q));
        Self { hi, lo }
    }

    fn parse_decimal(s: &str) -> Result<Self, ParseDoubleDoubleError> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
        if cleaned.is_empty() {
            return Err(ParseDoubleDoubleError(s.to_owned()));
        }
        let (mantissa, exponent) = match cleaned.find(['e', 'E']) {
            Some(pos) => {
                let exp: i32 = cleaned[pos + 1..]
                    .parse()
                    .map_err(|_| ParseDoubleDoubleError(s.to_owned()))?;
                (&cleaned[..pos], exp)
            }
            None => (cleaned.as_str(), 0),
        };
        let (negative, digits) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let mut value = Self::ZERO;
        let mut scale = exponent;
        let mut seen_point = false;
        let mut seen_digit = false;
        for ch in digits.chars() {
            match ch {
                '.' if !seen_point => seen_point = true,
                '0'..='9' => {
                    seen_digit = true;
                    value = value.mul_by_f64(10.0).add_f64(f64::from(ch as u8 - b'0'));
                    if seen_point {
                        scale -= 1;
                    }
                }
                _ => return Err(ParseDoubleDoubleError(s.to_owned())),
            }
        }
        if !seen_digit {
            return Err(ParseDoubleDoubleError(s.to_owned()));
        }
        let ten = Self::from_parts(10.0, 0.0);
        let mut power = Self::ONE;
        for _ in 0..scale.unsigned_abs() {
            power *= ten;
        }
        value = if scale >= 0 { value * power } else { value / power };
        Ok(if negative { -value } else { value })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid double-double literal {0:?}")]
pub struct ParseDoubleDoubleError(String);

impl FromStr for DoubleDouble {
    type Err = ParseDoubleDoubleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_decimal(s)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl From<DoubleDouble> for f64 {
    fn from(x: DoubleDouble) -> Self {
        x.hi + x.lo
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_by_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_by_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add_f64(q3)
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl fmt::Display for DoubleDouble {
    /// Prints 32 significant digits in scientific notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.hi == 0.0 {
            return f.write_str("0.0");
        }
        let mut x = self.abs();
        let mut exp10 = self.hi.abs().log10().floor() as i32;
        let ten = Self::from(10.0);
        let mut p = Self::ONE;
        for _ in 0..exp10.unsigned_abs() {
            p *= ten;
        }
        x = if exp10 >= 0 { x / p } else { x * p };
        if x.hi >= 10.0 {
            x = x.div_by_f64(10.0);
            exp10 += 1;
        } else if x.hi < 1.0 {
            x = x.mul_by_f64(10.0);
            exp10 -= 1;
        }
        let mut digits = String::with_capacity(34);
        for i in 0..32 {
            let d = x.hi.floor().clamp(0.0, 9.0);
            digits.push(char::from(b'0' + d as u8));
            if i == 0 {
                digits.push('.');
            }
            x = (x - Self::from(d)).mul_by_f64(10.0);
        }
        let sign = if self.hi < 0.0 { "-" } else { "" };
        write!(f, "{sign}{digits}e{exp10}")
    }
}

impl Real for DoubleDouble {
    const KIND: PrecisionKind = PrecisionKind::Extended;
    // 2^-104, conservative for the non-IEEE double-double operations
    const EPSILON: f64 = 4.930_380_657_631_324e-32;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn from_decimal(s: &str) -> Self {
        s.parse()
            .unwrap_or_else(|e: ParseDoubleDoubleError| panic!("{e}"))
    }
    fn pi() -> Self {
        PI
    }
    fn ln_2pi() -> Self {
        LN_2PI
    }
    fn euler_gamma() -> Self {
        EULER
    }

    #[inline]
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        self.sqrt_dd()
    }

    fn exp(self) -> Self {
        if self.hi > 709.78 {
            return Self::from_parts(f64::INFINITY, 0.0);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        if self.hi == 0.0 {
            return Self::ONE;
        }
        let (s, k) = self.exp_parts();
        s.add_f64(1.0).ldexp(k)
    }

    fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.5 {
            // direct series: |x| < 0.5 converges in ~30 terms
            let r = self.ldexp(-6);
            let mut s = Self::expm1_small(r);
            for _ in 0..6 {
                s = s * s.add_f64(2.0);
            }
            s
        } else {
            self.exp().add_f64(-1.0)
        }
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_parts(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN }, 0.0);
        }
        if !self.hi.is_finite() {
            return self;
        }
        // one Newton step on exp(x) = a doubles the 53-bit seed
        let x = Self::from(self.hi.ln());
        x + self * (-x).exp() - Self::ONE
    }

    fn sin_cos(self) -> (Self, Self) {
        if !self.hi.is_finite() {
            let nan = Self::from_parts(f64::NAN, f64::NAN);
            return (nan, nan);
        }
        let k = (self.hi / HALF_PI.hi).round();
        let r = (self - HALF_PI.mul_by_f64(k)).add_f64(-HALF_PI_TAIL * k);
        let (s, c) = Self::sin_cos_reduced(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn atan2(self, x: Self) -> Self {
        let y = self;
        if x.hi == 0.0 && y.hi == 0.0 {
            return Self::from(f64::atan2(y.hi, x.hi));
        }
        let r = x.hypot(y);
        let xx = x / r;
        let yy = y / r;
        let z = Self::from(f64::atan2(y.hi, x.hi));
        let (sz, cz) = z.sin_cos();
        if xx.hi.abs() > yy.hi.abs() {
            z + (yy - sz) / cz
        } else {
            z - (xx - cz) / sz
        }
    }

    fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Self { hi, lo }
        } else {
            Self { hi, lo: 0.0 }
        }
    }

    #[inline]
    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }

    #[inline]
    fn mul_f64(self, k: f64) -> Self {
        self.mul_by_f64(k)
    }
}

impl DoubleDouble {
    pub fn two_pi() -> Self {
        TWO_PI
    }

    /// Euler-Mascheroni constant parsed from its decimal expansion.
    pub fn euler_gamma_from_digits() -> Self {
        euler_gamma_dd()
    }
}
