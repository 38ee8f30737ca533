//! Lanczos gamma function (g = 5, seven coefficients) on the right
//! half-plane, extended to the whole plane for `1/Gamma` by reflection.

use super::complex::{complex_sin, Complex};
use super::real::Real;
use super::SpecialError;

pub const LANCZOS_G: f64 = 5.0;

pub const LANCZOS_COEFFS: [&str; 7] = [
    "1.000000000190015",
    "76.18009172947146",
    "-86.50532032941677",
    "24.01409824083091",
    "-1.231739572450155",
    "0.1208650973866179e-2",
    "-0.5395239384953e-5",
];

/// The printed coefficients split into `(hi, lo)` double pairs, so both
/// precision kinds carry every printed digit.
const LANCZOS_SPLIT: [(f64, f64); 7] = [
    (1.000000000190015, 1.0729079953307518e-16),
    (76.18009172947146, 3.4258257737383245e-15),
    (-86.50532032941678, 5.848585530184209e-15),
    (24.01409824083091, -1.3793620781507343e-15),
    (-1.231739572450155, -2.6362618227722122e-17),
    (0.001208650973866179, -2.0865807558493542e-20),
    (-5.395239384953e-06, 3.2754456442951606e-22),
];

/// Relative error bound quoted for this coefficient set.
pub const LANCZOS_ERROR_BOUND: f64 = 2e-10;

#[inline]
fn coefficient<R: Real>(k: usize) -> R {
    let (hi, lo) = LANCZOS_SPLIT[k];
    R::from_f64(hi) + R::from_f64(lo)
}

/// The Lanczos series `c0 + sum c_n / (z + n)`.
fn lanczos_sum<R: Real>(z: Complex<R>) -> Complex<R> {
    let mut s = Complex::from_real(coefficient::<R>(0));
    for k in 1..7 {
        let d = z + R::from_f64(k as f64);
        s += Complex::from_real(coefficient::<R>(k)) / d;
    }
    s
}

/// Principal-branch `ln Gamma(z)` for `Re z > 0`.
///
/// `ln Gamma(z) = (z + 1/2) ln(z + 5.5) - (z + 5.5) + ln sqrt(2 pi) + ln S(z) - ln z`,
/// each logarithm principal so the result is analytic on the half-plane
/// and the recurrence `ln Gamma(z+1) = ln Gamma(z) + ln z` holds.
pub fn log_gamma<R: Real>(z: Complex<R>) -> Result<Complex<R>, SpecialError> {
    if !z.is_finite() {
        return Err(SpecialError::NonFinite { op: "log_gamma" });
    }
    if z.re <= R::zero() {
        return Err(SpecialError::Domain {
            op: "log_gamma",
            detail: format!("Re(z) = {} must be positive", z.re),
        });
    }
    let half = R::from_f64(0.5);
    let zg = z + R::from_f64(LANCZOS_G + 0.5);
    let lead = (z + half) * zg.ln() - zg;
    let s = lanczos_sum(z);
    Ok(lead + s.ln() - z.ln() + R::ln_2pi() * half)
}

/// `1/Gamma(z)`, entire. Exact zero at the poles `0, -1, -2, ...`.
///
/// The only failure is overflow (for example `|Im z|` beyond about 450
/// in standard precision).
pub fn reciprocal_gamma<R: Real>(z: Complex<R>) -> Result<Complex<R>, SpecialError> {
    if !z.is_finite() {
        return Err(SpecialError::NonFinite { op: "reciprocal_gamma" });
    }
    let out = if z.re > R::zero() {
        (-log_gamma(z)?).exp()
    } else {
        if z.im == R::zero() && z.re.floor() == z.re {
            return Ok(Complex::zero());
        }
        // 1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi
        let w = Complex::one() - z;
        let lg = log_gamma(w)?;
        let g = lg.exp();
        let s = complex_sin(z * R::pi()).map_err(|_| SpecialError::Overflow {
            op: "reciprocal_gamma",
            magnitude: z.im.abs().to_f64(),
        })?;
        g * s / R::pi()
    };
    if out.is_finite() {
        Ok(out)
    } else {
        Err(SpecialError::Overflow {
            op: "reciprocal_gamma",
            magnitude: z.abs().to_f64(),
        })
    }
}

/// `Gamma(z)` for `Re z > 0`.
pub fn gamma<R: Real>(z: Complex<R>) -> Result<Complex<R>, SpecialError> {
    let g = log_gamma(z)?.exp();
    if g.is_finite() {
        Ok(g)
    } else {
        Err(SpecialError::Overflow {
            op: "gamma",
            magnitude: z.abs().to_f64(),
        })
    }
}

/// Real `ln Gamma(x)` for `x > 0`.
pub fn log_gamma_real<R: Real>(x: R) -> Result<R, SpecialError> {
    Ok(log_gamma(Complex::from_real(x))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_special::DoubleDouble;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    #[test]
    fn trivial_values() {
        assert!(log_gamma(C::one()).unwrap().abs() < 1e-9);
        let half = log_gamma(C::from_f64(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5723649429247001).abs() < 1e-9);
        assert!(half.im.abs() < 1e-15);
        let r1 = reciprocal_gamma(C::one()).unwrap();
        assert!((r1.re - 1.0).abs() < 1e-9);
        for n in 0..5 {
            assert_eq!(reciprocal_gamma(C::from_f64(-(n as f64), 0.0)).unwrap(), C::zero());
        }
    }

    #[test]
    fn modulus_on_unit_imaginary_offset() {
        let g = gamma(C::from_f64(1.0, 1.0)).unwrap();
        let expect = (PI / PI.sinh()).sqrt();
        assert!((g.abs() / expect - 1.0).abs() < 2e-10);
        let r = reciprocal_gamma(C::from_f64(1.0, 1.0)).unwrap();
        assert!((r.abs() / (PI.sinh() / PI).sqrt() - 1.0).abs() < 2e-10);
    }

    #[test]
    fn domain_error_on_left_half_plane() {
        assert!(matches!(
            log_gamma(C::from_f64(0.0, 1.0)),
            Err(SpecialError::Domain { .. })
        ));
        assert!(log_gamma(C::from_f64(-2.5, 0.0)).is_err());
    }

    #[test]
    fn reflection_matches_known_values() {
        // 1/Gamma(-1/2) = -1/(2 sqrt(pi))
        let r = reciprocal_gamma(C::from_f64(-0.5, 0.0)).unwrap();
        assert!((r.re + 0.5 / PI.sqrt()).abs() < 1e-10);
        // 1/Gamma(-3/2) = 3/(4 sqrt(pi))
        let r = reciprocal_gamma(C::from_f64(-1.5, 0.0)).unwrap();
        assert!((r.re - 0.75 / PI.sqrt()).abs() < 1e-10);
        // continuity across Re z = 0
        let a = reciprocal_gamma(C::from_f64(1e-9, 0.7)).unwrap();
        let b = reciprocal_gamma(C::from_f64(-1e-9, 0.7)).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn real_gamma_small_integers() {
        let mut fact = 1.0;
        for n in 1..20 {
            let g = gamma(C::from_f64(n as f64, 0.0)).unwrap().re;
            assert!((g / fact - 1.0).abs() < 2e-10, "n={n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn extended_precision_agrees_with_standard() {
        for &(re, im) in &[(0.3, 0.0), (1.0, 7.5), (12.0, -3.0), (1.0, 40.0)] {
            let a = log_gamma(C::from_f64(re, im)).unwrap();
            let b = log_gamma(Complex::<DoubleDouble>::from_f64(re, im)).unwrap().to_f64();
            let scale = a.abs().max(1.0);
            assert!((a - b).abs() / scale < 1e-15, "{re}+{im}i: {a} vs {b}");
        }
    }

    #[test]
    fn overflow_is_signalled() {
        assert!(matches!(
            reciprocal_gamma(C::from_f64(1.0, 600.0)),
            Err(SpecialError::Overflow { .. })
        ));
    }

    proptest! {
        #[test]
        fn recurrence(re in 0.5f64..10.0, im in -20f64..20.0) {
            let z = C::from_f64(re, im);
            let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
            prop_assert!(d.abs() < 1e-9, "z={z} d={d}");
        }

        #[test]
        fn conjugate_symmetry(re in -5f64..10.0, im in -30f64..30.0) {
            let z = C::from_f64(re, im);
            let a = reciprocal_gamma(z.conj()).unwrap();
            let b = reciprocal_gamma(z).unwrap().conj();
            let scale = a.abs().max(f64::MIN_POSITIVE);
            prop_assert!((a - b).abs() <= 2.0 * f64::EPSILON * scale, "z={z}");
        }
    }
}
