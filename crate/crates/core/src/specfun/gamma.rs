//! Gamma, log-Gamma, reciprocal Gamma and Beta for complex arguments.
//!
//! Lanczos approximation with g = 7 and nine coefficients on `Re z >= 1/2`,
//! reflection formula elsewhere.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance to the nearest non-positive integer below which Γ reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Distance from `z` to the set {0, -1, -2, ...}.
pub fn distance_to_pole(z: Complex64) -> f64 {
    let n = z.re.round().min(0.0);
    (z - n).norm()
}

fn is_exact_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)` for `Re z >= 1/2` from the Lanczos series.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += p / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + series.ln()
}

/// `ln sin(πz)` modulo 2πi, safe for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return (PI * z).sin().ln();
    }
    // sin(πz) = (e^{iπz} - e^{-iπz}) / 2i; factor out the dominant exponential.
    let i = Complex64::i();
    if z.im > 0.0 {
        let small = (2.0 * PI * i * z).exp();
        -i * PI * z + (1.0 - small).ln() - (2.0 * i).ln()
    } else {
        let small = (-2.0 * PI * i * z).exp();
        i * PI * z + (1.0 - small).ln() - (-2.0 * i).ln()
    }
}

/// `ln Γ(z)`; the real part is `ln|Γ(z)|`, the imaginary part is fixed only modulo 2π.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if distance_to_pole(z) < POLE_TOLERANCE {
        return Err(Error::Pole(z));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(PI.ln() - ln_sin_pi(z) - ln_gamma_right(1.0 - z))
    }
}

/// Γ(z).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(domain(format!("gamma of non-finite argument {z}")));
    }
    if distance_to_pole(z) < POLE_TOLERANCE {
        return Err(Error::Pole(z));
    }
    let value = if z.re >= 0.5 {
        ln_gamma_right(z).exp()
    } else if z.im.abs() < 100.0 {
        PI / ((PI * z).sin() * ln_gamma_right(1.0 - z).exp())
    } else {
        (PI.ln() - ln_sin_pi(z) - ln_gamma_right(1.0 - z)).exp()
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(format!("gamma({z}) is not representable")))
    }
}

/// 1/Γ(z), an entire function; exactly zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_exact_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    }
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b) for `Re a, Re b > 0`.
pub fn beta(a: Complex64, b: Complex64) -> Result<Complex64> {
    if !(a.re > 0.0 && b.re > 0.0) {
        return Err(domain(format!(
            "beta needs positive real parts, got a = {a}, b = {b}"
        )));
    }
    let direct = gamma(a)? * gamma(b)? * rgamma(a + b);
    if direct.is_finite() && direct.norm() > 0.0 {
        return Ok(direct);
    }
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn forced_values() {
        assert!(rel(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-15);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-15);
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
    }

    // High-precision reference values (50-digit arithmetic, rounded).
    #[test]
    fn reference_values() {
        let table = [
            (c(0.0, 1.0), c(-0.154_949_828_301_810_69, -0.498_015_668_118_356_04)),
            (c(0.6, 0.4), c(0.999_107_747_148_710_16, -0.585_780_651_242_553_84)),
            (c(3.7, -2.2), c(-1.885_026_013_041_872_9, -0.849_790_941_594_589_42)),
            (c(-2.5, 0.3), c(-0.613_822_997_437_741_49, -0.211_232_614_937_041_78)),
            (c(0.1, 5.0), c(-3.808_606_913_812_056_8e-4, 3.411_170_124_492_653_2e-4)),
        ];
        for (z, want) in table {
            let got = gamma(z).unwrap();
            assert!(rel(got, want) < 1e-13, "gamma({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn poles_are_reported() {
        for n in 0..5 {
            let z = c(-(n as f64), 0.0);
            assert!(matches!(gamma(z), Err(Error::Pole(_))));
        }
        assert!(matches!(gamma(c(-2.0 + 1e-13, 0.0)), Err(Error::Pole(_))));
        assert!(gamma(c(-2.0 + 1e-9, 0.0)).is_ok());
    }

    #[test]
    fn reciprocal_gamma_is_entire() {
        assert_eq!(rgamma(c(-3.0, 0.0)), c(0.0, 0.0));
        let near = rgamma(c(-1.0 + 1e-8, 0.0));
        // 1/Γ(z) ≈ -(z+1) near z = -1
        assert!((near.re + 1e-8).abs() < 1e-15);
        let z = c(2.3, -1.1);
        assert!(rel(rgamma(z) * gamma(z).unwrap(), c(1.0, 0.0)) < 1e-14);
    }

    #[test]
    fn log_gamma_real_part_is_log_modulus() {
        for z in [c(0.3, 0.2), c(-3.4, 1.7), c(12.0, -30.0), c(0.25, 300.0)] {
            let lg = ln_gamma(z).unwrap();
            if let Ok(g) = gamma(z) {
                assert!((lg.re - g.norm().ln()).abs() < 1e-12, "{z}");
                assert!(rel(lg.exp(), g) < 1e-11, "{z}");
            }
        }
        // far out along the imaginary axis Γ underflows but ln Γ stays finite
        let lg = ln_gamma(c(0.5, 2000.0)).unwrap();
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        let want = 0.5 * ((2.0 * PI).ln() - 2000.0 * PI);
        assert!((lg.re - want).abs() < 1e-9, "{} vs {want}", lg.re);
    }

    #[test]
    fn beta_values() {
        assert!(rel(beta(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(beta(c(0.5, 0.0), c(0.5, 0.0)).unwrap(), c(PI, 0.0)) < 1e-14);
        assert!(matches!(beta(c(0.0, 1.0), c(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(beta(c(1.0, 0.0), c(-0.5, 0.0)), Err(Error::Domain(_))));
    }

    proptest::proptest! {
        #[test]
        fn recurrence_holds(re in -6.0..6.0f64, im in 0.05..6.0f64) {
            let z = c(re, im);
            proptest::prop_assert!(rel(gamma(z + 1.0).unwrap(), z * gamma(z).unwrap()) < 1e-12);
        }

        #[test]
        fn conjugation_holds(re in -6.0..6.0f64, im in 0.05..6.0f64) {
            let z = c(re, im);
            proptest::prop_assert!(rel(gamma(z.conj()).unwrap(), gamma(z).unwrap().conj()) < 1e-14);
        }

        #[test]
        fn reflection_holds(re in -3.0..3.0f64, im in 0.05..3.0f64) {
            let z = c(re, im);
            let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
            proptest::prop_assert!(rel(lhs, PI / (PI * z).sin()) < 1e-12);
        }
    }
}
