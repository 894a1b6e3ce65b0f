//! Gauss hypergeometric function F(a, b; c; z).
//!
//! Supported arguments: the disc |z| <= 0.9 (power series), real z in (0.9, 1)
//! (the 1 - z connection formula), and real z < 0 of any size (Pfaff
//! transformation onto [0, 1)). Terminating series are summed for every z.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma, rgamma};
use crate::error::{domain, Error, Result};

/// Radius of the disc on which the power series is summed directly.
pub const SERIES_RADIUS: f64 = 0.9;
pub const MAX_TERMS: usize = 100_000;
const SERIES_TOLERANCE: f64 = 0.5 * f64::EPSILON;
const CONSECUTIVE_SMALL_TERMS: usize = 3;

/// Distance of c - a - b from the integers below which the connection formula
/// is replaced by a contour average in `a`.
const DEGENERATE_GAP: f64 = 1e-3;
const AVERAGE_RADIUS: f64 = 1e-2;
const AVERAGE_NODES: usize = 64;

fn nonpositive_integer(x: Complex64) -> Option<u64> {
    (x.im == 0.0 && x.re <= 0.0 && x.re == x.re.round()).then(|| (-x.re) as u64)
}

fn near_nonpositive_integer(x: Complex64) -> bool {
    let n = x.re.round();
    n <= 0.0 && (x - n).norm() < 1e-12
}

/// F(a, b; c; z).
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(domain("hyp2f1 needs finite arguments"));
    }
    if near_nonpositive_integer(c) {
        return Err(domain(format!("hyp2f1 lower parameter c = {c} is a pole")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if nonpositive_integer(a).is_some() || nonpositive_integer(b).is_some() {
        return series(a, b, c, z);
    }
    if z.norm() <= SERIES_RADIUS {
        return series(a, b, c, z);
    }
    if z.im != 0.0 {
        return Err(domain(format!(
            "hyp2f1 is only continued along the real axis, got z = {z}"
        )));
    }
    let x = z.re;
    if x > 0.0 && x < 1.0 {
        return hyp2f1_unit_interval(a, b, c, x, 1.0 - x, (-x).ln_1p());
    }
    if x < 0.0 {
        // Pfaff: F(a,b;c;x) = (1-x)^{-a} F(a, c-b; c; x/(x-1)).
        let ln_one_minus_x = (-x).ln_1p();
        let w = x / (x - 1.0);
        let one_minus_w = 1.0 / (1.0 - x);
        let inner = hyp2f1_unit_interval(a, c - b, c, w, one_minus_w, -ln_one_minus_x)?;
        return Ok((-a * ln_one_minus_x).exp() * inner);
    }
    Err(domain(format!("hyp2f1 does not support z = {z}")))
}

/// F(a, b; c; z) for z in [0, 1), given the complement `1 - z` and its
/// logarithm separately so that arguments extremely close to 1 keep full
/// relative precision.
pub(crate) fn hyp2f1_unit_interval(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: f64,
    one_minus_z: f64,
    ln_one_minus_z: f64,
) -> Result<Complex64> {
    if near_nonpositive_integer(c) {
        return Err(domain(format!("hyp2f1 lower parameter c = {c} is a pole")));
    }
    let zc = Complex64::new(z, 0.0);
    if z <= SERIES_RADIUS
        || nonpositive_integer(a).is_some()
        || nonpositive_integer(b).is_some()
    {
        return series(a, b, c, zc);
    }
    let d = c - a - b;
    let gap = (d - d.re.round()).norm();
    if gap >= DEGENERATE_GAP {
        return connection(a, b, c, one_minus_z, ln_one_minus_z);
    }
    // F is entire in `a`; its value is the mean over a small circle, on which
    // c - a - b stays clear of the integers.
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..AVERAGE_NODES {
        let angle = 2.0 * PI * (k as f64 + 0.5) / AVERAGE_NODES as f64;
        let shifted = a + Complex64::from_polar(AVERAGE_RADIUS, angle);
        sum += connection(shifted, b, c, one_minus_z, ln_one_minus_z)?;
    }
    Ok(sum / AVERAGE_NODES as f64)
}

/// The 1 - z connection formula, valid when c - a - b is not an integer.
fn connection(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    w: f64,
    ln_w: f64,
) -> Result<Complex64> {
    let d = c - a - b;
    let wc = Complex64::new(w, 0.0);
    let gamma_c = gamma(c)?;
    let first = gamma_c * gamma(d)? * rgamma(c - a) * rgamma(c - b);
    let second = gamma_c * gamma(-d)? * rgamma(a) * rgamma(b);
    let mut value = Complex64::new(0.0, 0.0);
    if first != Complex64::new(0.0, 0.0) {
        value += first * series(a, b, 1.0 - d, wc)?;
    }
    if second != Complex64::new(0.0, 0.0) {
        value += second * (d * ln_w).exp() * series(c - a, c - b, 1.0 + d, wc)?;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Convergence {
            what: "hyp2f1 connection formula",
            estimate: value,
            achieved_error: f64::INFINITY,
        })
    }
}

/// Direct power series.
fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut largest = 1.0f64;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
        sum += term;
        largest = largest.max(term.norm());
        if !sum.is_finite() {
            break;
        }
        let scale = sum.norm().max(f64::EPSILON * largest);
        if term.norm() <= SERIES_TOLERANCE * scale {
            small += 1;
            if small >= CONSECUTIVE_SMALL_TERMS {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence {
        what: "hypergeometric series",
        estimate: sum,
        achieved_error: term.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// Brute-force partial sum, independent of the production loop.
    fn brute(a: Complex64, b: Complex64, cc: Complex64, z: f64, terms: usize) -> Complex64 {
        let mut t = r(1.0);
        let mut s = r(1.0);
        for k in 0..terms {
            let k = k as f64;
            t = t * (a + k) * (b + k) / (cc + k) / (k + 1.0) * z;
            s += t;
        }
        s
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(hyp2f1(r(0.3), r(0.7), r(1.4), r(0.0)).unwrap(), r(1.0));
        assert_eq!(hyp2f1(r(0.3), r(0.0), r(1.4), r(0.95)).unwrap(), r(1.0));
        assert!(matches!(hyp2f1(r(1.0), r(1.0), r(-2.0), r(0.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn logarithm_closed_form() {
        for z in [0.5, -0.5, 0.95, 0.999_999, -3.0, -1e6] {
            let got = hyp2f1(r(1.0), r(1.0), r(2.0), r(z)).unwrap();
            let want = -(-z).ln_1p() / z;
            assert!(rel(got, r(want)) < 1e-13, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn elementary_closed_forms() {
        // F(a, b; b; z) = (1 - z)^{-a}
        let a = c(0.4, 0.3);
        for z in [0.3, 0.93, 0.999, -5.0, -400.0] {
            let got = hyp2f1(a, r(1.7), r(1.7), r(z)).unwrap();
            let want = (-a * (1.0 - z).ln()).exp();
            assert!(rel(got, want) < 1e-12, "z={z}: {got} vs {want}");
        }
        // F(1/2, 1; 3/2; -x²) = arctan(x)/x
        for x in [0.5f64, 2.0, 30.0] {
            let got = hyp2f1(r(0.5), r(1.0), r(1.5), r(-x * x)).unwrap();
            assert!(rel(got, r(x.atan() / x)) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn connection_matches_slow_series() {
        let cases = [
            (c(0.3, 0.2), c(0.7, -0.1), c(1.9, 0.0)),
            (c(-0.4, 1.1), c(0.25, 0.5), c(1.5, 0.0)),
            (c(1.2, 0.0), c(0.5, 0.0), c(2.3, 0.0)),
        ];
        for (a, b, cc) in cases {
            let z = 0.95;
            let got = hyp2f1(a, b, cc, r(z)).unwrap();
            let want = brute(a, b, cc, z, 4000);
            assert!(rel(got, want) < 1e-12, "{a} {b} {cc}: {got} vs {want}");
        }
    }

    #[test]
    fn degenerate_exponent_is_continuous() {
        // c - a - b = 1 exactly, and slightly off.
        let b = c(0.35, 0.4);
        let cc = r(2.0);
        let z = 0.97;
        let exact = hyp2f1(r(0.65) - c(0.0, 0.4), b, cc, r(z)).unwrap();
        let want = brute(r(0.65) - c(0.0, 0.4), b, cc, z, 6000);
        assert!(rel(exact, want) < 1e-12, "{exact} vs {want}");
        let off = hyp2f1(r(0.65 + 2e-3) - c(0.0, 0.4), b, cc, r(z)).unwrap();
        let want_off = brute(r(0.65 + 2e-3) - c(0.0, 0.4), b, cc, z, 6000);
        assert!(rel(off, want_off) < 1e-11, "{off} vs {want_off}");
    }

    #[test]
    fn unsupported_region() {
        assert!(matches!(hyp2f1(r(0.3), r(0.2), r(1.0), r(1.5)), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(r(0.3), r(0.2), r(1.0), c(0.0, 0.95)), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(r(0.3), r(0.2), r(1.0), r(1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn terminating_series_everywhere() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, cc) = (c(0.5, 0.5), r(1.5));
        for z in [3.0, -7.0, 0.99] {
            let zc = r(z);
            let want = 1.0 - 2.0 * b * zc / cc + b * (b + 1.0) * zc * zc / (cc * (cc + 1.0));
            let got = hyp2f1(r(-2.0), b, cc, zc).unwrap();
            assert!(rel(got, want) < 1e-14);
        }
    }

    #[test]
    fn gauss_sum_limit() {
        let (a, b, cc) = (c(0.3, 0.4), c(0.2, -0.1), c(1.7, 0.2));
        let want = gamma(cc).unwrap() * gamma(cc - a - b).unwrap()
            / (gamma(cc - a).unwrap() * gamma(cc - b).unwrap());
        let got = hyp2f1(a, b, cc, r(1.0 - 1e-15)).unwrap();
        assert!(rel(got, want) < 1e-6);
    }

    proptest::proptest! {
        #[test]
        fn symmetric_in_numerator_parameters(
            a in (-2.0..2.0f64, -2.0..2.0f64),
            b in (-2.0..2.0f64, -2.0..2.0f64),
            cc in (0.5..3.0f64, -2.0..2.0f64),
            x in -0.5..0.5f64,
        ) {
            let (a, b, cc) = (c(a.0, a.1), c(b.0, b.1), c(cc.0, cc.1));
            let ab = hyp2f1(a, b, cc, r(x)).unwrap();
            let ba = hyp2f1(b, a, cc, r(x)).unwrap();
            proptest::prop_assert!((ab - ba).norm() <= 1e-13 * ab.norm().max(1.0));
        }

        #[test]
        fn euler_transformation(
            a in (-2.0..2.0f64, -1.0..1.0f64),
            b in (-2.0..2.0f64, -1.0..1.0f64),
            cc in (0.5..3.0f64, -1.0..1.0f64),
            x in -0.5..0.5f64,
        ) {
            let (a, b, cc) = (c(a.0, a.1), c(b.0, b.1), c(cc.0, cc.1));
            let lhs = hyp2f1(a, b, cc, r(x)).unwrap();
            let rhs = (1.0 - r(x)).powc(cc - a - b) * hyp2f1(cc - a, cc - b, cc, r(x)).unwrap();
            proptest::prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(1.0));
        }
    }
}
