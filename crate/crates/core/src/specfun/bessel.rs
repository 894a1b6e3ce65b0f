//! Modified Bessel function of the second kind of complex order, from
//! `K_ν(x) = ∫₀^∞ exp(-x cosh t) cosh(νt) dt`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma, rgamma};
use super::quadrature::{integrate_panels, QuadratureSpec};
use crate::error::{domain, Error, Result};

const MAX_INITIAL_PANELS: usize = 2000;
/// Largest argument at which the ascending series replaces the integral.
const SERIES_MAX_X: f64 = 2.0;
/// Smallest `|sin πν|` at which the series is used.
const SERIES_MIN_SINE: f64 = 0.25;

/// `-ln` of the integrand envelope, `x (cosh t - 1) - |Re ν| t`, for the
/// exponentially scaled integrand.
fn envelope_exponent(x: f64, nu_re: f64, t: f64) -> f64 {
    let s = (0.5 * t).sinh();
    2.0 * x * s * s - nu_re * t
}

/// Cut-off T with `envelope(T) >= envelope_min + efolds`, together with the
/// location and value of the envelope minimum.
fn truncation_point(x: f64, nu_re: f64, efolds: f64) -> (f64, f64, f64) {
    let t_peak = if nu_re > 0.0 { (nu_re / x).asinh() } else { 0.0 };
    let h_min = envelope_exponent(x, nu_re, t_peak);
    let target = h_min + efolds;
    let mut hi = t_peak + 1.0;
    while envelope_exponent(x, nu_re, hi) < target {
        hi = t_peak + 2.0 * (hi - t_peak);
    }
    let mut lo = t_peak;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if envelope_exponent(x, nu_re, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    (hi, t_peak, h_min)
}

/// `e^x K_ν(x)`.
pub fn bessel_k_scaled(nu: Complex64, x: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    spec.validate()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain(format!("bessel_k needs x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(domain("bessel_k needs a finite order"));
    }
    let nu_re = nu.re.abs();
    let nu = Complex64::new(nu_re, if nu.re < 0.0 { -nu.im } else { nu.im });
    if x <= SERIES_MAX_X && (PI * nu).sin().norm() >= SERIES_MIN_SINE {
        return Ok(series(nu, x) * x.exp());
    }
    let (t_end, t_peak, h_min) = truncation_point(x, nu_re, spec.truncation_efolds());

    let integrand = |t: f64| {
        let s = (0.5 * t).sinh();
        let base = -2.0 * x * s * s;
        0.5 * ((base + nu * t).exp() + (base - nu * t).exp())
    };

    // Resolve the oscillation of cos(Im ν t) and the envelope peak up front.
    let cycles = (t_end * nu.im.abs() / PI).ceil() as usize;
    let count = cycles.clamp(4, MAX_INITIAL_PANELS);
    let mut breaks: Vec<f64> = (0..=count).map(|k| t_end * k as f64 / count as f64).collect();
    if t_peak > 0.0 && t_peak < t_end {
        breaks.push(t_peak);
        breaks.sort_by(f64::total_cmp);
    }
    let value = integrate_panels(integrand, &breaks, spec)?;

    // Tail bound: ∫_T^∞ e^{-h(t)} dt <= e^{-h(T)} / h'(T) for the convex exponent h.
    let slope = x * t_end.sinh() - nu_re;
    let tail = (-envelope_exponent(x, nu_re, t_end)).exp() / slope;
    let allowed = spec.relative_tolerance * value.norm() + spec.absolute_tolerance * (-h_min).exp();
    if !(slope > 0.0) || tail > allowed {
        return Err(Error::Convergence {
            what: "Bessel K tail truncation",
            estimate: value,
            achieved_error: tail,
        });
    }
    Ok(value)
}

/// `K_ν(x) = π (I_{-ν}(x) - I_ν(x)) / (2 sin νπ)` from the ascending series of `I`.
/// The integral loses relative accuracy to cancellation at tiny `x` and complex `ν`.
fn series(nu: Complex64, x: f64) -> Complex64 {
    let quarter_sq = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();
    let bessel_i = |order: Complex64| {
        let mut term = (order * ln_half).exp() * rgamma(order + 1.0);
        let mut sum = term;
        for k in 1..1000 {
            let kf = k as f64;
            term *= quarter_sq / (kf * (order + kf));
            sum += term;
            if kf > order.norm() && term.norm() <= 0.5 * f64::EPSILON * sum.norm() {
                break;
            }
        }
        sum
    };
    PI * (bessel_i(-nu) - bessel_i(nu)) / (2.0 * (PI * nu).sin())
}

/// K_ν(x) for complex order ν and x > 0.
pub fn bessel_k(nu: Complex64, x: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    Ok(bessel_k_scaled(nu, x, spec)? * (-x).exp())
}

/// The four-Gamma product `Γ((1+ν+μ-ρ)/2) Γ((1+ν-μ-ρ)/2) Γ((1-ν+μ-ρ)/2) Γ((1-ν-μ-ρ)/2)`.
pub fn weber_schafheitlin_gamma_product(
    nu: Complex64,
    mu: Complex64,
    rho: Complex64,
) -> Result<Complex64> {
    check_admissible(nu, mu, rho)?;
    let mut product = Complex64::new(1.0, 0.0);
    for (sn, sm) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        product *= gamma((1.0 + sn * nu + sm * mu - rho) / 2.0)?;
    }
    Ok(product)
}

/// Closed form of `∫₀^∞ K_ν(r) K_μ(r) r^{-ρ} dr`: the four-Gamma product over `2^{ρ+2} Γ(1-ρ)`.
pub fn weber_schafheitlin_rhs(nu: Complex64, mu: Complex64, rho: Complex64) -> Result<Complex64> {
    let product = weber_schafheitlin_gamma_product(nu, mu, rho)?;
    let two_pow = ((rho + 2.0) * std::f64::consts::LN_2).exp();
    Ok(product * rgamma(1.0 - rho) / two_pow)
}

fn check_admissible(nu: Complex64, mu: Complex64, rho: Complex64) -> Result<()> {
    let margin = admissibility_margin(nu, mu, rho);
    if !(margin > 0.0) {
        return Err(domain(format!(
            "need Re(1 ± ν ± μ - ρ) > 0, got ν = {nu}, μ = {mu}, ρ = {rho}"
        )));
    }
    Ok(())
}

/// `min Re(1 ± ν ± μ - ρ)` over the four sign choices.
pub fn admissibility_margin(nu: Complex64, mu: Complex64, rho: Complex64) -> f64 {
    1.0 - rho.re - nu.re.abs() - mu.re.abs()
}

/// `∫₀^∞ K_ν(r) K_μ(r) r^{-ρ} dr` by quadrature in `u = ln r`.
pub fn weber_schafheitlin_quadrature(
    nu: Complex64,
    mu: Complex64,
    rho: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_admissible(nu, mu, rho)?;
    let kappa = admissibility_margin(nu, mu, rho);
    let inner = QuadratureSpec::special_function();
    bessel_product_integral(nu, mu, 1.0 - rho, kappa, spec, &inner)
}

/// `∫₀^∞ K_ν(r) K_μ(r) r^{p-1} dr` given the small-r decay rate `kappa` of the
/// integrand in `u = ln r`.
pub(crate) fn bessel_product_integral(
    nu: Complex64,
    mu: Complex64,
    p: Complex64,
    kappa: f64,
    spec: &QuadratureSpec,
    inner: &QuadratureSpec,
) -> Result<Complex64> {
    let efolds = spec.truncation_efolds();
    // Log factors of K_0 near r = 0 are absorbed by the extra e-folds.
    let u_min = -(efolds + 2.0 * (1.0 + efolds / kappa).ln()) / kappa;
    let u_lo = u_min.max(SMALL_ARGUMENT_LOG);
    let r_max = efolds + 2.0 * (p.norm() + nu.norm() + mu.norm()) + 2.0;
    let u_max = r_max.ln();
    let integrand = |u: f64| -> Complex64 {
        let x = u.exp();
        let half = (0.5 * p * u).exp();
        let k_nu = bessel_k(nu, x, inner);
        let k_mu = bessel_k(mu, x, inner);
        match (k_nu, k_mu) {
            (Ok(a), Ok(b)) => (a * half) * (b * half),
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let pieces = ((u_max - u_lo) / 2.0).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=pieces)
        .map(|k| u_lo + (u_max - u_lo) * k as f64 / pieces as f64)
        .collect();
    let body = integrate_panels(integrand, &breaks, spec)?;
    if u_min < u_lo {
        Ok(body + small_argument_tail(nu, mu, 1.0, p, u_lo)?)
    } else {
        Ok(body)
    }
}

/// Log-argument below which products of `K` are integrated from their
/// small-argument expansion; the neglected terms are `O(e^{2u})` relative.
pub(crate) const SMALL_ARGUMENT_LOG: f64 = -40.0;

/// Orders closer to zero than this are moved out to it before expanding.
const MIN_EXPANSION_ORDER: f64 = 1e-4;

/// `K_ν(x) ≈ a x^{-ν} + b x^{ν}` as `[(a, -ν), (b, ν)]`, with `Re ν ≥ 0`.
fn small_argument_terms(nu: Complex64) -> Result<[(Complex64, Complex64); 2]> {
    let mut nu = if nu.re < 0.0 { -nu } else { nu };
    if nu.norm() < MIN_EXPANSION_ORDER {
        nu = Complex64::new(MIN_EXPANSION_ORDER, 0.0);
    }
    let ln2 = std::f64::consts::LN_2;
    let a = 0.5 * gamma(nu)? * (nu * ln2).exp();
    // At an integer order the second term is a logarithmic correction far below the first.
    let b = gamma(-nu).map_or(Complex64::new(0.0, 0.0), |g| 0.5 * g * (-nu * ln2).exp());
    Ok([(a, -nu), (b, nu)])
}

/// `∫_{-∞}^{u_c} K_ν(λe^u) K_μ(e^u) e^{pu} du` from the small-argument expansions.
pub(crate) fn small_argument_tail(
    nu: Complex64,
    mu: Complex64,
    lambda: f64,
    p: Complex64,
    u_c: f64,
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (a, e) in small_argument_terms(nu)? {
        for (b, f) in small_argument_terms(mu)? {
            let rate = p + e + f;
            total += a * b * (e * lambda.ln() + rate * u_c).exp() / rate;
        }
    }
    Ok(total)
}
