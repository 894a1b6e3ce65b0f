//! Spherical functions `φ_s(a_r)` on rank-one groups, the Harish-Chandra
//! c-function, the completely bounded multiplier norm on SO₀(1,n), the
//! Bessel-kernel vectors `f̃_s` and the Cesàro point-mass estimator.
//!
//! The working form is
//! `φ_s(a_r) = cosh(r)^{s-m/2} F(m/4 - s/2, m0/4 - s/2; (m+m0)/4; tanh²r)`,
//! evaluated with `Re s >= 0` and `r >= 0` (φ is even in both). The
//! hypergeometric argument is handed over as `1 - tanh²r = sech²r` in
//! logarithmic form, so large `r` loses no precision.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::groups::{classify, GroupFamily, RankOneGroup, SpectralParameter, StripPosition};
use crate::specfun::quadrature::gauss_legendre_15;
use crate::specfun::{
    bessel_k, gamma, hyp2f1, hyp2f1_unit_interval, integrate_panels, ln_gamma, rgamma,
    small_argument_tail, QuadratureSpec, SMALL_ARGUMENT_LOG,
};

/// Smallest radius at which `phi` hands over to the asymptotic form.
pub const ASYMPTOTIC_FLOOR: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    HypergeometricStable,
    HypergeometricDirect,
    IntegralQuadrature,
    Asymptotic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::HypergeometricStable => "hypergeometric-stable",
            Self::HypergeometricDirect => "hypergeometric-direct",
            Self::IntegralQuadrature => "integral",
            Self::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalValue {
    pub value: Complex64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CFunctionValue {
    pub value: Complex64,
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `ln cosh r` for `r >= 0` without overflow.
fn ln_cosh(r: f64) -> f64 {
    r + (-2.0 * r).exp().ln_1p() - LN_2
}

/// Radius beyond which `phi` uses the asymptotic form, if any.
pub fn asymptotic_switch(s: SpectralParameter) -> Option<f64> {
    let sigma = s.sigma.abs();
    (sigma > 0.0).then(|| ASYMPTOTIC_FLOOR.max(20.0 / sigma))
}

fn normalise(s: SpectralParameter, r: f64) -> (SpectralParameter, f64) {
    let s = if s.sigma < 0.0 { s.neg() } else { s };
    (s, r.abs())
}

/// `φ_s(a_r)` for any complex `s` and real `r`.
pub fn phi(group: RankOneGroup, s: SpectralParameter, r: f64) -> Result<SphericalValue> {
    if !s.is_finite() || !r.is_finite() {
        return Err(domain("phi needs finite s and r"));
    }
    let (s, r) = normalise(s, r);
    if r == 0.0 {
        return Ok(SphericalValue {
            value: c64(1.0),
            method: Method::HypergeometricStable,
        });
    }
    if let Some(r_switch) = asymptotic_switch(s) {
        if r > r_switch {
            return Ok(SphericalValue {
                value: phi_asymptotic(group, s, r)?,
                method: Method::Asymptotic,
            });
        }
    }
    match phi_stable(group, s, r) {
        Ok(value) => Ok(SphericalValue {
            value,
            method: Method::HypergeometricStable,
        }),
        Err(Error::Convergence { .. }) => Ok(SphericalValue {
            value: phi_direct(group, s, r)?,
            method: Method::HypergeometricDirect,
        }),
        Err(e) => Err(e),
    }
}

/// `φ_s(a_r)` by an explicitly chosen method. The integral method exists for
/// the Lorentz family only; the asymptotic form needs `Re s != 0`.
pub fn phi_by_method(
    group: RankOneGroup,
    s: SpectralParameter,
    r: f64,
    method: Method,
    spec: &QuadratureSpec,
) -> Result<SphericalValue> {
    let (s, r) = normalise(s, r);
    let value = match method {
        Method::HypergeometricStable => phi_stable(group, s, r)?,
        Method::HypergeometricDirect => phi_direct(group, s, r)?,
        Method::IntegralQuadrature => {
            if group.family != GroupFamily::SO0 {
                return Err(domain("the integral form is available for SO0(1,n) only"));
            }
            phi_lorentz_integral(group.m, s, r, spec)?
        }
        Method::Asymptotic => phi_asymptotic(group, s, r)?,
    };
    Ok(SphericalValue { value, method })
}

fn phi_stable(group: RankOneGroup, s: SpectralParameter, r: f64) -> Result<Complex64> {
    if r == 0.0 {
        return Ok(c64(1.0));
    }
    let m = group.m as f64;
    let m0 = group.m0 as f64;
    let sc = s.s();
    let a = m / 4.0 - sc / 2.0;
    let b = m0 / 4.0 - sc / 2.0;
    let c = c64((m + m0) / 4.0);
    let lc = ln_cosh(r);
    let t = r.tanh();
    let f = hyp2f1_unit_interval(a, b, c, t * t, (-2.0 * lc).exp(), -2.0 * lc)?;
    Ok(((sc - m / 2.0) * lc).exp() * f)
}

fn phi_direct(group: RankOneGroup, s: SpectralParameter, r: f64) -> Result<Complex64> {
    let m = group.m as f64;
    let m0 = group.m0 as f64;
    let sc = s.s();
    let sh = r.sinh();
    hyp2f1(
        m / 4.0 + sc / 2.0,
        m / 4.0 - sc / 2.0,
        c64((m + m0) / 4.0),
        c64(-sh * sh),
    )
}

/// `Γ((m+1)/2)/(√π Γ(m/2)) ∫₀^π sin^{m-1}θ (cosh r + sinh r cos θ)^{-(s+m/2)} dθ`.
pub fn phi_lorentz_integral(
    m: u32,
    s: SpectralParameter,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if m < 1 {
        return Err(domain("m must be at least 1"));
    }
    let mf = m as f64;
    let r = r.abs();
    let exponent = s.s() + mf / 2.0;
    let (ep, em) = (r.exp(), (-r).exp());
    let integrand = |theta: f64| {
        let half = 0.5 * theta;
        let (sh, ch) = half.sin_cos();
        // cosh r + sinh r cos θ, written without cancellation
        let base = ep * ch * ch + em * sh * sh;
        c64(theta.sin().powi(m as i32 - 1)) * (-exponent * base.ln()).exp()
    };
    // The integrand concentrates within ~e^{-r} of θ = π.
    let mut breaks = vec![0.0, 0.5 * PI];
    for scale in [256.0, 64.0, 16.0, 4.0, 1.0] {
        let theta = PI - scale * em;
        if theta > 0.5 * PI {
            breaks.push(theta);
        }
    }
    breaks.push(PI);
    let integral = integrate_panels(integrand, &breaks, spec)?;
    let constant = (ln_gamma(c64((mf + 1.0) / 2.0))? - ln_gamma(c64(mf / 2.0))?).exp()
        / PI.sqrt();
    Ok(integral * constant)
}

/// `e^{-(m/2+s)r} F(m/2+s, m/2; m; 1-e^{-2r})` for `r >= 0`.
pub fn phi_lorentz_hyp2(m: u32, s: SpectralParameter, r: f64) -> Result<Complex64> {
    if m < 1 {
        return Err(domain("m must be at least 1"));
    }
    if !(r >= 0.0) {
        return Err(domain(format!("second form needs r >= 0, got {r}")));
    }
    let mf = m as f64;
    let a = s.s() + mf / 2.0;
    let w = (-2.0 * r).exp();
    let z = -(-2.0 * r).exp_m1();
    let f = hyp2f1_unit_interval(a, c64(mf / 2.0), c64(mf), z, w, -2.0 * r)?;
    Ok((-a * r).exp() * f)
}

/// Harish-Chandra's c-function
/// `2^{m/2-s} Γ((m+m0)/4) Γ(s) / (Γ(m/4+s/2) Γ(m0/4+s/2))` for `Re s > 0`.
pub fn c_function(group: RankOneGroup, s: SpectralParameter) -> Result<CFunctionValue> {
    if !(s.sigma > 0.0) {
        return Err(domain(format!("c-function needs Re s > 0, got {s}")));
    }
    let m = group.m as f64;
    let m0 = group.m0 as f64;
    let sc = s.s();
    let log = (m / 2.0 - sc) * LN_2 + ln_gamma(c64((m + m0) / 4.0))? + ln_gamma(sc)?
        - ln_gamma(m / 4.0 + sc / 2.0)?
        - ln_gamma(m0 / 4.0 + sc / 2.0)?;
    Ok(CFunctionValue { value: log.exp() })
}

/// Leading asymptotic term `c(s) e^{(s-m/2)r}` of `φ_s(a_r)`, for `Re s > 0`.
pub fn phi_asymptotic(group: RankOneGroup, s: SpectralParameter, r: f64) -> Result<Complex64> {
    let c = c_function(group, s)?;
    Ok(c.value * ((s.s() - group.half_m()) * r.abs()).exp())
}

fn re_ln_gamma(z: Complex64) -> Result<f64> {
    Ok(ln_gamma(z)?.re)
}

fn require_interior(m: u32, s: SpectralParameter) -> Result<()> {
    match classify(s, m) {
        StripPosition::Interior => Ok(()),
        pos => Err(domain(format!(
            "s = {s} must lie inside the strip |Re s| < {}, found {pos:?}",
            0.5 * m as f64
        ))),
    }
}

/// Completely bounded Fourier multiplier norm of `φ_s` on SO₀(1, m+1).
pub fn cb_norm_lorentz(m: u32, s: SpectralParameter) -> Result<f64> {
    if m < 1 {
        return Err(domain("m must be at least 1"));
    }
    match classify(s, m) {
        StripPosition::BoundaryConstant => return Ok(1.0),
        StripPosition::Interior => {}
        _ => {
            return Err(Error::NotAMultiplier { s: s.s(), m });
        }
    }
    let h = 0.5 * m as f64;
    let sc = s.s();
    let it = Complex64::new(0.0, s.t);
    // Paired so that each bracket vanishes identically on the real or imaginary axis.
    let plus = re_ln_gamma(c64(h + s.sigma))? - re_ln_gamma(h + sc)?;
    let minus = re_ln_gamma(c64(h - s.sigma))? - re_ln_gamma(h - sc)?;
    let up = re_ln_gamma(h + it)? - re_ln_gamma(c64(h))?;
    let down = re_ln_gamma(h - it)? - re_ln_gamma(c64(h))?;
    Ok(((plus + up) + (minus + down)).exp())
}

fn sphere_area(m: u32) -> Result<f64> {
    let h = 0.5 * m as f64;
    Ok(2.0 * PI.powf(h) * rgamma(c64(h)).re)
}

/// `(Γ(m)/(π^{m/2}Γ(m/2)))^{1/2}`.
pub(crate) fn kernel_constant(m: u32) -> Result<f64> {
    let mf = m as f64;
    let log = ln_gamma(c64(mf))?.re - 0.5 * mf * PI.ln() - ln_gamma(c64(0.5 * mf))?.re;
    Ok((0.5 * log).exp())
}

/// The vector `f̃_s(x) = (Γ(m)/(π^{m/2}Γ(m/2)))^{1/2} 2^{1-m/2} K_s(|x|)/Γ(m/2+s)` at `|x| = x_norm`.
pub fn f_tilde(m: u32, s: SpectralParameter, x_norm: f64) -> Result<Complex64> {
    require_interior(m, s)?;
    if !(x_norm > 0.0) {
        return Err(domain("f_tilde needs |x| > 0"));
    }
    let mf = m as f64;
    let k = bessel_k(s.s(), x_norm, &QuadratureSpec::special_function())?;
    let scale = kernel_constant(m)? * (1.0 - 0.5 * mf).exp2();
    Ok(k * rgamma(0.5 * mf + s.s()) * scale)
}

/// Closed-form `‖f̃_s‖₂²`.
pub fn f_tilde_norm_sq(m: u32, s: SpectralParameter) -> Result<f64> {
    require_interior(m, s)?;
    let h = 0.5 * m as f64;
    let sc = s.s();
    let it = Complex64::new(0.0, s.t);
    let plus = re_ln_gamma(c64(h + s.sigma))? - re_ln_gamma(h + sc)?;
    let minus = re_ln_gamma(c64(h - s.sigma))? - re_ln_gamma(h + sc)?;
    let up = re_ln_gamma(h + it)? - re_ln_gamma(c64(h))?;
    let down = re_ln_gamma(h - it)? - re_ln_gamma(c64(h))?;
    Ok(((plus + up) + (minus + down)).exp())
}

/// `∫₀^∞ |K_s(r)|² r^{m-1} dr` by quadrature in `u = ln r`.
fn k_modulus_moment(m: u32, s: SpectralParameter, spec: &QuadratureSpec) -> Result<f64> {
    let mf = m as f64;
    let kappa = mf - 2.0 * s.sigma.abs();
    let inner = QuadratureSpec::special_function();
    let efolds = spec.truncation_efolds();
    let u_min = -(efolds + 2.0 * (1.0 + efolds / kappa).ln()) / kappa;
    let u_lo = u_min.max(SMALL_ARGUMENT_LOG);
    let u_max = (efolds + mf + 2.0 * s.s().norm() + 2.0).ln();
    let nu = s.s();
    let integrand = |u: f64| match bessel_k(nu, u.exp(), &inner) {
        Ok(k) => c64((k * (0.5 * mf * u).exp()).norm_sqr()),
        Err(_) => c64(f64::NAN),
    };
    let pieces = ((u_max - u_lo) / 2.0).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=pieces)
        .map(|k| u_lo + (u_max - u_lo) * k as f64 / pieces as f64)
        .collect();
    let mut total = integrate_panels(integrand, &breaks, spec)?.re;
    if u_min < u_lo {
        total += small_argument_tail(nu, nu.conj(), 1.0, c64(mf), u_lo)?.re;
    }
    Ok(total)
}

/// `2^{3-m}Γ(m)/Γ(m/2)²` shared by the two L² identities below.
fn moment_prefactor(m: u32) -> Result<f64> {
    let mf = m as f64;
    Ok((3.0 - mf).exp2() * (ln_gamma(c64(mf))?.re - 2.0 * ln_gamma(c64(0.5 * mf))?.re).exp())
}

/// `‖f̃_s‖₂²` by quadrature of the Bessel moment.
pub fn f_tilde_norm_sq_quadrature(m: u32, s: SpectralParameter, spec: &QuadratureSpec) -> Result<f64> {
    require_interior(m, s)?;
    let h = 0.5 * m as f64;
    let g = gamma(h + s.s())?.norm_sqr();
    Ok(moment_prefactor(m)? / g * k_modulus_moment(m, s, spec)?)
}

/// `‖h_s‖₁` for `h_s ∝ K_s(|x|)²` on `R^m`, by quadrature.
pub fn h_s_l1_norm(m: u32, s: SpectralParameter, spec: &QuadratureSpec) -> Result<f64> {
    require_interior(m, s)?;
    let h = 0.5 * m as f64;
    let sc = s.s();
    let g = gamma(h + sc)?.norm() * gamma(h - sc)?.norm();
    Ok(moment_prefactor(m)? / g * k_modulus_moment(m, s, spec)?)
}

/// Angular average of `e^{-i k ρ ω₁}` over the unit sphere `S^{m-1}`.
fn angular_average(m: u32, u: f64) -> f64 {
    match m {
        1 => u.cos(),
        2 => {
            // J₀(u) = (1/π)∫₀^π cos(u cos θ) dθ; trapezoid on the periodic integrand.
            let n = (u.abs().ceil() as usize + 32).next_multiple_of(2);
            let sum: f64 = (0..n)
                .map(|j| (u * (2.0 * PI * j as f64 / n as f64).cos()).cos())
                .sum();
            sum / n as f64
        }
        _ => {
            if u.abs() < 1e-4 {
                1.0 - u * u / 6.0
            } else {
                u.sin() / u
            }
        }
    }
}

/// `φ_s(a_r n_y)` from the Bessel-kernel integral over `R^m`, `m ∈ {1, 2, 3}`.
pub fn phi_on_na(
    m: u32,
    s: SpectralParameter,
    r: f64,
    y: &[f64],
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(1..=3).contains(&m) {
        return Err(domain(format!("phi_on_na supports m = 1, 2, 3, got {m}")));
    }
    if y.len() != m as usize {
        return Err(domain(format!("y must have {m} components, got {}", y.len())));
    }
    require_interior(m, s)?;
    let mf = m as f64;
    let sc = s.s();
    let er = r.exp();
    let k = er * y.iter().map(|v| v * v).sum::<f64>().sqrt();

    let inner = QuadratureSpec::special_function();
    let nu = sc;
    let radial = |rho: f64| -> Result<Complex64> {
        Ok(bessel_k(nu, er * rho, &inner)? * bessel_k(nu, rho, &inner)?)
    };

    // Near the origin: u = ln ρ, where the integrand decays like e^{κu}.
    let rho0 = if k > 1.0 { 1.0 / k } else { 1.0 };
    let kappa = mf - 2.0 * s.sigma.abs();
    let efolds = spec.truncation_efolds();
    let u_min = rho0.ln() - (efolds + 2.0 * (1.0 + efolds / kappa).ln()) / kappa;
    let cut = rho0.ln() + SMALL_ARGUMENT_LOG - r.max(0.0);
    let u_lo = u_min.max(cut);
    let lower = |u: f64| {
        let rho = u.exp();
        match radial(rho) {
            Ok(v) => v * (mf * u).exp() * angular_average(m, k * rho),
            Err(_) => c64(f64::NAN),
        }
    };
    let pieces = ((rho0.ln() - u_lo) / 2.0).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=pieces)
        .map(|j| u_lo + (rho0.ln() - u_lo) * j as f64 / pieces as f64)
        .collect();
    let mut near = integrate_panels(lower, &breaks, spec)?;
    if u_min < u_lo {
        near += small_argument_tail(nu, nu, er, c64(mf), u_lo)?;
    }

    // Away from the origin: exponential decay at rate 1 + e^r, oscillation at frequency k.
    let rho_max = rho0.max((efolds + 10.0 + mf) / (1.0 + er)) * 2.0;
    let upper = |rho: f64| match radial(rho) {
        Ok(v) => v * rho.powi(m as i32 - 1) * angular_average(m, k * rho),
        Err(_) => c64(f64::NAN),
    };
    let span = rho_max - rho0;
    let count = if k > 0.0 {
        ((span * k / PI).ceil() as usize).clamp(8, 4000)
    } else {
        8
    };
    let breaks: Vec<f64> = (0..=count)
        .map(|j| rho0 + span * j as f64 / count as f64)
        .collect();
    let far = integrate_panels(upper, &breaks, spec)?;

    let integral = (near + far) * sphere_area(m)?;
    let prefactor = PI.powf(-0.5 * mf)
        * (2.0 - mf).exp2()
        * (0.5 * mf * r).exp()
        * (ln_gamma(c64(mf))?.re - ln_gamma(c64(0.5 * mf))?.re).exp();
    Ok(integral * prefactor * rgamma(0.5 * mf + sc) * rgamma(0.5 * mf - sc))
}

/// Cesàro estimator `(1/n)∫_n^{2n} e^{i r x0} φ(r) dr` of the point mass at `x0`.
///
/// # Panics
/// Panics if `n == 0`.
pub fn cesaro_extract<F>(phi: F, x0: f64, n: u64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    assert!(n >= 1, "Cesàro window needs n >= 1");
    const PANEL: f64 = 0.5;
    let a = n as f64;
    let panels = (a / PANEL).ceil() as u64;
    let width = a / panels as f64;
    let integrand = |r: f64| Complex64::from_polar(1.0, r * x0) * phi(r);
    let mut sum = c64(0.0);
    for j in 0..panels {
        let lo = a + j as f64 * width;
        sum += gauss_legendre_15(&integrand, lo, lo + width);
    }
    sum / a
}
