//! The identity suite behind `sphmult verify`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use sphmult_core::groups::{params_for, GroupFamily, RankOneGroup, SpectralParameter};
use sphmult_core::lorentz_geom::{coefficient_pairing, fhat_check, make_a, phi_via_rho};
use sphmult_core::specfun::{
    gamma, weber_schafheitlin_quadrature, weber_schafheitlin_rhs, QuadratureSpec,
};
use sphmult_core::spherical::{
    c_function, cb_norm_lorentz, cesaro_extract, h_s_l1_norm, phi, phi_by_method, phi_lorentz_hyp2,
    phi_lorentz_integral, phi_on_na, Method,
};
use sphmult_core::tree_radial::{
    bz_counts, enumerate_ball, radial_convolve, sphere_size, ConvolutionTable, FreeProductSpec,
    RadialFn, SPHERE_CAP,
};
use sphmult_core::Result;

use crate::config::RunConfig;
use crate::{emit, Failure};

type GammaFn = dyn Fn(Complex64) -> Result<Complex64> + Sync;

struct Context {
    gamma: Box<GammaFn>,
}

#[derive(Debug)]
struct Check {
    id: &'static str,
    anchor: &'static str,
    tolerance: f64,
    run: fn(&Context) -> Result<f64>,
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub check_id: &'static str,
    pub paper_anchor: &'static str,
    pub achieved_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The `k`-th point of an additive recurrence in the unit square.
fn unit_point(k: usize) -> (f64, f64) {
    // reciprocals of the plastic number and its square
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_3;
    let k = k as f64 + 1.0;
    ((0.5 + A1 * k).fract(), (0.5 + A2 * k).fract())
}

fn grid(count: usize, re: (f64, f64), im: (f64, f64)) -> impl Iterator<Item = Complex64> {
    (0..count).map(move |k| {
        let (u, v) = unit_point(k);
        c(re.0 + (re.1 - re.0) * u, im.0 + (im.1 - im.0) * v)
    })
}

fn relative(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

fn away_from_poles(z: &Complex64) -> bool {
    z.im.abs() > 0.05 || (z.re - z.re.round()).abs() > 0.05
}

fn gamma_duplication(ctx: &Context) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in grid(100, (0.3, 4.0), (-4.0, 4.0)) {
        let lhs = (ctx.gamma)(z)? * (ctx.gamma)(z + 0.5)?;
        let rhs = (1.0 - 2.0 * z).exp2() * PI.sqrt() * (ctx.gamma)(2.0 * z)?;
        worst = worst.max(relative(lhs, rhs));
    }
    Ok(worst)
}

fn gamma_recurrence(ctx: &Context) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in grid(100, (-4.0, 4.0), (-4.0, 4.0)).filter(away_from_poles) {
        worst = worst.max(relative((ctx.gamma)(z + 1.0)?, z * (ctx.gamma)(z)?));
    }
    Ok(worst)
}

fn gamma_conjugation(ctx: &Context) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in grid(100, (-4.0, 6.0), (-6.0, 6.0)).filter(away_from_poles) {
        worst = worst.max(relative((ctx.gamma)(z.conj())?, (ctx.gamma)(z)?.conj()));
    }
    Ok(worst)
}

fn gamma_reflection(ctx: &Context) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in grid(100, (-3.0, 3.0), (-3.0, 3.0)).filter(away_from_poles) {
        let lhs = (ctx.gamma)(z)? * (ctx.gamma)(1.0 - z)?;
        worst = worst.max(relative(lhs, PI / (PI * z).sin()));
    }
    Ok(worst)
}

fn interior_points(m: u32, count: usize) -> impl Iterator<Item = SpectralParameter> {
    let h = 0.5 * m as f64;
    grid(count, (-0.9 * h, 0.9 * h), (-3.0, 3.0)).map(SpectralParameter::from)
}

fn lorentz(m: u32) -> Result<RankOneGroup> {
    params_for(GroupFamily::SO0, m + 1)
}

fn triple_form(_: &Context) -> Result<f64> {
    let spec = QuadratureSpec::default().with_relative(1e-11);
    let mut worst = 0.0f64;
    for m in 1..=4 {
        let group = lorentz(m)?;
        for s in interior_points(m, 4) {
            for r in [0.1, 1.0, 5.0] {
                let integral = phi_lorentz_integral(m, s, r, &spec)?;
                let second = phi_lorentz_hyp2(m, s, r)?;
                let third = phi_by_method(group, s, r, Method::HypergeometricDirect, &spec)?.value;
                worst = worst.max(relative(second, integral)).max(relative(third, integral));
            }
        }
    }
    Ok(worst)
}

fn norm_identity(_: &Context) -> Result<f64> {
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let mut worst = 0.0f64;
    for m in 1..=3 {
        for s in interior_points(m, 3) {
            let closed = cb_norm_lorentz(m, s)?;
            worst = worst.max((h_s_l1_norm(m, s, &spec)? - closed).abs() / closed);
        }
    }
    Ok(worst)
}

fn axis_normalization(_: &Context) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in 1..=4 {
        let h = 0.5 * m as f64;
        for k in 0..20 {
            let u = unit_point(k).0;
            let on_real = SpectralParameter::real((2.0 * u - 1.0) * 0.99 * h);
            let on_imaginary = SpectralParameter::imaginary((2.0 * u - 1.0) * 20.0);
            for s in [on_real, on_imaginary] {
                worst = worst.max((cb_norm_lorentz(m, s)? - 1.0).abs());
            }
        }
        for sigma in [h, -h] {
            worst = worst.max((cb_norm_lorentz(m, SpectralParameter::real(sigma))? - 1.0).abs());
        }
    }
    Ok(worst)
}

fn norm_divergence(_: &Context) -> Result<f64> {
    let norm = |eps: f64| cb_norm_lorentz(2, SpectralParameter::new(1.0 - eps, 1.0));
    for k in 2..=6 {
        if norm(10f64.powi(-k))? <= 10f64.powi(k - 1) {
            return Ok(f64::INFINITY);
        }
    }
    Ok((norm(0.5e-4)? / norm(1e-4)? - 2.0).abs())
}

fn weber_schafheitlin(_: &Context) -> Result<f64> {
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let triples = [
        (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
        (c(0.3, 0.0), c(0.1, 0.0), c(-0.5, 0.0)),
        (c(0.2, 1.0), c(0.2, -1.0), c(0.1, 0.0)),
        (c(0.0, 2.0), c(0.1, 0.5), c(-1.0, 0.3)),
        (c(0.25, 0.0), c(0.0, 0.0), c(0.5, 0.0)),
    ];
    let mut worst = 0.0f64;
    for (nu, mu, rho) in triples {
        let lhs = weber_schafheitlin_quadrature(nu, mu, rho, &spec)?;
        worst = worst.max(relative(lhs, weber_schafheitlin_rhs(nu, mu, rho)?));
    }
    Ok(worst)
}

fn asymptotics(_: &Context) -> Result<f64> {
    let spec = QuadratureSpec::default();
    let r = 20.0;
    let mut worst = 0.0f64;
    for m in 1..=2u32 {
        let group = lorentz(m)?;
        let mf = m as f64;
        for t in [0.0, 1.0, -2.0] {
            let s = SpectralParameter::new(0.3 * mf, t);
            let value = phi_by_method(group, s, r, Method::HypergeometricStable, &spec)?.value;
            let scaled = value * ((0.5 * mf - s.s()) * r).exp();
            worst = worst.max((scaled - c_function(group, s)?.value).norm());
        }
    }
    Ok(worst)
}

fn c_function_boundary(_: &Context) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut groups: Vec<RankOneGroup> = Vec::new();
    for fam in [GroupFamily::SO0, GroupFamily::SU, GroupFamily::Sp] {
        for n in 2..=4 {
            groups.push(params_for(fam, n)?);
        }
    }
    groups.push(RankOneGroup::f4());
    for g in groups {
        let s = SpectralParameter::real(g.half_m());
        worst = worst.max((c_function(g, s)?.value - 1.0).norm());
    }
    Ok(worst)
}

fn coefficient_via_rho(_: &Context) -> Result<f64> {
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let mut worst = 0.0f64;
    for n in 2..=3usize {
        let group = params_for(GroupFamily::SO0, n as u32)?;
        for (k, s) in interior_points(n as u32 - 1, 3).enumerate() {
            let r = 0.3 + 0.6 * k as f64;
            let via = phi_via_rho(n, s, &make_a(r, n)?, &spec)?;
            worst = worst.max((via - phi(group, s, r)?.value).norm());
        }
    }
    Ok(worst)
}

fn coefficient_pairing_check(_: &Context) -> Result<f64> {
    let spec = QuadratureSpec::default().with_relative(1e-9);
    let s = SpectralParameter::new(0.15, 0.6);
    let (r, y) = (0.4, 0.9);
    Ok((coefficient_pairing(s, r, y, &spec)? - phi_on_na(1, s, r, &[y], &spec)?).norm())
}

fn fourier_pair(_: &Context) -> Result<f64> {
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let mut worst = 0.0f64;
    for s in grid(3, (0.1, 1.0), (-1.0, 1.0)).map(SpectralParameter::from) {
        for y in [0.5, 1.0, 2.0] {
            let (direct, closed) = fhat_check(1, s, y, &spec)?;
            worst = worst.max(relative(direct, closed));
        }
    }
    Ok(worst)
}

fn tree_specs() -> Result<Vec<FreeProductSpec>> {
    [(3, 0), (4, 0), (0, 2), (1, 1), (2, 1)]
        .into_iter()
        .map(|(m, n)| FreeProductSpec::new(m, n))
        .collect()
}

fn tree_sphere_sizes(_: &Context) -> Result<f64> {
    let mut mismatches = 0u32;
    for spec in tree_specs()? {
        let ball = enumerate_ball(&spec, 6, SPHERE_CAP)?;
        for (n, sphere) in ball.iter().enumerate() {
            mismatches += u32::from(sphere.len() as u64 != sphere_size(&spec, n as u32));
        }
    }
    Ok(f64::from(mismatches))
}

fn tree_convolution(_: &Context) -> Result<f64> {
    let mut mismatches = 0u32;
    for spec in tree_specs()? {
        let table = ConvolutionTable::new(spec, 6)?;
        for i in 0..=3 {
            for j in 0..=3 {
                let f = RadialFn::<Rational64>::shell_indicator(i);
                let g = RadialFn::<Rational64>::shell_indicator(j);
                mismatches += u32::from(radial_convolve(&f, &g, &table)? != radial_convolve(&g, &f, &table)?);
            }
        }
    }
    Ok(f64::from(mismatches))
}

fn tree_pair_counts(_: &Context) -> Result<f64> {
    let mut spread = 0u64;
    for spec in tree_specs()? {
        let ball = enumerate_ball(&spec, 2, SPHERE_CAP)?;
        let words: Vec<_> = ball.iter().flatten().collect();
        for x in &words {
            for y in &words {
                let counts: HashMap<_, u64> = bz_counts(&spec, x, y, 4)?;
                let hi = counts.values().max().copied().unwrap_or(0);
                let lo = counts.values().min().copied().unwrap_or(0);
                spread = spread.max(hi - lo);
            }
        }
    }
    Ok(spread as f64)
}

fn cesaro(_: &Context) -> Result<f64> {
    let synthetic = |r: f64| 3.0 * c(0.0, -2.0 * r).exp() + c((-r).exp(), 0.0);
    let at_frequency = (cesaro_extract(synthetic, 2.0, 10_000) - 3.0).norm();
    let off_frequency = cesaro_extract(synthetic, 1.0, 10_000).norm();
    Ok(at_frequency.max(off_frequency))
}

const CHECKS: &[Check] = &[
    Check { id: "gamma_duplication", anchor: "gamma duplication formula", tolerance: 1e-12, run: gamma_duplication },
    Check { id: "gamma_recurrence", anchor: "gamma recurrence", tolerance: 1e-12, run: gamma_recurrence },
    Check { id: "gamma_conjugation", anchor: "gamma conjugation symmetry", tolerance: 1e-12, run: gamma_conjugation },
    Check { id: "gamma_reflection", anchor: "gamma reflection formula", tolerance: 1e-12, run: gamma_reflection },
    Check { id: "triple_form", anchor: "integral and hypergeometric forms of the Lorentz spherical function", tolerance: 1e-8, run: triple_form },
    Check { id: "norm_identity", anchor: "multiplier norm equals kernel L1 norm", tolerance: 1e-6, run: norm_identity },
    Check { id: "axis_normalization", anchor: "unit norm on the axes and at the strip edge", tolerance: 1e-12, run: axis_normalization },
    Check { id: "norm_divergence", anchor: "norm blow-up at the strip boundary", tolerance: 0.2, run: norm_divergence },
    Check { id: "weber_schafheitlin", anchor: "Bessel product integral closed form", tolerance: 1e-7, run: weber_schafheitlin },
    Check { id: "asymptotics", anchor: "large-radius asymptotics and the c-function", tolerance: 1e-4, run: asymptotics },
    Check { id: "c_function_boundary", anchor: "c-function at the strip edge", tolerance: 1e-12, run: c_function_boundary },
    Check { id: "coefficient_via_rho", anchor: "spherical function as a sphere-representation coefficient", tolerance: 1e-6, run: coefficient_via_rho },
    Check { id: "coefficient_pairing", anchor: "coefficient pairing on the line", tolerance: 1e-5, run: coefficient_pairing_check },
    Check { id: "fourier_pair", anchor: "Fourier transform of the Poisson-type kernel", tolerance: 1e-6, run: fourier_pair },
    Check { id: "tree_sphere_sizes", anchor: "sphere sizes of the homogeneous tree", tolerance: 0.0, run: tree_sphere_sizes },
    Check { id: "tree_convolution", anchor: "commutativity of radial convolution", tolerance: 0.0, run: tree_convolution },
    Check { id: "tree_pair_counts", anchor: "pair counts independent of the target word", tolerance: 0.0, run: tree_pair_counts },
    Check { id: "cesaro", anchor: "Cesaro extraction of an oscillating coefficient", tolerance: 1e-2, run: cesaro },
];

fn select(requested: Option<&[String]>) -> std::result::Result<Vec<&'static Check>, Failure> {
    let Some(ids) = requested else {
        return Ok(CHECKS.iter().collect());
    };
    let ids: Vec<&str> = ids.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if ids.is_empty() {
        return Err(Failure::config("the check selection is empty"));
    }
    ids.iter()
        .map(|id| {
            CHECKS.iter().find(|c| c.id == *id).ok_or_else(|| {
                let known: Vec<&str> = CHECKS.iter().map(|c| c.id).collect();
                Failure::config(format!("unknown check '{id}'; known: {}", known.join(", ")))
            })
        })
        .collect()
}

fn context(perturbation: f64) -> Context {
    let scale = 1.0 + perturbation;
    Context {
        gamma: Box::new(move |z| Ok(gamma(z)? * scale)),
    }
}

pub fn evaluate(cfg: &RunConfig) -> std::result::Result<Vec<Outcome>, Failure> {
    let checks = select(cfg.checks.as_deref())?;
    let ctx = context(cfg.perturb_gamma);
    Ok(checks
        .into_iter()
        .map(|check| {
            let tolerance = cfg.tol.unwrap_or(check.tolerance);
            let achieved = match (check.run)(&ctx) {
                Ok(v) if v.is_finite() => Some(v),
                Ok(_) => None,
                Err(e) => {
                    eprintln!("{}: {e}", check.id);
                    None
                }
            };
            Outcome {
                check_id: check.id,
                paper_anchor: check.anchor,
                achieved_error: achieved,
                tolerance,
                pass: achieved.is_some_and(|v| v <= tolerance),
            }
        })
        .collect())
}

pub fn run(cfg: &RunConfig) -> std::result::Result<u8, Failure> {
    let outcomes = evaluate(cfg)?;
    let text = serde_json::to_string_pretty(&outcomes).map_err(|e| Failure::config(e.to_string()))? + "\n";
    emit(cfg, &text)?;
    for o in outcomes.iter().filter(|o| !o.pass) {
        eprintln!("FAILED {}: {:?} > {}", o.check_id, o.achieved_error, o.tolerance);
    }
    Ok(if outcomes.iter().all(|o| o.pass) { 0 } else { Failure::VERIFICATION })
}
