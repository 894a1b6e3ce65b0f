//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphmult_core::groups::{params_for, GroupFamily, SpectralParameter};
use sphmult_core::lorentz_geom::{coefficient_pairing, fhat_check, make_a, make_k, make_n, phi_via_rho};
use sphmult_core::specfun::{
    admissibility_margin, gamma, weber_schafheitlin_quadrature, weber_schafheitlin_rhs, QuadratureSpec,
};
use sphmult_core::spherical::{
    c_function, cb_norm_lorentz, cesaro_extract, h_s_l1_norm, phi, phi_by_method, phi_lorentz_hyp2,
    phi_lorentz_integral, phi_on_na, Method,
};
use sphmult_core::tree_radial::{
    bz_counts, enumerate_ball, l1_norm, multiply, radial_convolve, radialize, radialize_two_point,
    sphere_size, ConvolutionTable, FreeProductSpec, RadialFn, Word, WordFn, SPHERE_CAP,
};
use sphmult_core::Complex64;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn interior(rng: &mut ChaCha8Rng, m: u32, t_max: f64) -> SpectralParameter {
    let h = 0.5 * m as f64;
    SpectralParameter::new(rng.gen_range(-0.95 * h..0.95 * h), rng.gen_range(-t_max..t_max))
}

fn lorentz(m: u32) -> sphmult_core::groups::RankOneGroup {
    params_for(GroupFamily::SO0, m + 1).unwrap()
}

fn within_time(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn triple_formula() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(1);
    let spec = QuadratureSpec::default().with_relative(1e-11);
    let mut worst = 0.0f64;
    let mut count = 0;
    for m in 1..=4 {
        for _ in 0..20 {
            let s = interior(&mut rng, m, 3.0);
            for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
                let integral = phi_lorentz_integral(m, s, r, &spec).unwrap();
                let exp_form = phi_lorentz_hyp2(m, s, r).unwrap();
                let sinh_form = phi_by_method(lorentz(m), s, r, Method::HypergeometricDirect, &spec)
                    .unwrap()
                    .value;
                worst = worst
                    .max(rel(exp_form, integral))
                    .max(rel(sinh_form, integral))
                    .max(rel(sinh_form, exp_form));
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-8 && within_time(elapsed, 60),
        format!("max relative difference {worst:.2e} over {count} points, {elapsed:.2?}"),
    )
}

fn norm_identity() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(2);
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let mut worst = 0.0f64;
    for m in 1..=3 {
        for _ in 0..10 {
            let s = interior(&mut rng, m, 3.0);
            let closed = cb_norm_lorentz(m, s).unwrap();
            let quad = h_s_l1_norm(m, s, &spec).unwrap();
            worst = worst.max((quad - closed).abs());
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-6 && within_time(elapsed, 120),
        format!("max |closed - quadrature| {worst:.2e}, {elapsed:.2?}"),
    )
}

fn axis_normalization() -> Verdict {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    let mut edge_exact = true;
    for m in 1..=4 {
        let h = 0.5 * m as f64;
        for _ in 0..50 {
            let real = SpectralParameter::real(rng.gen_range(-h..h) * (1.0 - 1e-9));
            let imaginary = SpectralParameter::imaginary(rng.gen_range(-50.0..50.0));
            for s in [real, imaginary] {
                worst = worst.max((cb_norm_lorentz(m, s).unwrap() - 1.0).abs());
            }
        }
        for sigma in [h, -h] {
            edge_exact &= cb_norm_lorentz(m, SpectralParameter::real(sigma)).unwrap() == 1.0;
        }
    }
    verdict(
        worst <= 1e-12 && edge_exact,
        format!("max |norm - 1| on the axes {worst:.2e}; exactly 1 at ±m/2: {edge_exact}"),
    )
}

fn divergence() -> Verdict {
    let norm = |eps: f64| cb_norm_lorentz(2, SpectralParameter::new(1.0 - eps, 1.0)).unwrap();
    let mut growth = true;
    let mut values = Vec::new();
    for k in 2..=6 {
        let v = norm(10f64.powi(-k));
        growth &= v > 10f64.powi(k - 1);
        values.push(format!("{v:.3e}"));
    }
    let ratio = norm(0.5e-4) / norm(1e-4);
    verdict(
        growth && (1.8..=2.2).contains(&ratio),
        format!("norms at 1-10^-k, k=2..6: [{}]; ratio at 1e-4 {ratio:.4}", values.join(", ")),
    )
}

fn weber_schafheitlin() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(5);
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let mut triples = vec![(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))];
    while triples.len() < 20 {
        let nu = c(rng.gen_range(-0.4..0.4), rng.gen_range(-3.0..3.0));
        let mu = c(rng.gen_range(-0.4..0.4), rng.gen_range(-3.0..3.0));
        let rho = c(rng.gen_range(-2.0..0.6), rng.gen_range(-1.0..1.0));
        if admissibility_margin(nu, mu, rho) >= 0.1 {
            triples.push((nu, mu, rho));
        }
    }
    let mut worst = 0.0f64;
    for (nu, mu, rho) in triples {
        let lhs = weber_schafheitlin_quadrature(nu, mu, rho, &spec).unwrap();
        let rhs = weber_schafheitlin_rhs(nu, mu, rho).unwrap();
        worst = worst.max(rel(lhs, rhs));
    }
    let k0 = weber_schafheitlin_quadrature(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), &spec).unwrap();
    let k0_err = rel(k0, c(PI * PI / 4.0, 0.0));
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-7 && k0_err <= 1e-7 && within_time(elapsed, 30),
        format!("max relative difference {worst:.2e}; ∫K0² vs π²/4 {k0_err:.2e}; {elapsed:.2?}"),
    )
}

fn asymptotics() -> Verdict {
    let mut rng = rng(6);
    let spec = QuadratureSpec::default();
    let r = 20.0;
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for m in 1..=2u32 {
        let group = lorentz(m);
        let mf = m as f64;
        for _ in 0..10 {
            let s = SpectralParameter::new(rng.gen_range(0.1 * mf..0.45 * mf), rng.gen_range(-3.0..3.0));
            let value = phi_by_method(group, s, r, Method::HypergeometricStable, &spec).unwrap().value;
            let err = (value * ((0.5 * mf - s.s()) * r).exp() - c_function(group, s).unwrap().value).norm();
            if err > 1e-4 {
                failing.push(format!("m={m} s={:.3}{:+.3}i err={err:.1e}", s.sigma, s.t));
            }
            worst = worst.max(err);
        }
    }
    let mut edge = 0.0f64;
    for m in 1..=4 {
        edge = edge.max((c_function(lorentz(m), SpectralParameter::real(0.5 * m as f64)).unwrap().value - 1.0).norm());
    }
    let mut detail = format!("max error at r=20 {worst:.2e}; |c(m/2) - 1| {edge:.1e}");
    if !failing.is_empty() {
        detail += &format!("; over 1e-4: {}", failing.join(", "));
    }
    verdict(worst <= 1e-4 && edge <= 1e-12, detail)
}

fn representation_coefficient() -> Verdict {
    let mut rng = rng(7);
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let mut worst_rho = 0.0f64;
    for n in [2usize, 3] {
        let group = params_for(GroupFamily::SO0, n as u32).unwrap();
        for _ in 0..10 {
            let s = interior(&mut rng, n as u32 - 1, 3.0);
            let r = rng.gen_range(-2.5..2.5);
            let via = phi_via_rho(n, s, &make_a(r, n).unwrap(), &spec).unwrap();
            worst_rho = worst_rho.max((via - phi(group, s, r).unwrap().value).norm());
        }
    }
    // bi-invariance: k a_r k' gives the same coefficient
    let (s, r) = (SpectralParameter::new(0.2, 0.9), 1.1);
    let rot = |a: f64| {
        let (sn, cs) = a.sin_cos();
        make_k(&nalgebra::DMatrix::from_row_slice(2, 2, &[cs, -sn, sn, cs])).unwrap()
    };
    let g = &(&rot(0.7) * &make_a(r, 2).unwrap()) * &rot(-2.1);
    let moved = phi_via_rho(2, s, &g, &spec).unwrap();
    worst_rho = worst_rho.max((moved - phi(lorentz(1), s, r).unwrap().value).norm());

    let pair_spec = QuadratureSpec::default().with_relative(1e-9);
    let mut worst_pair = 0.0f64;
    for _ in 0..5 {
        let s = interior(&mut rng, 1, 2.0);
        let r = rng.gen_range(-1.0..1.0);
        let y = rng.gen_range(0.2..2.0);
        let pairing = coefficient_pairing(s, r, y, &pair_spec).unwrap();
        let extension = phi_on_na(1, s, r, &[y], &pair_spec).unwrap();
        worst_pair = worst_pair.max((pairing - extension).norm());
    }
    // the nilpotent part alone, through the sphere action
    let s = SpectralParameter::new(-0.1, 0.4);
    let via = phi_via_rho(2, s, &make_n(&[0.6]).unwrap(), &spec).unwrap();
    worst_pair = worst_pair.max((via - phi_on_na(1, s, 0.0, &[0.6], &pair_spec).unwrap()).norm());
    verdict(
        worst_rho <= 1e-6 && worst_pair <= 1e-5,
        format!("sphere coefficient vs phi {worst_rho:.2e}; line pairing vs extension {worst_pair:.2e}"),
    )
}

fn fourier_transform() -> Verdict {
    let mut rng = rng(8);
    let spec = QuadratureSpec::default().with_relative(1e-10);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let s = SpectralParameter::new(rng.gen_range(0.1..1.0), rng.gen_range(-2.0..2.0));
        for y in [0.5, 1.0, 2.0] {
            let (direct, closed) = fhat_check(1, s, y, &spec).unwrap();
            worst = worst.max(rel(direct, closed));
        }
    }
    verdict(worst <= 1e-6, format!("max relative difference {worst:.2e}"))
}

fn random_word_fn(rng: &mut ChaCha8Rng, ball: &[Vec<Word>], density: f64) -> WordFn<Rational64> {
    let mut f = WordFn::new();
    for w in ball.iter().flatten() {
        if rng.gen_bool(density) {
            f.insert(w.clone(), Rational64::from_integer(rng.gen_range(-9..=9)));
        }
    }
    f
}

fn tree_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(9);
    let specs: Vec<FreeProductSpec> = [(3, 0), (4, 0), (0, 2), (1, 1), (2, 1)]
        .into_iter()
        .map(|(m, n)| FreeProductSpec::new(m, n).unwrap())
        .collect();
    let mut sizes_ok = true;
    let mut commute_ok = true;
    let mut constancy_ok = true;
    let mut contraction_ok = true;
    let mut two_point_ok = true;
    let mut pairs = 0u64;
    for spec in &specs {
        let ball = enumerate_ball(spec, 8, SPHERE_CAP).unwrap();
        for (n, sphere) in ball.iter().enumerate() {
            let q = spec.q();
            let formula = if n == 0 { 1 } else { (q + 1) * q.pow(n as u32 - 1) };
            sizes_ok &= sphere.len() as u64 == formula && sphere_size(spec, n as u32) == formula;
        }

        let table = ConvolutionTable::new(*spec, 8).unwrap();
        for i in 0..=4 {
            for j in 0..=4 {
                let f = RadialFn::<f64>::shell_indicator(i);
                let g = RadialFn::<f64>::shell_indicator(j);
                let fg = radial_convolve(&f, &g, &table).unwrap();
                let gf = radial_convolve(&g, &f, &table).unwrap();
                commute_ok &= fg.shells().iter().zip(gf.shells()).all(|(a, b)| a.to_bits() == b.to_bits())
                    && fg.shells().len() == gf.shells().len();
            }
        }

        let small: Vec<&Word> = ball.iter().take(4).flatten().collect();
        let h = random_word_fn(&mut rng, &ball[..7], 0.5);
        let h_radial = radialize(&h, spec);
        let lookup = |w: &Word| h.get(w).copied().unwrap_or_else(|| Rational64::from_integer(0));
        for x in &small {
            for y in &small {
                let counts = bz_counts(spec, x, y, 6).unwrap();
                let first = *counts.values().next().unwrap();
                constancy_ok &= counts.values().all(|&v| v == first);
                let two_point = radialize_two_point(lookup, x, y, spec).unwrap();
                let k = multiply(spec, &y.inverse(spec), x).len();
                two_point_ok &= two_point == h_radial.shell(k);
                pairs += 1;
            }
        }
    }
    let spec = specs[3];
    let ball = enumerate_ball(&spec, 3, SPHERE_CAP).unwrap();
    for _ in 0..100 {
        let f = random_word_fn(&mut rng, &ball, 0.3);
        contraction_ok &= radialize(&f, &spec).l1_norm(&spec) <= l1_norm(&f);
    }
    let elapsed = start.elapsed();
    verdict(
        sizes_ok && commute_ok && constancy_ok && contraction_ok && two_point_ok && within_time(elapsed, 60),
        format!(
            "sizes {sizes_ok}, commutative {commute_ok}, |B_z| constant {constancy_ok}, \
             contraction {contraction_ok}, two-point = one-point {two_point_ok} ({pairs} pairs), {elapsed:.2?}"
        ),
    )
}

fn cesaro() -> Verdict {
    let synthetic = |r: f64| 3.0 * c(0.0, -2.0 * r).exp() + c((-r).exp(), 0.0);
    let at_two = cesaro_extract(synthetic, 2.0, 10_000);
    let at_one = cesaro_extract(synthetic, 1.0, 10_000);
    let (e2, e1) = ((at_two - 3.0).norm(), at_one.norm());
    verdict(
        e2 <= 1e-2 && e1 <= 1e-2,
        format!("|estimate(2) - 3| {e2:.2e}, |estimate(1)| {e1:.2e}"),
    )
}

fn gamma_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(11);
    let mut point = |lo: f64, hi: f64| loop {
        let z = c(rng.gen_range(lo..hi), rng.gen_range(-5.0..5.0));
        if z.im.abs() > 0.05 || (z.re - z.re.round()).abs() > 0.05 {
            return z;
        }
    };
    let g = |z: Complex64| gamma(z).unwrap();
    let (mut dup, mut rec, mut conj, mut refl) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let z = point(0.1, 5.0);
        dup = dup.max(rel(g(z) * g(z + 0.5), (1.0 - 2.0 * z).exp2() * PI.sqrt() * g(2.0 * z)));
        let z = point(-5.0, 5.0);
        rec = rec.max(rel(g(z + 1.0), z * g(z)));
        let z = point(-5.0, 5.0);
        conj = conj.max(rel(g(z.conj()), g(z).conj()));
        let z = point(-4.0, 4.0);
        refl = refl.max(rel(g(z) * g(1.0 - z), PI / (PI * z).sin()));
    }
    let elapsed = start.elapsed();
    let worst = dup.max(rec).max(conj).max(refl);
    verdict(
        worst <= 1e-12 && within_time(elapsed, 5),
        format!(
            "duplication {dup:.1e}, recurrence {rec:.1e}, conjugation {conj:.1e}, reflection {refl:.1e}, {elapsed:.2?}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("triple-formula agreement", triple_formula),
        ("norm identity", norm_identity),
        ("axis normalization", axis_normalization),
        ("divergence at the boundary", divergence),
        ("Weber-Schafheitlin integral", weber_schafheitlin),
        ("asymptotics and c-function", asymptotics),
        ("representation coefficient", representation_coefficient),
        ("Fourier transform", fourier_transform),
        ("tree suite", tree_suite),
        ("Cesaro extraction", cesaro),
        ("Gamma properties", gamma_suite),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failures += usize::from(!v.pass);
        println!("{} {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, k + 1, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
