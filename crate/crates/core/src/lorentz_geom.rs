//! Matrices of SO₀(1,n), their action on the sphere `S^m` (`m = n-1`) through
//! rays of the forward light cone, stereographic coordinates, and the
//! quadratures that realise spherical functions as representation coefficients.

use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::groups::SpectralParameter;
use crate::specfun::{
    bessel_k, integrate_oscillatory, integrate_panels, ln_gamma, rgamma, small_argument_tail,
    QuadratureSpec, SMALL_ARGUMENT_LOG,
};
use crate::spherical::{f_tilde, kernel_constant};

/// Tolerance for the defining identities of a Lorentz matrix, relative to the
/// square of its largest entry.
pub const MATRIX_TOLERANCE: f64 = 1e-10;
/// Tolerance on the norm of a sphere point.
pub const SPHERE_TOLERANCE: f64 = 1e-12;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The form `J = diag(-1, 1, ..., 1)` of size `(n+1) × (n+1)`.
pub fn j_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n + 1, n + 1);
    j[(0, 0)] = -1.0;
    j
}

/// The generator `H` with `a_r = exp(rH)`.
pub fn generator_h(n: usize) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(n + 1, n + 1);
    h[(0, 1)] = 1.0;
    h[(1, 0)] = 1.0;
    h
}

/// An element of SO₀(1,n) stored as its `(n+1) × (n+1)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzMatrix {
    entries: DMatrix<f64>,
}

impl LorentzMatrix {
    /// Wraps `entries` after checking `gᵀJg = J`, `det g = 1` and `g₀₀ >= 1`.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let g = Self { entries };
        g.check()?;
        Ok(g)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n + 1, n + 1),
        }
    }

    /// The `n` of SO₀(1,n).
    pub fn n(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn check(&self) -> Result<()> {
        let g = &self.entries;
        if !g.is_square() || g.nrows() < 2 {
            return Err(Error::Invariant("matrix must be square of size >= 2".into()));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invariant("matrix has non-finite entries".into()));
        }
        let n = self.n();
        let scale = g.amax().max(1.0);
        let j = j_form(n);
        let defect = (g.transpose() * &j * g - &j).amax();
        if defect > MATRIX_TOLERANCE * scale * scale {
            return Err(Error::Invariant(format!("gᵀJg differs from J by {defect:e}")));
        }
        let det = g.determinant();
        if (det - 1.0).abs() > MATRIX_TOLERANCE * scale.powi(n as i32 + 1) {
            return Err(Error::Invariant(format!("determinant is {det}, not 1")));
        }
        if g[(0, 0)] < 1.0 - 1e-12 {
            return Err(Error::Invariant(format!("g00 = {} < 1", g[(0, 0)])));
        }
        Ok(())
    }
}

impl Mul for &LorentzMatrix {
    type Output = LorentzMatrix;

    fn mul(self, rhs: &LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix {
            entries: &self.entries * &rhs.entries,
        }
    }
}

/// `a_r`, the boost by rapidity `r` in the (0,1) plane.
pub fn make_a(r: f64, n: usize) -> Result<LorentzMatrix> {
    if n < 2 {
        return Err(domain(format!("SO0(1,n) needs n >= 2, got {n}")));
    }
    let mut g = DMatrix::identity(n + 1, n + 1);
    let (ch, sh) = (r.cosh(), r.sinh());
    g[(0, 0)] = ch;
    g[(0, 1)] = sh;
    g[(1, 0)] = sh;
    g[(1, 1)] = ch;
    Ok(LorentzMatrix { entries: g })
}

/// `n_x` for `x ∈ R^m`, an element of SO₀(1, m+1).
pub fn make_n(x: &[f64]) -> Result<LorentzMatrix> {
    let m = x.len();
    if m < 1 {
        return Err(domain("make_n needs a vector of length >= 1"));
    }
    let half = 0.5 * x.iter().map(|v| v * v).sum::<f64>();
    let mut g = DMatrix::identity(m + 2, m + 2);
    g[(0, 0)] = 1.0 + half;
    g[(0, 1)] = -half;
    g[(1, 0)] = half;
    g[(1, 1)] = 1.0 - half;
    for (i, &xi) in x.iter().enumerate() {
        g[(0, i + 2)] = xi;
        g[(1, i + 2)] = xi;
        g[(i + 2, 0)] = xi;
        g[(i + 2, 1)] = -xi;
    }
    Ok(LorentzMatrix { entries: g })
}

/// The element `1 × k` of K for a rotation `k ∈ SO(n)`.
pub fn make_k(rotation: &DMatrix<f64>) -> Result<LorentzMatrix> {
    let n = rotation.nrows();
    if !rotation.is_square() || n < 2 {
        return Err(domain("rotation must be a square matrix of size >= 2"));
    }
    let mut g = DMatrix::identity(n + 1, n + 1);
    g.view_mut((1, 1), (n, n)).copy_from(rotation);
    LorentzMatrix::new(g)
}

/// `g⁻¹ = J gᵀ J`.
pub fn lorentz_inverse(g: &LorentzMatrix) -> Result<LorentzMatrix> {
    g.check()?;
    let j = j_form(g.n());
    Ok(LorentzMatrix {
        entries: &j * g.entries.transpose() * &j,
    })
}

/// A point of the unit sphere `S^m ⊂ R^{m+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    zeta: Vec<f64>,
}

impl SpherePoint {
    pub fn new(zeta: Vec<f64>) -> Result<Self> {
        if zeta.len() < 2 {
            return Err(domain("sphere points need at least two coordinates"));
        }
        let norm = zeta.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > SPHERE_TOLERANCE {
            return Err(domain(format!("|ζ| = {norm}, expected 1")));
        }
        Ok(Self { zeta })
    }

    /// The projection centre `ζ₀ = (1, 0, ..., 0)` of `S^m`.
    pub fn base_point(m: usize) -> Self {
        let mut zeta = vec![0.0; m + 1];
        zeta[0] = 1.0;
        Self { zeta }
    }

    pub fn coords(&self) -> &[f64] {
        &self.zeta
    }

    /// The `m` of `S^m`.
    pub fn m(&self) -> usize {
        self.zeta.len() - 1
    }
}

fn light_cone_scale(g: &DMatrix<f64>, zeta: &[f64]) -> f64 {
    g[(0, 0)] + zeta.iter().enumerate().map(|(q, z)| g[(0, q + 1)] * z).sum::<f64>()
}

fn check_dims(g: &LorentzMatrix, zeta: &SpherePoint) -> Result<()> {
    if g.n() != zeta.zeta.len() {
        return Err(domain(format!(
            "matrix acts on S^{}, point lies on S^{}",
            g.n() - 1,
            zeta.m()
        )));
    }
    Ok(())
}

/// `(gζ)_p = (g₀₀ + Σ g₀q ζ_q)⁻¹ (g_p0 + Σ g_pq ζ_q)`.
pub fn act_on_sphere(g: &LorentzMatrix, zeta: &SpherePoint) -> Result<SpherePoint> {
    check_dims(g, zeta)?;
    let e = &g.entries;
    let scale = light_cone_scale(e, &zeta.zeta);
    let n = g.n();
    let mut out: Vec<f64> = (1..=n)
        .map(|p| {
            (e[(p, 0)] + (1..=n).map(|q| e[(p, q)] * zeta.zeta[q - 1]).sum::<f64>()) / scale
        })
        .collect();
    // remove rounding drift off the sphere
    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    out.iter_mut().for_each(|v| *v /= norm);
    Ok(SpherePoint { zeta: out })
}

/// `r(gζ) = ln(g₀₀ + Σ g₀q ζ_q)`.
pub fn cocycle_r(g: &LorentzMatrix, zeta: &SpherePoint) -> Result<f64> {
    check_dims(g, zeta)?;
    Ok(light_cone_scale(&g.entries, &zeta.zeta).ln())
}

/// Stereographic projection of `S^m ∖ {ζ₀}` onto `R^m` from `ζ₀`.
pub fn stereographic(zeta: &SpherePoint) -> Result<Vec<f64>> {
    let denom = 1.0 - zeta.zeta[0];
    if denom <= 1e-15 {
        return Err(domain("stereographic projection is undefined at the base point"));
    }
    Ok(zeta.zeta[1..].iter().map(|v| v / denom).collect())
}

/// Inverse of [`stereographic`].
pub fn inverse_stereographic(x: &[f64]) -> SpherePoint {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let d = sq + 1.0;
    let mut zeta = Vec::with_capacity(x.len() + 1);
    zeta.push((sq - 1.0) / d);
    zeta.extend(x.iter().map(|v| 2.0 * v / d));
    SpherePoint { zeta }
}

/// Total surface measure of `S^m`.
pub fn sphere_volume(m: usize) -> f64 {
    let h = 0.5 * (m as f64 + 1.0);
    2.0 * PI.powf(h) * rgamma(c64(h)).re
}

/// Jacobian `(2/(|x|²+1))^m` of the inverse stereographic map.
pub fn stereographic_jacobian(x: &[f64]) -> f64 {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    (2.0 / (sq + 1.0)).powi(x.len() as i32)
}

/// Transports `h ∈ L²(S^m)` (normalised measure) to `L²(R^m)` isometrically.
pub fn plane_transport<F>(h: &F, x: &[f64]) -> Complex64
where
    F: Fn(&SpherePoint) -> Complex64,
{
    let weight = (stereographic_jacobian(x) / sphere_volume(x.len())).sqrt();
    h(&inverse_stereographic(x)) * weight
}

/// Trapezoid rule for a 2π-periodic integrand, doubling the node count until
/// two successive values agree. Returns the mean value.
fn periodic_mean<F: Fn(f64) -> Complex64>(f: F, spec: &QuadratureSpec) -> Result<Complex64> {
    const MAX_NODES: usize = 1 << 20;
    let mut n = 32;
    let mut value = (0..n)
        .map(|j| f(2.0 * PI * j as f64 / n as f64))
        .sum::<Complex64>()
        / n as f64;
    while n < MAX_NODES {
        // the new nodes are the midpoints of the old ones
        let mid: Complex64 = (0..n)
            .map(|j| f(2.0 * PI * (j as f64 + 0.5) / n as f64))
            .sum::<Complex64>()
            / n as f64;
        let next = 0.5 * (value + mid);
        n *= 2;
        let gap = (next - value).norm();
        value = next;
        if gap <= spec.absolute_tolerance.max(spec.relative_tolerance * value.norm()) {
            return Ok(value);
        }
    }
    Err(Error::Convergence {
        what: "periodic trapezoid rule",
        estimate: value,
        achieved_error: f64::NAN,
    })
}

/// `φ_s(g) = ∫_{S^m} e^{-(m/2+s) r(g⁻¹ζ)} dζ` against the normalised measure, for `n ∈ {2, 3}`.
pub fn phi_via_rho(
    n: usize,
    s: SpectralParameter,
    g: &LorentzMatrix,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(n == 2 || n == 3) {
        return Err(domain(format!("phi_via_rho supports n = 2, 3, got {n}")));
    }
    if g.n() != n {
        return Err(domain(format!("matrix belongs to SO0(1,{}), not SO0(1,{n})", g.n())));
    }
    let inv = lorentz_inverse(g)?;
    let e = inv.entries;
    let exponent = -(s.s() + 0.5 * (n - 1) as f64);
    let weight = |zeta: &[f64]| (exponent * light_cone_scale(&e, zeta).ln()).exp();
    if n == 2 {
        return periodic_mean(|theta| weight(&[theta.cos(), theta.sin()]), spec);
    }
    let inner = spec.with_relative(spec.relative_tolerance * 1e-2);
    let polar = |theta: f64| {
        let (st, ct) = theta.sin_cos();
        match periodic_mean(|az: f64| weight(&[ct, st * az.cos(), st * az.sin()]), &inner) {
            Ok(v) => v * (0.5 * st),
            Err(_) => c64(f64::NAN),
        }
    };
    let breaks: Vec<f64> = (0..=8).map(|k| PI * k as f64 / 8.0).collect();
    integrate_panels(polar, &breaks, spec)
}

/// Action of `π̃(a_r n_y)` on `f ∈ L²(R^m)`, evaluated at `x`:
/// `e^{mr/2} e^{-i⟨y, e^r x⟩} f(e^r x)`.
pub fn pi_tilde<F>(r: f64, y: &[f64], f: &F, x: &[f64]) -> Complex64
where
    F: Fn(&[f64]) -> Complex64,
{
    let m = x.len() as f64;
    let er = r.exp();
    let scaled: Vec<f64> = x.iter().map(|v| er * v).collect();
    let phase: f64 = y.iter().zip(&scaled).map(|(a, b)| a * b).sum();
    Complex64::from_polar((0.5 * m * r).exp(), -phase) * f(&scaled)
}

/// `⟨π̃(a_r n_y) f̃_s, f̃_{-s̄}⟩` on `L²(R)` by quadrature over the line.
pub fn coefficient_pairing(
    s: SpectralParameter,
    r: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let dual = s.conj().neg();
    let kappa = 1.0 - 2.0 * s.sigma.abs();
    if !(kappa > 0.0) {
        return Err(domain(format!("s = {s} must lie inside the strip |Re s| < 1/2")));
    }
    let f = |x: &[f64]| f_tilde(1, s, x[0].abs()).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let pairing = |x: f64| {
        let g = f_tilde(1, dual, x.abs()).unwrap_or(Complex64::new(f64::NAN, 0.0));
        pi_tilde(r, &[y], &f, &[x]) * g.conj()
    };
    let efolds = spec.truncation_efolds();
    let u_min = -(efolds + 2.0 * (1.0 + efolds / kappa).ln()) / kappa;
    let u_lo = u_min.max(SMALL_ARGUMENT_LOG - r.max(0.0) - y.abs().ln_1p());
    // Below u_lo the phase is 1 and both factors are pure K_s terms.
    let tail = if u_min < u_lo {
        let scale = kernel_constant(1)? * 0.5f64.exp2();
        let outer = scale * rgamma(0.5 + s.s()) * (scale * rgamma(0.5 + dual.s())).conj();
        outer * (0.5 * r).exp() * small_argument_tail(s.s(), s.s(), r.exp(), c64(1.0), u_lo)?
    } else {
        c64(0.0)
    };
    let x_max = 2.0 * (efolds + 10.0) / (1.0 + r.exp());
    let k = r.exp() * y.abs();
    let mut total = c64(0.0);
    for sign in [1.0, -1.0] {
        // logarithmic variable near the origin, where the integrand is singular
        let near = |u: f64| {
            let x = u.exp();
            pairing(sign * x) * x
        };
        let pieces = ((-u_lo) / 2.0).ceil() as usize;
        let breaks: Vec<f64> = (0..=pieces).map(|j| u_lo * (1.0 - j as f64 / pieces as f64)).collect();
        total += integrate_panels(near, &breaks, spec)? + tail;
        let count = ((x_max * k / PI).ceil() as usize).clamp(8, 4000);
        let breaks: Vec<f64> = (0..=count)
            .map(|j| 1.0 + (x_max - 1.0).max(1.0) * j as f64 / count as f64)
            .collect();
        total += integrate_panels(|x| pairing(sign * x), &breaks, spec)?;
    }
    Ok(total)
}

/// Direct Fourier quadrature of `c₁(x²+1)^{-s-1/2}` on the line against the
/// closed form `c₁ 2^{1/2} (y/2)^s K_s(y) / Γ(1/2+s)`; `m = 1`, `Re s > 0`.
pub fn fhat_check(
    m: u32,
    s: SpectralParameter,
    y_norm: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    if m != 1 {
        return Err(domain(format!("fhat_check supports m = 1, got {m}")));
    }
    if !(s.sigma > 0.0) {
        return Err(domain("fhat_check needs Re s > 0"));
    }
    if !(y_norm > 0.0 && y_norm.is_finite()) {
        return Err(domain("fhat_check needs y > 0"));
    }
    let mf = m as f64;
    let sc = s.s();
    let cm = kernel_constant(m)?;
    let power = -(sc + 0.5 * mf);
    let profile = |x: f64| (power * (x * x).ln_1p()).exp() * (x * y_norm).cos();
    let half_period = PI / y_norm;
    let head = integrate_panels(profile, &[0.0, 0.5 * half_period], spec)?;
    let tail = integrate_oscillatory(profile, 0.5 * half_period, half_period, spec)?;
    let direct = (head + tail) * 2.0 * cm / (2.0 * PI).powf(0.5 * mf);

    let k = bessel_k(sc, y_norm, &QuadratureSpec::special_function())?;
    let closed = cm * (1.0 - 0.5 * mf).exp2() * rgamma(0.5 * mf + sc)
        * (sc * (0.5 * y_norm).ln()).exp()
        * k;
    Ok((direct, closed))
}

/// `Γ((m+1)/2) / (2π^{(m+1)/2})`, the density of the normalised measure on `S^m`
/// with respect to surface measure.
pub fn normalised_sphere_density(m: usize) -> Result<f64> {
    let h = 0.5 * (m as f64 + 1.0);
    Ok(ln_gamma(c64(h))?.re.exp() / (2.0 * PI.powf(h)))
}
