//! Adaptive Gauss–Legendre quadrature for complex-valued integrands on the real line.
//!
//! Every panel is integrated with the 15-point rule on the whole panel and on both
//! halves; the difference is the panel's error estimate. The panel with the largest
//! estimate is bisected until the total error drops below
//! `max(absolute_tolerance, relative_tolerance * |estimate|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const GL15_NODES: [f64; 8] = [
    0.0,
    0.201_194_093_997_434_522_3,
    0.394_151_347_077_563_369_9,
    0.570_972_172_608_538_847_5,
    0.724_417_731_360_170_047_4,
    0.848_206_583_410_427_216_2,
    0.937_273_392_400_705_904_3,
    0.987_992_518_020_485_428_5,
];

const GL15_WEIGHTS: [f64; 8] = [
    0.202_578_241_925_561_272_9,
    0.198_431_485_327_111_576_5,
    0.186_161_000_015_562_211_0,
    0.166_269_205_816_993_933_6,
    0.139_570_677_926_154_314_5,
    0.107_159_220_467_171_935_0,
    0.070_366_047_488_108_124_7,
    0.030_753_241_996_117_268_4,
];

/// Tolerances and limits for every numerical integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_panels: usize,
    /// Extra decay (in e-folds) demanded beyond `-ln(absolute_tolerance)` when a
    /// semi-infinite range is truncated.
    pub truncation_margin: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-8,
            absolute_tolerance: 1e-14,
            max_panels: 4000,
            truncation_margin: 5.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(relative_tolerance: f64, absolute_tolerance: f64) -> Result<Self> {
        let spec = Self {
            relative_tolerance,
            absolute_tolerance,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Tight settings used for integrals that define special-function values.
    pub fn special_function() -> Self {
        Self {
            relative_tolerance: 1e-13,
            absolute_tolerance: 1e-15,
            max_panels: 4000,
            truncation_margin: 5.0,
        }
    }

    pub fn with_relative(mut self, relative_tolerance: f64) -> Self {
        self.relative_tolerance = relative_tolerance;
        self
    }

    pub fn with_absolute(mut self, absolute_tolerance: f64) -> Self {
        self.absolute_tolerance = absolute_tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.relative_tolerance) || !positive(self.absolute_tolerance) {
            return Err(domain("quadrature tolerances must be positive and finite"));
        }
        if self.max_panels < 1 {
            return Err(domain("max_panels must be at least 1"));
        }
        if !(self.truncation_margin >= 0.0 && self.truncation_margin.is_finite()) {
            return Err(domain("truncation margin must be non-negative"));
        }
        Ok(())
    }

    /// Number of e-folds a truncated tail has to decay by.
    pub fn truncation_efolds(&self) -> f64 {
        -self.absolute_tolerance.ln() + self.truncation_margin
    }

    fn target(&self, estimate: Complex64) -> f64 {
        self.absolute_tolerance
            .max(self.relative_tolerance * estimate.norm())
    }
}

/// Envelope `|f(x)| <= scale * exp(-rate * (x - start))` declared for a semi-infinite range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEnvelope {
    pub scale: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationDomain {
    Finite { a: f64, b: f64 },
    SemiInfinite { start: f64, decay: DecayEnvelope },
}

impl IntegrationDomain {
    pub fn finite(a: f64, b: f64) -> Self {
        Self::Finite { a, b }
    }

    pub fn semi_infinite(start: f64, scale: f64, rate: f64) -> Self {
        Self::SemiInfinite {
            start,
            decay: DecayEnvelope { scale, rate },
        }
    }
}

/// Integrates `f` over `domain`.
pub fn integrate<F>(f: F, domain_: IntegrationDomain, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    match domain_ {
        IntegrationDomain::Finite { a, b } => integrate_panels(f, &[a, b], spec),
        IntegrationDomain::SemiInfinite { start, decay } => {
            if !(decay.rate > 0.0 && decay.scale > 0.0) {
                return Err(domain("decay envelope needs positive scale and rate"));
            }
            let end = start + (decay.scale.ln() + spec.truncation_efolds()).max(1.0) / decay.rate;
            integrate_panels(f, &[start, end], spec)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    left: Complex64,
    right: Complex64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, whole: Complex64) -> Self {
        let mid = 0.5 * (a + b);
        let left = gauss_legendre_15(f, a, mid);
        let right = gauss_legendre_15(f, mid, b);
        let error = (whole - left - right).norm();
        Self {
            a,
            b,
            left,
            right,
            error,
        }
    }

    fn value(&self) -> Complex64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates over `[breaks[0], breaks[last]]`, starting from the panels given by
/// the (increasing) breakpoints.
pub fn integrate_panels<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_panels_with_error(f, breaks, spec).map(|(value, _)| value)
}

/// As [`integrate_panels`], also returning the achieved error estimate.
pub fn integrate_panels_with_error<F>(
    f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if breaks.len() < 2 {
        return Err(domain("need at least two breakpoints"));
    }
    if breaks.iter().any(|x| !x.is_finite()) || breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("breakpoints must be finite and non-decreasing"));
    }

    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let whole = gauss_legendre_15(&f, w[0], w[1]);
            heap.push(Panel::new(&f, w[0], w[1], whole));
        }
    }
    if heap.is_empty() {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }

    let exact_sums = |heap: &BinaryHeap<Panel>| -> (Complex64, f64) {
        (
            heap.iter().map(Panel::value).sum(),
            heap.iter().map(|p| p.error).sum(),
        )
    };
    let (mut total, mut error) = exact_sums(&heap);
    loop {
        if !total.is_finite() || error.is_nan() {
            return Err(Error::Convergence {
                what: "quadrature (non-finite integrand)",
                estimate: total,
                achieved_error: f64::INFINITY,
            });
        }
        if error <= spec.target(total) {
            // running sums drift; confirm with a fresh summation
            (total, error) = exact_sums(&heap);
            if error <= spec.target(total) {
                return Ok((total, error));
            }
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = !(worst.a < mid && mid < worst.b)
            || (worst.b - worst.a) <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if heap.len() + 2 > spec.max_panels || too_narrow {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                estimate: total,
                achieved_error: error,
            });
        }
        let left = Panel::new(&f, worst.a, mid, worst.left);
        let right = Panel::new(&f, mid, worst.b, worst.right);
        total += left.value() + right.value() - worst.value();
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

/// Fixed 15-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre_15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let half = 0.5 * (b - a);
    let centre = 0.5 * (a + b);
    let mut sum = f(centre) * GL15_WEIGHTS[0];
    for i in 1..8 {
        let dx = half * GL15_NODES[i];
        sum += (f(centre - dx) + f(centre + dx)) * GL15_WEIGHTS[i];
    }
    sum * half
}

/// Integrates a decaying oscillatory integrand over `[start, ∞)`.
///
/// The range is cut into cycles of length `half_period`, each integrated
/// adaptively, and the partial sums are extrapolated with Wynn's epsilon
/// algorithm. Suited to algebraically decaying Fourier-type integrands where
/// consecutive cycles alternate in sign.
pub fn integrate_oscillatory<F>(
    f: F,
    start: f64,
    half_period: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    const MAX_CYCLES: usize = 400;
    const MIN_CYCLES: usize = 8;
    spec.validate()?;
    if !(half_period > 0.0 && half_period.is_finite() && start.is_finite()) {
        return Err(domain("oscillatory integral needs a finite start and positive half period"));
    }
    let inner = spec.with_relative(spec.relative_tolerance * 1e-2);
    let mut partial = Vec::with_capacity(MAX_CYCLES);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut previous: Option<Complex64> = None;
    let mut agreed = 0;
    for k in 0..MAX_CYCLES {
        let a = start + k as f64 * half_period;
        let cycle = integrate_panels(&f, &[a, a + half_period], &inner)?;
        sum += cycle;
        partial.push(sum);
        if partial.len() < MIN_CYCLES {
            continue;
        }
        let extrapolated = wynn_epsilon(&partial);
        if let Some(prev) = previous {
            let gap = (extrapolated - prev).norm();
            if gap <= spec.target(extrapolated) {
                agreed += 1;
                if agreed >= 2 {
                    return Ok(extrapolated);
                }
            } else {
                agreed = 0;
            }
        }
        previous = Some(extrapolated);
    }
    let estimate = previous.unwrap_or(sum);
    Err(Error::Convergence {
        what: "oscillatory tail extrapolation",
        estimate,
        achieved_error: (estimate - sum).norm(),
    })
}

/// Wynn's epsilon extrapolation of a sequence of partial sums; returns the
/// deepest even-column entry built from the tail of the sequence.
pub fn wynn_epsilon(partial: &[Complex64]) -> Complex64 {
    const DEPTH: usize = 24;
    let start = partial.len().saturating_sub(DEPTH + 1);
    let seq = &partial[start..];
    let zero = Complex64::new(0.0, 0.0);
    // prev holds column k-1, cur column k.
    let mut prev: Vec<Complex64> = vec![zero; seq.len() + 1];
    let mut cur: Vec<Complex64> = seq.to_vec();
    let mut best = *seq.last().expect("non-empty sequence");
    let mut column = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff.norm() <= f64::MIN_POSITIVE * 1e10 {
                return best;
            }
            next.push(prev[i + 1] + diff.inv());
        }
        column += 1;
        prev = cur;
        cur = next;
        if column % 2 == 0 {
            let candidate = *cur.last().expect("non-empty column");
            if !candidate.is_finite() {
                return best;
            }
            best = candidate;
        }
    }
    best
}
