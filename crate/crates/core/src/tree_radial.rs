//! Free products `(∗ Z/2Z) ∗ (∗ Z)`, whose Cayley graphs are homogeneous trees:
//! reduced words, word-length spheres, radialization and radial convolution.
//!
//! Generators are `a_i` (order two, `i < M`) and `b_j^{±1}` (`j < N`). A word is
//! its reduced letter sequence, and its length is the graph distance to `e`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{NumAssign, ToPrimitive};

use crate::error::{domain, Error, Result};

/// Largest sphere that will be enumerated.
pub const SPHERE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreeProductSpec {
    /// Number of `Z/2Z` factors.
    pub involutions: u16,
    /// Number of `Z` factors.
    pub free: u16,
}

impl FreeProductSpec {
    pub fn new(involutions: u16, free: u16) -> Result<Self> {
        let spec = Self { involutions, free };
        if spec.degree() < 3 {
            return Err(domain(format!(
                "M + 2N must be at least 3, got M = {involutions}, N = {free}"
            )));
        }
        Ok(spec)
    }

    /// Vertex degree `q + 1 = M + 2N` of the Cayley tree.
    pub fn degree(&self) -> u64 {
        u64::from(self.involutions) + 2 * u64::from(self.free)
    }

    /// `q = M + 2N - 1`.
    pub fn q(&self) -> u64 {
        self.degree() - 1
    }

    fn factor_count(&self) -> u16 {
        self.involutions + self.free
    }

    fn is_involution(&self, factor: u16) -> bool {
        factor < self.involutions
    }

    /// All generators, involutions first, then each free generator and its inverse.
    pub fn generators(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = (0..self.involutions)
            .map(|factor| Letter { factor, exponent: 1 })
            .collect();
        for factor in self.involutions..self.factor_count() {
            out.push(Letter { factor, exponent: 1 });
            out.push(Letter { factor, exponent: -1 });
        }
        out
    }

    fn check_letter(&self, l: Letter) -> Result<()> {
        let ok = l.factor < self.factor_count()
            && if self.is_involution(l.factor) {
                l.exponent == 1
            } else {
                l.exponent == 1 || l.exponent == -1
            };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("letter {l} does not belong to {self}")))
        }
    }

    fn cancels(&self, a: Letter, b: Letter) -> bool {
        a.factor == b.factor && (self.is_involution(a.factor) || a.exponent == -b.exponent)
    }
}

impl fmt::Display for FreeProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(M={}, N={})", self.involutions, self.free)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub factor: u16,
    pub exponent: i8,
}

impl Letter {
    fn inverse(self, spec: &FreeProductSpec) -> Self {
        if spec.is_involution(self.factor) {
            self
        } else {
            Self {
                factor: self.factor,
                exponent: -self.exponent,
            }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "g{}", self.factor)
        } else {
            write!(f, "g{}^-1", self.factor)
        }
    }
}

/// A reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters(spec: &FreeProductSpec, letters: &[Letter]) -> Result<Self> {
        let mut w = Self::identity();
        for &l in letters {
            spec.check_letter(l)?;
            w.push(spec, l);
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.is_empty()
    }

    pub fn inverse(&self, spec: &FreeProductSpec) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse(spec)).collect(),
        }
    }

    pub fn is_reduced(&self, spec: &FreeProductSpec) -> bool {
        self.letters.iter().all(|&l| spec.check_letter(l).is_ok())
            && self.letters.windows(2).all(|p| !spec.cancels(p[0], p[1]))
    }

    fn push(&mut self, spec: &FreeProductSpec, l: Letter) {
        match self.letters.last() {
            Some(&last) if spec.cancels(last, l) => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The reduced product `ab`.
pub fn multiply(spec: &FreeProductSpec, a: &Word, b: &Word) -> Word {
    let mut out = a.clone();
    for &l in &b.letters {
        out.push(spec, l);
    }
    out
}

/// `|E_n|`: 1 for `n = 0`, `(q+1)q^{n-1}` otherwise. Saturates at `u64::MAX`.
pub fn sphere_size(spec: &FreeProductSpec, n: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    spec.q()
        .checked_pow(n - 1)
        .and_then(|p| p.checked_mul(spec.degree()))
        .unwrap_or(u64::MAX)
}

/// The spheres `E_0, ..., E_radius`, built breadth first by extending each
/// word of `E_n` with every generator that does not cancel its last letter.
pub fn enumerate_ball(spec: &FreeProductSpec, radius: u32, cap: u64) -> Result<Vec<Vec<Word>>> {
    let gens = spec.generators();
    let mut spheres = vec![vec![Word::identity()]];
    for _ in 0..radius {
        let prev = spheres.last().expect("ball has a centre");
        let mut next = Vec::new();
        for w in prev {
            for &g in &gens {
                if w.letters.last().is_some_and(|&l| spec.cancels(l, g)) {
                    continue;
                }
                if next.len() as u64 >= cap {
                    return Err(Error::Capacity {
                        requested: next.len() as u64 + 1,
                        cap,
                    });
                }
                let mut letters = w.letters.clone();
                letters.push(g);
                next.push(Word { letters });
            }
        }
        spheres.push(next);
    }
    Ok(spheres)
}

/// The sphere `E_n`.
pub fn enumerate_sphere(spec: &FreeProductSpec, n: u32, cap: u64) -> Result<Vec<Word>> {
    Ok(enumerate_ball(spec, n, cap)?.pop().expect("ball has a last sphere"))
}

/// Coefficient rings for shell arithmetic.
pub trait Scalar: Clone + PartialEq + fmt::Debug + NumAssign {
    fn from_count(n: u64) -> Self;
    fn magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn from_count(n: u64) -> Self {
        n as f64
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn from_count(n: u64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for Rational64 {
    fn from_count(n: u64) -> Self {
        Rational64::from_integer(i64::try_from(n).expect("count fits in i64"))
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN).abs()
    }
}

impl Scalar for BigRational {
    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN).abs()
    }
}

/// A radial function, stored as its value on each shell `E_0, E_1, ...`.
/// Trailing zero shells are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFn<T> {
    shells: Vec<T>,
}

impl<T: Scalar> RadialFn<T> {
    pub fn new(mut shells: Vec<T>) -> Self {
        while shells.last().is_some_and(|v| v.is_zero()) {
            shells.pop();
        }
        Self { shells }
    }

    pub fn zero() -> Self {
        Self { shells: Vec::new() }
    }

    /// `1_{E_n}`.
    pub fn shell_indicator(n: usize) -> Self {
        let mut shells = vec![T::zero(); n + 1];
        shells[n] = T::one();
        Self { shells }
    }

    /// `δ_e`.
    pub fn delta() -> Self {
        Self::shell_indicator(0)
    }

    pub fn shell(&self, n: usize) -> T {
        self.shells.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn shells(&self) -> &[T] {
        &self.shells
    }

    /// Largest shell in the support, `None` for the zero function.
    pub fn radius(&self) -> Option<usize> {
        self.shells.len().checked_sub(1)
    }

    pub fn at(&self, w: &Word) -> T {
        self.shell(w.len())
    }

    /// `Σ_n |E_n| |f_n|`.
    pub fn l1_norm(&self, spec: &FreeProductSpec) -> f64 {
        self.shells
            .iter()
            .enumerate()
            .map(|(n, v)| sphere_size(spec, n as u32) as f64 * v.magnitude())
            .sum()
    }

    /// `Σ_x f(x) φ(x)` for radial `φ`.
    pub fn pair(&self, phi: &RadialFn<T>, spec: &FreeProductSpec) -> T {
        let mut total = T::zero();
        for (n, v) in self.shells.iter().enumerate() {
            total += T::from_count(sphere_size(spec, n as u32)) * v.clone() * phi.shell(n);
        }
        total
    }
}

/// Finitely supported function on the group.
pub type WordFn<T> = HashMap<Word, T>;

/// `Σ_x |f(x)|`.
pub fn l1_norm<T: Scalar>(f: &WordFn<T>) -> f64 {
    f.values().map(Scalar::magnitude).sum()
}

/// Shell averages `(1/|E_n|) Σ_{|y|=n} f(y)`.
pub fn radialize<T: Scalar>(f: &WordFn<T>, spec: &FreeProductSpec) -> RadialFn<T> {
    let top = f.keys().map(Word::len).max().map_or(0, |r| r + 1);
    let mut sums = vec![T::zero(); top];
    for (w, v) in f {
        sums[w.len()] += v.clone();
    }
    let shells = sums
        .into_iter()
        .enumerate()
        .map(|(n, s)| s / T::from_count(sphere_size(spec, n as u32)))
        .collect();
    RadialFn::new(shells)
}

/// `Σ_x f(x) φ(x)`.
pub fn pairing<T, F>(f: &WordFn<T>, phi: F) -> T
where
    T: Scalar,
    F: Fn(&Word) -> T,
{
    let mut total = T::zero();
    for (w, v) in f {
        total += v.clone() * phi(w);
    }
    total
}

/// Pair counts `N(i, j, k) = #{x ∈ E_i : |x⁻¹z| = j}` for `|z| = k`, which do
/// not depend on the choice of `z`. Radial convolution is
/// `(f ∗ g)_k = Σ_{i,j} f_i g_j N(i, j, k)`.
#[derive(Debug, Clone)]
pub struct ConvolutionTable {
    spec: FreeProductSpec,
    radius: usize,
    counts: HashMap<(usize, usize, usize), u64>,
}

impl ConvolutionTable {
    pub fn new(spec: FreeProductSpec, radius: u32) -> Result<Self> {
        Self::with_cap(spec, radius, SPHERE_CAP)
    }

    pub fn with_cap(spec: FreeProductSpec, radius: u32, cap: u64) -> Result<Self> {
        let ball = enumerate_ball(&spec, radius, cap)?;
        let mut counts = HashMap::new();
        for (k, sphere) in ball.iter().enumerate() {
            let z = &sphere[0];
            for (i, xs) in ball.iter().enumerate() {
                for x in xs {
                    let j = multiply(&spec, &x.inverse(&spec), z).len();
                    if i + j <= radius as usize {
                        *counts.entry((i, j, k)).or_insert(0) += 1;
                    }
                }
            }
        }
        Ok(Self {
            spec,
            radius: radius as usize,
            counts,
        })
    }

    pub fn spec(&self) -> &FreeProductSpec {
        &self.spec
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `N(i, j, k)`; requires `i + j <= radius`.
    pub fn count(&self, i: usize, j: usize, k: usize) -> u64 {
        self.counts.get(&(i, j, k)).copied().unwrap_or(0)
    }
}

/// `f ∗ g` for radial `f` and `g`. Terms `(i, j)` and `(j, i)` are added as a
/// pair, so the result is bitwise symmetric in `f` and `g`.
pub fn radial_convolve<T: Scalar>(
    f: &RadialFn<T>,
    g: &RadialFn<T>,
    table: &ConvolutionTable,
) -> Result<RadialFn<T>> {
    let (Some(rf), Some(rg)) = (f.radius(), g.radius()) else {
        return Ok(RadialFn::zero());
    };
    let needed = rf + rg;
    if needed > table.radius {
        return Err(Error::Overflow {
            needed,
            radius: table.radius,
        });
    }
    let term = |i: usize, j: usize, k: usize| {
        T::from_count(table.count(i, j, k)) * f.shell(i) * g.shell(j)
    };
    let top = rf.max(rg);
    let mut out = vec![T::zero(); needed + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        for i in 0..=top {
            for j in i..=top {
                if i + j > needed || i + j < k || k + i < j || k + j < i {
                    continue;
                }
                if i == j {
                    *slot += term(i, i, k);
                } else {
                    *slot += term(i, j, k) + term(j, i, k);
                }
            }
        }
    }
    Ok(RadialFn::new(out))
}

/// `|B_z|` for every `z` with `|z| = |y⁻¹x|`, where `B` is the set of pairs
/// `(s, t) ∈ E_{|x|} × E_{|y|}` with `|t⁻¹s| = |y⁻¹x|` and `B_z` those with `t⁻¹s = z`.
pub fn bz_counts(
    spec: &FreeProductSpec,
    x: &Word,
    y: &Word,
    ball_radius: u32,
) -> Result<HashMap<Word, u64>> {
    bz_counts_with_cap(spec, x, y, ball_radius, SPHERE_CAP)
}

pub fn bz_counts_with_cap(
    spec: &FreeProductSpec,
    x: &Word,
    y: &Word,
    ball_radius: u32,
    cap: u64,
) -> Result<HashMap<Word, u64>> {
    let target = multiply(spec, &y.inverse(spec), x).len();
    let r = ball_radius as usize;
    if x.len() > r || y.len() > r || target > r {
        return Err(domain(format!(
            "|x| = {}, |y| = {}, |y⁻¹x| = {target} must not exceed the ball radius {r}",
            x.len(),
            y.len()
        )));
    }
    let xs = enumerate_sphere(spec, x.len() as u32, cap)?;
    let ys = enumerate_sphere(spec, y.len() as u32, cap)?;
    let mut counts = HashMap::new();
    for t in &ys {
        let t_inv = t.inverse(spec);
        for s in &xs {
            let z = multiply(spec, &t_inv, s);
            if z.len() == target {
                *counts.entry(z).or_insert(0u64) += 1;
            }
        }
    }
    Ok(counts)
}

/// `(1/|B|) Σ_{(s,t) ∈ B} h(t⁻¹s)`.
pub fn radialize_two_point<T, F>(h: F, x: &Word, y: &Word, spec: &FreeProductSpec) -> Result<T>
where
    T: Scalar,
    F: Fn(&Word) -> T,
{
    let radius = x.len().max(y.len()).max(multiply(spec, &y.inverse(spec), x).len());
    let counts = bz_counts(spec, x, y, radius as u32)?;
    let mut total = T::zero();
    let mut size = 0u64;
    for (z, c) in &counts {
        total += T::from_count(*c) * h(z);
        size += c;
    }
    Ok(total / T::from_count(size))
}

/// The radial function `φ` with `φ_0 = 1`, `φ_1 = first_shell` and
/// `⟨1_{E_1} ∗ 1_{E_n}, φ⟩ = ⟨1_{E_1}, φ⟩⟨1_{E_n}, φ⟩` for every `n` with
/// `n + 1 <= table.radius()`. Such a `φ` is multiplicative on radial functions.
pub fn spherical_shell_function<T: Scalar>(
    first_shell: T,
    table: &ConvolutionTable,
) -> Result<RadialFn<T>> {
    let spec = *table.spec();
    let mut phi = vec![T::one(), first_shell];
    let e1 = RadialFn::<T>::shell_indicator(1);
    for n in 1..table.radius() {
        let en = RadialFn::<T>::shell_indicator(n);
        let partial = RadialFn::new(phi.clone());
        let product = radial_convolve(&e1, &en, table)?;
        let want = e1.pair(&partial, &spec) * en.pair(&partial, &spec);
        // every shell of the product except n + 1 is already known
        let known = product.pair(&partial, &spec);
        let lead = T::from_count(sphere_size(&spec, n as u32 + 1)) * product.shell(n + 1);
        phi.push((want - known) / lead);
    }
    Ok(RadialFn { shells: phi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u16, n: u16) -> FreeProductSpec {
        FreeProductSpec::new(m, n).unwrap()
    }

    fn a(i: u16) -> Letter {
        Letter { factor: i, exponent: 1 }
    }

    #[test]
    fn spec_validation() {
        assert!(FreeProductSpec::new(1, 0).is_err());
        assert!(FreeProductSpec::new(2, 0).is_err());
        assert!(FreeProductSpec::new(0, 1).is_err());
        assert_eq!(spec(1, 1).q(), 2);
        assert_eq!(spec(0, 2).q(), 3);
    }

    #[test]
    fn word_arithmetic() {
        let s = spec(3, 0);
        let x = Word::from_letters(&s, &[a(0), a(1)]).unwrap();
        let y = Word::from_letters(&s, &[a(1), a(2)]).unwrap();
        assert_eq!(multiply(&s, &x, &y), Word::from_letters(&s, &[a(0), a(2)]).unwrap());
        assert_eq!(multiply(&s, &x, &Word::identity()), x);
        assert!(multiply(&s, &x, &x.inverse(&s)).is_identity());
        let f = spec(0, 2);
        let b = Letter { factor: 1, exponent: -1 };
        let w = Word::from_letters(&f, &[a(0), b, a(1), a(0)]).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.is_reduced(&f));
        assert!(Word::from_letters(&s, &[Letter { factor: 0, exponent: -1 }]).is_err());
        assert!(Word::from_letters(&s, &[a(3)]).is_err());
    }

    #[test]
    fn sphere_sizes() {
        assert_eq!(sphere_size(&spec(3, 0), 0), 1);
        assert_eq!(sphere_size(&spec(3, 0), 2), 6);
        assert_eq!(sphere_size(&spec(0, 2), 3), 36);
        let ball = enumerate_ball(&spec(0, 2), 3, SPHERE_CAP).unwrap();
        let sizes: Vec<usize> = ball.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4, 12, 36]);
        assert!(ball.iter().flatten().all(|w| w.is_reduced(&spec(0, 2))));
        assert!(matches!(
            enumerate_sphere(&spec(3, 0), 5, 10),
            Err(Error::Capacity { cap: 10, .. })
        ));
    }

    #[test]
    fn radialize_basics() {
        let s = spec(3, 0);
        let x = Word::from_letters(&s, &[a(0), a(1)]).unwrap();
        let f: WordFn<Rational64> = [(x, Rational64::from_integer(1))].into_iter().collect();
        let r = radialize(&f, &s);
        assert_eq!(r.shells(), &[Rational64::from_integer(0), Rational64::from_integer(0), Rational64::new(1, 6)]);
    }

    #[test]
    fn first_shell_square() {
        let s = spec(0, 2);
        let table = ConvolutionTable::new(s, 4).unwrap();
        let e1 = RadialFn::<Rational64>::shell_indicator(1);
        let sq = radial_convolve(&e1, &e1, &table).unwrap();
        let want: Vec<Rational64> = [4, 0, 1].iter().map(|&v| Rational64::from_integer(v)).collect();
        assert_eq!(sq.shells(), want.as_slice());
        let d = RadialFn::<Rational64>::delta();
        let f = RadialFn::new(vec![Rational64::new(1, 3), Rational64::new(-2, 5)]);
        assert_eq!(radial_convolve(&d, &f, &table).unwrap(), f);
        let big = RadialFn::<Rational64>::shell_indicator(3);
        assert!(matches!(
            radial_convolve(&big, &e1.clone(), &ConvolutionTable::new(s, 3).unwrap()),
            Err(Error::Overflow { needed: 4, radius: 3 })
        ));
    }

    #[test]
    fn bz_for_equal_points() {
        let s = spec(3, 0);
        let x = Word::from_letters(&s, &[a(0), a(2)]).unwrap();
        let counts = bz_counts(&s, &x, &x, 2).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[&Word::identity()], 6);
    }

    #[test]
    fn character_from_table() {
        let s = spec(1, 1);
        let table = ConvolutionTable::new(s, 6).unwrap();
        let phi = spherical_shell_function(Rational64::new(1, 2), &table).unwrap();
        let f = RadialFn::new(vec![Rational64::new(1, 2), Rational64::new(3, 1), Rational64::new(-1, 7)]);
        let g = RadialFn::new(vec![Rational64::new(0, 1), Rational64::new(2, 3), Rational64::new(5, 1)]);
        let fg = radial_convolve(&f, &g, &table).unwrap();
        assert_eq!(fg.pair(&phi, &s), f.pair(&phi, &s) * g.pair(&phi, &s));
    }

    fn word_from(spec: &FreeProductSpec, picks: &[usize]) -> Word {
        let gens = spec.generators();
        let letters: Vec<Letter> = picks.iter().map(|&i| gens[i % gens.len()]).collect();
        Word::from_letters(spec, &letters).unwrap()
    }

    fn any_spec() -> impl proptest::strategy::Strategy<Value = FreeProductSpec> {
        use proptest::prelude::*;
        (0u16..4, 0u16..3)
            .prop_filter("non-elementary", |(m, n)| m + 2 * n >= 3)
            .prop_map(|(m, n)| spec(m, n))
    }

    proptest::proptest! {
        #[test]
        fn group_laws(
            s in any_spec(),
            x in proptest::collection::vec(0usize..8, 0..8),
            y in proptest::collection::vec(0usize..8, 0..8),
            z in proptest::collection::vec(0usize..8, 0..8),
        ) {
            let (x, y, z) = (word_from(&s, &x), word_from(&s, &y), word_from(&s, &z));
            let xy = multiply(&s, &x, &y);
            proptest::prop_assert!(xy.is_reduced(&s));
            proptest::prop_assert!(xy.len() <= x.len() + y.len());
            proptest::prop_assert!(xy.len() >= x.len().abs_diff(y.len()));
            proptest::prop_assert!(multiply(&s, &x, &x.inverse(&s)).is_identity());
            proptest::prop_assert_eq!(
                multiply(&s, &xy, &z),
                multiply(&s, &x, &multiply(&s, &y, &z))
            );
        }

        #[test]
        fn radialization_contracts(
            s in any_spec(),
            entries in proptest::collection::vec(
                (proptest::collection::vec(0usize..8, 0..5), -5.0..5.0f64),
                1..12,
            ),
        ) {
            let mut f = WordFn::new();
            for (picks, v) in entries {
                *f.entry(word_from(&s, &picks)).or_insert(0.0) += v;
            }
            let radial = radialize(&f, &s);
            proptest::prop_assert!(radial.l1_norm(&s) <= l1_norm(&f) * (1.0 + 1e-12) + 1e-12);
        }
    }
}
