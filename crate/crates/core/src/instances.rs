//! Deterministic instance generators: the Krawtchouk Leonard pairs, random
//! contexts over GF(p), affine images of Krawtchouk pairs, and contexts whose
//! Delta has no tail at all.
//!
//! Every generator is a pure function of its arguments; randomness comes from
//! one [`SplitMix64`] stream seeded with the given seed.

use std::fmt;
use std::str::FromStr;

use crate::context::{verify_leonard_pair, Context};
use crate::delta::{build_delta, is_tail, DeltaGraph};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::ExactMatrix;
use crate::rng::{random_element, random_nonzero, SplitMix64};
use crate::spectral::spectrum;

pub const DEFAULT_MAX_RETRIES: usize = 100_000;

/// Bound on random rational entries.
const RATIONAL_BOUND: i64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Krawtchouk,
    /// Krawtchouk pair under `A -> a T^{-1} A T + b`, `A* -> a* A* + b*` with
    /// random scalars and random diagonal `T`, and a random eigenvalue order.
    AffineKrawtchouk,
    RandomGfp,
    CompleteDelta,
    /// Read from a file; not generated.
    Custom,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Krawtchouk, Family::AffineKrawtchouk, Family::RandomGfp, Family::CompleteDelta, Family::Custom];

    pub fn name(self) -> &'static str {
        match self {
            Family::Krawtchouk => "krawtchouk",
            Family::AffineKrawtchouk => "affine-krawtchouk",
            Family::RandomGfp => "random-gfp",
            Family::CompleteDelta => "complete-delta",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::Instance(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub family: Family,
    pub d: usize,
    pub field: FieldSpec,
    pub seed: u64,
    pub max_retries: usize,
}

impl GeneratorConfig {
    pub fn new(family: Family, d: usize, field: FieldSpec, seed: u64) -> Self {
        GeneratorConfig { family, d, field, seed, max_retries: DEFAULT_MAX_RETRIES }
    }

    pub fn generate(&self) -> Result<Context> {
        match self.family {
            Family::Krawtchouk => krawtchouk(self.d, self.field),
            Family::AffineKrawtchouk => affine_krawtchouk(self.d, self.field, self.seed),
            Family::RandomGfp => random_context_with(self.d, self.gfp()?, self.seed, true, self.max_retries),
            Family::CompleteDelta => non_example_complete_delta_with(self.d, self.gfp()?, self.seed, self.max_retries),
            Family::Custom => Err(Error::Instance("custom instances are read from files, not generated".into())),
        }
    }

    fn gfp(&self) -> Result<u32> {
        self.field.modulus().ok_or_else(|| Error::Instance(format!("family {} needs a field gfp:P", self.family)))
    }
}

fn ints(spec: FieldSpec, xs: impl IntoIterator<Item = i64>) -> Vec<FieldElement> {
    xs.into_iter().map(|x| spec.from_i64(x)).collect()
}

fn all_distinct(xs: &[FieldElement]) -> bool {
    (0..xs.len()).all(|i| (i + 1..xs.len()).all(|j| xs[i] != xs[j]))
}

/// `A_{i,i-1} = i`, `A_{i-1,i} = d - i + 1`.
pub fn krawtchouk_matrix(d: usize, spec: FieldSpec) -> ExactMatrix {
    let mut a = ExactMatrix::zeros(spec, d + 1);
    for i in 1..=d {
        a.set(i, i - 1, spec.from_i64(i as i64));
        a.set(i - 1, i, spec.from_i64((d - i + 1) as i64));
    }
    a
}

/// `d - 2i` for `0 <= i <= d`.
pub fn krawtchouk_eigenvalues(d: usize, spec: FieldSpec) -> Vec<FieldElement> {
    ints(spec, (0..=d).map(|i| d as i64 - 2 * i as i64))
}

/// The Krawtchouk pair `(A, diag(d - 2i))` as a context with `theta_i = d - 2i`.
/// Accepted iff the off-diagonal entries are nonzero and the `d - 2i` distinct in the field.
pub fn krawtchouk(d: usize, spec: FieldSpec) -> Result<Context> {
    if d == 0 {
        return Err(Error::DimensionZero);
    }
    let a = krawtchouk_matrix(d, spec);
    let theta = krawtchouk_eigenvalues(d, spec);
    if !a.is_irreducible_tridiagonal() || !all_distinct(&theta) {
        return Err(Error::FieldTooSmall(format!("Krawtchouk d = {d} degenerates over {spec}")));
    }
    let ctx = Context::build(a, theta.clone(), Some(&theta))?;
    if !verify_leonard_pair(ctx.a(), ctx.astar()).is_pair {
        return Err(Error::Integrity(format!("Krawtchouk d = {d} over {spec} is not a Leonard pair")));
    }
    let mut sorted = theta;
    sorted.sort_by(|x, y| x.canonical_cmp(y));
    if spectrum(ctx.a())? != sorted {
        return Err(Error::Integrity(format!("Krawtchouk d = {d} spectrum is not d - 2i")));
    }
    Ok(ctx)
}

fn shuffle<T>(xs: &mut [T], rng: &mut SplitMix64) {
    for i in (1..xs.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        xs.swap(i, j);
    }
}

/// A random affine image of the Krawtchouk pair; always a Leonard pair.
pub fn affine_krawtchouk(d: usize, spec: FieldSpec, seed: u64) -> Result<Context> {
    let base = krawtchouk(d, spec)?;
    let mut rng = SplitMix64::new(seed);
    let scale = random_nonzero(spec, &mut rng, RATIONAL_BOUND);
    let shift = random_element(spec, &mut rng, RATIONAL_BOUND);
    let dual_scale = random_nonzero(spec, &mut rng, RATIONAL_BOUND);
    let dual_shift = random_element(spec, &mut rng, RATIONAL_BOUND);
    let t: Vec<FieldElement> = (0..=d).map(|_| random_nonzero(spec, &mut rng, RATIONAL_BOUND)).collect();
    let mut a = ExactMatrix::zeros(spec, d + 1);
    for i in 0..=d {
        for j in 0..=d {
            let x = base.a().get(i, j);
            if !x.is_zero() {
                // (T^{-1} A T)_{ij} = A_{ij} t_j / t_i
                a.set(i, j, &(&(x * &t[j]) / &t[i]) * &scale);
            }
        }
        let diag = a.get(i, i) + &shift;
        a.set(i, i, diag);
    }
    let theta_star: Vec<FieldElement> =
        base.dual_eigenvalues().iter().map(|x| &(x * &dual_scale) + &dual_shift).collect();
    let mut order: Vec<FieldElement> = base.eigenvalues().iter().map(|x| &(x * &scale) + &shift).collect();
    shuffle(&mut order, &mut rng);
    Context::build(a, theta_star, Some(&order))
}

pub fn random_context(d: usize, p: u32, seed: u64) -> Result<Context> {
    random_context_with(d, p, seed, true, DEFAULT_MAX_RETRIES)
}

/// Rejection-samples an irreducible tridiagonal `A` over GF(p) until it is
/// multiplicity-free with spectrum in the field; `theta*` uniform, distinct
/// entries when `distinct_dual` is set.
pub fn random_context_with(d: usize, p: u32, seed: u64, distinct_dual: bool, max_retries: usize) -> Result<Context> {
    if d == 0 {
        return Err(Error::DimensionZero);
    }
    let spec = FieldSpec::prime(p as u64)?;
    if (p as usize) < d + 1 {
        return Err(Error::FieldTooSmall(format!("GF({p}) has fewer than d + 1 = {} elements", d + 1)));
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..max_retries {
        let mut a = ExactMatrix::zeros(spec, d + 1);
        for i in 0..=d {
            a.set(i, i, random_element(spec, &mut rng, 0));
            if i > 0 {
                a.set(i, i - 1, random_nonzero(spec, &mut rng, 0));
                a.set(i - 1, i, random_nonzero(spec, &mut rng, 0));
            }
        }
        if spectrum(&a).is_err() {
            continue;
        }
        let theta_star = loop {
            let t: Vec<FieldElement> = (0..=d).map(|_| random_element(spec, &mut rng, 0)).collect();
            if !distinct_dual || all_distinct(&t) {
                break t;
            }
        };
        return Context::build(a, theta_star, None);
    }
    Err(Error::RetriesExhausted(max_retries))
}

/// Whether no ordered pair of distinct vertices is a tail.
pub fn tail_free(g: &DeltaGraph) -> bool {
    (0..g.n()).all(|i| (0..g.n()).all(|j| i == j || !is_tail(g, i, j).map(|r| r.is_tail).unwrap_or(false)))
}

pub fn non_example_complete_delta(d: usize, p: u32, seed: u64) -> Result<Context> {
    non_example_complete_delta_with(d, p, seed, DEFAULT_MAX_RETRIES)
}

/// Random contexts until Delta has no tail; each attempt uses a derived seed.
pub fn non_example_complete_delta_with(d: usize, p: u32, seed: u64, max_retries: usize) -> Result<Context> {
    if d < 2 {
        return Err(Error::Instance("a tail-free Delta needs d >= 2".into()));
    }
    let mut seeds = SplitMix64::new(seed);
    for _ in 0..max_retries {
        let ctx = random_context_with(d, p, seeds.next_u64(), true, max_retries)?;
        if tail_free(&build_delta(&ctx)?) {
            return Ok(ctx);
        }
    }
    Err(Error::RetriesExhausted(max_retries))
}

/// Krawtchouk `A` for `d = 3` with `theta* = (1, -1, 1, -1)`: `beta = -2`
/// solves the recurrence and Delta is the two edges `0 - 3`, `1 - 2`, so every
/// edge gives a tail, but `theta*_0 = theta*_2`.
pub fn dual_repeat_example(spec: FieldSpec) -> Result<Context> {
    let a = krawtchouk_matrix(3, spec);
    let order = krawtchouk_eigenvalues(3, spec);
    Context::build(a, ints(spec, [1, -1, 1, -1]), Some(&order))
}
