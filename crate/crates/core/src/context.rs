//! The standing setup: `A` irreducible tridiagonal with respect to a system of
//! dual idempotents `E*_i`, `A* = sum theta*_i E*_i`, and `A` multiplicity-free.
//! Also the Leonard pair and Leonard system verifiers.
//!
//! Contexts live in the canonical model where the dual eigenbasis is the
//! standard basis: `E*_i` are coordinate projections and `A* = diag(theta*)`.
//! Raw pairs `(A, A*)` are rotated into this model by [`Context::from_pair`].

use std::fmt;

use crate::delta::path_traversal;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{BasisChange, ExactMatrix, Vector};
use crate::poly::ExactPolynomial;
use crate::spectral::{eigen_split, eigen_split_ordered, primitive_idempotent, EigenData, IdempotentSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    spec: FieldSpec,
    d: usize,
    a: ExactMatrix,
    dual_idempotents: IdempotentSystem,
    dual_eigenvalues: Vec<FieldElement>,
    astar: ExactMatrix,
    eigen: EigenData,
}

/// `build_context` with the default (ascending) eigenvalue order.
pub fn build_context(a: ExactMatrix, theta_star: Vec<FieldElement>) -> Result<Context> {
    Context::build(a, theta_star, None)
}

impl Context {
    /// `a` is given in the dual eigenbasis; `theta_star` may repeat values.
    /// `eigen_order`, when present, fixes the ordering of the eigenvalues of `a`.
    pub fn build(
        a: ExactMatrix,
        theta_star: Vec<FieldElement>,
        eigen_order: Option<&[FieldElement]>,
    ) -> Result<Context> {
        let spec = a.spec();
        let n = a.n();
        if n < 2 {
            return Err(Error::DimensionZero);
        }
        if theta_star.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: theta_star.len() });
        }
        if let Some(x) = theta_star.iter().find(|x| x.spec() != spec) {
            return Err(Error::MixedEntries(spec, x.spec()));
        }
        let dual_idempotents = IdempotentSystem::coordinate(spec, n);
        if let Some((i, j)) = dual_pattern_violation(&a, &dual_idempotents) {
            return Err(Error::ShapeViolation { i, j });
        }
        debug_assert!(a.is_irreducible_tridiagonal());
        let eigen = match eigen_order {
            Some(order) => eigen_split_ordered(&a, order)?,
            None => eigen_split(&a)?,
        };
        let astar = ExactMatrix::diagonal(spec, &theta_star);
        Ok(Context { spec, d: n - 1, a, dual_idempotents, dual_eigenvalues: theta_star, astar, eigen })
    }

    /// Rotates a raw pair into the canonical model: the dual eigenbasis is an
    /// eigenbasis of `astar` ordered so that `a` becomes irreducible tridiagonal.
    pub fn from_pair(a: &ExactMatrix, astar: &ExactMatrix, eigen_order: Option<&[FieldElement]>) -> Result<Context> {
        if a.n() != astar.n() {
            return Err(Error::DimensionMismatch { expected: a.n(), found: astar.n() });
        }
        if a.spec() != astar.spec() {
            return Err(Error::MixedEntries(a.spec(), astar.spec()));
        }
        let split = eigen_split(astar)?;
        let basis = match tridiagonalizing_basis(a, &split)? {
            Some(b) => b,
            None => {
                let (i, j) = first_offending_pair(a, &split);
                return Err(Error::ShapeViolation { i, j });
            }
        };
        let rotated = a.represent(&basis)?;
        let theta_star = (0..a.n())
            .map(|k| {
                let v = basis.forward.column(k);
                eigenvalue_of(astar, &v)
            })
            .collect();
        Context::build(rotated, theta_star, eigen_order)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.d + 1
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn astar(&self) -> &ExactMatrix {
        &self.astar
    }

    pub fn dual_idempotents(&self) -> &IdempotentSystem {
        &self.dual_idempotents
    }

    pub fn dual_eigenvalues(&self) -> &[FieldElement] {
        &self.dual_eigenvalues
    }

    pub fn eigen(&self) -> &EigenData {
        &self.eigen
    }

    pub fn eigenvalues(&self) -> &[FieldElement] {
        &self.eigen.eigenvalues
    }

    /// `E_i`, in this context's eigenvalue order.
    pub fn idempotent(&self, i: usize) -> &ExactMatrix {
        &self.eigen.idempotents[i]
    }

    /// Same setup with the eigenvalues of `A` relabeled: new index `k` is old index `perm[k]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Context> {
        check_permutation(perm, self.n())?;
        Ok(Context { eigen: self.eigen.reordered(perm), ..self.clone() })
    }

    pub fn dual_eigenvalues_distinct(&self) -> bool {
        let t = &self.dual_eigenvalues;
        (0..t.len()).all(|i| (i + 1..t.len()).all(|j| t[i] != t[j]))
    }

    /// Whether `E*_i A E*_j` is zero exactly when `|i - j| > 1` and nonzero when `|i - j| = 1`,
    /// computed through the idempotents rather than matrix entries.
    pub fn dual_pattern_holds(&self) -> bool {
        dual_pattern_violation(&self.a, &self.dual_idempotents).is_none()
    }
}

fn dual_pattern_violation(a: &ExactMatrix, dual: &IdempotentSystem) -> Option<(usize, usize)> {
    tridiagonal_pattern_violation(a.n(), |i, j| &(dual.get(i) * a) * dual.get(j))
}

fn tridiagonal_pattern_violation(n: usize, block: impl Fn(usize, usize) -> ExactMatrix) -> Option<(usize, usize)> {
    for i in 0..n {
        for j in 0..n {
            let dist = i.abs_diff(j);
            if dist == 0 {
                continue;
            }
            let zero = block(i, j).is_zero();
            if (dist > 1 && !zero) || (dist == 1 && zero) {
                return Some((i, j));
            }
        }
    }
    None
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidOrdering(n.saturating_sub(1)));
    }
    for &k in perm {
        if k >= n || seen[k] {
            return Err(Error::InvalidOrdering(n - 1));
        }
        seen[k] = true;
    }
    Ok(())
}

/// `theta` with `x v = theta v`, for an eigenvector `v`.
fn eigenvalue_of(x: &ExactMatrix, v: &[FieldElement]) -> FieldElement {
    let k = v.iter().position(|c| !c.is_zero()).expect("eigenvector is nonzero");
    &x.mul_vec(v)[k] / &v[k]
}

/// Nonzero column of a rank-one idempotent, normalized to first nonzero entry 1.
fn spanning_vector(e: &ExactMatrix) -> Vector {
    let col = (0..e.n()).map(|j| e.column(j)).find(|c| c.iter().any(|x| !x.is_zero())).expect("rank one");
    let lead = col.iter().find(|x| !x.is_zero()).unwrap().inv().unwrap();
    col.iter().map(|x| x * &lead).collect()
}

/// With `split` an eigen-splitting of the operator that should become
/// diagonal, finds an ordering of its eigenlines in which `x` is irreducible
/// tridiagonal, returning the basis. Eigenlines are unique up to scaling and
/// scaling preserves zero patterns, so only orderings matter, and such an
/// ordering exists iff the off-diagonal support graph is a path whose edges are
/// nonzero in both directions.
fn tridiagonalizing_basis(x: &ExactMatrix, split: &EigenData) -> Result<Option<BasisChange>> {
    let spec = x.spec();
    let vectors: Vec<Vector> = split.idempotents.iter().map(spanning_vector).collect();
    let eigenbasis = BasisChange::from_vectors(spec, &vectors)?;
    let m = x.represent(&eigenbasis)?;
    let n = m.n();
    let support = |i: usize, j: usize| !m.get(i, j).is_zero() || !m.get(j, i).is_zero();
    let Some(order) = path_traversal(n, support) else {
        return Ok(None);
    };
    if order.windows(2).any(|w| m.get(w[0], w[1]).is_zero() || m.get(w[1], w[0]).is_zero()) {
        return Ok(None);
    }
    let ordered: Vec<Vector> = order.iter().map(|&k| vectors[k].clone()).collect();
    Ok(Some(BasisChange::from_vectors(spec, &ordered)?))
}

fn first_offending_pair(x: &ExactMatrix, split: &EigenData) -> (usize, usize) {
    let vectors: Vec<Vector> = split.idempotents.iter().map(spanning_vector).collect();
    let Ok(basis) = BasisChange::from_vectors(x.spec(), &vectors) else { return (0, 0) };
    let Ok(m) = x.represent(&basis) else { return (0, 0) };
    tridiagonal_pattern_violation(m.n(), |i, j| {
        let mut e = ExactMatrix::zeros(m.spec(), m.n());
        e.set(i, j, m.get(i, j).clone());
        e
    })
    .unwrap_or((0, 1))
}

/// Which of `A`, `A*` a failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    A,
    AStar,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::A => write!(f, "A"),
            Role::AStar => write!(f, "Astar"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeonardFailure {
    DimensionMismatch,
    MixedFields,
    NotSplit(Role),
    NotMultiplicityFree(Role),
    /// The other operator is not irreducible tridiagonal in any ordering of this role's eigenbasis.
    NotTridiagonalizable(Role),
    InvalidOrdering,
    DualEigenvaluesRepeat,
    DualIdempotentMismatch(usize),
    DualPattern(usize, usize),
    PrimaryPattern(usize, usize),
}

impl fmt::Display for LeonardFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeonardFailure::DimensionMismatch => write!(f, "dimension_mismatch"),
            LeonardFailure::MixedFields => write!(f, "mixed_fields"),
            LeonardFailure::NotSplit(r) => write!(f, "{r}_spectrum_not_split"),
            LeonardFailure::NotMultiplicityFree(r) => write!(f, "{r}_not_multiplicity_free"),
            LeonardFailure::NotTridiagonalizable(r) => write!(f, "not_tridiagonal_in_{r}_eigenbasis"),
            LeonardFailure::InvalidOrdering => write!(f, "invalid_ordering"),
            LeonardFailure::DualEigenvaluesRepeat => write!(f, "theta_star_not_distinct"),
            LeonardFailure::DualIdempotentMismatch(i) => write!(f, "dual_idempotent_{i}_mismatch"),
            LeonardFailure::DualPattern(i, j) => write!(f, "dual_pattern_violated_at_{i}_{j}"),
            LeonardFailure::PrimaryPattern(i, j) => write!(f, "primary_pattern_violated_at_{i}_{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeonardVerdict {
    pub is_pair: bool,
    pub is_system: bool,
    /// Basis in which `A` is irreducible tridiagonal and `A*` diagonal.
    pub witness_basis_a: Option<BasisChange>,
    /// Basis in which `A*` is irreducible tridiagonal and `A` diagonal.
    pub witness_basis_astar: Option<BasisChange>,
    pub failure: Option<LeonardFailure>,
}

impl LeonardVerdict {
    fn failed(failure: LeonardFailure) -> Self {
        LeonardVerdict {
            is_pair: false,
            is_system: false,
            witness_basis_a: None,
            witness_basis_astar: None,
            failure: Some(failure),
        }
    }
}

/// One half of the Leonard pair definition: a basis diagonalizing `diag_op`
/// in which `tri_op` is irreducible tridiagonal.
///
/// Such a basis forces `diag_op` to be diagonalizable, and since `diag_op` is
/// then irreducible tridiagonal in the other half's basis, each of its
/// eigenspaces is one-dimensional. So both operators of a Leonard pair are
/// multiplicity-free, and it suffices to search eigenline orderings.
fn half_pair(
    tri_op: &ExactMatrix,
    diag_op: &ExactMatrix,
    role: Role,
) -> std::result::Result<BasisChange, LeonardFailure> {
    let split = match eigen_split(diag_op) {
        Ok(s) => s,
        Err(Error::NotSplit { .. }) => return Err(LeonardFailure::NotSplit(role)),
        Err(_) => return Err(LeonardFailure::NotMultiplicityFree(role)),
    };
    match tridiagonalizing_basis(tri_op, &split) {
        Ok(Some(b)) => Ok(b),
        _ => Err(LeonardFailure::NotTridiagonalizable(role)),
    }
}

/// Decides whether `(a, astar)` is a Leonard pair, with witness bases.
pub fn verify_leonard_pair(a: &ExactMatrix, astar: &ExactMatrix) -> LeonardVerdict {
    if a.n() != astar.n() {
        return LeonardVerdict::failed(LeonardFailure::DimensionMismatch);
    }
    if a.spec() != astar.spec() {
        return LeonardVerdict::failed(LeonardFailure::MixedFields);
    }
    let first = half_pair(a, astar, Role::AStar);
    let second = half_pair(astar, a, Role::A);
    match (first, second) {
        (Ok(wa), Ok(wastar)) => LeonardVerdict {
            is_pair: true,
            is_system: false,
            witness_basis_a: Some(wa),
            witness_basis_astar: Some(wastar),
            failure: None,
        },
        (Err(f), _) | (_, Err(f)) => LeonardVerdict::failed(f),
    }
}

/// Checks the five Leonard system conditions for `(A; E_{ordering}; A*; E*)`.
pub fn verify_leonard_system(ctx: &Context, ordering: &[usize]) -> LeonardVerdict {
    let pair = verify_leonard_pair(ctx.a(), ctx.astar());
    let fail = |failure| LeonardVerdict { is_system: false, failure: Some(failure), ..pair.clone() };
    if check_permutation(ordering, ctx.n()).is_err() {
        return fail(LeonardFailure::InvalidOrdering);
    }
    // (i): A is multiplicity-free by construction; A* = diag(theta*) is iff theta* is distinct
    if !ctx.dual_eigenvalues_distinct() {
        return fail(LeonardFailure::DualEigenvaluesRepeat);
    }
    // (iii)
    for i in 0..ctx.n() {
        match primitive_idempotent(ctx.astar(), ctx.dual_eigenvalues(), i) {
            Ok(e) if &e == ctx.dual_idempotents().get(i) => {}
            _ => return fail(LeonardFailure::DualIdempotentMismatch(i)),
        }
    }
    // (iv)
    if let Some((i, j)) = dual_pattern_violation(ctx.a(), ctx.dual_idempotents()) {
        return fail(LeonardFailure::DualPattern(i, j));
    }
    // (v), with (ii) given by the permutation check
    let e = |k: usize| ctx.idempotent(ordering[k]);
    if let Some((i, j)) = tridiagonal_pattern_violation(ctx.n(), |i, j| &(e(i) * ctx.astar()) * e(j)) {
        return fail(LeonardFailure::PrimaryPattern(i, j));
    }
    debug_assert!(pair.is_pair, "a Leonard system yields a Leonard pair");
    LeonardVerdict { is_system: true, failure: None, ..pair }
}

/// Whether the minimal polynomial of `A*` is `prod (lambda - theta*_i)`.
pub fn minimal_polynomial_check(ctx: &Context) -> bool {
    minimal_polynomial_matches(ctx.astar(), ctx.dual_eigenvalues())
}

pub fn minimal_polynomial_matches(x: &ExactMatrix, roots: &[FieldElement]) -> bool {
    x.minimal_polynomial() == ExactPolynomial::from_roots(x.spec(), roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64(q(), rows).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    fn krawtchouk(d: usize) -> ExactMatrix {
        let mut a = ExactMatrix::zeros(q(), d + 1);
        for i in 1..=d {
            a.set(i, i - 1, q().from_i64(i as i64));
            a.set(i - 1, i, q().from_i64((d - i + 1) as i64));
        }
        a
    }

    fn krawtchouk_theta(d: usize) -> Vec<FieldElement> {
        (0..=d).map(|i| q().from_i64(d as i64 - 2 * i as i64)).collect()
    }

    #[test]
    fn build_examples() {
        let ctx = build_context(m(&[&[0, 1], &[1, 0]]), v(&[1, -1])).unwrap();
        assert_eq!(ctx.d(), 1);
        assert_eq!(ctx.eigenvalues(), &v(&[-1, 1])[..]);
        assert!(ctx.dual_pattern_holds());
        assert!(ctx.eigen().violations().is_empty());
        let ordered = Context::build(m(&[&[0, 1], &[1, 0]]), v(&[1, -1]), Some(&v(&[1, -1]))).unwrap();
        assert_eq!(ordered.eigenvalues(), &v(&[1, -1])[..]);

        assert!(matches!(build_context(m(&[&[1, 0], &[0, 2]]), v(&[0, 1])), Err(Error::ShapeViolation { .. })));
        assert!(matches!(
            build_context(m(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]), v(&[1, 2, 3])),
            Err(Error::NotSplit { .. })
        ));
        assert!(matches!(build_context(m(&[&[3]]), v(&[1])), Err(Error::DimensionZero)));
        assert!(matches!(build_context(m(&[&[0, 1], &[1, 0]]), v(&[1])), Err(Error::DimensionMismatch { .. })));
        // repeated theta* allowed at this stage
        assert!(build_context(m(&[&[0, 1], &[1, 0]]), v(&[2, 2])).is_ok());
    }

    #[test]
    fn leonard_pair_examples() {
        let a = krawtchouk(3);
        let astar = ExactMatrix::diagonal(q(), &krawtchouk_theta(3));
        let verdict = verify_leonard_pair(&a, &astar);
        assert!(verdict.is_pair, "{:?}", verdict.failure);
        let wa = verdict.witness_basis_a.as_ref().unwrap();
        assert!(a.represent(wa).unwrap().is_irreducible_tridiagonal());
        assert!(astar.represent(wa).unwrap().is_diagonal());
        let ws = verdict.witness_basis_astar.as_ref().unwrap();
        assert!(astar.represent(ws).unwrap().is_irreducible_tridiagonal());
        assert!(a.represent(ws).unwrap().is_diagonal());

        assert!(!verify_leonard_pair(&a, &a).is_pair);
        assert!(!verify_leonard_pair(&astar, &astar).is_pair);
        let one = m(&[&[4]]);
        assert!(verify_leonard_pair(&one, &m(&[&[-1]])).is_pair);
        // A* = I: repeated eigenvalue
        let v = verify_leonard_pair(&a, &ExactMatrix::identity(q(), 4));
        assert_eq!(v.failure, Some(LeonardFailure::NotMultiplicityFree(Role::AStar)));
    }

    #[test]
    fn leonard_pair_is_symmetric_under_swap() {
        let a = krawtchouk(2);
        let astar = ExactMatrix::diagonal(q(), &krawtchouk_theta(2));
        let fwd = verify_leonard_pair(&a, &astar);
        let back = verify_leonard_pair(&astar, &a);
        assert_eq!(fwd.is_pair, back.is_pair);
        assert_eq!(fwd.witness_basis_a, back.witness_basis_astar);
        assert_eq!(fwd.witness_basis_astar, back.witness_basis_a);
    }

    #[test]
    fn leonard_system_examples() {
        let a = krawtchouk(2);
        let natural = v(&[2, 0, -2]);
        let ctx = Context::build(a.clone(), krawtchouk_theta(2), Some(&natural)).unwrap();
        let ls = verify_leonard_system(&ctx, &[0, 1, 2]);
        assert!(ls.is_system && ls.is_pair);
        // theta order (0, 2, -2): E_0 A* E_2 != 0 where |0 - 2| > 1
        let bad = verify_leonard_system(&ctx, &[1, 0, 2]);
        assert!(!bad.is_system);
        assert!(matches!(bad.failure, Some(LeonardFailure::PrimaryPattern(..))));
        let rep = Context::build(a, v(&[1, 1, 0]), Some(&natural)).unwrap();
        let ls = verify_leonard_system(&rep, &[0, 1, 2]);
        assert_eq!(ls.failure, Some(LeonardFailure::DualEigenvaluesRepeat));
        assert!(!verify_leonard_system(&ctx, &[0, 0, 1]).is_system);
    }

    #[test]
    fn minimal_polynomial_examples() {
        assert!(minimal_polynomial_matches(&m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]), &v(&[1, 2, 3])));
        assert!(!minimal_polynomial_matches(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]), &v(&[1, 1, 2])));
        let ctx = build_context(krawtchouk(4), krawtchouk_theta(4)).unwrap();
        assert!(minimal_polynomial_check(&ctx));
    }

    #[test]
    fn from_pair_rotates_into_canonical_model() {
        // Krawtchouk pair conjugated by a dense invertible matrix
        let a = krawtchouk(2);
        let astar = ExactMatrix::diagonal(q(), &krawtchouk_theta(2));
        let p = m(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let pinv = p.inverse().unwrap();
        let a2 = &(&pinv * &a) * &p;
        let astar2 = &(&pinv * &astar) * &p;
        let ctx = Context::from_pair(&a2, &astar2, None).unwrap();
        assert!(ctx.a().is_irreducible_tridiagonal());
        let mut sorted = ctx.dual_eigenvalues().to_vec();
        sorted.sort_by(|x, y| x.canonical_cmp(y));
        assert_eq!(sorted, v(&[-2, 0, 2]));
        assert_eq!(ctx.a().char_poly(), a.char_poly());
        assert!(matches!(Context::from_pair(&astar, &astar, None), Err(Error::ShapeViolation { .. })));
    }
}
