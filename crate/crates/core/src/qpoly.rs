//! Deciding which ordered pairs `(E_i, E_j)` start a Q-polynomial ordering.
//!
//! The three-condition test (tail in Delta, a three-term recurrence for
//! `theta*`, `theta*_0` distinct from the other dual eigenvalues) is always run
//! next to the direct route: walk Delta from `i` through `j` and check the
//! Leonard system conditions. Any disagreement is reported as an error.

use std::collections::VecDeque;
use std::fmt;

use crate::context::{verify_leonard_system, Context};
use crate::delta::{build_delta, is_tail, q_polynomial_orderings, DeltaGraph, TailReport};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::ExactMatrix;

/// Solution status of `theta*_{i-1} - beta theta*_i + theta*_{i+1}` being independent of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Beta {
    Value(FieldElement),
    /// Every `beta` works (always the case for `d <= 2`).
    Unconstrained,
    NoSolution,
}

impl Beta {
    pub fn exists(&self) -> bool {
        !matches!(self, Beta::NoSolution)
    }

    /// `Value(b)` as `b`, the canonical `2` when unconstrained.
    pub fn concrete(&self, two: FieldElement) -> Option<FieldElement> {
        match self {
            Beta::Value(b) => Some(b.clone()),
            Beta::Unconstrained => Some(two),
            Beta::NoSolution => None,
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Value(b) => write!(f, "{b}"),
            Beta::Unconstrained => write!(f, "unconstrained"),
            Beta::NoSolution => write!(f, "none"),
        }
    }
}

/// `theta_{i-1} - beta theta_i + theta_{i+1}` for `1 <= i <= d - 1`.
fn residuals(theta: &[FieldElement], beta: &FieldElement) -> Vec<FieldElement> {
    theta.windows(3).map(|w| &(&w[0] - &(beta * &w[1])) + &w[2]).collect()
}

/// Each consecutive pair of residuals must agree:
/// `beta (theta_i - theta_{i+1}) = theta_{i-1} + theta_{i+1} - theta_i - theta_{i+2}`.
pub fn beta_solve(theta: &[FieldElement]) -> Beta {
    let mut found: Option<FieldElement> = None;
    for w in theta.windows(4) {
        let coeff = &w[1] - &w[2];
        let rhs = &(&w[0] + &w[2]) - &(&w[1] + &w[3]);
        if coeff.is_zero() {
            if !rhs.is_zero() {
                return Beta::NoSolution;
            }
            continue;
        }
        let b = &rhs / &coeff;
        match &found {
            Some(prev) if *prev != b => return Beta::NoSolution,
            Some(_) => {}
            None => found = Some(b),
        }
    }
    match found {
        Some(b) => Beta::Value(b),
        None => Beta::Unconstrained,
    }
}

/// Concrete recurrence constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constants {
    pub beta: FieldElement,
    pub gamma_star: FieldElement,
    pub delta_star: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceData {
    pub beta: Beta,
    /// Present whenever a `beta` exists; uses `beta = 2` when unconstrained.
    pub constants: Option<Constants>,
    /// `p_i` for `1 <= i <= d` (index `i - 1`).
    pub p_values: Vec<FieldElement>,
}

/// `p_i = theta*_{i-1}^2 - beta theta*_{i-1} theta*_i + theta*_i^2 - gamma* (theta*_{i-1} + theta*_i)`.
pub fn p_value(prev: &FieldElement, cur: &FieldElement, beta: &FieldElement, gamma: &FieldElement) -> FieldElement {
    let quad = &(&(prev * prev) - &(&(beta * prev) * cur)) + &(cur * cur);
    &quad - &(gamma * &(prev + cur))
}

/// `gamma*` and `delta*` for a concrete `beta`, with the constancy of the
/// residuals and of `p_i` and the telescoping identity all checked.
pub fn gamma_delta(theta: &[FieldElement], beta: &FieldElement) -> Result<(Constants, Vec<FieldElement>)> {
    let spec = beta.spec();
    let res = residuals(theta, beta);
    let gamma_star = res.first().cloned().unwrap_or_else(|| spec.zero());
    if res.iter().any(|r| *r != gamma_star) {
        return Err(Error::InconsistentRecurrence(format!("beta = {beta} leaves theta* residuals non-constant")));
    }
    let p: Vec<FieldElement> = theta.windows(2).map(|w| p_value(&w[0], &w[1], beta, &gamma_star)).collect();
    for (i, w) in theta.windows(3).enumerate() {
        let lhs = &p[i] - &p[i + 1];
        let rhs = &(&w[0] - &w[2]) * &(&res[i] - &gamma_star);
        if lhs != rhs {
            return Err(Error::Integrity(format!("telescoping identity fails at i = {}", i + 1)));
        }
    }
    let delta_star = p.first().cloned().ok_or(Error::DimensionZero)?;
    if let Some(k) = p.iter().position(|x| *x != delta_star) {
        return Err(Error::InconsistentRecurrence(format!("p_{} != p_1", k + 1)));
    }
    Ok((Constants { beta: beta.clone(), gamma_star, delta_star }, p))
}

pub fn recurrence(theta: &[FieldElement]) -> Result<RecurrenceData> {
    let beta = beta_solve(theta);
    let Some(spec) = theta.first().map(FieldElement::spec) else {
        return Err(Error::DimensionZero);
    };
    match beta.concrete(spec.from_i64(2)) {
        Some(b) => {
            let (constants, p_values) = gamma_delta(theta, &b)?;
            Ok(RecurrenceData { beta, constants: Some(constants), p_values })
        }
        None => Ok(RecurrenceData { beta, constants: None, p_values: Vec::new() }),
    }
}

/// `C = [A*, A*^2 A - beta A* A A* + A A*^2 - gamma* (A A* + A* A) - delta* A]`.
pub fn bracket(ctx: &Context, c: &Constants) -> ExactMatrix {
    let a = ctx.a();
    let s = ctx.astar();
    let sa = s * a;
    let as_ = a * s;
    let inner = &(&(&(&(s * &sa) - &(&sa * s).scale(&c.beta)) + &(&as_ * s)) - &(&as_ + &sa).scale(&c.gamma_star))
        - &a.scale(&c.delta_star);
    s.commutator(&inner)
}

pub fn bracket_identity_check(ctx: &Context, c: &Constants) -> bool {
    bracket(ctx, c).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleCheck {
    /// `(i, r, s, j)`, the unique path of length 3 from `i` to `j`.
    pub path: [usize; 4],
    /// `theta_i - (beta + 1) theta_r + (beta + 1) theta_s - theta_j = 0`.
    pub relation_holds: bool,
    /// `E_i A* E_r A* E_s A* E_j != 0`.
    pub product_nonzero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathRelationReport {
    pub quadruples: Vec<QuadrupleCheck>,
}

impl PathRelationReport {
    pub fn passed(&self) -> bool {
        self.quadruples.iter().all(|q| q.relation_holds && q.product_nonzero)
    }
}

fn distances_from(g: &DeltaGraph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].unwrap();
        for w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Every ordered pair at distance 3 joined by exactly one path `(i, r, s, j)`.
pub fn unique_length3_paths(g: &DeltaGraph) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..g.n() {
        let dist = distances_from(g, i);
        for (j, dj) in dist.iter().enumerate() {
            if *dj != Some(3) {
                continue;
            }
            let mut paths = Vec::new();
            for r in g.neighbors(i) {
                for s in g.neighbors(r) {
                    if s != i && g.adjacent(s, j) {
                        paths.push([i, r, s, j]);
                    }
                }
            }
            if let [p] = paths[..] {
                out.push(p);
            }
        }
    }
    out
}

pub fn path_relation_check(ctx: &Context, g: &DeltaGraph, beta: &FieldElement) -> PathRelationReport {
    let theta = ctx.eigenvalues();
    let b1 = beta + &ctx.spec().one();
    let quadruples = unique_length3_paths(g)
        .into_iter()
        .map(|path @ [i, r, s, j]| {
            let rel = &(&(&theta[i] - &(&b1 * &theta[r])) + &(&b1 * &theta[s])) - &theta[j];
            let e = |k: usize| ctx.idempotent(k);
            let s_mat = ctx.astar();
            let prod = &(&(&(&(&(e(i) * s_mat) * e(r)) * s_mat) * e(s)) * s_mat) * e(j);
            QuadrupleCheck { path, relation_holds: rel.is_zero(), product_nonzero: !prod.is_zero() }
        })
        .collect();
    PathRelationReport { quadruples }
}

/// The first condition of the pair test that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureClause {
    NotTail,
    NoBeta,
    /// `theta*_0 = theta*_k`.
    DualEigenvalueRepeat(usize),
}

impl fmt::Display for FailureClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureClause::NotTail => write!(f, "not_a_tail"),
            FailureClause::NoBeta => write!(f, "no_beta"),
            FailureClause::DualEigenvalueRepeat(k) => write!(f, "theta_star_0_equals_theta_star_{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Q-polynomial ordering of the eigenvalue indices, starting `i, j`.
    Ordering(Vec<usize>),
    Failure(FailureClause),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolyVerdict {
    pub pair: (usize, usize),
    pub tail: TailReport,
    pub recurrence_ok: bool,
    pub condition_iii: bool,
    pub qpoly: bool,
    pub certificate: Certificate,
    pub oracle_agrees: bool,
}

impl QPolyVerdict {
    pub fn ordering(&self) -> Option<&[usize]> {
        match &self.certificate {
            Certificate::Ordering(o) => Some(o),
            Certificate::Failure(_) => None,
        }
    }
}

/// `Some(k)` for the first `k >= 1` with `theta*_0 = theta*_k`.
pub fn dual_repeat_of_first(theta_star: &[FieldElement]) -> Option<usize> {
    (1..theta_star.len()).find(|&k| theta_star[k] == theta_star[0])
}

/// Everything about a context that does not depend on the pair: Delta, the
/// recurrence, and the Leonard-system orderings found by walking Delta.
#[derive(Debug, Clone)]
pub struct QPolyAnalysis<'a> {
    ctx: &'a Context,
    delta: DeltaGraph,
    recurrence: RecurrenceData,
    oracle_orderings: Vec<Vec<usize>>,
}

impl<'a> QPolyAnalysis<'a> {
    pub fn new(ctx: &'a Context) -> Result<Self> {
        let delta = build_delta(ctx)?;
        let recurrence = recurrence(ctx.dual_eigenvalues())?;
        let oracle_orderings =
            q_polynomial_orderings(&delta).into_iter().filter(|o| verify_leonard_system(ctx, o).is_system).collect();
        Ok(QPolyAnalysis { ctx, delta, recurrence, oracle_orderings })
    }

    pub fn context(&self) -> &Context {
        self.ctx
    }

    pub fn delta(&self) -> &DeltaGraph {
        &self.delta
    }

    pub fn recurrence(&self) -> &RecurrenceData {
        &self.recurrence
    }

    /// Q-polynomial orderings found by the direct route.
    pub fn oracle_orderings(&self) -> &[Vec<usize>] {
        &self.oracle_orderings
    }

    pub fn oracle_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.oracle_orderings.iter().map(|o| (o[0], o[1])).collect();
        out.dedup();
        out
    }

    pub fn decide(&self, i: usize, j: usize) -> Result<QPolyVerdict> {
        let tail = is_tail(&self.delta, i, j)?;
        let recurrence_ok = self.recurrence.beta.exists();
        let repeat = dual_repeat_of_first(self.ctx.dual_eigenvalues());
        let condition_iii = repeat.is_none();
        let qpoly = tail.is_tail && recurrence_ok && condition_iii;
        let oracle = self.oracle_orderings.iter().find(|o| o[0] == i && o[1] == j);
        if qpoly != oracle.is_some() {
            return Err(Error::OracleDisagreement { i, j, verdict: qpoly, oracle: oracle.is_some() });
        }
        let certificate = match (oracle, repeat) {
            (Some(o), _) => Certificate::Ordering(o.clone()),
            _ if !tail.is_tail => Certificate::Failure(FailureClause::NotTail),
            _ if !recurrence_ok => Certificate::Failure(FailureClause::NoBeta),
            (None, Some(k)) => Certificate::Failure(FailureClause::DualEigenvalueRepeat(k)),
            (None, None) => unreachable!("all three conditions hold, so the oracle found an ordering"),
        };
        Ok(QPolyVerdict { pair: (i, j), tail, recurrence_ok, condition_iii, qpoly, certificate, oracle_agrees: true })
    }

    /// `decide` on every ordered pair, row-major.
    pub fn sweep(&self) -> Result<Vec<QPolyVerdict>> {
        let n = self.ctx.n();
        let mut out = Vec::with_capacity(n * (n - 1));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push(self.decide(i, j)?);
                }
            }
        }
        Ok(out)
    }
}

pub fn decide(ctx: &Context, i: usize, j: usize) -> Result<QPolyVerdict> {
    QPolyAnalysis::new(ctx)?.decide(i, j)
}

pub fn theorem_equivalence_sweep(ctx: &Context) -> Result<Vec<QPolyVerdict>> {
    QPolyAnalysis::new(ctx)?.sweep()
}

/// For a Leonard system ordering, whether the `beta` of the `theta*`
/// recurrence also makes `theta_{i-1} - beta theta_i + theta_{i+1}` constant
/// along the ordering.
pub fn theta_beta_crosscheck(ctx: &Context, ordering: &[usize]) -> bool {
    let theta: Vec<FieldElement> = ordering.iter().map(|&k| ctx.eigenvalues()[k].clone()).collect();
    match beta_solve(ctx.dual_eigenvalues()) {
        Beta::Value(b) => {
            let res = residuals(&theta, &b);
            res.iter().all(|r| *r == res[0])
        }
        Beta::Unconstrained => ctx.d() <= 2,
        Beta::NoSolution => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn v(xs: &[i64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    fn krawtchouk_ctx(d: usize, theta_star: Option<Vec<FieldElement>>) -> Context {
        let mut a = ExactMatrix::zeros(q(), d + 1);
        for i in 1..=d {
            a.set(i, i - 1, q().from_i64(i as i64));
            a.set(i - 1, i, q().from_i64((d - i + 1) as i64));
        }
        let natural: Vec<FieldElement> = (0..=d).map(|i| q().from_i64(d as i64 - 2 * i as i64)).collect();
        Context::build(a, theta_star.unwrap_or_else(|| natural.clone()), Some(&natural)).unwrap()
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_solve(&v(&[3, 1, -1, -3])), Beta::Value(q().from_i64(2)));
        assert_eq!(beta_solve(&v(&[0, 1, 5])), Beta::Unconstrained);
        assert_eq!(beta_solve(&v(&[0, 1, 2, 4])), Beta::Value(q().from_i64(3)));
        assert_eq!(beta_solve(&v(&[0, 1, 2, 4, 10])), Beta::NoSolution);
        assert_eq!(beta_solve(&v(&[0, 1, 1, 2])), Beta::NoSolution);
        assert_eq!(beta_solve(&v(&[5, 1, 1, 5])), Beta::Unconstrained);
    }

    #[test]
    fn gamma_delta_examples() {
        let (c, p) = gamma_delta(&v(&[3, 1, -1, -3]), &q().from_i64(2)).unwrap();
        assert_eq!((c.gamma_star, c.delta_star), (q().zero(), q().from_i64(4)));
        assert_eq!(p, v(&[4, 4, 4]));
        let rec = recurrence(&v(&[1, -1])).unwrap();
        let c = rec.constants.unwrap();
        assert_eq!((c.beta, c.gamma_star, c.delta_star), (q().from_i64(2), q().zero(), q().from_i64(4)));
        assert!(matches!(gamma_delta(&v(&[3, 1, -1, -3]), &q().from_i64(3)), Err(Error::InconsistentRecurrence(_))));
    }

    #[test]
    fn bracket_examples() {
        let ctx = krawtchouk_ctx(3, None);
        let rec = recurrence(ctx.dual_eigenvalues()).unwrap();
        let c = rec.constants.unwrap();
        assert!(bracket_identity_check(&ctx, &c));
        let bumped = Constants { delta_star: &c.delta_star + &q().one(), ..c };
        assert!(!bracket_identity_check(&ctx, &bumped));
        let one = krawtchouk_ctx(1, None);
        assert!(bracket_identity_check(&one, &recurrence(one.dual_eigenvalues()).unwrap().constants.unwrap()));
    }

    #[test]
    fn path_relation_on_krawtchouk() {
        let ctx = krawtchouk_ctx(4, None);
        let g = build_delta(&ctx).unwrap();
        let report = path_relation_check(&ctx, &g, &q().from_i64(2));
        // pairs at distance 3 on a 5-vertex path: (0,3), (1,4) and reverses
        assert_eq!(report.quadruples.len(), 4);
        assert!(report.passed());
        assert!(report.quadruples.iter().any(|c| c.path == [0, 1, 2, 3]));
        let small = krawtchouk_ctx(2, None);
        assert!(path_relation_check(&small, &build_delta(&small).unwrap(), &q().from_i64(2)).quadruples.is_empty());
    }

    #[test]
    fn decide_examples() {
        let ctx = krawtchouk_ctx(3, None);
        let yes = decide(&ctx, 0, 1).unwrap();
        assert!(yes.qpoly && yes.oracle_agrees);
        assert_eq!(yes.ordering(), Some(&[0, 1, 2, 3][..]));
        let no = decide(&ctx, 1, 2).unwrap();
        assert!(!no.qpoly && !no.tail.is_tail);
        assert_eq!(no.certificate, Certificate::Failure(FailureClause::NotTail));
        assert!(matches!(decide(&ctx, 1, 1), Err(Error::SamePair(1))));

        let positives: Vec<_> = theorem_equivalence_sweep(&krawtchouk_ctx(4, None))
            .unwrap()
            .into_iter()
            .filter(|v| v.qpoly)
            .map(|v| v.pair)
            .collect();
        assert_eq!(positives, vec![(0, 1), (4, 3)]);
    }

    #[test]
    fn constant_dual_eigenvalues_fail_condition_iii() {
        let ctx = krawtchouk_ctx(3, Some(v(&[1, 1, 1, 1])));
        for verdict in theorem_equivalence_sweep(&ctx).unwrap() {
            assert!(!verdict.qpoly && !verdict.condition_iii);
        }
    }

    #[test]
    fn crosscheck_on_krawtchouk() {
        for d in 1..=5 {
            let ctx = krawtchouk_ctx(d, None);
            let order: Vec<usize> = (0..=d).collect();
            assert!(theta_beta_crosscheck(&ctx, &order));
        }
    }

    #[test]
    fn relabeling_permutes_verdicts() {
        let ctx = krawtchouk_ctx(3, None);
        let perm = [2, 0, 3, 1];
        let moved = ctx.relabeled(&perm).unwrap();
        let before = QPolyAnalysis::new(&ctx).unwrap();
        let after = QPolyAnalysis::new(&moved).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert_eq!(after.decide(a, b).unwrap().qpoly, before.decide(perm[a], perm[b]).unwrap().qpoly);
                }
            }
        }
    }
}
