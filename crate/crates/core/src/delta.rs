//! The graph on eigenline indices of `A` with `i ~ j` iff `i != j` and
//! `E_i A* E_j != 0`; tails, path traversals, and the correspondence between
//! `A*`-invariant subspaces and Delta-closed vertex sets.

use std::fmt::Write as _;

use serde::Serialize;

use crate::context::{verify_leonard_system, Context};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{echelon_basis, in_span, ExactMatrix, Vector};

/// Exhaustive subset sweeps are limited to `d <= SWEEP_MAX_D`.
pub const SWEEP_MAX_D: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl DeltaGraph {
    pub fn empty(n: usize) -> Self {
        DeltaGraph { n, adj: vec![vec![false; n]; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = DeltaGraph::empty(n);
        for i in 0..n {
            for j in 0..n {
                g.adj[i][j] = i != j;
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = DeltaGraph::empty(n);
        for &(i, j) in edges {
            g.check_pair(i, j)?;
            g.adj[i][j] = true;
            g.adj[j][i] = true;
        }
        Ok(g)
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        for v in [i, j] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        if i == j {
            return Err(Error::SamePair(i));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.adj[i][j]).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Connected, acyclic, maximum degree at most two.
    pub fn is_path(&self) -> bool {
        path_traversal(self.n, |i, j| self.adj[i][j]).is_some()
    }

    /// New vertex `k` is old vertex `perm[k]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut g = DeltaGraph::empty(self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                g.adj[a][b] = self.adj[perm[a]][perm[b]];
            }
        }
        g
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", name.replace('"', "'"));
        for v in 0..self.n {
            let _ = writeln!(s, "  {v};");
        }
        for (i, j) in self.edges() {
            let _ = writeln!(s, "  {i} -- {j};");
        }
        s.push_str("}\n");
        s
    }
}

/// Builds Delta from a context, checking rather than assuming that
/// `E_i A* E_j = 0` iff `E_j A* E_i = 0`.
pub fn build_delta(ctx: &Context) -> Result<DeltaGraph> {
    let n = ctx.n();
    let left: Vec<ExactMatrix> = (0..n).map(|i| ctx.idempotent(i) * ctx.astar()).collect();
    let mut g = DeltaGraph::empty(n);
    for (i, li) in left.iter().enumerate() {
        for j in 0..n {
            if i != j {
                g.adj[i][j] = !(li * ctx.idempotent(j)).is_zero();
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if g.adj[i][j] != g.adj[j][i] {
                return Err(Error::AsymmetricDelta { i, j });
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailReport {
    pub pair: (usize, usize),
    pub is_tail: bool,
    /// Neighbors of `i` other than `j`; the first clause needs this empty.
    pub extra_neighbors_of_first: Vec<usize>,
    /// Neighbors of `j` other than `i`; the second clause allows at most one.
    pub other_neighbors_of_second: Vec<usize>,
    /// The definition does not require `i ~ j`; tails with `adjacent == false` are flagged.
    pub adjacent: bool,
}

impl TailReport {
    pub fn is_nonadjacent_tail(&self) -> bool {
        self.is_tail && !self.adjacent
    }
}

pub fn is_tail(g: &DeltaGraph, i: usize, j: usize) -> Result<TailReport> {
    g.check_pair(i, j)?;
    let extra_neighbors_of_first: Vec<usize> = g.neighbors(i).into_iter().filter(|&k| k != j).collect();
    let other_neighbors_of_second: Vec<usize> = g.neighbors(j).into_iter().filter(|&k| k != i).collect();
    Ok(TailReport {
        pair: (i, j),
        is_tail: extra_neighbors_of_first.is_empty() && other_neighbors_of_second.len() <= 1,
        extra_neighbors_of_first,
        other_neighbors_of_second,
        adjacent: g.adjacent(i, j),
    })
}

/// End-to-end traversal of a graph on `0..n` that is a path, starting from
/// the smaller endpoint; `None` if the graph is not a path.
pub fn path_traversal(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    if n <= 1 {
        return Some((0..n).collect());
    }
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && adjacent(i, j)).collect()).collect();
    let edges: usize = nbrs.iter().map(Vec::len).sum::<usize>() / 2;
    if edges != n - 1 || nbrs.iter().any(|v| v.len() > 2 || v.is_empty()) {
        return None;
    }
    let start = (0..n).find(|&i| nbrs[i].len() == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = nbrs[cur].iter().find(|&&k| k != prev) {
        order.push(next);
        prev = cur;
        cur = next;
        if order.len() > n {
            return None;
        }
    }
    (order.len() == n).then_some(order)
}

/// The two end-to-end traversals when `g` is a path on at least two vertices, else empty.
pub fn q_polynomial_orderings(g: &DeltaGraph) -> Vec<Vec<usize>> {
    match path_traversal(g.n, |i, j| g.adj[i][j]) {
        Some(order) if g.n >= 2 => {
            let rev: Vec<usize> = order.iter().rev().copied().collect();
            vec![order, rev]
        }
        Some(order) => vec![order],
        None => Vec::new(),
    }
}

/// First two vertices of each Delta traversal that yields a Leonard system.
pub fn q_polynomial_pairs(ctx: &Context) -> Result<Vec<(usize, usize)>> {
    let g = build_delta(ctx)?;
    Ok(q_polynomial_pairs_in(ctx, &g))
}

pub(crate) fn q_polynomial_pairs_in(ctx: &Context, g: &DeltaGraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for order in q_polynomial_orderings(g) {
        if order.len() < 2 || !verify_leonard_system(ctx, &order).is_system {
            continue;
        }
        let pair = (order[0], order[1]);
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    out
}

pub fn components(g: &DeltaGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n];
    let mut out = Vec::new();
    for s in 0..g.n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &DeltaGraph) -> bool {
    components(g).len() <= 1
}

/// A subset of `{0..d}` as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn from_indices(ix: &[usize]) -> Self {
        VertexSet(ix.iter().fold(0, |acc, &i| acc | (1u64 << i)))
    }

    pub fn all(n: usize) -> Self {
        VertexSet(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn complement(self, n: usize) -> Self {
        VertexSet(!self.0 & VertexSet::all(n).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }
}

/// A subspace of the column space, held as reduced echelon basis rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    spec: FieldSpec,
    len: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn span(spec: FieldSpec, len: usize, vectors: Vec<Vector>) -> Self {
        Subspace { spec, len, basis: echelon_basis(spec, vectors, len) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &[crate::field::FieldElement]) -> bool {
        in_span(&self.basis, v)
    }

    /// `X U ⊆ U`.
    pub fn is_invariant_under(&self, x: &ExactMatrix) -> bool {
        self.basis.iter().all(|u| self.contains(&x.mul_vec(u)))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
}

fn image(e: &ExactMatrix) -> Vec<Vector> {
    (0..e.n()).map(|j| e.column(j)).collect()
}

/// `U = sum_{h in S} E_h V`.
pub fn invariant_subspace_a(ctx: &Context, s: VertexSet) -> Subspace {
    let vectors = s.indices().into_iter().filter(|&h| h < ctx.n()).flat_map(|h| image(ctx.idempotent(h))).collect();
    Subspace::span(ctx.spec(), ctx.n(), vectors)
}

/// Recovers `S` with `U = sum_{h in S} E_h V` from an `A`-invariant subspace.
pub fn classify_a_invariant(ctx: &Context, u: &Subspace) -> Result<VertexSet> {
    if !u.is_invariant_under(ctx.a()) {
        return Err(Error::NotInvariant);
    }
    // U = sum_h E_h U and each E_h U is 0 or the line E_h V
    let members: Vec<usize> = (0..ctx.n())
        .filter(|&h| u.basis.iter().any(|b| ctx.idempotent(h).mul_vec(b).iter().any(|x| !x.is_zero())))
        .collect();
    let s = VertexSet::from_indices(&members);
    debug_assert_eq!(s.len(), u.dim());
    Ok(s)
}

/// Whether no Delta edge joins `S` to its complement.
pub fn closed_under_delta(g: &DeltaGraph, s: VertexSet) -> bool {
    g.edges().iter().all(|&(i, j)| s.contains(i) == s.contains(j))
}

/// Direct test of `A* U ⊆ U`, cross-checked against the crossing-edge criterion.
pub fn astar_invariance_test(ctx: &Context, s: VertexSet) -> Result<bool> {
    let g = build_delta(ctx)?;
    astar_invariance_test_in(ctx, &g, s)
}

pub fn astar_invariance_test_in(ctx: &Context, g: &DeltaGraph, s: VertexSet) -> Result<bool> {
    let direct = invariant_subspace_a(ctx, s).is_invariant_under(ctx.astar());
    if direct != closed_under_delta(g, s) {
        return Err(Error::CriterionMismatch(s.indices()));
    }
    Ok(direct)
}

/// Runs the invariance cross-check over every subset; returns how many subsets are `A*`-invariant.
pub fn invariance_sweep(ctx: &Context) -> Result<usize> {
    if ctx.d() > SWEEP_MAX_D {
        return Err(Error::SweepTooLarge(ctx.d()));
    }
    let g = build_delta(ctx)?;
    let mut count = 0;
    for bits in 0..(1u64 << ctx.n()) {
        if astar_invariance_test_in(ctx, &g, VertexSet(bits))? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::build_context;
    use crate::field::FieldElement;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn krawtchouk_ctx(d: usize) -> Context {
        let mut a = ExactMatrix::zeros(q(), d + 1);
        for i in 1..=d {
            a.set(i, i - 1, q().from_i64(i as i64));
            a.set(i - 1, i, q().from_i64((d - i + 1) as i64));
        }
        let theta_star: Vec<FieldElement> = (0..=d).map(|i| q().from_i64(d as i64 - 2 * i as i64)).collect();
        let natural: Vec<FieldElement> = theta_star.clone();
        Context::build(a, theta_star, Some(&natural)).unwrap()
    }

    fn path(n: usize) -> DeltaGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        DeltaGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn krawtchouk_delta_is_natural_path() {
        let ctx = krawtchouk_ctx(3);
        let g = build_delta(&ctx).unwrap();
        assert_eq!(g, path(4));
        assert_eq!(q_polynomial_pairs(&ctx).unwrap(), vec![(0, 1), (3, 2)]);
        assert!(is_connected(&g));
    }

    #[test]
    fn constant_dual_eigenvalues_give_empty_graph() {
        let ctx = krawtchouk_ctx(3);
        let flat = build_context(ctx.a().clone(), vec![q().from_i64(5); 4]).unwrap();
        let g = build_delta(&flat).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(components(&g).len(), 4);
        assert!(q_polynomial_pairs(&flat).unwrap().is_empty());
    }

    #[test]
    fn tails() {
        let p = path(4);
        assert!(is_tail(&p, 0, 1).unwrap().is_tail);
        let r = is_tail(&p, 1, 2).unwrap();
        assert!(!r.is_tail);
        assert_eq!(r.extra_neighbors_of_first, vec![0]);
        assert!(!is_tail(&DeltaGraph::complete(3), 0, 1).unwrap().is_tail);
        assert!(matches!(is_tail(&p, 2, 2), Err(Error::SamePair(2))));
        assert!(matches!(is_tail(&p, 0, 9), Err(Error::VertexOutOfRange(9))));
        // isolated vertex 0: a tail with any j of degree <= 1, though not adjacent
        let g = DeltaGraph::from_edges(3, &[(1, 2)]).unwrap();
        let r = is_tail(&g, 0, 1).unwrap();
        assert!(r.is_tail && r.is_nonadjacent_tail());
    }

    #[test]
    fn orderings() {
        assert_eq!(q_polynomial_orderings(&path(3)), vec![vec![0, 1, 2], vec![2, 1, 0]]);
        assert!(q_polynomial_orderings(&DeltaGraph::complete(3)).is_empty());
        assert!(q_polynomial_orderings(&DeltaGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap()).is_empty());
        let scrambled = DeltaGraph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(q_polynomial_orderings(&scrambled), vec![vec![1, 3, 0, 2], vec![2, 0, 3, 1]]);
        // cycle with a pendant has n - 1 edges? no: 4 vertices, cycle on 3 plus isolated
        let g = DeltaGraph::from_edges(4, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(q_polynomial_orderings(&g).is_empty());
    }

    #[test]
    fn components_of_two_cliques() {
        let g = DeltaGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(components(&g), vec![vec![0, 1], vec![2, 3]]);
        assert!(!is_connected(&DeltaGraph::empty(2)));
        assert!(is_connected(&path(5)));
    }

    #[test]
    fn a_invariant_subspaces_round_trip() {
        let ctx = krawtchouk_ctx(3);
        assert_eq!(invariant_subspace_a(&ctx, VertexSet(0)).dim(), 0);
        assert_eq!(invariant_subspace_a(&ctx, VertexSet::all(4)).dim(), 4);
        for bits in 0..16u64 {
            let u = invariant_subspace_a(&ctx, VertexSet(bits));
            assert!(u.is_invariant_under(ctx.a()));
            assert_eq!(u.dim(), VertexSet(bits).len());
            assert_eq!(classify_a_invariant(&ctx, &u).unwrap(), VertexSet(bits));
        }
        let line = Subspace::span(q(), 4, vec![vec![q().one(), q().zero(), q().zero(), q().zero()]]);
        assert!(matches!(classify_a_invariant(&ctx, &line), Err(Error::NotInvariant)));
    }

    #[test]
    fn astar_invariance_matches_criterion() {
        let ctx = krawtchouk_ctx(2);
        assert!(!astar_invariance_test(&ctx, VertexSet::from_indices(&[0, 1])).unwrap());
        assert!(astar_invariance_test(&ctx, VertexSet::all(3)).unwrap());
        assert!(astar_invariance_test(&ctx, VertexSet(0)).unwrap());
        // a path admits only the trivial closed sets
        assert_eq!(invariance_sweep(&krawtchouk_ctx(4)).unwrap(), 2);
    }

    #[test]
    fn dot_export() {
        let dot = path(3).to_dot("p");
        assert!(dot.contains("0 -- 1;") && dot.contains("1 -- 2;") && dot.starts_with("graph \"p\""));
    }
}
