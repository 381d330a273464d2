//! Generation of the matrix algebra by `A` and `E*_0`, and the
//! antiautomorphism `X -> D^{-1} X^t D` fixing `A` and every `E*_i`.

use serde::Serialize;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::{nullspace, rank_of_vectors, solve_in_span, ExactMatrix, Vector};
use crate::poly::ExactPolynomial;
use crate::rng::{random_element, random_matrix, SplitMix64};

/// Bound on rational sample entries in the property suite.
const SAMPLE_BOUND: i64 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisCertificate {
    pub dimension: usize,
    pub rank: usize,
    /// `(A^r E*_0 A^s)_{ij} = 0` for `i > r` or `j > s`, and the `(r, s)` entry
    /// equals the product of the first `r` subdiagonal and first `s` superdiagonal entries.
    pub pattern_ok: bool,
}

impl BasisCertificate {
    pub fn holds(&self) -> bool {
        self.rank == self.dimension && self.pattern_ok
    }
}

fn powers(a: &ExactMatrix) -> Vec<ExactMatrix> {
    let mut out = vec![ExactMatrix::identity(a.spec(), a.n())];
    for k in 1..a.n() {
        out.push(&out[k - 1] * a);
    }
    out
}

/// `A^r E*_0 A^s` for `0 <= r, s <= d`, index `r * (d + 1) + s`.
pub fn generating_products(ctx: &Context) -> Vec<ExactMatrix> {
    let pw = powers(ctx.a());
    let e0 = ctx.dual_idempotents().get(0);
    let left: Vec<ExactMatrix> = pw.iter().map(|p| p * e0).collect();
    let mut out = Vec::with_capacity(pw.len() * pw.len());
    for l in &left {
        for p in &pw {
            out.push(l * p);
        }
    }
    out
}

pub fn basis_certificate(ctx: &Context) -> BasisCertificate {
    let n = ctx.n();
    let a = ctx.a();
    let products = generating_products(ctx);
    let flat: Vec<Vector> = products.iter().map(|m| m.flatten().to_vec()).collect();
    let rank = rank_of_vectors(&flat, n * n);
    let spec = ctx.spec();
    let mut pattern_ok = true;
    for r in 0..n {
        for s in 0..n {
            let m = &products[r * n + s];
            for i in 0..n {
                for j in 0..n {
                    if (i > r || j > s) && !m.get(i, j).is_zero() {
                        pattern_ok = false;
                    }
                }
            }
            let sub = (1..=r).fold(spec.one(), |acc, k| &acc * a.get(k, k - 1));
            let sup = (1..=s).fold(spec.one(), |acc, k| &acc * a.get(k - 1, k));
            let expected = &sub * &sup;
            if expected.is_zero() || m.get(r, s) != &expected {
                pattern_ok = false;
            }
        }
    }
    BasisCertificate { dimension: n * n, rank, pattern_ok }
}

/// Coefficients `c_{rs}` (index `r * (d + 1) + s`) with `X = sum c_{rs} A^r E*_0 A^s`.
pub fn generation_check(ctx: &Context, x: &ExactMatrix) -> Result<Vec<FieldElement>> {
    if x.n() != ctx.n() {
        return Err(Error::DimensionMismatch { expected: ctx.n(), found: x.n() });
    }
    let columns: Vec<Vector> = generating_products(ctx).iter().map(|m| m.flatten().to_vec()).collect();
    solve_in_span(ctx.spec(), &columns, x.flatten())
        .ok_or_else(|| Error::Integrity("A and E*_0 fail to span the matrix algebra".into()))
}

pub fn reconstruct(ctx: &Context, coefficients: &[FieldElement]) -> ExactMatrix {
    let mut acc = ExactMatrix::zeros(ctx.spec(), ctx.n());
    for (c, m) in coefficients.iter().zip(generating_products(ctx)) {
        if !c.is_zero() {
            acc = &acc + &m.scale(c);
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct DaggerData<'a> {
    ctx: &'a Context,
    d: ExactMatrix,
    d_inv: ExactMatrix,
}

/// `D_ii = (A_{01} A_{12} ... A_{i-1,i}) / (A_{10} A_{21} ... A_{i,i-1})`.
pub fn conjugator(a: &ExactMatrix) -> Result<ExactMatrix> {
    let spec = a.spec();
    let mut diag = vec![spec.one()];
    for i in 1..a.n() {
        let ratio = a.get(i - 1, i).checked_div(a.get(i, i - 1)).map_err(|_| Error::NotIrreducibleTridiagonal)?;
        let next = &diag[i - 1] * &ratio;
        diag.push(next);
    }
    if diag.iter().any(FieldElement::is_zero) {
        return Err(Error::NotIrreducibleTridiagonal);
    }
    Ok(ExactMatrix::diagonal(spec, &diag))
}

pub fn build_dagger(ctx: &Context) -> Result<DaggerData<'_>> {
    let d = conjugator(ctx.a())?;
    let d_inv = d.inverse()?;
    let dd = DaggerData { ctx, d, d_inv };
    if &dd.apply(ctx.a()) != ctx.a() {
        return Err(Error::Integrity("D^-1 A^t D != A".into()));
    }
    Ok(dd)
}

impl DaggerData<'_> {
    pub fn conjugator(&self) -> &ExactMatrix {
        &self.d
    }

    pub fn apply(&self, x: &ExactMatrix) -> ExactMatrix {
        &(&self.d_inv * &x.transpose()) * &self.d
    }
}

/// Diagonal solutions `D'` of `A^t D' = D' A`, as a basis of the solution space.
/// The entries give `D'_j A_{ji} = D'_i A_{ij}` for every `(i, j)`.
fn diagonal_conjugators(a: &ExactMatrix) -> Vec<Vector> {
    let n = a.n();
    let spec = a.spec();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut row = vec![spec.zero(); n];
            row[j] = &row[j] + a.get(j, i);
            row[i] = &row[i] - a.get(i, j);
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    nullspace(spec, rows, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DaggerReport {
    pub conjugator: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<IdentityCheck>,
}

impl DaggerReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect()
    }
}

fn tally(name: &'static str, outcomes: impl IntoIterator<Item = bool>) -> IdentityCheck {
    let (mut cases, mut failures) = (0, 0);
    for ok in outcomes {
        cases += 1;
        failures += usize::from(!ok);
    }
    IdentityCheck { name, cases, failures }
}

fn random_poly(ctx: &Context, rng: &mut SplitMix64) -> ExactPolynomial {
    let coeffs = (0..ctx.n()).map(|_| random_element(ctx.spec(), rng, SAMPLE_BOUND)).collect();
    ExactPolynomial::new(ctx.spec(), coeffs)
}

/// Checks every identity of the antiautomorphism on the context and on
/// `samples` random matrices (and pairs, and polynomials) drawn from `seed`.
pub fn dagger_property_suite(dd: &DaggerData<'_>, samples: usize, seed: u64) -> DaggerReport {
    let ctx = dd.ctx;
    let n = ctx.n();
    let spec = ctx.spec();
    let mut rng = SplitMix64::new(seed);
    let fixed = |x: &ExactMatrix| &dd.apply(x) == x;

    let mut checks = vec![
        tally("A_fixed", [fixed(ctx.a())]),
        tally("dual_idempotents_fixed", ctx.dual_idempotents().members().iter().map(fixed)),
        tally("Astar_fixed", [fixed(ctx.astar())]),
        tally("idempotents_fixed", (0..n).map(|i| fixed(ctx.idempotent(i)))),
    ];

    let xs: Vec<ExactMatrix> = (0..samples).map(|_| random_matrix(spec, n, &mut rng, SAMPLE_BOUND)).collect();
    let ys: Vec<ExactMatrix> = (0..samples).map(|_| random_matrix(spec, n, &mut rng, SAMPLE_BOUND)).collect();
    checks.push(tally("involution", xs.iter().map(|x| &dd.apply(&dd.apply(x)) == x)));
    checks.push(tally(
        "antimultiplicative",
        xs.iter().zip(&ys).map(|(x, y)| dd.apply(&(x * y)) == &dd.apply(y) * &dd.apply(x)),
    ));
    checks.push(tally("linear", xs.iter().zip(&ys).map(|(x, y)| dd.apply(&(x + y)) == &dd.apply(x) + &dd.apply(y))));

    let polys: Vec<ExactPolynomial> = (0..samples).map(|_| random_poly(ctx, &mut rng)).collect();
    checks.push(tally("fixes_polynomials_in_A", polys.iter().map(|f| fixed(&ctx.a().eval_poly(f)))));
    checks.push(tally("fixes_polynomials_in_Astar", polys.iter().map(|f| fixed(&ctx.astar().eval_poly(f)))));

    let unique = diagonal_conjugators(ctx.a());
    let d_diag: Vector = (0..n).map(|i| dd.d.get(i, i).clone()).collect();
    checks.push(tally(
        "conjugator_unique",
        [unique.len() == 1 && {
            let v = &unique[0];
            let scale = v[0].inv().ok();
            scale.is_some_and(|s| v.iter().map(|x| x * &s).collect::<Vector>() == d_diag)
        }],
    ));

    let left: Vec<ExactMatrix> = (0..n).map(|i| ctx.idempotent(i) * ctx.astar()).collect();
    let zero = |i: usize, j: usize| (&left[i] * ctx.idempotent(j)).is_zero();
    checks.push(tally(
        "edge_symmetry",
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| zero(i, j) == zero(j, i)),
    ));

    DaggerReport { conjugator: d_diag.iter().map(ToString::to_string).collect(), samples, seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::build_context;
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn ctx_of(rows: &[&[i64]], theta_star: &[i64]) -> Context {
        let a = ExactMatrix::from_i64(q(), rows).unwrap();
        build_context(a, theta_star.iter().map(|&x| q().from_i64(x)).collect()).unwrap()
    }

    #[test]
    fn conjugator_examples() {
        let c1 = ctx_of(&[&[0, 1], &[1, 0]], &[1, -1]);
        let dd = build_dagger(&c1).unwrap();
        assert_eq!(dd.conjugator(), &ExactMatrix::identity(q(), 2));
        let x = ExactMatrix::from_i64(q(), &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(dd.apply(&x), x.transpose());

        let c2 = ctx_of(&[&[0, 2, 0], &[1, 0, 1], &[0, 2, 0]], &[2, 0, -2]);
        let dd = build_dagger(&c2).unwrap();
        assert_eq!(dd.conjugator(), &ExactMatrix::diagonal(q(), &[q().from_i64(1), q().from_i64(2), q().from_i64(1)]));

        let sym = ctx_of(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]], &[0, 1, 2]);
        assert_eq!(build_dagger(&sym).unwrap().conjugator(), &ExactMatrix::identity(q(), 3));
    }

    #[test]
    fn basis_and_generation() {
        let c1 = ctx_of(&[&[0, 1], &[1, 0]], &[1, -1]);
        let cert = basis_certificate(&c1);
        assert_eq!((cert.rank, cert.dimension), (4, 4));
        assert!(cert.holds());
        for x in [ExactMatrix::identity(q(), 2), c1.astar().clone()] {
            let coeffs = generation_check(&c1, &x).unwrap();
            assert_eq!(reconstruct(&c1, &coeffs), x);
        }
        let e0 = c1.dual_idempotents().get(0).clone();
        let coeffs = generation_check(&c1, &e0).unwrap();
        assert!(coeffs[0].is_one() && coeffs[1..].iter().all(FieldElement::is_zero));
    }

    #[test]
    fn suite_passes_on_krawtchouk() {
        let c = ctx_of(&[&[0, 3, 0, 0], &[1, 0, 2, 0], &[0, 2, 0, 1], &[0, 0, 3, 0]], &[3, 1, -1, -3]);
        let report = dagger_property_suite(&build_dagger(&c).unwrap(), 10, 7);
        assert!(report.all_passed(), "{:?}", report.failed());
        assert!(basis_certificate(&c).holds());
    }

    #[test]
    fn suite_detects_a_wrong_conjugator() {
        let c = ctx_of(&[&[0, 2, 0], &[1, 0, 1], &[0, 2, 0]], &[2, 0, -2]);
        let bad = DaggerData { ctx: &c, d: ExactMatrix::identity(q(), 3), d_inv: ExactMatrix::identity(q(), 3) };
        let report = dagger_property_suite(&bad, 3, 1);
        assert!(report.failed().contains(&"A_fixed"));
        assert!(report.failed().contains(&"conjugator_unique"));
    }
}
