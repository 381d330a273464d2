//! The report behind each command: deterministic JSON bodies (no timestamps,
//! fixed key order) and a short text rendering, plus the exit status.

use std::fmt::Write as _;

use serde::Serialize;

use crate::context::{minimal_polynomial_check, verify_leonard_pair, verify_leonard_system, Context, LeonardVerdict};
use crate::dagger::{
    basis_certificate, build_dagger, dagger_property_suite, generation_check, reconstruct, BasisCertificate,
    DaggerReport,
};
use crate::delta::{components, is_tail, q_polynomial_orderings, DeltaGraph};
use crate::error::{Error, Result};
use crate::io::{matrix_strings, vector_strings, Instance, InstanceData};
use crate::matrix::ExactMatrix;
use crate::qpoly::{bracket_identity_check, path_relation_check, Beta, Certificate, QPolyAnalysis, QPolyVerdict};

pub const TOOL_NAME: &str = "leonard";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Negative,
    InputError,
    IntegrityViolation,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Negative => 1,
            Outcome::InputError => 2,
            Outcome::IntegrityViolation => 3,
        }
    }

    pub fn of_error(e: &Error) -> Outcome {
        if e.is_integrity_violation() {
            Outcome::IntegrityViolation
        } else {
            Outcome::InputError
        }
    }

    fn of_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

const TOOL: Tool = Tool { name: TOOL_NAME, version: TOOL_VERSION };

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceId {
    pub name: String,
    pub field: String,
    pub d: usize,
    pub shape: &'static str,
}

impl InstanceId {
    pub fn new(inst: &Instance, fallback: &str) -> Self {
        InstanceId {
            name: inst.name.clone().unwrap_or_else(|| fallback.to_string()),
            field: inst.spec.to_string(),
            d: inst.d,
            shape: if inst.is_pair() { "pair" } else { "dual_basis" },
        }
    }
}

fn flags(ctx: &Context) -> Vec<String> {
    let mut out = Vec::new();
    if ctx.spec().characteristic() == 2 {
        out.push("characteristic_2".to_string());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenJson {
    pub theta: Vec<String>,
    pub idempotents: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairJson {
    pub is_pair: bool,
    pub is_system: bool,
    pub failure_reason: Option<String>,
    /// Columns: basis in which `A` is irreducible tridiagonal and `A*` diagonal.
    pub witness_basis_a: Option<Vec<Vec<String>>>,
    pub witness_basis_astar: Option<Vec<Vec<String>>>,
}

impl From<&LeonardVerdict> for PairJson {
    fn from(v: &LeonardVerdict) -> Self {
        PairJson {
            is_pair: v.is_pair,
            is_system: v.is_system,
            failure_reason: v.failure.as_ref().map(ToString::to_string),
            witness_basis_a: v.witness_basis_a.as_ref().map(|b| columns(&b.forward)),
            witness_basis_astar: v.witness_basis_astar.as_ref().map(|b| columns(&b.forward)),
        }
    }
}

fn columns(m: &ExactMatrix) -> Vec<Vec<String>> {
    matrix_strings(&m.transpose())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub theta_star: Vec<String>,
    pub eigen: EigenJson,
    pub dual_pattern: bool,
    pub idempotent_violations: Vec<String>,
    /// Only evaluated when the dual eigenvalues are distinct.
    pub minimal_polynomial_check: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub tool: Tool,
    pub instance: InstanceId,
    pub flags: Vec<String>,
    pub context: Option<ContextJson>,
    pub context_error: Option<String>,
    pub leonard_pair: PairJson,
    /// Eigenvalue-index orderings that make a Leonard system.
    pub system_orderings: Vec<Vec<usize>>,
}

pub fn verify(inst: &Instance, fallback_name: &str) -> (VerifyReport, Outcome) {
    let pair = verify_leonard_pair(inst.a(), &inst.astar());
    let built = inst.context();
    let (context, context_error, system_orderings, fl) = match &built {
        Ok(ctx) => {
            let eigen = ctx.eigen();
            let cj = ContextJson {
                a: matrix_strings(ctx.a()),
                theta_star: vector_strings(ctx.dual_eigenvalues()),
                eigen: EigenJson {
                    theta: vector_strings(&eigen.eigenvalues),
                    idempotents: eigen.idempotents.iter().map(matrix_strings).collect(),
                },
                dual_pattern: ctx.dual_pattern_holds(),
                idempotent_violations: eigen.violations(),
                minimal_polynomial_check: ctx.dual_eigenvalues_distinct().then(|| minimal_polynomial_check(ctx)),
            };
            let orderings = crate::delta::build_delta(ctx)
                .map(|g| {
                    q_polynomial_orderings(&g).into_iter().filter(|o| verify_leonard_system(ctx, o).is_system).collect()
                })
                .unwrap_or_default();
            (Some(cj), None, orderings, flags(ctx))
        }
        Err(e) => (None, Some(e.to_string()), Vec::new(), Vec::new()),
    };
    let integrity_ok = context.as_ref().is_none_or(|c| {
        c.idempotent_violations.is_empty() && c.dual_pattern && c.minimal_polynomial_check != Some(false)
    });
    // a Leonard pair is exactly a pair admitting a Leonard system ordering
    let consistent = built.is_err() || pair.is_pair == !system_orderings.is_empty();
    let outcome = if !integrity_ok || !consistent {
        Outcome::IntegrityViolation
    } else if let (Err(e), InstanceData::Dual { .. }) = (&built, &inst.data) {
        Outcome::of_error(e)
    } else {
        Outcome::of_bool(pair.is_pair)
    };
    let report = VerifyReport {
        tool: TOOL,
        instance: InstanceId::new(inst, fallback_name),
        flags: fl,
        context,
        context_error,
        leonard_pair: (&pair).into(),
        system_orderings,
    };
    (report, outcome)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailRow {
    pub pair: [usize; 2],
    pub adjacent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub tool: Tool,
    pub instance: InstanceId,
    pub flags: Vec<String>,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub connected: bool,
    pub components: Vec<Vec<usize>>,
    pub is_path: bool,
    pub path_orderings: Vec<Vec<usize>>,
    /// Ordered pairs that are tails; `adjacent = false` marks tails whose vertices are not joined.
    pub tails: Vec<TailRow>,
    pub dot: String,
}

pub fn delta_report(ctx: &Context, g: &DeltaGraph, id: InstanceId) -> DeltaReport {
    let n = g.n();
    let mut tails = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let t = is_tail(g, i, j).expect("vertices in range");
                if t.is_tail {
                    tails.push(TailRow { pair: [i, j], adjacent: t.adjacent });
                }
            }
        }
    }
    let comps = components(g);
    DeltaReport {
        tool: TOOL,
        flags: flags(ctx),
        dot: g.to_dot(&id.name),
        instance: id,
        vertices: n,
        edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        connected: comps.len() <= 1,
        components: comps,
        is_path: g.is_path(),
        path_orderings: q_polynomial_orderings(g),
        tails,
    }
}

pub fn delta(inst: &Instance, fallback_name: &str) -> Result<(DeltaReport, Outcome)> {
    let ctx = inst.context()?;
    let g = crate::delta::build_delta(&ctx)?;
    let report = delta_report(&ctx, &g, InstanceId::new(inst, fallback_name));
    let outcome = Outcome::of_bool(report.is_path);
    Ok((report, outcome))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub pair: [usize; 2],
    pub tail: bool,
    pub tail_adjacent: bool,
    pub beta: String,
    pub gamma_star: Option<String>,
    pub delta_star: Option<String>,
    pub condition_iii: bool,
    pub qpoly: bool,
    pub ordering: Option<Vec<usize>>,
    pub failure: Option<String>,
    pub oracle_agrees: bool,
}

pub fn verdict_json(an: &QPolyAnalysis<'_>, v: &QPolyVerdict) -> VerdictJson {
    let rec = an.recurrence();
    VerdictJson {
        pair: [v.pair.0, v.pair.1],
        tail: v.tail.is_tail,
        tail_adjacent: v.tail.adjacent,
        beta: rec.beta.to_string(),
        gamma_star: rec.constants.as_ref().map(|c| c.gamma_star.to_string()),
        delta_star: rec.constants.as_ref().map(|c| c.delta_star.to_string()),
        condition_iii: v.condition_iii,
        qpoly: v.qpoly,
        ordering: v.ordering().map(<[usize]>::to_vec),
        failure: match &v.certificate {
            Certificate::Failure(f) => Some(f.to_string()),
            Certificate::Ordering(_) => None,
        },
        oracle_agrees: v.oracle_agrees,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceJson {
    pub beta: String,
    /// The value of `beta` used for the constants (`2` when unconstrained).
    pub beta_used: Option<String>,
    pub gamma_star: Option<String>,
    pub delta_star: Option<String>,
    pub p_values: Vec<String>,
    /// The commutator identity, when constants exist.
    pub bracket_identity: Option<bool>,
    pub path_relation_quadruples: usize,
    pub path_relation_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecideReport {
    pub tool: Tool,
    pub instance: InstanceId,
    pub flags: Vec<String>,
    pub recurrence: RecurrenceJson,
    pub verdicts: Vec<VerdictJson>,
    pub q_polynomial_pairs: Vec<[usize; 2]>,
}

/// Which pairs `decide` runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    One(usize, usize),
    All,
}

pub fn recurrence_json(ctx: &Context, an: &QPolyAnalysis<'_>) -> RecurrenceJson {
    let rec = an.recurrence();
    let (bracket, path) = match &rec.constants {
        Some(c) if !matches!(rec.beta, Beta::NoSolution) => {
            let path = path_relation_check(ctx, an.delta(), &c.beta);
            (Some(bracket_identity_check(ctx, c)), Some(path))
        }
        _ => (None, None),
    };
    RecurrenceJson {
        beta: rec.beta.to_string(),
        beta_used: rec.constants.as_ref().map(|c| c.beta.to_string()),
        gamma_star: rec.constants.as_ref().map(|c| c.gamma_star.to_string()),
        delta_star: rec.constants.as_ref().map(|c| c.delta_star.to_string()),
        p_values: vector_strings(&rec.p_values),
        bracket_identity: bracket,
        path_relation_quadruples: path.as_ref().map_or(0, |p| p.quadruples.len()),
        path_relation_holds: path.map(|p| p.passed()),
    }
}

pub fn decide(inst: &Instance, fallback_name: &str, which: PairSelection) -> Result<(DecideReport, Outcome)> {
    let ctx = inst.context()?;
    let an = QPolyAnalysis::new(&ctx)?;
    let verdicts = match which {
        PairSelection::One(i, j) => vec![an.decide(i, j)?],
        PairSelection::All => an.sweep()?,
    };
    let recurrence = recurrence_json(&ctx, &an);
    // Whenever constants exist the commutator identity must hold; paths of
    // length three must satisfy their relation.
    if recurrence.bracket_identity == Some(false) || recurrence.path_relation_holds == Some(false) {
        return Err(Error::Integrity("recurrence constants fail the commutator or path relation".into()));
    }
    let positive = verdicts.iter().any(|v| v.qpoly);
    let report = DecideReport {
        tool: TOOL,
        instance: InstanceId::new(inst, fallback_name),
        flags: flags(&ctx),
        recurrence,
        verdicts: verdicts.iter().map(|v| verdict_json(&an, v)).collect(),
        q_polynomial_pairs: an.oracle_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
    };
    Ok((report, Outcome::of_bool(positive)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DaggerCommandReport {
    pub tool: Tool,
    pub instance: InstanceId,
    pub basis_certificate: BasisCertificate,
    /// Every matrix unit is recovered exactly from its coefficients in the generating products.
    pub generation_reconstructs: bool,
    pub dagger: DaggerReport,
}

pub const DAGGER_SAMPLES: usize = 50;

pub fn dagger(inst: &Instance, fallback_name: &str, seed: u64) -> Result<(DaggerCommandReport, Outcome)> {
    let ctx = inst.context()?;
    let cert = basis_certificate(&ctx);
    let n = ctx.n();
    let mut generation_reconstructs = true;
    for i in 0..n {
        for j in 0..n {
            let mut unit = ExactMatrix::zeros(ctx.spec(), n);
            unit.set(i, j, ctx.spec().one());
            let coeffs = generation_check(&ctx, &unit)?;
            generation_reconstructs &= reconstruct(&ctx, &coeffs) == unit;
        }
    }
    let dd = build_dagger(&ctx)?;
    let suite = dagger_property_suite(&dd, DAGGER_SAMPLES, seed);
    let ok = cert.holds() && generation_reconstructs && suite.all_passed();
    let report = DaggerCommandReport {
        tool: TOOL,
        instance: InstanceId::new(inst, fallback_name),
        basis_certificate: cert,
        generation_reconstructs,
        dagger: suite,
    };
    Ok((report, if ok { Outcome::Pass } else { Outcome::IntegrityViolation }))
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} ({}, d = {}, {})",
            self.instance.name, self.instance.field, self.instance.d, self.instance.shape
        );
        match (&self.context, &self.context_error) {
            (Some(c), _) => {
                let _ = writeln!(
                    s,
                    "context: valid; theta = [{}]; theta* = [{}]",
                    c.eigen.theta.join(", "),
                    c.theta_star.join(", ")
                );
            }
            (None, Some(e)) => {
                let _ = writeln!(s, "context: {e}");
            }
            _ => {}
        }
        let lp = &self.leonard_pair;
        let _ = writeln!(s, "leonard pair: {}", yes(lp.is_pair));
        if let Some(r) = &lp.failure_reason {
            let _ = writeln!(s, "  reason: {r}");
        }
        for o in &self.system_orderings {
            let _ = writeln!(s, "leonard system ordering: {o:?}");
        }
        s
    }
}

impl DeltaReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {} vertices, edges {:?}", self.instance.name, self.vertices, self.edges);
        let _ = writeln!(s, "connected: {}; path: {}", yes(self.connected), yes(self.is_path));
        for t in &self.tails {
            let note = if t.adjacent { "" } else { " (not adjacent)" };
            let _ = writeln!(s, "tail ({}, {}){note}", t.pair[0], t.pair[1]);
        }
        s
    }
}

impl DecideReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let r = &self.recurrence;
        let _ = writeln!(
            s,
            "{}: beta = {}, gamma* = {}, delta* = {}",
            self.instance.name,
            r.beta,
            r.gamma_star.as_deref().unwrap_or("-"),
            r.delta_star.as_deref().unwrap_or("-")
        );
        for v in &self.verdicts {
            let tail = if v.tail { "tail" } else { "no tail" };
            let iii = if v.condition_iii { "theta*_0 distinct" } else { "theta*_0 repeated" };
            match &v.ordering {
                Some(o) => {
                    let _ = writeln!(s, "({}, {}): Q-polynomial, ordering {o:?}", v.pair[0], v.pair[1]);
                }
                None => {
                    let _ = writeln!(s, "({}, {}): not Q-polynomial ({tail}, {iii})", v.pair[0], v.pair[1]);
                }
            }
        }
        s
    }
}

impl DaggerCommandReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.basis_certificate;
        let _ =
            writeln!(s, "{}: basis rank {}/{}, pattern {}", self.instance.name, c.rank, c.dimension, yes(c.pattern_ok));
        let _ = writeln!(s, "D = diag({})", self.dagger.conjugator.join(", "));
        for check in &self.dagger.checks {
            let _ = writeln!(
                s,
                "{:<28} {:>4} cases  {}",
                check.name,
                check.cases,
                if check.passed() { "ok" } else { "FAILED" }
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::instances::{dual_repeat_example, krawtchouk};
    use crate::io::{load_instance, InstanceFile};

    fn inst(ctx: &Context) -> Instance {
        load_instance(&InstanceFile::from_context(ctx, None, None, None).to_json()).unwrap()
    }

    #[test]
    fn outcomes() {
        let k = inst(&krawtchouk(3, FieldSpec::Rational).unwrap());
        assert_eq!(verify(&k, "k").1, Outcome::Pass);
        assert_eq!(delta(&k, "k").unwrap().1, Outcome::Pass);
        let (rep, out) = decide(&k, "k", PairSelection::One(0, 1)).unwrap();
        assert_eq!(out, Outcome::Pass);
        assert_eq!(rep.verdicts[0].ordering, Some(vec![0, 1, 2, 3]));
        assert_eq!(rep.recurrence.bracket_identity, Some(true));
        assert_eq!(decide(&k, "k", PairSelection::One(1, 2)).unwrap().1, Outcome::Negative);
        assert_eq!(dagger(&k, "k", 1).unwrap().1, Outcome::Pass);

        let r = inst(&dual_repeat_example(FieldSpec::Rational).unwrap());
        assert_eq!(verify(&r, "r").1, Outcome::Negative);
        assert_eq!(decide(&r, "r", PairSelection::All).unwrap().1, Outcome::Negative);
    }

    #[test]
    fn reports_are_stable() {
        let k = inst(&krawtchouk(2, FieldSpec::Rational).unwrap());
        let a = to_json(&decide(&k, "k", PairSelection::All).unwrap().0);
        let b = to_json(&decide(&k, "k", PairSelection::All).unwrap().0);
        assert_eq!(a, b);
        assert!(a.contains("\"oracle_agrees\": true"));
    }
}
