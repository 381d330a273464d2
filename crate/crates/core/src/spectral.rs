//! Eigen-splitting of multiplicity-free operators and systems of mutually
//! orthogonal rank-one idempotents.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{rank_of_vectors, BasisChange, ExactMatrix, Vector};
use crate::poly::roots_in_field;

/// A multiplicity-free operator with an ordering of its eigenvalues and the
/// matching primitive idempotents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    pub operator: ExactMatrix,
    pub eigenvalues: Vec<FieldElement>,
    pub idempotents: Vec<ExactMatrix>,
}

/// Splits `a` with eigenvalues in canonical ascending order.
pub fn eigen_split(a: &ExactMatrix) -> Result<EigenData> {
    let eigenvalues = spectrum(a)?;
    build_eigen_data(a, eigenvalues)
}

/// Splits `a` with the supplied eigenvalue order, which must be a permutation
/// of the spectrum.
pub fn eigen_split_ordered(a: &ExactMatrix, order: &[FieldElement]) -> Result<EigenData> {
    let spectrum = spectrum(a)?;
    if order.len() != spectrum.len() || !spectrum.iter().all(|t| order.contains(t)) {
        return Err(Error::OrderMismatch);
    }
    build_eigen_data(a, order.to_vec())
}

/// Distinct in-field eigenvalues in ascending order, or the reason there are
/// not `n` of them.
pub fn spectrum(a: &ExactMatrix) -> Result<Vec<FieldElement>> {
    let report = roots_in_field(&a.char_poly());
    if !report.splits {
        return Err(Error::NotSplit { field: a.spec(), found: report.roots.iter().map(|r| r.1).sum(), degree: a.n() });
    }
    if let Some((theta, m)) = report.roots.iter().find(|r| r.1 > 1) {
        return Err(Error::NotMultiplicityFree { eigenvalue: theta.to_string(), multiplicity: *m });
    }
    Ok(report.roots.into_iter().map(|r| r.0).collect())
}

fn build_eigen_data(a: &ExactMatrix, eigenvalues: Vec<FieldElement>) -> Result<EigenData> {
    let idempotents =
        (0..eigenvalues.len()).map(|i| primitive_idempotent(a, &eigenvalues, i)).collect::<Result<Vec<_>>>()?;
    Ok(EigenData { operator: a.clone(), eigenvalues, idempotents })
}

/// `E_i = prod_{j != i} (A - theta_j I) / (theta_i - theta_j)`.
pub fn primitive_idempotent(a: &ExactMatrix, theta: &[FieldElement], i: usize) -> Result<ExactMatrix> {
    let spec = a.spec();
    let id = ExactMatrix::identity(spec, a.n());
    let mut acc = id.clone();
    for (j, tj) in theta.iter().enumerate() {
        if j == i {
            continue;
        }
        let denom = &theta[i] - tj;
        if denom.is_zero() {
            return Err(Error::RepeatedEigenvalue(tj.to_string()));
        }
        let factor = (a - &id.scale(tj)).scale(&denom.inv()?);
        acc = &acc * &factor;
    }
    Ok(acc)
}

impl EigenData {
    pub fn spec(&self) -> FieldSpec {
        self.operator.spec()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Relabels so that new index `k` is old index `perm[k]`.
    pub fn reordered(&self, perm: &[usize]) -> EigenData {
        EigenData {
            operator: self.operator.clone(),
            eigenvalues: perm.iter().map(|&k| self.eigenvalues[k].clone()).collect(),
            idempotents: perm.iter().map(|&k| self.idempotents[k].clone()).collect(),
        }
    }

    /// Names of the violated identities among `E_iE_j = delta_ij E_i`,
    /// `rank E_i = 1`, `sum E_i = I`, `sum theta_i E_i = A`, `A E_i = E_i A = theta_i E_i`.
    pub fn violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let spec = self.spec();
        let n = self.operator.n();
        if self.len() != n {
            bad.push(format!("expected {n} eigenvalues, have {}", self.len()));
            return bad;
        }
        let system = IdempotentSystem::validate(&self.idempotents);
        if let Err(e) = system {
            bad.push(e.to_string());
        }
        let mut weighted = ExactMatrix::zeros(spec, n);
        for (t, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            weighted = &weighted + &e.scale(t);
            let te = e.scale(t);
            if &self.operator * e != te || e * &self.operator != te {
                bad.push(format!("A E != theta E for theta = {t}"));
            }
        }
        if weighted != self.operator {
            bad.push("sum theta_i E_i != A".into());
        }
        bad
    }
}

/// A sequence of mutually orthogonal rank-one idempotents summing to `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentSystem {
    members: Vec<ExactMatrix>,
}

impl IdempotentSystem {
    pub fn new(members: Vec<ExactMatrix>) -> Result<Self> {
        Self::validate(&members)?;
        Ok(IdempotentSystem { members })
    }

    /// The coordinate projections `diag(e_i)`.
    pub fn coordinate(spec: FieldSpec, n: usize) -> Self {
        let members = (0..n)
            .map(|i| {
                let mut e = ExactMatrix::zeros(spec, n);
                e.set(i, i, spec.one());
                e
            })
            .collect();
        IdempotentSystem { members }
    }

    fn validate(members: &[ExactMatrix]) -> Result<()> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidIdempotentSystem("empty".into()));
        };
        let (spec, n) = (first.spec(), first.n());
        if members.len() != n {
            return Err(Error::InvalidIdempotentSystem(format!("{} members in dimension {n}", members.len())));
        }
        let mut sum = ExactMatrix::zeros(spec, n);
        for (i, ei) in members.iter().enumerate() {
            if ei.n() != n || ei.spec() != spec {
                return Err(Error::InvalidIdempotentSystem(format!("member {i} has a different shape")));
            }
            if ei.rank() != 1 {
                return Err(Error::InvalidIdempotentSystem(format!("rank E_{i} != 1")));
            }
            for (j, ej) in members.iter().enumerate() {
                let prod = ei * ej;
                let ok = if i == j { prod == *ei } else { prod.is_zero() };
                if !ok {
                    return Err(Error::InvalidIdempotentSystem(format!("E_{i} E_{j} != delta E_{i}")));
                }
            }
            sum = &sum + ei;
        }
        if sum != ExactMatrix::identity(spec, n) {
            return Err(Error::InvalidIdempotentSystem("sum E_i != I".into()));
        }
        Ok(())
    }

    pub fn members(&self) -> &[ExactMatrix] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &ExactMatrix {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// One-dimensional subspaces `U_0, ..., U_d` with `V = sum U_i` direct, each
/// stored as a spanning vector whose first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    spec: FieldSpec,
    vectors: Vec<Vector>,
}

fn normalize(v: &[FieldElement]) -> Option<Vector> {
    let lead = v.iter().find(|x| !x.is_zero())?.inv().ok()?;
    Some(v.iter().map(|x| x * &lead).collect())
}

impl Decomposition {
    pub fn new(spec: FieldSpec, vectors: Vec<Vector>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: vectors.first().map_or(0, Vec::len) });
        }
        if rank_of_vectors(&vectors, n) != n {
            return Err(Error::DependentVectors);
        }
        let vectors = vectors.iter().map(|v| normalize(v).expect("independent vectors are nonzero")).collect();
        Ok(Decomposition { spec, vectors })
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }
}

/// `E_i` is the identity on `U_i` and zero on every other `U_j`: with `P`
/// the matrix of spanning vectors, `E_i = P e_i e_i^t P^-1`.
pub fn idempotents_from_decomposition(dec: &Decomposition) -> Result<IdempotentSystem> {
    let basis = BasisChange::from_vectors(dec.spec, &dec.vectors)?;
    let members =
        (0..dec.vectors.len()).map(|i| ExactMatrix::outer(dec.spec, &dec.vectors[i], basis.inverse.row(i))).collect();
    IdempotentSystem::new(members)
}

/// `U_i = E_i V`, spanned by any nonzero column of `E_i`.
pub fn decomposition_from_idempotents(sys: &IdempotentSystem) -> Result<Decomposition> {
    IdempotentSystem::validate(&sys.members)?;
    let spec = sys.members[0].spec();
    let vectors = sys
        .members
        .iter()
        .map(|e| {
            let n = e.n();
            (0..n).map(|j| e.column(j)).find(|c| c.iter().any(|x| !x.is_zero())).expect("rank one")
        })
        .collect();
    Decomposition::new(spec, vectors)
}
