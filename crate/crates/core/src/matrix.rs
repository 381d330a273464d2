//! Dense square matrices over an exact field.
//!
//! Rows and columns are indexed from 0 and stored row-major. Dimension is
//! capped at [`MAX_DIM`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::ExactPolynomial;

pub const MAX_DIM: usize = 64;

pub type Vector = Vec<FieldElement>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    spec: FieldSpec,
    n: usize,
    entries: Vec<FieldElement>,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(Error::DimensionLimit(n))
    } else {
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zeros(spec: FieldSpec, n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} outside 1..=64");
        ExactMatrix { spec, n, entries: vec![spec.zero(); n * n] }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn diagonal(spec: FieldSpec, diag: &[FieldElement]) -> Self {
        let mut m = Self::zeros(spec, diag.len());
        for (i, x) in diag.iter().enumerate() {
            assert_eq!(x.spec(), spec, "diagonal entry from another field");
            m.set(i, i, x.clone());
        }
        m
    }

    /// Builds a matrix from rows, checking squareness and that every entry is in `spec`.
    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow { row: r, expected: n, found: row.len() });
            }
            for x in row {
                if x.spec() != spec {
                    return Err(Error::MixedEntries(spec, x.spec()));
                }
                entries.push(x);
            }
        }
        Ok(ExactMatrix { spec, n, entries })
    }

    pub fn from_i64(spec: FieldSpec, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.iter().map(|&x| spec.from_i64(x)).collect()).collect();
        Self::from_rows(spec, rows)
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(spec: FieldSpec, cols: &[Vector]) -> Result<Self> {
        let n = cols.len();
        check_dim(n)?;
        let mut m = Self::zeros(spec, n);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                if x.spec() != spec {
                    return Err(Error::MixedEntries(spec, x.spec()));
                }
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// The rank-one matrix `u v^t`.
    pub fn outer(spec: FieldSpec, u: &[FieldElement], v: &[FieldElement]) -> Self {
        assert_eq!(u.len(), v.len());
        let mut m = Self::zeros(spec, u.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                m.set(i, j, a * b);
            }
        }
        m
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.entries[i * self.n + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries.
    pub fn flatten(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::MixedEntries(self.spec, other.spec));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(ExactMatrix { spec: self.spec, n: self.n, entries })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(ExactMatrix { spec: self.spec, n: self.n, entries })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.n;
        let mut out = Self::zeros(self.spec, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let entries = self.entries.iter().map(|x| x * c).collect();
        ExactMatrix { spec: self.spec, n: self.n, entries }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.spec, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Self::identity(self.spec, self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vector {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i).iter().zip(v).fold(self.spec.zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a * b
                    }
                })
            })
            .collect()
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Evaluates a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, f: &ExactPolynomial) -> Self {
        let mut acc = Self::zeros(self.spec, self.n);
        let id = Self::identity(self.spec, self.n);
        for c in f.coefficients().iter().rev() {
            acc = &(&acc * self) + &id.scale(c);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        rank_of_vectors(&self.rows(), self.n)
    }

    /// A basis for `{x : self * x = 0}`, one vector per free column of the
    /// reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        nullspace(self.spec, self.rows(), self.n)
    }

    /// Column space basis in reduced echelon form (as row vectors).
    pub fn column_space(&self) -> Vec<Vector> {
        echelon_basis(self.spec, self.transpose().rows(), self.n)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut aug: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { self.spec.one() } else { self.spec.zero() }));
                r
            })
            .collect();
        let pivots = rref(&mut aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Self::from_rows(self.spec, rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> FieldElement {
        let n = self.n;
        let mut m = self.rows();
        let mut prev = self.spec.one();
        let mut sign = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return self.spec.zero();
            };
            if p != k {
                m.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = &v / &prev;
                }
                m[i][k] = self.spec.zero();
            }
            prev = m[k][k].clone();
        }
        if sign {
            -prev
        } else {
            prev
        }
    }

    /// `det(lambda I - self)`; see [`crate::poly::char_poly`].
    pub fn char_poly(&self) -> ExactPolynomial {
        crate::poly::char_poly(self)
    }

    /// Monic polynomial of least degree annihilating `self`.
    pub fn minimal_polynomial(&self) -> ExactPolynomial {
        let n = self.n;
        let mut powers: Vec<Vector> = vec![Self::identity(self.spec, n).flatten().to_vec()];
        let mut current = Self::identity(self.spec, n);
        for k in 1..=n {
            current = &current * self;
            let target = current.flatten().to_vec();
            if let Some(coeffs) = solve_in_span(self.spec, &powers, &target) {
                // self^k = sum c_i self^i  =>  lambda^k - sum c_i lambda^i
                let mut poly: Vec<FieldElement> = coeffs.into_iter().map(|c| -c).collect();
                poly.push(self.spec.one());
                return ExactPolynomial::new(self.spec, poly);
            }
            debug_assert!(k < n, "Cayley-Hamilton bounds the degree");
            powers.push(target);
        }
        unreachable!("minimal polynomial degree exceeds n")
    }

    /// Matrix of this operator in the basis whose vectors are the columns of
    /// `basis.forward`: `inverse * self * forward`.
    pub fn represent(&self, basis: &BasisChange) -> Result<Self> {
        self.compatible(&basis.forward)?;
        basis.inverse.checked_mul(&self.checked_mul(&basis.forward)?)
    }

    pub fn is_tridiagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i.abs_diff(j) <= 1 || self.get(i, j).is_zero()))
    }

    /// Tridiagonal with every sub- and superdiagonal entry nonzero. Vacuous for n = 1.
    pub fn is_irreducible_tridiagonal(&self) -> bool {
        self.is_tridiagonal() && (0..self.n - 1).all(|i| !self.get(i, i + 1).is_zero() && !self.get(i + 1, i).is_zero())
    }

    /// Checks the entry structure of the powers of an irreducible tridiagonal
    /// matrix: `(X^r)_ij = 0` for `r < |i-j|`, and at `r = |i-j|` the entry is
    /// the (nonzero) product of the super- or subdiagonal entries between `i`
    /// and `j`.
    pub fn tridiagonal_power_entry_check(&self) -> Result<bool> {
        if !self.is_irreducible_tridiagonal() {
            return Err(Error::NotIrreducibleTridiagonal);
        }
        let n = self.n;
        let mut power = Self::identity(self.spec, n);
        for r in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let dist = i.abs_diff(j);
                    let entry = power.get(i, j);
                    if r < dist && !entry.is_zero() {
                        return Ok(false);
                    }
                    if r == dist {
                        let expected = if i <= j {
                            (i..j).fold(self.spec.one(), |acc, h| acc * self.get(h, h + 1))
                        } else {
                            (j..i).fold(self.spec.one(), |acc, h| acc * self.get(h + 1, h))
                        };
                        if *entry != expected || entry.is_zero() {
                            return Ok(false);
                        }
                    }
                }
            }
            power = &power * self;
        }
        Ok(true)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix[{}] {}x{}", self.spec, self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! matrix_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&ExactMatrix> for &ExactMatrix {
            type Output = ExactMatrix;
            fn $method(self, rhs: &ExactMatrix) -> ExactMatrix {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

matrix_binop!(Add, add, checked_add);
matrix_binop!(Sub, sub, checked_sub);
matrix_binop!(Mul, mul, checked_mul);

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(&-self.spec.one())
    }
}

/// A change of basis: the columns of `forward` are the new basis vectors in old coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange {
    pub forward: ExactMatrix,
    pub inverse: ExactMatrix,
}

impl BasisChange {
    pub fn new(forward: ExactMatrix) -> Result<Self> {
        let inverse = forward.inverse()?;
        Ok(BasisChange { forward, inverse })
    }

    pub fn from_vectors(spec: FieldSpec, vectors: &[Vector]) -> Result<Self> {
        Self::new(ExactMatrix::from_columns(spec, vectors)?)
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let id = ExactMatrix::identity(spec, n);
        BasisChange { forward: id.clone(), inverse: id }
    }
}

// ---------------------------------------------------------------------------
// Elimination on lists of row vectors. Gauss-Jordan over the field; entries
// of a reduced echelon form are ratios of minors, so they stay small once
// reduced to lowest terms.

/// Reduced row echelon form in place (zero rows dropped). Returns pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..ncols {
                if !pivot_row[k].is_zero() {
                    row[k] = &row[k] - &(&f * &pivot_row[k]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank_of_vectors(vectors: &[Vector], len: usize) -> usize {
    let mut rows = vectors.to_vec();
    rref(&mut rows, len).len()
}

/// Basis (reduced echelon rows) of the span of `vectors`.
pub fn echelon_basis(_spec: FieldSpec, vectors: Vec<Vector>, len: usize) -> Vec<Vector> {
    let mut rows = vectors;
    rref(&mut rows, len);
    rows
}

/// Null space of the matrix with the given rows.
pub fn nullspace(spec: FieldSpec, rows: Vec<Vector>, ncols: usize) -> Vec<Vector> {
    let mut rows = rows;
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![spec.zero(); ncols];
            v[f] = spec.one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect()
}

/// Solves `sum_k c_k * columns[k] = target`; `None` when `target` is not in the span.
/// When the columns are dependent, free coefficients are set to zero.
pub fn solve_in_span(spec: FieldSpec, columns: &[Vector], target: &[FieldElement]) -> Option<Vector> {
    let m = columns.len();
    let len = target.len();
    let mut rows: Vec<Vector> = (0..len)
        .map(|i| {
            let mut r: Vector = columns.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, m + 1);
    if pivots.last() == Some(&m) {
        return None;
    }
    let mut sol = vec![spec.zero(); m];
    for (row, &pc) in rows.iter().zip(&pivots) {
        sol[pc] = row[m].clone();
    }
    Some(sol)
}

/// Whether `v` lies in the span of the echelon basis `basis`.
pub fn in_span(basis: &[Vector], v: &[FieldElement]) -> bool {
    let len = v.len();
    let mut rows = basis.to_vec();
    let before = rref(&mut rows, len).len();
    rows.push(v.to_vec());
    rref(&mut rows, len).len() == before
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64(q(), rows).unwrap()
    }

    #[test]
    fn basic_algebra() {
        let x = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(&ExactMatrix::identity(q(), 3) * &x, x);
        assert_eq!(x.transpose().transpose(), x);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(&swap * &swap, ExactMatrix::identity(q(), 2));
        assert_eq!(x.determinant(), q().from_i64(-3));
        assert_eq!(&x * &x.inverse().unwrap(), ExactMatrix::identity(q(), 3));
    }

    #[test]
    fn construction_errors() {
        let gf7 = FieldSpec::prime(7).unwrap();
        let a = m(&[&[1, 0], &[0, 1]]);
        let b = ExactMatrix::identity(gf7, 2);
        assert!(matches!(a.checked_mul(&b), Err(Error::MixedEntries(..))));
        assert!(matches!(a.checked_add(&ExactMatrix::identity(q(), 3)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(ExactMatrix::from_i64(q(), &[&[1, 2], &[3]]), Err(Error::RaggedRow { .. })));
        assert!(matches!(ExactMatrix::from_rows(q(), vec![]), Err(Error::DimensionLimit(0))));
        assert!(matches!(m(&[&[1, 1], &[1, 1]]).inverse(), Err(Error::Singular)));
    }

    #[test]
    fn rank_and_kernel() {
        assert_eq!(ExactMatrix::identity(q(), 4).rank(), 4);
        assert_eq!(m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]).rank(), 1);
        let ker = m(&[&[1, 1], &[1, 1]]).kernel_basis();
        assert_eq!(ker.len(), 1);
        // span{(1,-1)}
        assert_eq!(&ker[0][0] + &ker[0][1], q().zero());
        assert!(!ker[0][0].is_zero());
        let x = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let ker = x.kernel_basis();
        assert_eq!(x.rank() + ker.len(), 3);
        for v in &ker {
            assert!(x.mul_vec(v).iter().all(FieldElement::is_zero));
        }
    }

    #[test]
    fn represent_examples() {
        let x = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(x.represent(&BasisChange::identity(q(), 2)).unwrap(), x);
        let basis = BasisChange::new(m(&[&[1, 1], &[1, -1]])).unwrap();
        let d = m(&[&[1, 0], &[0, -1]]);
        assert_eq!(d.represent(&basis).unwrap(), m(&[&[0, 1], &[1, 0]]));
        let y = m(&[&[0, 1], &[5, 2]]);
        assert_eq!((&x * &y).represent(&basis).unwrap(), &x.represent(&basis).unwrap() * &y.represent(&basis).unwrap());
        assert!(matches!(BasisChange::new(m(&[&[1, 1], &[2, 2]])), Err(Error::Singular)));
    }

    #[test]
    fn tridiagonal_predicates() {
        assert!(m(&[&[0, 1], &[1, 0]]).is_irreducible_tridiagonal());
        assert!(!m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]).is_irreducible_tridiagonal());
        assert!(!m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).is_irreducible_tridiagonal());
        assert!(m(&[&[7]]).is_irreducible_tridiagonal());
        assert!(m(&[&[7]]).tridiagonal_power_entry_check().unwrap());
        let k2 = m(&[&[0, 2, 0], &[1, 0, 1], &[0, 2, 0]]);
        assert!(k2.tridiagonal_power_entry_check().unwrap());
        assert_eq!(*k2.pow(2).get(0, 2), q().from_i64(2));
        assert!(matches!(
            m(&[&[1, 0], &[0, 1]]).tridiagonal_power_entry_check(),
            Err(Error::NotIrreducibleTridiagonal)
        ));
        let t4 = m(&[&[1, 2, 0, 0], &[-3, 0, 5, 0], &[0, 7, 1, 1], &[0, 0, 4, -2]]);
        assert!(t4.tridiagonal_power_entry_check().unwrap());
    }

    #[test]
    fn minimal_polynomials() {
        let d = m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let mp = d.minimal_polynomial();
        assert_eq!(mp, ExactPolynomial::from_i64(q(), &[-6, 11, -6, 1]));
        let rep = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert_eq!(rep.minimal_polynomial(), ExactPolynomial::from_i64(q(), &[2, -3, 1]));
        assert!(rep.eval_poly(&rep.minimal_polynomial()).is_zero());
    }

    #[test]
    fn solve_and_span() {
        let cols = vec![vec![q().one(), q().zero()], vec![q().one(), q().one()]];
        let target = vec![q().from_i64(3), q().from_i64(2)];
        let sol = solve_in_span(q(), &cols, &target).unwrap();
        assert_eq!(sol, vec![q().from_i64(1), q().from_i64(2)]);
        let dependent = vec![vec![q().one(), q().one()]];
        assert!(solve_in_span(q(), &dependent, &target).is_none());
        let basis = echelon_basis(q(), dependent, 2);
        assert!(in_span(&basis, &[q().from_i64(5), q().from_i64(5)]));
        assert!(!in_span(&basis, &target));
    }

    fn random_tridiagonal(spec: FieldSpec) -> impl Strategy<Value = ExactMatrix> {
        (1usize..=8).prop_flat_map(move |n| {
            let nz = prop_oneof![-9i64..=-1, 1i64..=9];
            (
                proptest::collection::vec(-9i64..=9, n),
                proptest::collection::vec(nz.clone(), n - 1),
                proptest::collection::vec(nz, n - 1),
            )
                .prop_map(move |(diag, sup, sub)| {
                    let mut x = ExactMatrix::zeros(spec, n);
                    for (i, &v) in diag.iter().enumerate() {
                        x.set(i, i, spec.from_i64(v));
                    }
                    for i in 0..n - 1 {
                        x.set(i, i + 1, spec.from_i64(sup[i]));
                        x.set(i + 1, i, spec.from_i64(sub[i]));
                    }
                    x
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn tridiagonal_power_lemma_rational(x in random_tridiagonal(FieldSpec::Rational)) {
            prop_assert!(x.tridiagonal_power_entry_check().unwrap());
        }

        #[test]
        fn tridiagonal_power_lemma_gf101(x in random_tridiagonal(FieldSpec::prime(101).unwrap())) {
            // entries in -9..=9 stay nonzero mod 101
            prop_assert!(x.tridiagonal_power_entry_check().unwrap());
        }
    }
}
