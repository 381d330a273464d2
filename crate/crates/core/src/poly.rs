//! Univariate polynomials over an exact field, characteristic polynomials,
//! and root finding restricted to the base field.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldElement, FieldSpec};
use crate::matrix::ExactMatrix;
use crate::numtheory::divisors;
use crate::rng::SplitMix64;

/// Coefficients low degree first; the leading coefficient is nonzero unless
/// the polynomial is zero (empty coefficient list).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactPolynomial {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl ExactPolynomial {
    pub fn new(spec: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        assert!(coeffs.iter().all(|c| c.spec() == spec), "coefficient from another field");
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        ExactPolynomial { spec, coeffs }
    }

    pub fn from_i64(spec: FieldSpec, coeffs: &[i64]) -> Self {
        Self::new(spec, coeffs.iter().map(|&c| spec.from_i64(c)).collect())
    }

    pub fn zero(spec: FieldSpec) -> Self {
        ExactPolynomial { spec, coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(c.spec(), vec![c])
    }

    /// `lambda - r`.
    pub fn linear(r: &FieldElement) -> Self {
        let spec = r.spec();
        Self::new(spec, vec![-r, spec.one()])
    }

    /// `prod (lambda - r)` over `roots`.
    pub fn from_roots(spec: FieldSpec, roots: &[FieldElement]) -> Self {
        roots.iter().fold(Self::constant(spec.one()), |acc, r| &acc * &Self::linear(r))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FieldElement::is_one)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(self.spec.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(self.spec, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(self.spec), self.clone());
        };
        let mut quot = vec![self.spec.zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            quot[k] = c;
        }
        (Self::new(self.spec, quot), Self::new(self.spec, rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.divrem(modulus).1;
        let mut acc = Self::constant(self.spec.one()).divrem(modulus).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).divrem(modulus).1;
            }
            base = (&base * &base).divrem(modulus).1;
            e >>= 1;
        }
        acc
    }

    /// Low-to-high coefficient texts, the serialized form in reports.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Debug for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn add(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = self.spec.zero();
        let coeffs = (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z)).collect();
        ExactPolynomial::new(self.spec, coeffs)
    }
}

impl Sub for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn sub(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = self.spec.zero();
        let coeffs = (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) - rhs.coeffs.get(i).unwrap_or(&z)).collect();
        ExactPolynomial::new(self.spec, coeffs)
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn mul(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ExactPolynomial::zero(self.spec);
        }
        let mut out = vec![self.spec.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ExactPolynomial::new(self.spec, out)
    }
}

/// `det(lambda I - x)`, monic of degree n.
///
/// Bareiss elimination on `lambda I - M` over `K[lambda]`. The k-th pivot is
/// the leading principal k-minor of `lambda I - M`, itself a monic
/// characteristic polynomial, so no pivot search is needed and every
/// Bareiss division is an exact division by a monic polynomial. Over the
/// rationals the matrix is first scaled by the common denominator `L` so the
/// elimination only ever sees integer coefficients; the result is rescaled
/// via `char_x(lambda) = L^-n char_M(L lambda)`.
pub fn char_poly(x: &ExactMatrix) -> ExactPolynomial {
    let spec = x.spec();
    let n = x.n();
    let scale = match spec {
        FieldSpec::Rational => {
            x.flatten().iter().filter_map(|e| e.as_rational()).fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
        }
        FieldSpec::PrimeField(_) => BigInt::one(),
    };
    let scale_el = spec.from_bigint(&scale);
    let lambda = ExactPolynomial::new(spec, vec![spec.zero(), spec.one()]);
    let mut m: Vec<Vec<ExactPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = ExactPolynomial::constant(-(x.get(i, j) * &scale_el));
                    if i == j {
                        &lambda + &c
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = ExactPolynomial::constant(spec.one());
    for k in 0..n {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                let (q, r) = num.divrem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
        }
        prev = m[k][k].clone();
    }
    let scaled = m[n - 1][n - 1].clone();
    debug_assert!(scaled.is_monic() && scaled.degree() == Some(n));
    if scale.is_one() {
        return scaled;
    }
    // coefficient of lambda^k picks up L^(k - n)
    let inv = scale_el.inv().expect("nonzero scale");
    let coeffs = scaled.coefficients().iter().enumerate().map(|(k, c)| c * &inv.pow((n - k) as u64)).collect();
    ExactPolynomial::new(spec, coeffs)
}

/// Roots of a polynomial that lie in its base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    /// `(root, multiplicity)`, canonical ascending order.
    pub roots: Vec<(FieldElement, usize)>,
    /// Whether the multiplicities add up to the degree.
    pub splits: bool,
}

/// Below this modulus roots are found by evaluating at every residue.
const EXHAUSTIVE_LIMIT: u32 = 1 << 16;

pub fn roots_in_field(f: &ExactPolynomial) -> RootReport {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let roots = match f.spec() {
        FieldSpec::Rational => rational_roots(f),
        FieldSpec::PrimeField(p) if p.get() <= EXHAUSTIVE_LIMIT || p.get() == 2 => {
            let candidates: Vec<FieldElement> =
                f.spec().elements().expect("prime field").filter(|x| f.eval(x).is_zero()).collect();
            with_multiplicities(f, candidates)
        }
        FieldSpec::PrimeField(_) => with_multiplicities(f, rabin_roots(f)),
    };
    finish(f, roots)
}

fn finish(f: &ExactPolynomial, mut roots: Vec<(FieldElement, usize)>) -> RootReport {
    roots.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    let total: usize = roots.iter().map(|r| r.1).sum();
    RootReport { splits: Some(total) == f.degree(), roots }
}

fn with_multiplicities(f: &ExactPolynomial, distinct: Vec<FieldElement>) -> Vec<(FieldElement, usize)> {
    distinct
        .into_iter()
        .map(|r| {
            let lin = ExactPolynomial::linear(&r);
            let mut g = f.clone();
            let mut mult = 0;
            loop {
                let (q, rem) = g.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                mult += 1;
                g = q;
            }
            (r, mult)
        })
        .collect()
}

/// Rational-root search: after clearing denominators, a root `a/b` in lowest
/// terms has `a | c_0` and `b | c_n`, where `c_0` is the lowest nonzero
/// coefficient. Candidates beyond the Cauchy bound are skipped.
fn rational_roots(f: &ExactPolynomial) -> Vec<(FieldElement, usize)> {
    let spec = FieldSpec::Rational;
    let den_lcm =
        f.coefficients().iter().filter_map(|c| c.as_rational()).fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = f
        .coefficients()
        .iter()
        .map(|c| (c.as_rational().unwrap() * BigRational::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let zero_mult = ints.iter().take_while(|c| c.is_zero()).count();
    let ints = &ints[zero_mult..];
    let mut found = Vec::new();
    if zero_mult > 0 {
        found.push((spec.zero(), zero_mult));
    }
    let Some(lead) = ints.last() else { return found };
    let remaining_degree = ints.len() - 1;
    if remaining_degree == 0 {
        return found;
    }
    let c0 = &ints[0];
    let bound = ints[..remaining_degree]
        .iter()
        .map(|c| BigRational::new(c.abs(), lead.abs()))
        .max()
        .unwrap_or_else(BigRational::zero)
        + BigRational::one();
    let nums = divisors(&c0.abs().to_biguint().unwrap());
    let dens = divisors(&lead.abs().to_biguint().unwrap());
    let mut current = ExactPolynomial::new(
        spec,
        ints.iter().map(|c| FieldElement::Rational(BigRational::from_integer(c.clone()))).collect(),
    );
    let mut accounted = 0;
    'outer: for b in &dens {
        for a in &nums {
            if !a.gcd(b).is_one() {
                continue;
            }
            let mag = BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone()));
            if mag > bound {
                continue;
            }
            for r in [mag.clone(), -mag] {
                let x = FieldElement::Rational(r);
                let mut mult = 0;
                let lin = ExactPolynomial::linear(&x);
                loop {
                    let (q, rem) = current.divrem(&lin);
                    if !rem.is_zero() {
                        break;
                    }
                    mult += 1;
                    current = q;
                }
                if mult > 0 {
                    found.push((x, mult));
                    accounted += mult;
                    if accounted == remaining_degree {
                        break 'outer;
                    }
                }
            }
        }
    }
    found
}

/// Distinct roots over GF(p), p odd, by Rabin's splitting: `g = gcd(f, x^p - x)`
/// is the product of the distinct linear factors, and `gcd(g, (x + a)^((p-1)/2) - 1)`
/// splits it for a random shift `a` with probability about 1/2.
pub(crate) fn rabin_roots(f: &ExactPolynomial) -> Vec<FieldElement> {
    let spec = f.spec();
    let p = spec.modulus().expect("prime field");
    assert!(p > 2);
    let f = f.monic();
    let x = ExactPolynomial::new(spec, vec![spec.zero(), spec.one()]);
    let xp = x.pow_mod(p as u64, &f);
    let g = f.gcd(&(&xp - &x));
    let mut rng = SplitMix64::new(0x005E_ED0F_u64 ^ p as u64);
    let mut out = Vec::new();
    let mut stack = vec![g];
    while let Some(g) = stack.pop() {
        match g.degree() {
            None | Some(0) => {}
            Some(1) => out.push(-&g.coefficients()[0]),
            Some(_) => loop {
                let a = spec.from_i64(rng.below(p as u64) as i64);
                let shifted = &x + &ExactPolynomial::constant(a);
                let h = &shifted.pow_mod(((p - 1) / 2) as u64, &g) - &ExactPolynomial::constant(spec.one());
                let h = g.gcd(&h);
                let dh = h.degree().unwrap_or(0);
                if dh > 0 && Some(dh) < g.degree() {
                    let other = g.divrem(&h).0;
                    stack.push(h);
                    stack.push(other);
                    break;
                }
            },
        }
    }
    out
}
