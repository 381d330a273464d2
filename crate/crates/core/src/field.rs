//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.
//!
//! Every [`FieldElement`] carries its field, so mixing scalars from different
//! fields is detected rather than silently wrapped. The `checked_*` methods
//! report such misuse as [`FieldError`]; the operator impls (`&a + &b`, ...)
//! panic on it and are meant for code paths whose inputs were validated once
//! at construction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest admissible modulus is `2^31 - 1`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("malformed field element {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed fields: {0} and {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^31 - 1")]
    ModulusTooLarge(u64),
    #[error("unknown field descriptor {0:?}")]
    UnknownField(String),
}

/// A prime `p < 2^31`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p > MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Trial division; adequate for the 31-bit moduli accepted here.
pub(crate) fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut k = 3u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// The field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    PrimeField(Prime),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Prime::new(p).map(FieldSpec::PrimeField)
    }

    /// 0 for the rationals, `p` for GF(p).
    pub fn characteristic(self) -> u32 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::PrimeField(p) => p.get(),
        }
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::PrimeField(p) => Some(p.get()),
        }
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, x: i64) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::from_integer(x.into())),
            FieldSpec::PrimeField(p) => {
                FieldElement::Residue { value: x.rem_euclid(p.get() as i64) as u32, modulus: p }
            }
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        if den == 0 {
            return Err(FieldError::ZeroDenominator(format!("{num}/{den}")));
        }
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    pub fn from_bigint(self, x: &BigInt) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::from_integer(x.clone())),
            FieldSpec::PrimeField(p) => {
                let r = x.mod_floor(&BigInt::from(p.get()));
                FieldElement::Residue { value: r.to_u32().expect("residue fits"), modulus: p }
            }
        }
    }

    /// Parses an integer or `num/den` literal. Over GF(p), `a/b` means `a * b^-1`.
    pub fn parse(self, text: &str) -> Result<FieldElement, FieldError> {
        parse_element(text, self)
    }

    /// All elements of a prime field in residue order; `None` over the rationals.
    pub fn elements(self) -> Option<impl Iterator<Item = FieldElement>> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::PrimeField(p) => {
                Some((0..p.get()).map(move |value| FieldElement::Residue { value, modulus: p }))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::PrimeField(p) => write!(f, "gfp:{}", p.get()),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `rational`, `Q`, `gfp:P` and `GF(P)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("rational") || t == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let digits = t
            .strip_prefix("gfp:")
            .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| FieldError::UnknownField(s.to_string()))?;
        let p: u64 = digits.trim().parse().map_err(|_| FieldError::UnknownField(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

/// An exact scalar in canonical form.
///
/// Rationals are kept in lowest terms with a positive denominator (guaranteed
/// by `BigRational`); residues lie in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue { value: u32, modulus: Prime },
}

pub fn parse_element(text: &str, spec: FieldSpec) -> Result<FieldElement, FieldError> {
    let t = text.trim();
    let malformed = || FieldError::Malformed(text.to_string());
    let parse_int = |s: &str| -> Result<BigInt, FieldError> {
        let s = s.trim();
        let body = s.strip_prefix(['-', '+']).unwrap_or(s);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        s.parse::<BigInt>().map_err(|_| malformed())
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (parse_int(n)?, parse_int(d)?),
        None => (parse_int(t)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(FieldError::ZeroDenominator(text.to_string()));
    }
    match spec {
        FieldSpec::Rational => Ok(FieldElement::Rational(BigRational::new(num, den))),
        FieldSpec::PrimeField(_) => {
            let d = spec.from_bigint(&den);
            if d.is_zero() {
                return Err(FieldError::ZeroDenominator(text.to_string()));
            }
            spec.from_bigint(&num).checked_div(&d)
        }
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // extended Euclid; a != 0 mod p
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rational,
            FieldElement::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            FieldElement::Residue { .. } => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        let (a, b) = (self.spec(), other.spec());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::MixedFields(a, b))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Residue { value: a, modulus }, FieldElement::Residue { value: b, .. }) => {
                let p = modulus.get() as u64;
                FieldElement::Residue { value: ((*a as u64 + *b as u64) % p) as u32, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Residue { value: a, modulus }, FieldElement::Residue { value: b, .. }) => {
                let p = modulus.get() as u64;
                FieldElement::Residue { value: ((*a as u64 * *b as u64) % p) as u32, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Residue { value, modulus } => {
                FieldElement::Residue { value: inv_mod(*value, modulus.get()), modulus: *modulus }
            }
        })
    }

    fn neg_ref(&self) -> Self {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Residue { value, modulus } => {
                FieldElement::Residue { value: if *value == 0 { 0 } else { modulus.get() - value }, modulus: *modulus }
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Total order used for canonical eigenvalue ordering: numeric over the
    /// rationals, residue order over GF(p).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a.cmp(b),
            (FieldElement::Residue { value: a, .. }, FieldElement::Residue { value: b, .. }) => a.cmp(b),
            (FieldElement::Rational(_), _) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, FieldElement::Rational(r) if r.is_negative())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(_) => write!(f, "{self}"),
            FieldElement::Residue { modulus, .. } => write!(f, "{self} (mod {})", modulus.get()),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> FieldElement {
        FieldSpec::Rational.parse(s).unwrap()
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(q("3/6"), q("1/2"));
        assert_eq!(q("3/6").to_string(), "1/2");
        assert_eq!(gf(7).parse("-4").unwrap().to_string(), "3");
        let two_thirds = gf(7).parse("2/3").unwrap();
        assert_eq!(two_thirds.to_string(), "3");
        assert_eq!(&two_thirds * &gf(7).from_i64(3), gf(7).from_i64(2));
        assert_eq!(q("-6/-4"), q("3/2"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(q_err("1/0"), FieldError::ZeroDenominator(_)));
        assert!(matches!(q_err("abc"), FieldError::Malformed(_)));
        assert!(matches!(q_err(""), FieldError::Malformed(_)));
        assert!(matches!(q_err("1/2/3"), FieldError::Malformed(_)));
        assert!(matches!(gf(7).parse("1/14").unwrap_err(), FieldError::ZeroDenominator(_)));
    }

    fn q_err(s: &str) -> FieldError {
        FieldSpec::Rational.parse(s).unwrap_err()
    }

    #[test]
    fn spec_construction() {
        assert_eq!(FieldSpec::Rational.characteristic(), 0);
        assert_eq!(gf(101).characteristic(), 101);
        assert_eq!(FieldSpec::prime(91).unwrap_err(), FieldError::NotPrime(91));
        assert_eq!(FieldSpec::prime(1).unwrap_err(), FieldError::NotPrime(1));
        assert!(matches!(FieldSpec::prime(1 << 31), Err(FieldError::ModulusTooLarge(_))));
        assert!(FieldSpec::prime(MAX_MODULUS).is_ok());
        assert_eq!("gfp:101".parse::<FieldSpec>().unwrap(), gf(101));
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert!("gfp:x".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(q("2").inv().unwrap(), q("1/2"));
        assert_eq!(gf(7).from_i64(3).inv().unwrap().to_string(), "5");
        assert_eq!(q("-1/3").inv().unwrap(), q("-3"));
        assert_eq!(q("0").inv().unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(gf(7).from_i64(14).inv().unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&q("1/2") + &q("1/3"), q("5/6"));
        assert_eq!((&gf(7).from_i64(4) * &gf(7).from_i64(5)).to_string(), "6");
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(-gf(7).from_i64(0), gf(7).from_i64(0));
        assert_eq!(gf(7).from_i64(3).pow(6), gf(7).one());
    }

    #[test]
    fn mixed_fields_rejected() {
        let e = q("1").checked_add(&gf(7).one()).unwrap_err();
        assert!(matches!(e, FieldError::MixedFields(..)));
        let e = gf(5).one().checked_mul(&gf(7).one()).unwrap_err();
        assert!(matches!(e, FieldError::MixedFields(..)));
        assert_eq!(q("1").checked_div(&q("0")).unwrap_err(), FieldError::DivisionByZero);
    }

    fn any_rational() -> impl Strategy<Value = FieldElement> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| FieldSpec::Rational.from_ratio(n, d).unwrap())
    }

    fn any_gf101() -> impl Strategy<Value = FieldElement> {
        (0i64..101).prop_map(|v| gf(101).from_i64(v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn rational_field_axioms(x in any_rational(), y in any_rational(), z in any_rational()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn gfp_field_axioms(x in any_gf101(), y in any_gf101(), z in any_gf101()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn nonzero_times_inverse_is_one(x in any_rational(), y in any_gf101()) {
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
            if !y.is_zero() {
                prop_assert!((&y * &y.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn render_parse_roundtrip(x in any_rational(), y in any_gf101()) {
            prop_assert_eq!(FieldSpec::Rational.parse(&x.to_string()).unwrap(), x);
            prop_assert_eq!(gf(101).parse(&y.to_string()).unwrap(), y);
        }
    }
}
