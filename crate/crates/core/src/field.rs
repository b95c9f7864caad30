//! Exact scalars: the rationals and prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field. Products of two residues must
/// fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// The prime field of order `p`, after checking primality by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::InvalidField(format!("modulus {p} exceeds {MAX_PRIME}")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match *self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElement::Modular {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// `(-1)^e` as a field element.
    pub fn sign(&self, e: i64) -> FieldElement {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Parses `"4"`, `"-3"` or `"2/3"`. Over a prime field the denominator is inverted.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        match *self {
            Field::Rationals => Ok(FieldElement::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |b: &BigInt| -> u64 {
                    let m = BigInt::from(p);
                    let r = ((b % &m) + &m) % &m;
                    u64::try_from(r).expect("residue fits")
                };
                let n = FieldElement::Modular { value: reduce(&num), modulus: p };
                let d = FieldElement::Modular { value: reduce(&den), modulus: p };
                if d.is_zero() {
                    return Err(Error::Parse(format!("denominator of {s:?} vanishes mod {p}")));
                }
                Ok(&n * &d.inv())
            }
        }
    }

    /// All elements in canonical order `0, 1, ..., p-1`; `None` over the rationals.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        match *self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..p).map(|v| FieldElement::Modular { value: v, modulus: p }).collect()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rationals => "Q".to_string(),
            Field::Prime(p) => format!("F{p}"),
        }
    }

    /// Parses `"Q"` or `"F<p>"`.
    pub fn from_name(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let digits = s.strip_prefix('F').or_else(|| s.strip_prefix("GF")).unwrap_or(s);
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Field::from_name(&s).map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar. Values of different fields never mix; doing so is a bug
/// and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rationals,
            FieldElement::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> FieldElement {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: inverse_mod(*value, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Residue of an element of a prime field.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldElement::Modular { value, .. } => Some(*value),
            FieldElement::Rational(_) => None,
        }
    }
}

/// Extended-Euclid inverse of `a` modulo the prime `p`.
fn inverse_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i64) as u64
}

fn same_modulus(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "mixing scalars of different prime fields");
    a
}

impl Add<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Modular { value: a, modulus: p }, FieldElement::Modular { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                FieldElement::Modular { value: (a + b) % p, modulus: p }
            }
            _ => panic!("mixing rational and modular scalars"),
        }
    }
}

impl Sub<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (FieldElement::Modular { value: a, modulus: p }, FieldElement::Modular { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                FieldElement::Modular { value: (a + p - b) % p, modulus: p }
            }
            _ => panic!("mixing rational and modular scalars"),
        }
    }
}

impl Mul<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Modular { value: a, modulus: p }, FieldElement::Modular { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                FieldElement::Modular { value: (a * b) % p, modulus: p }
            }
            _ => panic!("mixing rational and modular scalars"),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    /// Residue order on prime fields, numeric order on the rationals.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (FieldElement::Modular { value: a, .. }, FieldElement::Modular { value: b, .. }) => a.cmp(b),
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a.cmp(b),
            (FieldElement::Rational(_), _) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FieldElement {
    /// Sign of a rational, for pretty printing.
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, FieldElement::Rational(q) if q.is_negative())
    }
}

/// Vector helpers. Vectors are plain `Vec<FieldElement>` in a fixed basis.
pub mod vector {
    use super::{Field, FieldElement};

    pub fn zeros(field: Field, n: usize) -> Vec<FieldElement> {
        vec![field.zero(); n]
    }

    pub fn unit(field: Field, n: usize, i: usize) -> Vec<FieldElement> {
        let mut v = zeros(field, n);
        v[i] = field.one();
        v
    }

    pub fn is_zero(v: &[FieldElement]) -> bool {
        v.iter().all(FieldElement::is_zero)
    }

    pub fn add_assign(acc: &mut [FieldElement], v: &[FieldElement]) {
        assert_eq!(acc.len(), v.len());
        for (a, b) in acc.iter_mut().zip(v) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    /// `acc += c * v`
    pub fn axpy(acc: &mut [FieldElement], c: &FieldElement, v: &[FieldElement]) {
        assert_eq!(acc.len(), v.len());
        if c.is_zero() {
            return;
        }
        for (a, b) in acc.iter_mut().zip(v) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
    }

    pub fn add(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = a.to_vec();
        add_assign(&mut out, b);
        out
    }

    pub fn sub(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(c: &FieldElement, v: &[FieldElement]) -> Vec<FieldElement> {
        v.iter().map(|x| c * x).collect()
    }

    pub fn neg(v: &[FieldElement]) -> Vec<FieldElement> {
        v.iter().map(|x| -x).collect()
    }

    pub fn dot(a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        assert_eq!(a.len(), b.len());
        let mut acc = a.first().map(|x| x.field().zero()).unwrap_or(Field::Rationals.zero());
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += &(x * y);
            }
        }
        acc
    }

    pub fn to_strings(v: &[FieldElement]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    pub fn parse(field: Field, items: &[String]) -> crate::Result<Vec<FieldElement>> {
        items.iter().map(|s| field.parse(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(7).is_ok());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a - &b, f.from_i64(4));
        assert_eq!(&a * &b, f.from_i64(2));
        assert_eq!(&a * &a.inv(), f.one());
        assert_eq!(-&a, f.from_i64(2));
    }

    #[test]
    fn fermat_matches_euclid() {
        for p in [2u64, 3, 5, 7, 11, 13, 101] {
            let f = Field::prime(p).unwrap();
            for a in f.elements().unwrap().into_iter().skip(1) {
                assert!(a.pow(p - 1).is_one());
                assert_eq!(a.pow(p - 2), a.inv());
            }
        }
    }

    #[test]
    fn parse_rationals() {
        let q = Field::Rationals;
        assert_eq!(q.parse("4/6").unwrap().to_string(), "2/3");
        assert_eq!(q.parse("-3").unwrap().to_string(), "-3");
        assert_eq!(q.parse("2/-4").unwrap().to_string(), "-1/2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("abc").is_err());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.parse("1/2").unwrap(), f3.from_i64(2));
        assert!(f3.parse("1/3").is_err());
    }

    #[test]
    fn field_names() {
        assert_eq!(Field::from_name("F3").unwrap(), Field::Prime(3));
        assert_eq!(Field::from_name("Q").unwrap(), Field::Rationals);
        assert!(Field::from_name("F4").is_err());
    }
}
