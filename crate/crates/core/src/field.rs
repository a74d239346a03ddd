//! Exact coefficient fields used by the linear-algebra layer.
//!
//! The cohomology rings themselves carry integer structure constants; every
//! rank or membership question is answered after mapping those integers into
//! a field, either the rationals or a prime field `Z/p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A field object. Elements are plain values; all arithmetic goes through the
/// field so that runtime parameters such as the modulus stay in one place.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_integer(&self, n: &BigInt) -> Self::Elem;
    fn characteristic(&self) -> u64;
    fn spec(&self) -> FieldSpec;
    fn display_elem(&self, a: &Self::Elem) -> String;
}

/// Exact rational with an inline fast path.
///
/// Values stay canonical: reduced, positive denominator, and `Small` whenever
/// both parts fit in `i64`. Derived equality is therefore value equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    fn from_i128(n: i128, d: i128) -> Rational {
        assert!(d != 0, "zero denominator");
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(n.into(), d.into())),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new((*n).into(), (*d).into()),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::Small(n, 1)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::Small(0, 1)
    }
    fn one(&self) -> Rational {
        Rational::Small(1, 1)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        match (a, b) {
            // |n d| < 2^126, so the sum fits
            (Rational::Small(n1, d1), Rational::Small(n2, d2)) => {
                let (n1, d1, n2, d2) = (*n1 as i128, *d1 as i128, *n2 as i128, *d2 as i128);
                Rational::from_i128(n1 * d2 + n2 * d1, d1 * d2)
            }
            _ => Rational::from_big(a.to_big() + b.to_big()),
        }
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        match (a, b) {
            (Rational::Small(n1, d1), Rational::Small(n2, d2)) => {
                Rational::from_i128(*n1 as i128 * *n2 as i128, *d1 as i128 * *d2 as i128)
            }
            _ => Rational::from_big(a.to_big() * b.to_big()),
        }
    }
    fn neg(&self, a: &Rational) -> Rational {
        match a {
            Rational::Small(n, d) => Rational::from_i128(-(*n as i128), *d as i128),
            Rational::Big(r) => Rational::from_big(-r),
        }
    }
    fn inv(&self, a: &Rational) -> Rational {
        assert!(!a.is_zero(), "inverse of zero");
        match a {
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(r) => Rational::from_big(r.recip()),
        }
    }
    fn from_integer(&self, n: &BigInt) -> Rational {
        Rational::from_big(BigRational::from_integer(n.clone()))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn display_elem(&self, a: &Rational) -> String {
        a.to_string()
    }
}

/// The prime field `Z/p`. Construct through [`PrimeField::new`], which checks
/// primality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 32 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // Fermat: a^(p-2)
        self.pow(*a, self.p - 2)
    }
    fn from_integer(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn display_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Trial division; moduli are restricted to 32 bits.
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

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported 32-bit range")]
    ModulusTooLarge(u64),
    #[error("unrecognised field descriptor `{0}` (expected `q` or `zp:<prime>`)")]
    BadDescriptor(String),
}

/// Field descriptor as it appears on the command line and in reports:
/// `q` for the rationals, `zp:<p>` for a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "zp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rational" || t == "rationals" {
            return Ok(FieldSpec::Rational);
        }
        let digits = t
            .strip_prefix("zp:")
            .or_else(|| t.strip_prefix("z"))
            .or_else(|| t.strip_prefix("gf"))
            .ok_or_else(|| FieldError::BadDescriptor(s.to_string()))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::BadDescriptor(s.to_string()))?;
        PrimeField::new(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = FieldError;
    fn try_from(s: String) -> Result<Self, FieldError> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_descriptors() {
        assert_eq!("q".parse::<FieldSpec>(), Ok(FieldSpec::Rational));
        assert_eq!("zp:2".parse::<FieldSpec>(), Ok(FieldSpec::Prime(2)));
        assert_eq!("ZP:7".parse::<FieldSpec>(), Ok(FieldSpec::Prime(7)));
        assert_eq!("zp:9".parse::<FieldSpec>(), Err(FieldError::NotPrime(9)));
        assert!(matches!(
            "r".parse::<FieldSpec>(),
            Err(FieldError::BadDescriptor(_))
        ));
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101u64 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_integer(&BigInt::from(-2)), 99);
    }

    #[test]
    fn characteristic_two_kills_two() {
        let f = PrimeField::new(2).unwrap();
        assert!(f.is_zero(&f.from_integer(&BigInt::from(-2))));
        assert!(!Rationals.is_zero(&Rationals.from_integer(&BigInt::from(-2))));
    }

    #[test]
    fn rational_fast_path_agrees_with_bigrational() {
        let q = Rationals;
        let big = Rational::from(i64::MAX);
        let sq = q.mul(&big, &big);
        assert!(matches!(sq, Rational::Big(_)));
        // back into range: canonical small form again
        let back = q.mul(&sq, &q.inv(&big));
        assert_eq!(back, big);
        let min = Rational::from(i64::MIN);
        assert_eq!(q.neg(&min).to_big(), -min.to_big());
        assert_eq!(q.add(&q.neg(&min), &min), q.zero());
        let third = q.inv(&Rational::from(-3));
        assert_eq!(third, Rational::Small(-1, 3));
        assert_eq!(q.add(&third, &Rational::Small(1, 6)).to_string(), "-1/6");
        assert_eq!(q.from_integer(&(BigInt::from(1) << 70u32)).to_big(), BigRational::from_integer(BigInt::from(1) << 70u32));
    }
}
