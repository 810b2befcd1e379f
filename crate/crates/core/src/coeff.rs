//! Exact coefficient fields: the rationals and prime fields of word size.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field `k` of every ambient polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    Rationals,
    Prime(u64),
}

/// A field element. The variant always agrees with the owning field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    P(u64),
}

impl CoefficientField {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(CoefficientField::Prime(p))
        } else {
            Err(Error::invalid(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::Rationals => 0,
            CoefficientField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            CoefficientField::Rationals => Coeff::Q(BigRational::zero()),
            CoefficientField::Prime(_) => Coeff::P(0),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self {
            CoefficientField::Rationals => Coeff::Q(BigRational::from_integer(BigInt::from(v))),
            CoefficientField::Prime(p) => Coeff::P((v as i128).rem_euclid(*p as i128) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            CoefficientField::Rationals => Coeff::Q(BigRational::from_integer(v.clone())),
            CoefficientField::Prime(p) => Coeff::P(bigint_mod(v, *p)),
        }
    }

    /// Maps a rational number into the field; fails when the denominator
    /// vanishes modulo the characteristic.
    pub fn from_rational(&self, v: &BigRational) -> Result<Coeff> {
        match self {
            CoefficientField::Rationals => Ok(Coeff::Q(v.clone())),
            CoefficientField::Prime(p) => {
                let n = bigint_mod(v.numer(), *p);
                let d = bigint_mod(v.denom(), *p);
                if d == 0 {
                    return Err(Error::invalid(format!("denominator of {v} vanishes mod {p}")));
                }
                Ok(Coeff::P(mul_mod(n, inv_mod(d, *p), *p)))
            }
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Q(q) => q.is_zero(),
            Coeff::P(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Q(q) => q.is_one(),
            Coeff::P(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b, self) {
            (Coeff::Q(x), Coeff::Q(y), _) => Coeff::Q(x + y),
            (Coeff::P(x), Coeff::P(y), CoefficientField::Prime(p)) => Coeff::P(add_mod(*x, *y, *p)),
            _ => panic!("coefficient from a foreign field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (a, self) {
            (Coeff::Q(x), _) => Coeff::Q(-x),
            (Coeff::P(x), CoefficientField::Prime(p)) => Coeff::P(if *x == 0 { 0 } else { p - x }),
            _ => panic!("coefficient from a foreign field"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b, self) {
            (Coeff::Q(x), Coeff::Q(y), _) => Coeff::Q(x * y),
            (Coeff::P(x), Coeff::P(y), CoefficientField::Prime(p)) => Coeff::P(mul_mod(*x, *y, *p)),
            _ => panic!("coefficient from a foreign field"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if self.is_zero(a) {
            return None;
        }
        match (a, self) {
            (Coeff::Q(x), _) => Some(Coeff::Q(x.recip())),
            (Coeff::P(x), CoefficientField::Prime(p)) => Some(Coeff::P(inv_mod(*x, *p))),
            _ => panic!("coefficient from a foreign field"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Parses the canonical encoding produced by [`CoefficientField::format`]:
    /// an optionally signed integer, or `n/d`.
    pub fn parse(&self, text: &str) -> Result<Coeff> {
        let bad = || Error::invalid(format!("malformed coefficient `{text}`"));
        let t = text.trim();
        let value = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
        };
        self.from_rational(&value)
    }

    pub fn format(&self, a: &Coeff) -> String {
        a.to_string()
    }

    /// Whether `a` should print with a leading minus sign.
    pub fn is_negative(&self, a: &Coeff) -> bool {
        matches!(a, Coeff::Q(q) if q.is_negative())
    }

    /// Uniform draw from the oracle's coefficient box: {-2..2} over the
    /// rationals, the whole field for prime fields.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> Coeff {
        match self {
            CoefficientField::Rationals => self.from_i64(rng.gen_range(-2..=2)),
            CoefficientField::Prime(p) => Coeff::P(rng.gen_range(0..*p)),
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Rationals => write!(f, "QQ"),
            CoefficientField::Prime(p) => write!(f, "Fp({p})"),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::P(v) => write!(f, "{v}"),
        }
    }
}

impl Coeff {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Q(q) => Some(q),
            Coeff::P(_) => None,
        }
    }
}

pub(crate) fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = CoefficientField::prime(7).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a, Coeff::P(6));
        assert_eq!(f.mul(&a, &a), f.one());
        assert_eq!(f.inv(&f.from_i64(3)), Some(Coeff::P(5)));
        assert!(f.inv(&f.zero()).is_none());
        assert_eq!(f.parse("1/2").unwrap(), Coeff::P(4));
        assert!(f.parse("1/7").is_err());
    }

    #[test]
    fn rejects_composites() {
        assert!(CoefficientField::prime(91).is_err());
        assert!(CoefficientField::prime(1).is_err());
        assert!(CoefficientField::prime(18446744073709551557).is_ok());
    }

    #[test]
    fn rationals_stay_normalized() {
        let q = CoefficientField::Rationals;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        let b = q.add(&a, &q.parse("3/2").unwrap());
        assert!(q.is_zero(&b));
        assert_eq!(b.to_string(), "0");
    }
}
