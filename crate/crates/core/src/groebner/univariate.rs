//! Dense univariate polynomials over a coefficient field, just enough to
//! decide irreducibility of minimal polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::{is_prime_u64, Coeff, CoefficientField};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dense {
    pub field: CoefficientField,
    pub c: Vec<Coeff>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

impl Dense {
    pub fn new(field: CoefficientField, mut c: Vec<Coeff>) -> Self {
        while c.last().is_some_and(|a| field.is_zero(a)) {
            c.pop();
        }
        Dense { field, c }
    }

    fn x(field: CoefficientField) -> Self {
        Dense { field, c: vec![field.zero(), field.one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lead(&self) -> &Coeff {
        self.c.last().expect("nonzero")
    }

    fn monic(&self) -> Dense {
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        Dense { field: self.field, c: self.c.iter().map(|a| self.field.mul(a, &inv)).collect() }
    }

    fn sub(&self, o: &Dense) -> Dense {
        let f = self.field;
        let n = self.c.len().max(o.c.len());
        let z = f.zero();
        let c = (0..n).map(|i| f.sub(self.c.get(i).unwrap_or(&z), o.c.get(i).unwrap_or(&z))).collect();
        Dense::new(f, c)
    }

    fn mul(&self, o: &Dense) -> Dense {
        if self.is_zero() || o.is_zero() {
            return Dense::new(self.field, vec![]);
        }
        let f = self.field;
        let mut c = vec![f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Dense::new(f, c)
    }

    fn rem(&self, m: &Dense) -> Dense {
        let f = self.field;
        let mut r = self.c.clone();
        let dm = m.degree();
        let inv = f.inv(m.lead()).expect("nonzero divisor");
        while r.len() > dm && !r.is_empty() {
            let top = r.len() - 1;
            let q = f.mul(&r[top], &inv);
            if !f.is_zero(&q) {
                for (i, b) in m.c.iter().enumerate() {
                    let k = top - dm + i;
                    r[k] = f.sub(&r[k], &f.mul(&q, b));
                }
            }
            r.pop();
            while r.last().is_some_and(|a| f.is_zero(a)) {
                r.pop();
            }
        }
        Dense::new(f, r)
    }

    fn gcd(&self, o: &Dense) -> Dense {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn derivative(&self) -> Dense {
        let f = self.field;
        let c = self.c.iter().enumerate().skip(1).map(|(i, a)| f.mul(&f.from_i64(i as i64), a)).collect();
        Dense::new(f, c)
    }

    /// Quotient of an exact division by a nonzero polynomial.
    fn div_exact(&self, m: &Dense) -> Dense {
        let f = self.field;
        let dm = m.degree();
        let inv = f.inv(m.lead()).expect("nonzero divisor");
        let mut r = self.c.clone();
        let mut q = vec![f.zero(); self.c.len().saturating_sub(dm)];
        while r.len() > dm && !r.is_empty() {
            let top = r.len() - 1;
            let c = f.mul(&r[top], &inv);
            for (i, b) in m.c.iter().enumerate() {
                let k = top - dm + i;
                r[k] = f.sub(&r[k], &f.mul(&c, b));
            }
            q[top - dm] = c;
            r.pop();
        }
        Dense::new(f, q)
    }

    fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    fn powmod(&self, mut e: u64, m: &Dense) -> Dense {
        let mut base = self.rem(m);
        let mut acc = Dense::new(self.field, vec![self.field.one()]);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

/// Decides irreducibility where the available tools allow it.
pub(crate) fn irreducibility(f: &Dense) -> Irreducibility {
    let n = f.degree();
    if f.is_zero() || n == 0 {
        return Irreducibility::Reducible;
    }
    if n == 1 {
        return Irreducibility::Irreducible;
    }
    if !f.is_squarefree() {
        return Irreducibility::Reducible;
    }
    match f.field {
        CoefficientField::Prime(_) => {
            if rabin_irreducible(&f.monic()) {
                Irreducibility::Irreducible
            } else {
                Irreducibility::Reducible
            }
        }
        CoefficientField::Rationals => rational_irreducibility(f),
    }
}

/// Rabin's test over a prime field; `f` monic and of positive degree.
fn rabin_irreducible(f: &Dense) -> bool {
    let p = f.field.characteristic();
    let n = f.degree();
    let x = Dense::x(f.field);
    // frob[k] = x^(p^k) mod f
    let mut frob = vec![x.rem(f)];
    for k in 1..=n {
        let next = frob[k - 1].powmod(p, f);
        frob.push(next);
    }
    if !frob[n].sub(&x).rem(f).is_zero() {
        return false;
    }
    prime_divisors(n as u64).into_iter().all(|q| {
        let k = n / q as usize;
        f.gcd(&frob[k].sub(&x)).degree() == 0
    })
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primitive integer coefficients of a rational polynomial.
fn integer_coefficients(f: &Dense) -> Vec<BigInt> {
    let rats: Vec<_> = f.c.iter().map(|a| a.as_rational().expect("rational").clone()).collect();
    let lcm = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r.numer() * &lcm) / r.denom()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    ints.into_iter().map(|a| a / &g).collect()
}

fn rational_irreducibility(f: &Dense) -> Irreducibility {
    let ints = integer_coefficients(f);
    match has_rational_root(&ints) {
        Some(true) => return Irreducibility::Reducible,
        Some(false) if f.degree() <= 3 => return Irreducibility::Irreducible,
        _ => {}
    }
    // A factor over Q reduces to a factor of the same degree modulo every
    // good prime, so an empty intersection of the possible factor degrees
    // across primes proves irreducibility.
    let n = f.degree();
    let lead = ints.last().expect("nonzero");
    let mut possible: Vec<bool> = (0..=n).map(|d| d > 0 && d < n).collect();
    let mut tried = 0;
    let mut p = 1_000_003u64;
    while tried < 16 {
        p += 2;
        if !is_prime_u64(p) || (lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let field = CoefficientField::Prime(p);
        let g = Dense::new(field, ints.iter().map(|a| field.from_bigint(a)).collect());
        if !g.is_squarefree() {
            continue;
        }
        tried += 1;
        let sums = subset_sums(&distinct_degree_pattern(&g.monic()), n);
        for (d, ok) in possible.iter_mut().enumerate() {
            *ok &= sums[d];
        }
        if !possible.iter().any(|&b| b) {
            return Irreducibility::Irreducible;
        }
    }
    Irreducibility::Unknown
}

/// Degrees of the irreducible factors of a squarefree monic polynomial
/// over a prime field, via distinct-degree factorization.
fn distinct_degree_pattern(f: &Dense) -> Vec<usize> {
    let p = f.field.characteristic();
    let x = Dense::x(f.field);
    let mut rest = f.clone();
    let mut h = x.rem(f);
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree() > 0 {
        d += 1;
        if 2 * d > rest.degree() {
            out.push(rest.degree());
            break;
        }
        h = h.powmod(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() > 0 {
            out.extend(std::iter::repeat_n(d, g.degree() / d));
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
        }
    }
    out
}

fn subset_sums(parts: &[usize], n: usize) -> Vec<bool> {
    let mut can = vec![false; n + 1];
    can[0] = true;
    for &k in parts {
        for s in (k..=n).rev() {
            can[s] |= can[s - k];
        }
    }
    can
}

/// Rational-root test on integer coefficients. `None` when the constant or
/// leading coefficient is too large to enumerate divisors.
fn has_rational_root(c: &[BigInt]) -> Option<bool> {
    if c[0].is_zero() {
        return Some(true);
    }
    let a0 = c[0].abs().to_u64().filter(|&v| v <= 1_000_000)?;
    let an = c.last().expect("nonzero").abs().to_u64().filter(|&v| v <= 1_000_000)?;
    let divisors = |n: u64| (1..=n).filter(move |d| n.is_multiple_of(*d));
    for num in divisors(a0) {
        for den in divisors(an) {
            if num.gcd(&den) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                if eval_scaled(c, &(BigInt::from(num) * sign), &BigInt::from(den)).is_zero() {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

/// `den^deg * f(num/den)`.
fn eval_scaled(c: &[BigInt], num: &BigInt, den: &BigInt) -> BigInt {
    let deg = c.len() - 1;
    let mut acc = BigInt::zero();
    let mut num_pow = BigInt::one();
    for (i, a) in c.iter().enumerate() {
        acc += a * &num_pow * den.pow((deg - i) as u32);
        num_pow *= num;
    }
    acc
}
