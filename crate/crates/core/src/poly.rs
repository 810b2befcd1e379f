//! Sparse distributed polynomials over an ambient ring `k[x1..xn]`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::coeff::{Coeff, CoefficientField};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::syntax::{lex_line, Cursor, Expr};

/// The ambient polynomial ring: coefficient field, variable names, order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: CoefficientField,
    names: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: CoefficientField, names: Vec<String>, order: MonomialOrder) -> Result<Arc<Self>> {
        if order.nvars() != names.len() {
            return Err(Error::DimensionMismatch { expected: names.len(), found: order.nvars() });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate variable name `{n}`")));
            }
            if !n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                || !n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
            {
                return Err(Error::invalid(format!("`{n}` is not a valid variable name")));
            }
        }
        Ok(Arc::new(PolyRing { field, names, order }))
    }

    /// Grevlex ring on the given variable names.
    pub fn grevlex(field: CoefficientField, names: &[&str]) -> Result<Arc<Self>> {
        PolyRing::new(field, names.iter().map(|s| s.to_string()).collect(), MonomialOrder::grevlex(names.len()))
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same ring with extra variables appended at lowest priority.
    pub fn with_extra_vars(&self, extra: &[String]) -> Result<Arc<Self>> {
        let mut names = self.names.clone();
        names.extend(extra.iter().cloned());
        PolyRing::new(self.field, names, self.order.extended(extra.len()))
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A polynomial; terms sorted strictly descending in the ring's order,
/// no zero coefficients. The zero polynomial has no terms.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        Polynomial::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Polynomial::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &Arc<PolyRing>, v: i64) -> Self {
        Polynomial::constant(ring, ring.field().from_i64(v))
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Polynomial::monomial(ring, Monomial::variable(ring.nvars(), index, 1), ring.field().one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Coeff) -> Self {
        Polynomial::from_terms(ring, vec![(m, c)])
    }

    /// Normalizes an arbitrary term list: sorts, merges equal monomials,
    /// drops zeros.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Monomial, Coeff)>) -> Self {
        let field = ring.field();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if field.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c))
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if field.is_zero(lc) {
                out.pop();
            }
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> CoefficientField {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        if self.ring.field() != other.ring.field() {
            return Err(Error::IncompatibleCoefficients);
        }
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::ring_mismatch("polynomials live in different ambient rings"));
        }
        Ok(())
    }

    fn add_unchecked(&self, other: &Polynomial) -> Polynomial {
        let field = self.field();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match order.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(&a.1, &b.1);
                    if !field.is_zero(&c) {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc = Polynomial::zero(&self.ring);
        for (m, c) in &small.terms {
            acc = acc.add_unchecked(&large.mul_term(m, c));
        }
        acc
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        let field = self.field();
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), field.mul(c, d))).collect(),
        }
    }

    /// `c * m * self`; monomial multiplication preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        let field = self.field();
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), field.mul(c, d))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = self.field().inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Substitutes `images[i]` for variable `i`; the result lives in the
    /// images' ring.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), found: images.len() });
        }
        if target.field() != self.field() {
            return Err(Error::IncompatibleCoefficients);
        }
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul_unchecked(&images[i].pow(e));
                }
            }
            acc = acc.add_unchecked(&t);
        }
        Ok(acc)
    }

    /// Re-homes the polynomial into `target` by mapping variable `i` to
    /// `var_map[i]`. Variables must map injectively.
    pub fn rename_into(&self, target: &Arc<PolyRing>, var_map: &[usize]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; target.nvars()];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[var_map[i]] += x;
                }
                (Monomial::from_exponents(&e), c.clone())
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exponents()[var]).max()
    }

    pub fn uses_only(&self, vars: &[usize]) -> bool {
        self.terms.iter().all(|(m, _)| m.support().all(|v| vars.contains(&v)))
    }

    pub fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial> {
        let toks = lex_line(text, 1)?;
        let mut cur = Cursor::new(&toks, 1, text.chars().count() + 1);
        let expr = cur.parse_expr()?;
        cur.expect_end()?;
        eval_expr(ring, &expr)
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomials from the same ring")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(&rhs.neg()).expect("polynomials from the same ring")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomials from the same ring")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// Checked sum of two polynomials over the same ambient ring.
pub fn poly_add(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    p.checked_add(q)
}

/// Checked product of two polynomials over the same ambient ring.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    p.checked_mul(q)
}

pub fn eval_expr(ring: &Arc<PolyRing>, e: &Expr) -> Result<Polynomial> {
    Ok(match e {
        Expr::Num(n) => Polynomial::constant(ring, ring.field().from_bigint(n)),
        Expr::Var { name, line, column } => match ring.var_index(name) {
            Some(i) => Polynomial::var(ring, i),
            None => {
                return Err(Error::Syntax {
                    line: *line,
                    column: *column,
                    message: format!("unknown variable `{name}`"),
                })
            }
        },
        Expr::Neg(a) => eval_expr(ring, a)?.neg(),
        Expr::Add(a, b) => &eval_expr(ring, a)? + &eval_expr(ring, b)?,
        Expr::Sub(a, b) => &eval_expr(ring, a)? - &eval_expr(ring, b)?,
        Expr::Mul(a, b) => &eval_expr(ring, a)? * &eval_expr(ring, b)?,
        Expr::Div(a, b) => {
            let num = eval_expr(ring, a)?;
            let den = eval_expr(ring, b)?;
            if !den.is_unit_constant() {
                return Err(Error::invalid("division is only allowed by nonzero constants"));
            }
            let inv = ring.field().inv(&den.terms[0].1).expect("nonzero");
            num.scale(&inv)
        }
        Expr::Pow(a, n) => eval_expr(ring, a)?.pow(*n),
    })
}

/// Canonical text: `3*x^2*y - 1/2*z`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = field.is_negative(c);
            let abs = if negative { field.neg(c) } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mono = format_monomial(&self.ring, m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if field.is_one(&abs) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

pub fn format_monomial(ring: &PolyRing, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.names()[i].clone()),
            _ => parts.push(format!("{}^{}", ring.names()[i], e)),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qq(names: &[&str]) -> Arc<PolyRing> {
        PolyRing::grevlex(CoefficientField::Rationals, names).unwrap()
    }

    fn p(r: &Arc<PolyRing>, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn add_examples() {
        let r = qq(&["x", "y"]);
        assert_eq!(poly_add(&p(&r, "x+y"), &p(&r, "x-y")).unwrap(), p(&r, "2*x"));
        assert_eq!(poly_add(&p(&r, "x^2+3"), &Polynomial::zero(&r)).unwrap(), p(&r, "x^2+3"));
        let f2 = PolyRing::grevlex(CoefficientField::prime(2).unwrap(), &["x"]).unwrap();
        assert!(poly_add(&p(&f2, "x"), &p(&f2, "x")).unwrap().is_zero());
    }

    #[test]
    fn mul_examples() {
        let r = qq(&["x", "y"]);
        assert_eq!(poly_mul(&p(&r, "x+y"), &p(&r, "x-y")).unwrap(), p(&r, "x^2-y^2"));
        assert_eq!(poly_mul(&p(&r, "x*y-7"), &Polynomial::one(&r)).unwrap(), p(&r, "x*y-7"));
        let f2 = PolyRing::grevlex(CoefficientField::prime(2).unwrap(), &["x"]).unwrap();
        let a = p(&f2, "x+1");
        assert_eq!(poly_mul(&a, &a).unwrap(), p(&f2, "x^2+1"));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let r = qq(&["x"]);
        let f2 = PolyRing::grevlex(CoefficientField::prime(2).unwrap(), &["x"]).unwrap();
        assert_eq!(poly_add(&p(&r, "x"), &p(&f2, "x")), Err(Error::IncompatibleCoefficients));
        assert_eq!(poly_mul(&p(&r, "x"), &p(&f2, "x")), Err(Error::IncompatibleCoefficients));
    }

    #[test]
    fn canonical_printing() {
        let r = qq(&["x", "y", "z"]);
        assert_eq!(p(&r, "3*x^2*y - 1/2*z").to_string(), "3*x^2*y - 1/2*z");
        assert_eq!(p(&r, "-z + 2 - x*x").to_string(), "-x^2 - z + 2");
        assert_eq!(p(&r, "(x+1)(x-1)").to_string(), "x^2 - 1");
        assert_eq!(p(&r, "3x^2y").to_string(), "3*x^2*y");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }

    #[test]
    fn unknown_variable_is_reported() {
        let r = qq(&["x"]);
        assert!(matches!(Polynomial::parse(&r, "x + w"), Err(Error::Syntax { column: 5, .. })));
    }

    fn arb_poly(r: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..2), -5i64..5, 1i64..4), 0..5).prop_map(move |ts| {
            let terms = ts
                .into_iter()
                .map(|((a, b, c), n, d)| {
                    let coeff = CoefficientField::Rationals.parse(&format!("{n}/{d}")).unwrap();
                    (Monomial::from_exponents(&[a, b, c]), coeff)
                })
                .collect();
            Polynomial::from_terms(&r, terms)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(qq(&["x","y","z"])), b in arb_poly(qq(&["x","y","z"])), c in arb_poly(qq(&["x","y","z"]))) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly(qq(&["x","y","z"]))) {
            let r = a.ring().clone();
            let text = a.to_string();
            let back = Polynomial::parse(&r, &text).unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, a);
        }

        #[test]
        fn rational_coefficients_round_trip(n in -1000i64..1000, d in 1i64..1000) {
            let q = CoefficientField::Rationals;
            let c = q.parse(&format!("{n}/{d}")).unwrap();
            prop_assert_eq!(q.parse(&c.to_string()).unwrap(), c.clone());
            prop_assert_eq!(q.parse(&c.to_string()).unwrap().to_string(), c.to_string());
        }
    }
}
