//! Presented rings `k[x1..xn]/K`, ideals, Gröbner bases, membership,
//! powers, Krull dimension and maximality probing.
//!
//! Quotient-ring arithmetic happens in the ambient ring: every ideal
//! computation appends the reduced basis of `K`.

pub(crate) mod engine;
mod maximal;
pub(crate) mod univariate;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use engine::{work_counters, Budget};
pub use maximal::{verify_maximal, MaximalityReport, MaximalityVerdict};

use crate::error::{Error, Result};
use crate::poly::{same_ring, PolyRing, Polynomial};
use engine::{Ctx, Vector};

struct RingInner {
    ambient: Arc<PolyRing>,
    relations: Vec<Polynomial>,
    budget: Budget,
    relation_basis: OnceLock<Vec<Polynomial>>,
}

/// A finitely presented commutative algebra `k[x1..xn]/K`.
#[derive(Clone)]
pub struct RingPresentation {
    inner: Arc<RingInner>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingPresentation({self})")
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field(), self.names().join(","))?;
        if !self.inner.relations.is_empty() {
            let rels: Vec<String> = self.inner.relations.iter().map(|p| p.to_string()).collect();
            write!(f, " / ({})", rels.join(", "))?;
        }
        Ok(())
    }
}

impl RingPresentation {
    /// Builds `ambient / (relations)`; fails if the relations generate the
    /// unit ideal.
    pub fn new(ambient: Arc<PolyRing>, relations: Vec<Polynomial>, budget: Budget) -> Result<Self> {
        for r in &relations {
            if !same_ring(r.ring(), &ambient) {
                return Err(Error::ring_mismatch("relation is not over the ambient ring"));
            }
        }
        let relations: Vec<Polynomial> = relations.into_iter().filter(|p| !p.is_zero()).collect();
        let ring = RingPresentation {
            inner: Arc::new(RingInner { ambient, relations, budget, relation_basis: OnceLock::new() }),
        };
        let basis = ring.try_relation_basis()?;
        if basis.iter().any(|p| p.is_unit_constant()) {
            return Err(Error::invalid("the relations generate the unit ideal"));
        }
        Ok(ring)
    }

    pub fn polynomial_ring(ambient: Arc<PolyRing>) -> Self {
        RingPresentation::new(ambient, Vec::new(), Budget::default()).expect("no relations")
    }

    pub fn ambient(&self) -> &Arc<PolyRing> {
        &self.inner.ambient
    }

    pub fn field(&self) -> crate::coeff::CoefficientField {
        self.inner.ambient.field()
    }

    pub fn names(&self) -> &[String] {
        self.inner.ambient.names()
    }

    pub fn nvars(&self) -> usize {
        self.inner.ambient.nvars()
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.inner.relations
    }

    pub fn budget(&self) -> Budget {
        self.inner.budget
    }

    /// Same presentation with a different resource budget.
    pub fn with_budget(&self, budget: Budget) -> Self {
        RingPresentation {
            inner: Arc::new(RingInner {
                ambient: self.inner.ambient.clone(),
                relations: self.inner.relations.clone(),
                budget,
                relation_basis: self
                    .inner
                    .relation_basis
                    .get()
                    .cloned()
                    .map(|b| {
                        let cell = OnceLock::new();
                        let _ = cell.set(b);
                        cell
                    })
                    .unwrap_or_default(),
            }),
        }
    }

    /// Structural identity: same ambient ring and relation list.
    pub fn same(&self, other: &RingPresentation) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (same_ring(self.ambient(), other.ambient()) && self.inner.relations == other.inner.relations)
    }

    pub(crate) fn check_same(&self, other: &RingPresentation, what: &str) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ring_mismatch(format!("{what}: {self} vs {other}")))
        }
    }

    fn try_relation_basis(&self) -> Result<&[Polynomial]> {
        if let Some(b) = self.inner.relation_basis.get() {
            return Ok(b);
        }
        let ctx = Ctx::pot(self.ambient());
        let gens = self.inner.relations.iter().map(|p| ctx.vector([(0, p.clone())])).collect();
        let basis = ctx.groebner(gens, &self.inner.budget)?;
        let polys: Vec<Polynomial> = basis.iter().map(|v| ctx.components(v, 1).remove(0)).collect();
        // First writer wins; a concurrent computation produced the same basis.
        let _ = self.inner.relation_basis.set(polys);
        Ok(self.inner.relation_basis.get().expect("just set"))
    }

    /// Reduced Gröbner basis of the defining ideal `K`.
    pub fn relation_basis(&self) -> &[Polynomial] {
        self.try_relation_basis().expect("computed at construction")
    }

    /// Normal form modulo `K`.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let ctx = Ctx::pot(self.ambient());
        let basis: Vec<Vector> = self.relation_basis().iter().map(|g| ctx.vector([(0, g.clone())])).collect();
        ctx.components(&ctx.reduce(ctx.vector([(0, p.clone())]), &basis), 1).remove(0)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(self.ambient(), text)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.ambient())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.ambient())
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.ambient(), i)
    }

    /// Relation vectors `g * e_c` for every basis element of `K` and every
    /// component in `comps`.
    pub(crate) fn relation_vectors(&self, ctx: &Ctx, comps: std::ops::Range<usize>) -> Vec<Vector> {
        let basis = self.relation_basis();
        let mut out = Vec::with_capacity(basis.len() * comps.len());
        for c in comps {
            for g in basis {
                out.push(ctx.vector([(c, g.clone())]));
            }
        }
        out
    }

    pub(crate) fn check_poly(&self, p: &Polynomial) -> Result<()> {
        if p.field() != self.field() {
            return Err(Error::IncompatibleCoefficients);
        }
        if !same_ring(p.ring(), self.ambient()) {
            return Err(Error::ring_mismatch(format!("polynomial `{p}` is not over {self}")));
        }
        Ok(())
    }
}

/// A finitely generated ideal of a presented ring, by generators.
#[derive(Clone)]
pub struct IdealSpec {
    ring: RingPresentation,
    generators: Vec<Polynomial>,
}

impl fmt::Debug for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealSpec({self})")
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl IdealSpec {
    /// Stores generators as normal forms modulo the ring's relations;
    /// zero and repeated generators are dropped.
    pub fn new(ring: &RingPresentation, generators: Vec<Polynomial>) -> Result<Self> {
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in generators {
            ring.check_poly(&g)?;
            let g = ring.reduce(&g);
            if !g.is_zero() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(IdealSpec { ring: ring.clone(), generators: gens })
    }

    pub fn parse(ring: &RingPresentation, gens: &[&str]) -> Result<Self> {
        let polys = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        IdealSpec::new(ring, polys)
    }

    pub fn zero(ring: &RingPresentation) -> Self {
        IdealSpec { ring: ring.clone(), generators: Vec::new() }
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(groebner_basis(self)?.is_unit())
    }

    pub fn is_proper(&self) -> Result<bool> {
        Ok(!self.is_unit()?)
    }

    /// Sum of two ideals of the same ring.
    pub fn sum(&self, other: &IdealSpec) -> Result<IdealSpec> {
        self.ring.check_same(&other.ring, "ideal sum")?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        IdealSpec::new(&self.ring, gens)
    }

    pub fn contains_ideal(&self, other: &IdealSpec) -> Result<bool> {
        let gb = groebner_basis(self)?;
        for g in other.generators() {
            if !normal_form(g, &gb)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Reduced Gröbner basis of `I + K` in the ambient ring.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: RingPresentation,
    elements: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|p| p.is_unit_constant())
    }

    /// Checks that all S-pairs reduce to zero.
    pub fn is_groebner(&self) -> bool {
        let ctx = Ctx::pot(self.ring.ambient());
        let vs: Vec<Vector> = self.elements.iter().map(|p| ctx.vector([(0, p.clone())])).collect();
        engine::is_groebner(&ctx, &vs)
    }

    /// Dimension of the quotient `R/I`; `None` for the unit ideal.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let leads: Vec<_> = self.elements.iter().filter_map(|p| p.leading_monomial().cloned()).collect();
        Some(max_independent_set(&leads, self.ring.nvars()).len())
    }
}

/// Reduced Gröbner basis of the ideal plus the ring's relations.
pub fn groebner_basis(ideal: &IdealSpec) -> Result<GroebnerBasis> {
    let ring = &ideal.ring;
    let ctx = Ctx::pot(ring.ambient());
    let mut gens: Vec<Vector> = ring.relation_basis().iter().map(|p| ctx.vector([(0, p.clone())])).collect();
    gens.extend(ideal.generators.iter().map(|p| ctx.vector([(0, p.clone())])));
    let basis = ctx.groebner(gens, &ring.budget())?;
    Ok(GroebnerBasis {
        ring: ring.clone(),
        elements: basis.iter().map(|v| ctx.components(v, 1).remove(0)).collect(),
        reduced: true,
    })
}

/// Remainder of `p` under division by `basis`.
pub fn normal_form(p: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    basis.ring.check_poly(p)?;
    let ctx = Ctx::pot(basis.ring.ambient());
    let vs: Vec<Vector> = basis.elements.iter().map(|g| ctx.vector([(0, g.clone())])).collect();
    Ok(ctx.components(&ctx.reduce(ctx.vector([(0, p.clone())]), &vs), 1).remove(0))
}

pub fn ideal_membership(p: &Polynomial, ideal: &IdealSpec) -> Result<bool> {
    ideal.ring.check_poly(p)?;
    Ok(normal_form(p, &groebner_basis(ideal)?)?.is_zero())
}

/// `I^t`; `unit_by_convention` is set when `t = 0`.
#[derive(Clone, Debug)]
pub struct IdealPower {
    pub ideal: IdealSpec,
    pub unit_by_convention: bool,
}

/// All `t`-fold products of the generators, de-duplicated by normal form.
pub fn ideal_power(ideal: &IdealSpec, t: usize) -> IdealPower {
    let ring = &ideal.ring;
    if t == 0 {
        return IdealPower { ideal: IdealSpec::new(ring, vec![ring.one()]).expect("unit"), unit_by_convention: true };
    }
    let gens = &ideal.generators;
    let mut out = Vec::new();
    let mut idx = vec![0usize; t];
    if !gens.is_empty() {
        loop {
            let mut prod = ring.one();
            for &i in &idx {
                prod = &prod * &gens[i];
            }
            out.push(prod);
            // next non-decreasing index tuple
            let mut k = t;
            while k > 0 && idx[k - 1] == gens.len() - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            let v = idx[k - 1];
            for slot in idx.iter_mut().skip(k) {
                *slot = v;
            }
        }
    }
    IdealPower { ideal: IdealSpec::new(ring, out).expect("same ring"), unit_by_convention: false }
}

/// Krull dimension via a maximal independent set of the initial ideal of `K`.
pub fn krull_dimension(ring: &RingPresentation) -> usize {
    let leads: Vec<_> = ring.relation_basis().iter().filter_map(|p| p.leading_monomial().cloned()).collect();
    max_independent_set(&leads, ring.nvars()).len()
}

/// Krull dimension of `R/I`; `None` for the unit ideal.
pub fn quotient_dimension(ideal: &IdealSpec) -> Result<Option<usize>> {
    Ok(groebner_basis(ideal)?.dimension())
}

/// Largest variable subset `S` such that no leading monomial is supported
/// inside `S`; ties broken by the first subset in lexicographic order.
pub(crate) fn max_independent_set(leads: &[crate::monomial::Monomial], nvars: usize) -> Vec<usize> {
    let masks: Vec<Vec<usize>> = leads.iter().map(|m| m.support().collect()).collect();
    let independent = |set: &[bool]| masks.iter().all(|s| s.iter().any(|&v| !set[v]));
    for size in (0..=nvars).rev() {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            let mut set = vec![false; nvars];
            for &c in &comb {
                set[c] = true;
            }
            if independent(&set) {
                return comb;
            }
            // next combination
            let mut i = size;
            while i > 0 && comb[i - 1] == nvars - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            comb[i - 1] += 1;
            for j in i..size {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    Vec::new()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::coeff::CoefficientField;

    pub(crate) fn ring(vars: &[&str], rels: &[&str]) -> RingPresentation {
        let amb = PolyRing::grevlex(CoefficientField::Rationals, vars).unwrap();
        let rels = rels.iter().map(|s| Polynomial::parse(&amb, s).unwrap()).collect();
        RingPresentation::new(amb, rels, Budget::default()).unwrap()
    }

    fn strs(gb: &GroebnerBasis) -> Vec<String> {
        gb.elements().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn basis_examples() {
        let r = ring(&["x", "y"], &[]);
        let i = IdealSpec::parse(&r, &["x^2", "x*y"]).unwrap();
        assert_eq!(strs(&groebner_basis(&i).unwrap()), ["x^2", "x*y"]);
        let unit = IdealSpec::parse(&r, &["1"]).unwrap();
        assert_eq!(strs(&groebner_basis(&unit).unwrap()), ["1"]);
        let lin = IdealSpec::parse(&r, &["x+y", "x-y"]).unwrap();
        assert_eq!(strs(&groebner_basis(&lin).unwrap()), ["x", "y"]);
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x", "y"], &[]);
        let gb = groebner_basis(&IdealSpec::parse(&r, &["x^2", "x*y"]).unwrap()).unwrap();
        assert_eq!(normal_form(&r.parse("x^2*y + y").unwrap(), &gb).unwrap().to_string(), "y");
        for g in gb.elements() {
            assert!(normal_form(g, &gb).unwrap().is_zero());
        }
        let gb2 = groebner_basis(&IdealSpec::parse(&r, &["x", "y"]).unwrap()).unwrap();
        assert_eq!(normal_form(&r.one(), &gb2).unwrap(), r.one());
    }

    #[test]
    fn membership_examples() {
        let r = ring(&["x", "y"], &[]);
        let i = IdealSpec::parse(&r, &["x^2", "x*y"]).unwrap();
        assert!(ideal_membership(&r.parse("x^2+x*y").unwrap(), &i).unwrap());
        assert!(!ideal_membership(&r.parse("y").unwrap(), &i).unwrap());
        assert!(ideal_membership(&r.zero(), &IdealSpec::zero(&r)).unwrap());
    }

    #[test]
    fn membership_rejects_foreign_polynomials() {
        let r = ring(&["x", "y"], &[]);
        let s = ring(&["x", "z"], &[]);
        let i = IdealSpec::parse(&r, &["x"]).unwrap();
        assert!(matches!(ideal_membership(&s.parse("x").unwrap(), &i), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn power_examples() {
        let r = ring(&["x", "y"], &[]);
        let i = IdealSpec::parse(&r, &["x", "y"]).unwrap();
        let sq: Vec<String> = ideal_power(&i, 2).ideal.generators().iter().map(|p| p.to_string()).collect();
        assert_eq!(sq, ["x^2", "x*y", "y^2"]);
        let px = IdealSpec::parse(&r, &["x"]).unwrap();
        assert_eq!(ideal_power(&px, 3).ideal.generators()[0].to_string(), "x^3");
        assert_eq!(ideal_power(&i, 1).ideal.generators(), i.generators());
        let p0 = ideal_power(&i, 0);
        assert!(p0.unit_by_convention && p0.ideal.is_unit().unwrap());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(krull_dimension(&ring(&["x", "y", "z"], &[])), 3);
        assert_eq!(krull_dimension(&ring(&["x", "y"], &["x*y"])), 1);
        assert_eq!(krull_dimension(&ring(&["x", "y"], &["x^2", "x*y"])), 1);
    }

    #[test]
    fn linear_quotient_dimension_sweep() {
        let names = ["a", "b", "c", "d", "e"];
        for n in 1..=5 {
            for d in 1..=n {
                let rels: Vec<&str> = names[..d].to_vec();
                assert_eq!(krull_dimension(&ring(&names[..n], &rels)), n - d);
            }
        }
    }

    #[test]
    fn improper_presentation_is_rejected() {
        let amb = PolyRing::grevlex(CoefficientField::Rationals, &["x"]).unwrap();
        let rels = vec![Polynomial::parse(&amb, "x").unwrap(), Polynomial::parse(&amb, "x-1").unwrap()];
        assert!(RingPresentation::new(amb, rels, Budget::default()).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let amb = PolyRing::grevlex(CoefficientField::Rationals, &["x", "y", "z"]).unwrap();
        let r = RingPresentation::new(amb, vec![], Budget { max_basis: 2, max_pairs: 100 }).unwrap();
        let i = IdealSpec::parse(&r, &["x^2-y", "y^2-z", "z^2-x", "x*y*z-1"]).unwrap();
        assert!(matches!(groebner_basis(&i), Err(Error::BudgetExceeded { .. })));
    }
}
