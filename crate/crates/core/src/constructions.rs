//! Presentations of polynomial extensions, trivial extensions `R(+)M` and
//! amalgamations `A ⋈^f J`, with the rules carrying maximal ideals of the
//! base to maximal ideals of the new ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::fpmodules::{Matrix, ModulePresentation};
use crate::groebner::engine::{Ctx, ModuleOrder, Vector};
use crate::groebner::{ideal_power, IdealSpec, RingPresentation};
use crate::poly::{PolyRing, Polynomial};

/// Generator nilpotency is searched up to this exponent.
const NILPOTENCY_CAP: usize = 32;

/// A k-algebra map between presented rings, given by variable images.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: RingPresentation,
    target: RingPresentation,
    images: Vec<Polynomial>,
}

impl RingHom {
    /// Checks that every source relation maps to zero in the target.
    pub fn new(source: &RingPresentation, target: &RingPresentation, images: Vec<Polynomial>) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::IncompatibleCoefficients);
        }
        if images.len() != source.nvars() {
            return Err(Error::DimensionMismatch { expected: source.nvars(), found: images.len() });
        }
        for p in &images {
            target.check_poly(p)?;
        }
        let images: Vec<Polynomial> = images.iter().map(|p| target.reduce(p)).collect();
        for rel in source.relations() {
            let image = rel.substitute(target.ambient(), &images)?;
            if !target.reduce(&image).is_zero() {
                return Err(Error::PreconditionViolation(format!(
                    "relation {rel} does not map to zero under the homomorphism"
                )));
            }
        }
        Ok(RingHom { source: source.clone(), target: target.clone(), images })
    }

    /// Variable `i` of the source goes to variable `i` of the target.
    fn prefix_inclusion(source: &RingPresentation, target: &RingPresentation) -> Result<Self> {
        let images = (0..source.nvars()).map(|i| target.var(i)).collect();
        RingHom::new(source, target, images)
    }

    pub fn source(&self) -> &RingPresentation {
        &self.source
    }

    pub fn target(&self) -> &RingPresentation {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        self.source.check_poly(p)?;
        Ok(self.target.reduce(&p.substitute(self.target.ambient(), &self.images)?))
    }

    pub fn apply_ideal(&self, ideal: &IdealSpec) -> Result<IdealSpec> {
        self.source.check_same(ideal.ring(), "ideal image")?;
        let gens = ideal.generators().iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        IdealSpec::new(&self.target, gens)
    }
}

impl fmt::Display for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let maps: Vec<String> =
            self.source.names().iter().zip(&self.images).map(|(v, p)| format!("{v} -> {p}")).collect();
        write!(f, "({})", maps.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    PolynomialExtension,
    TrivialExtension,
    Amalgamation,
}

impl ConstructionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstructionKind::PolynomialExtension => "polyext",
            ConstructionKind::TrivialExtension => "trivext",
            ConstructionKind::Amalgamation => "amalg",
        }
    }
}

/// A constructed ring with its embedding of the base. A base ideal `m` is
/// transported to `embedding(m) + (extra generators)`.
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    kind: ConstructionKind,
    ring: RingPresentation,
    embedding: RingHom,
    transport: Vec<Polynomial>,
    fiber: Option<ModulePresentation>,
}

impl ConstructionResult {
    pub fn kind(&self) -> ConstructionKind {
        self.kind
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn base(&self) -> &RingPresentation {
        self.embedding.source()
    }

    pub fn embedding(&self) -> &RingHom {
        &self.embedding
    }

    /// Generators appended to every transported ideal.
    pub fn transport_generators(&self) -> &[Polynomial] {
        &self.transport
    }

    /// The module glued onto the base: `M` for `R(+)M`, `J` as an
    /// `A`-module for an amalgamation.
    pub fn fiber(&self) -> Option<&ModulePresentation> {
        self.fiber.as_ref()
    }
}

fn fresh_names(taken: &[String], count: usize, stem: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(count);
    for i in 1..=count {
        let base = if count == 1 { stem.to_string() } else { format!("{stem}{i}") };
        let mut name = base.clone();
        let mut k = 1;
        while taken.contains(&name) || out.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        out.push(name);
    }
    out
}

fn lift(p: &Polynomial, target: &std::sync::Arc<PolyRing>, offset: usize) -> Polynomial {
    let map: Vec<usize> = (offset..offset + p.ring().nvars()).collect();
    p.rename_into(target, &map)
}

/// `R[x]`, transporting `m` to `m + (x)`.
pub fn polynomial_extension(base: &RingPresentation, var: &str) -> Result<ConstructionResult> {
    if base.names().iter().any(|n| n == var) {
        return Err(Error::invalid(format!("variable `{var}` already exists in {base}")));
    }
    let ambient = base.ambient().with_extra_vars(&[var.to_string()])?;
    let relations = base.relations().iter().map(|p| lift(p, &ambient, 0)).collect();
    let ring = RingPresentation::new(ambient, relations, base.budget())?;
    let x = ring.var(base.nvars());
    Ok(ConstructionResult {
        kind: ConstructionKind::PolynomialExtension,
        embedding: RingHom::prefix_inclusion(base, &ring)?,
        ring,
        transport: vec![x],
        fiber: None,
    })
}

/// `R(+)M` presented as `R[z1..zs] / (zi*zj, sum_i a_ik zi)` for the
/// presentation matrix `(a_ik)` of `M`; transports `m` to `m + (z)`.
pub fn trivial_extension(base: &RingPresentation, module: &ModulePresentation) -> Result<ConstructionResult> {
    base.check_same(module.ring(), "trivial extension")?;
    let s = module.rank();
    let names = fresh_names(base.names(), s, "z");
    let ambient = base.ambient().with_extra_vars(&names)?;
    let n = base.nvars();
    let z = |i: usize| Polynomial::var(&ambient, n + i);
    let mut relations: Vec<Polynomial> = base.relations().iter().map(|p| lift(p, &ambient, 0)).collect();
    for i in 0..s {
        for j in i..s {
            relations.push(&z(i) * &z(j));
        }
    }
    for col in module.relation_columns() {
        let mut acc = Polynomial::zero(&ambient);
        for (i, a) in col.iter().enumerate() {
            acc = &acc + &(&lift(a, &ambient, 0) * &z(i));
        }
        if !acc.is_zero() {
            relations.push(acc);
        }
    }
    let ring = RingPresentation::new(ambient.clone(), relations, base.budget())?;
    Ok(ConstructionResult {
        kind: ConstructionKind::TrivialExtension,
        embedding: RingHom::prefix_inclusion(base, &ring)?,
        transport: (0..s).map(|i| ring.var(n + i)).collect(),
        ring,
        fiber: Some(module.clone()),
    })
}

/// Least `t <= cap` with `J^t = 0`, or `None`.
pub fn nilpotency_check(ideal: &IdealSpec, cap: usize) -> Result<Option<usize>> {
    if cap == 0 {
        return Err(Error::invalid("nilpotency cap must be at least 1"));
    }
    if ideal.generators().is_empty() {
        return Ok(Some(1));
    }
    for t in 1..=cap {
        if ideal_power(ideal, t).ideal.generators().is_empty() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Applies the construction's rule to an ideal of the base.
pub fn transport_ideal(c: &ConstructionResult, m: &IdealSpec) -> Result<IdealSpec> {
    c.base().check_same(m.ring(), "transport")?;
    let mut gens = c.embedding.apply_ideal(m)?.generators().to_vec();
    gens.extend(c.transport.iter().cloned());
    IdealSpec::new(&c.ring, gens)
}

/// `B` as an `A`-algebra inside `k[b, a] / (K_B, a_i - f(a_i))`, with the
/// `b` variables first so they can be eliminated.
struct Joint {
    ambient: std::sync::Arc<PolyRing>,
    nb: usize,
    na: usize,
    ideal: Vec<Polynomial>,
    budget: crate::groebner::Budget,
}

/// Reduced basis of `{(w, c) : w + sum c_l w_l ∈ I}` in `P^(1+s)`.
struct LinearSpan<'a> {
    joint: &'a Joint,
    basis: Vec<Vector>,
    s: usize,
}

impl Joint {
    fn new(f: &RingHom) -> Result<Joint> {
        let (a, b) = (f.source(), f.target());
        let (na, nb) = (a.nvars(), b.nvars());
        let names: Vec<String> = (0..nb).map(|i| format!("b{i}")).chain((0..na).map(|i| format!("a{i}"))).collect();
        let ambient = PolyRing::new(b.field(), names, crate::monomial::MonomialOrder::grevlex(na + nb))?;
        let mut ideal: Vec<Polynomial> = b.relation_basis().iter().map(|p| lift(p, &ambient, 0)).collect();
        for (i, img) in f.images().iter().enumerate() {
            ideal.push(&Polynomial::var(&ambient, nb + i) - &lift(img, &ambient, 0));
        }
        Ok(Joint { ambient, nb, na, ideal, budget: b.budget() })
    }

    fn ctx(&self) -> Ctx<'_> {
        Ctx::new(&self.ambient, ModuleOrder { target: 1, elim: self.nb })
    }

    fn pull_back(&self, p: &Polynomial) -> Polynomial {
        lift(p, &self.ambient, 0)
    }

    /// A `b`-free polynomial as an element of `A`'s ambient ring.
    fn to_a(&self, p: &Polynomial, a: &RingPresentation) -> Result<Polynomial> {
        let mut images = vec![Polynomial::zero(a.ambient()); self.nb];
        images.extend((0..self.na).map(|i| a.var(i)));
        Ok(a.reduce(&p.substitute(a.ambient(), &images)?))
    }

    fn span(&self, elements: &[Polynomial]) -> Result<LinearSpan<'_>> {
        let ctx = self.ctx();
        let mut gens: Vec<Vector> = self.ideal.iter().map(|g| ctx.vector([(0, g.clone())])).collect();
        for (l, w) in elements.iter().enumerate() {
            gens.push(ctx.vector([(0, w.neg()), (1 + l, Polynomial::one(&self.ambient))]));
        }
        let basis = ctx.groebner(gens, &self.budget)?;
        Ok(LinearSpan { joint: self, basis, s: elements.len() })
    }
}

impl LinearSpan<'_> {
    /// Coefficients `c` (over `k[a]`) with `w = sum c_l w_l` in `B`, if any.
    /// The normal form of `w*e_0` is free of `b` exactly in that case.
    fn express(&self, w: &Polynomial) -> Option<Vec<Polynomial>> {
        let ctx = self.joint.ctx();
        let r = ctx.reduce(ctx.vector([(0, w.clone())]), &self.basis);
        let nb = self.joint.nb;
        if r.terms.iter().any(|t| t.comp == 0 || t.mono.exponents()[..nb].iter().any(|&e| e > 0)) {
            return None;
        }
        Some(ctx.components(&r, 1 + self.s).split_off(1))
    }

    /// Generators of the `k[a]`-linear relations among the elements.
    fn relations(&self) -> Vec<Vec<Polynomial>> {
        let ctx = self.joint.ctx();
        let nb = self.joint.nb;
        self.basis
            .iter()
            .filter(|v| v.lead().is_some_and(|t| t.comp >= 1 && t.mono.exponents()[..nb].iter().all(|&e| e == 0)))
            .map(|v| ctx.components(v, 1 + self.s).split_off(1))
            .collect()
    }
}

/// `A ⋈^f J` for `J ⊆ Nil(B)`, with `B` generated as an `A`-module by
/// `module_gens`. The new variables `z` stand for an `A`-module generating
/// set of `J`; transports `m` to `m + (z)`.
pub fn amalgamation(
    a: &RingPresentation,
    b: &RingPresentation,
    f: &RingHom,
    j: &IdealSpec,
    module_gens: &[Polynomial],
) -> Result<ConstructionResult> {
    a.check_same(f.source(), "amalgamation source")?;
    b.check_same(f.target(), "amalgamation target")?;
    b.check_same(j.ring(), "amalgamation ideal")?;
    for g in j.generators() {
        let principal = IdealSpec::new(b, vec![g.clone()])?;
        if nilpotency_check(&principal, NILPOTENCY_CAP)?.is_none() {
            return Err(Error::PreconditionViolation(format!("generator {g} of J is not nilpotent")));
        }
    }
    for g in module_gens {
        b.check_poly(g)?;
    }
    let joint = Joint::new(f)?;

    let gens: Vec<Polynomial> = module_gens.iter().map(|g| joint.pull_back(&b.reduce(g))).collect();
    let span = joint.span(&gens)?;
    let mut needed = vec![Polynomial::one(&joint.ambient)];
    for v in 0..b.nvars() {
        needed.extend(gens.iter().map(|g| &Polynomial::var(&joint.ambient, v) * g));
    }
    if needed.iter().any(|p| span.express(p).is_none()) {
        return Err(Error::PreconditionViolation("B is not generated over A by the supplied module generators".into()));
    }

    let mut zs: Vec<Polynomial> = Vec::new();
    for jg in j.generators() {
        for g in module_gens {
            let c = b.reduce(&(g * jg));
            if c.is_zero() || zs.contains(&c) {
                continue;
            }
            let lifted: Vec<Polynomial> = zs.iter().map(|z| joint.pull_back(z)).collect();
            if zs.is_empty() || joint.span(&lifted)?.express(&joint.pull_back(&c)).is_none() {
                zs.push(c);
            }
        }
    }
    let s = zs.len();
    let lifted: Vec<Polynomial> = zs.iter().map(|z| joint.pull_back(z)).collect();
    let zspan = joint.span(&lifted)?;

    let names = fresh_names(a.names(), s, "z");
    let ambient = a.ambient().with_extra_vars(&names)?;
    let n = a.nvars();
    let zvar = |i: usize| Polynomial::var(&ambient, n + i);
    let combo = |coeffs: &[Polynomial]| -> Result<Polynomial> {
        let mut acc = Polynomial::zero(&ambient);
        for (l, c) in coeffs.iter().enumerate() {
            acc = &acc + &(&lift(&joint.to_a(c, a)?, &ambient, 0) * &zvar(l));
        }
        Ok(acc)
    };

    let mut relations: Vec<Polynomial> = a.relations().iter().map(|p| lift(p, &ambient, 0)).collect();
    for i in 0..s {
        for k in i..s {
            let coeffs = zspan
                .express(&(&lifted[i] * &lifted[k]))
                .ok_or_else(|| Error::PreconditionViolation("J is not closed under products".into()))?;
            let rel = &(&zvar(i) * &zvar(k)) - &combo(&coeffs)?;
            if !rel.is_zero() {
                relations.push(rel);
            }
        }
    }
    let mut syz_columns: Vec<Vec<Polynomial>> = Vec::new();
    for syz in zspan.relations() {
        let col = syz.iter().map(|c| joint.to_a(c, a)).collect::<Result<Vec<_>>>()?;
        if col.iter().all(Polynomial::is_zero) {
            continue;
        }
        let rel = combo(&syz)?;
        if !rel.is_zero() {
            relations.push(rel);
        }
        syz_columns.push(col);
    }
    let ring = RingPresentation::new(ambient, relations, a.budget())?;
    let fiber = ModulePresentation::new(a, Matrix::from_columns(a, s, &syz_columns))?;
    Ok(ConstructionResult {
        kind: ConstructionKind::Amalgamation,
        embedding: RingHom::prefix_inclusion(a, &ring)?,
        transport: (0..s).map(|i| ring.var(n + i)).collect(),
        ring,
        fiber: Some(fiber),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::tests::ring;
    use crate::groebner::{groebner_basis, krull_dimension};

    fn rels(r: &RingPresentation) -> Vec<String> {
        groebner_basis(&IdealSpec::zero(r)).unwrap().elements().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn polyext_examples() {
        let r = ring(&["y"], &["y^2"]);
        let c = polynomial_extension(&r, "x").unwrap();
        assert_eq!(c.ring().to_string(), "QQ[y,x] / (y^2)");
        let m = IdealSpec::parse(&r, &["y"]).unwrap();
        assert_eq!(transport_ideal(&c, &m).unwrap().to_string(), "(y, x)");
        assert!(polynomial_extension(&r, "y").is_err());
        let q = ring(&[], &[]);
        let c = polynomial_extension(&q, "x").unwrap();
        assert_eq!(transport_ideal(&c, &IdealSpec::zero(&q)).unwrap().to_string(), "(x)");
    }

    #[test]
    fn trivext_examples() {
        let r = ring(&["x"], &[]);
        let m = ModulePresentation::cyclic(&IdealSpec::parse(&r, &["x"]).unwrap());
        let c = trivial_extension(&r, &m).unwrap();
        assert_eq!(c.ring().to_string(), "QQ[x,z] / (z^2, x*z)");
        let mx = IdealSpec::parse(&r, &["x"]).unwrap();
        assert_eq!(transport_ideal(&c, &mx).unwrap().to_string(), "(x, z)");

        let c = trivial_extension(&r, &ModulePresentation::free(&r, 1)).unwrap();
        assert_eq!(c.ring().to_string(), "QQ[x,z] / (z^2)");

        let q = ring(&[], &[]);
        let c = trivial_extension(&q, &ModulePresentation::free(&q, 2)).unwrap();
        assert_eq!(c.ring().to_string(), "QQ[z1,z2] / (z1^2, z1*z2, z2^2)");

        let rz = ring(&["z"], &[]);
        let c = trivial_extension(&rz, &ModulePresentation::free(&rz, 1)).unwrap();
        assert_eq!(c.ring().names(), &["z".to_string(), "z_1".to_string()]);
    }

    #[test]
    fn nilpotency_examples() {
        let r2 = ring(&["e"], &["e^2"]);
        assert_eq!(nilpotency_check(&IdealSpec::parse(&r2, &["e"]).unwrap(), 8).unwrap(), Some(2));
        let r3 = ring(&["e"], &["e^3"]);
        assert_eq!(nilpotency_check(&IdealSpec::parse(&r3, &["e"]).unwrap(), 8).unwrap(), Some(3));
        let p = ring(&["x"], &[]);
        assert_eq!(nilpotency_check(&IdealSpec::parse(&p, &["x"]).unwrap(), 8).unwrap(), None);
    }

    #[test]
    fn amalgamation_square_zero() {
        let a = ring(&["x"], &[]);
        let b = ring(&["x", "e"], &["e^2"]);
        let f = RingHom::new(&a, &b, vec![b.var(0)]).unwrap();
        let j = IdealSpec::parse(&b, &["e"]).unwrap();
        let c = amalgamation(&a, &b, &f, &j, &[b.one(), b.var(1)]).unwrap();
        assert_eq!(c.ring().to_string(), "QQ[x,z] / (z^2)");
        let m = IdealSpec::parse(&a, &["x"]).unwrap();
        assert_eq!(transport_ideal(&c, &m).unwrap().to_string(), "(x, z)");
        assert!(c.fiber().unwrap().is_free());
        assert_eq!(krull_dimension(c.ring()), 1);
    }

    #[test]
    fn amalgamation_index_three() {
        let a = ring(&[], &[]);
        let b = ring(&["e"], &["e^3"]);
        let f = RingHom::new(&a, &b, vec![]).unwrap();
        let j = IdealSpec::parse(&b, &["e"]).unwrap();
        let gens = [b.one(), b.var(0), b.parse("e^2").unwrap()];
        let c = amalgamation(&a, &b, &f, &j, &gens).unwrap();
        assert_eq!(c.ring().names(), &["z1".to_string(), "z2".to_string()]);
        assert_eq!(rels(c.ring()), vec!["z1^2 - z2", "z1*z2", "z2^2"]);
        let z = IdealSpec::new(c.ring(), c.transport_generators().to_vec()).unwrap();
        assert_eq!(nilpotency_check(&z, 8).unwrap(), Some(3));
    }

    #[test]
    fn amalgamation_with_torsion_fiber() {
        // J = (e) with x^2*e = 0 is A/(x^2) as an A-module
        let a = ring(&["x"], &[]);
        let b = ring(&["x", "e"], &["e^2", "x^2*e"]);
        let f = RingHom::new(&a, &b, vec![b.var(0)]).unwrap();
        let j = IdealSpec::parse(&b, &["e"]).unwrap();
        let c = amalgamation(&a, &b, &f, &j, &[b.one(), b.var(1)]).unwrap();
        let fiber = c.fiber().unwrap();
        assert_eq!(fiber.rank(), 1);
        assert_eq!(fiber.relations().to_string(), "matrix 1 1 [x^2]");
        assert_eq!(c.ring().to_string(), "QQ[x,z] / (z^2, x^2*z)");
    }

    #[test]
    fn amalgamation_rejects_bad_input() {
        let a = ring(&["x"], &[]);
        let b = ring(&["x", "e"], &["e^2"]);
        let f = RingHom::new(&a, &b, vec![b.var(0)]).unwrap();
        let j = IdealSpec::parse(&b, &["x"]).unwrap();
        assert!(matches!(
            amalgamation(&a, &b, &f, &j, &[b.one(), b.var(1)]),
            Err(Error::PreconditionViolation(_))
        ));
        let j = IdealSpec::parse(&b, &["e"]).unwrap();
        assert!(matches!(amalgamation(&a, &b, &f, &j, &[b.one()]), Err(Error::PreconditionViolation(_))));
        let zero = IdealSpec::zero(&b);
        let c = amalgamation(&a, &b, &f, &zero, &[b.one(), b.var(1)]).unwrap();
        assert_eq!(c.ring().to_string(), "QQ[x]");
    }

    #[test]
    fn hom_must_respect_relations() {
        let a = ring(&["x"], &["x^2"]);
        let b = ring(&["y"], &[]);
        assert!(RingHom::new(&a, &b, vec![b.var(0)]).is_err());
        let b2 = ring(&["y"], &["y^2"]);
        assert!(RingHom::new(&a, &b2, vec![b2.var(0)]).is_ok());
    }
}
