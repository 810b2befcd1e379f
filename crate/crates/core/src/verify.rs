//! Per-maximal-ideal fPD estimates and value-level checks of the grade
//! formulas for polynomial extensions, trivial extensions and
//! amalgamations.

use serde_json::{json, Value};

use crate::constructions::{transport_ideal, ConstructionKind, ConstructionResult};
use crate::error::{Error, Result};
use crate::fpmodules::{quotient_by_sequence, ModulePresentation};
use crate::grades::{
    cech_grade, ext_grade, koszul_grade, local_grade, regular_sequence_grade, GradeReport, GradeValue, Witness,
};
use crate::groebner::{
    krull_dimension, quotient_dimension, verify_maximal, work_counters, IdealSpec, MaximalityVerdict,
    RingPresentation,
};
use crate::poly::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    ThmDim,
    PropGeq,
    ThmPoly,
    ThmScr,
    LemmaDepthHt,
    ThmTrivext,
    ThmAmg,
    PropItems,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::ThmDim,
        TheoremId::PropGeq,
        TheoremId::ThmPoly,
        TheoremId::ThmScr,
        TheoremId::LemmaDepthHt,
        TheoremId::ThmTrivext,
        TheoremId::ThmAmg,
        TheoremId::PropItems,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::ThmDim => "thm-dim",
            TheoremId::PropGeq => "prop-geq",
            TheoremId::ThmPoly => "thm-poly",
            TheoremId::ThmScr => "thm-scr",
            TheoremId::LemmaDepthHt => "lemma-depthht",
            TheoremId::ThmTrivext => "thm-trivext",
            TheoremId::ThmAmg => "thm-amg",
            TheoremId::PropItems => "prop-items",
        }
    }

    pub fn parse(s: &str) -> Option<TheoremId> {
        TheoremId::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Verified,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Shared knobs for every verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub bound: usize,
    pub power_cap: usize,
    pub trials: usize,
    pub seed: u64,
    pub assume_maximal: bool,
    pub equidimensional: bool,
    pub exhaustive: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            bound: 12,
            power_cap: 8,
            trials: 200,
            seed: 0,
            assume_maximal: false,
            equidimensional: false,
            exhaustive: false,
        }
    }
}

/// One side of a checked relation: a grade report or a plain number.
#[derive(Debug, Clone)]
pub enum Term {
    Grade { label: String, report: GradeReport },
    Number { label: String, value: usize },
}

impl Term {
    fn grade(label: impl Into<String>, report: GradeReport) -> Term {
        Term::Grade { label: label.into(), report }
    }

    pub fn value(&self) -> GradeValue {
        match self {
            Term::Grade { report, .. } => report.value,
            Term::Number { value, .. } => GradeValue::Finite(*value),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Term::Grade { label, report } => json!({ "label": label, "report": report.to_json() }),
            Term::Number { label, value } => json!({ "label": label, "value": value }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub instance: Value,
    pub relation: String,
    pub lhs: Vec<Term>,
    pub rhs: Vec<Term>,
    pub verdict: Verdict,
    pub reason: String,
    /// Gröbner runs and S-pair reductions spent, a deterministic cost.
    pub work: (u64, u64),
    pub seed: u64,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "theorem-id": self.theorem.as_str(),
            "instance": self.instance,
            "relation": self.relation,
            "lhs": self.lhs.iter().map(Term::to_json).collect::<Vec<_>>(),
            "rhs": self.rhs.iter().map(Term::to_json).collect::<Vec<_>>(),
            "verdict": self.verdict.as_str(),
            "reason": self.reason,
            "timings": { "groebner_runs": self.work.0, "reductions": self.work.1 },
            "seed": self.seed,
        })
    }
}

/// Maximal ideals of one ring, each certified or explicitly assumed.
#[derive(Debug, Clone)]
pub struct MaximalIdealList {
    ring: RingPresentation,
    ideals: Vec<IdealSpec>,
    certification: Vec<&'static str>,
}

impl MaximalIdealList {
    /// Rejects non-maximal ideals; unconfirmed ones pass only with
    /// `assume_maximal`.
    pub fn new(ring: &RingPresentation, ideals: Vec<IdealSpec>, cfg: &VerifyConfig) -> Result<Self> {
        let mut certification = Vec::with_capacity(ideals.len());
        for m in &ideals {
            ring.check_same(m.ring(), "maximal ideal list")?;
            certification.push(certify(m, cfg)?);
        }
        Ok(MaximalIdealList { ring: ring.clone(), ideals, certification })
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn ideals(&self) -> &[IdealSpec] {
        &self.ideals
    }

    pub fn certification(&self) -> &[&'static str] {
        &self.certification
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }
}

fn certify(m: &IdealSpec, cfg: &VerifyConfig) -> Result<&'static str> {
    let report = verify_maximal(m, cfg.trials, cfg.seed)?;
    match report.verdict {
        MaximalityVerdict::VerifiedMaximal => Ok("verified-maximal"),
        MaximalityVerdict::ProperZeroDimensionalUnconfirmed if cfg.assume_maximal => Ok("assumed-maximal"),
        MaximalityVerdict::ProperZeroDimensionalUnconfirmed => Err(Error::PreconditionViolation(format!(
            "maximality of {m} is unconfirmed ({}); pass --assume-maximal to accept it",
            report.reason
        ))),
        MaximalityVerdict::NotMaximal => {
            Err(Error::PreconditionViolation(format!("{m} is not maximal: {}", report.reason)))
        }
    }
}

#[derive(Debug, Clone)]
pub struct FpdEstimate {
    pub value: GradeValue,
    /// True unless the ideal list was asserted to attain the supremum.
    pub lower_bound: bool,
    pub per_ideal: Vec<(IdealSpec, &'static str, GradeReport)>,
}

impl FpdEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value.to_json(),
            "bound_kind": if self.lower_bound { "lower-bound" } else { "exact" },
            "per_ideal": self.per_ideal.iter().map(|(m, c, r)| json!({
                "ideal": m.to_string(),
                "certification": c,
                "report": r.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Maximum of `K.grade(m, R)` over the list.
pub fn fpd_estimate(mx: &MaximalIdealList, cfg: &VerifyConfig) -> Result<FpdEstimate> {
    if mx.is_empty() {
        return Err(Error::invalid("fpd estimate needs at least one maximal ideal"));
    }
    let r = ModulePresentation::free(mx.ring(), 1);
    let mut per_ideal = Vec::with_capacity(mx.ideals.len());
    let mut value: Option<GradeValue> = None;
    for (m, c) in mx.ideals.iter().zip(&mx.certification) {
        let report = koszul_grade(m, &r, cfg.bound)?;
        value = Some(match value {
            None => report.value,
            Some(v) if v.le(&report.value) => report.value,
            Some(v) => v,
        });
        per_ideal.push((m.clone(), *c, report));
    }
    Ok(FpdEstimate { value: value.expect("nonempty"), lower_bound: !cfg.exhaustive, per_ideal })
}

struct Outcome {
    relation: String,
    lhs: Vec<Term>,
    rhs: Vec<Term>,
    verdict: Verdict,
    reason: String,
}

fn compare(relation: &str, lhs: Vec<Term>, rhs: Vec<Term>, holds: bool) -> Outcome {
    let show = |ts: &[Term]| ts.iter().map(|t| t.value().to_string()).collect::<Vec<_>>().join(", ");
    let (verdict, word) = if holds { (Verdict::Verified, "holds") } else { (Verdict::Violated, "fails") };
    let reason = format!("{relation} {word} with lhs [{}] and rhs [{}]", show(&lhs), show(&rhs));
    Outcome { relation: relation.into(), lhs, rhs, verdict, reason }
}

/// Runs a check, turning failed hypotheses and exhausted budgets into
/// inconclusive reports.
fn run(theorem: TheoremId, instance: Value, cfg: &VerifyConfig, f: impl FnOnce() -> Result<Outcome>) -> Result<VerificationReport> {
    let before = work_counters();
    let outcome = match f() {
        Ok(o) => o,
        Err(e @ (Error::PreconditionViolation(_) | Error::BudgetExceeded { .. })) => Outcome {
            relation: String::new(),
            lhs: Vec::new(),
            rhs: Vec::new(),
            verdict: Verdict::Inconclusive,
            reason: e.to_string(),
        },
        Err(e) => return Err(e),
    };
    let after = work_counters();
    Ok(VerificationReport {
        theorem,
        instance,
        relation: outcome.relation,
        lhs: outcome.lhs,
        rhs: outcome.rhs,
        verdict: outcome.verdict,
        reason: outcome.reason,
        work: (after.0 - before.0, after.1 - before.1),
        seed: cfg.seed,
    })
}

fn ring_module(ring: &RingPresentation) -> ModulePresentation {
    ModulePresentation::free(ring, 1)
}

/// `K.grade(m, R) <= dim R` for every ideal of the list.
pub fn check_dim_bound(mx: &MaximalIdealList, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let ring = mx.ring();
    let instance = json!({
        "ring": ring.to_string(),
        "ideals": mx.ideals.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    });
    run(TheoremId::ThmDim, instance, cfg, || {
        if mx.is_empty() {
            return Err(Error::invalid("dimension bound needs at least one maximal ideal"));
        }
        let dim = krull_dimension(ring);
        let r = ring_module(ring);
        let mut lhs = Vec::new();
        for m in &mx.ideals {
            lhs.push(Term::grade(format!("K.grade({m}, R)"), koszul_grade(m, &r, cfg.bound)?));
        }
        let holds = lhs.iter().all(|t| t.value().le(&GradeValue::Finite(dim)));
        Ok(compare("max lhs <= rhs", lhs, vec![Term::Number { label: "dim R".into(), value: dim }], holds))
    })
}

/// Instances accepted by [`verify_theorem`].
#[derive(Debug, Clone)]
pub enum Instance {
    /// The base ring, a maximal ideal and the name of the new variable.
    PolyExt { base: RingPresentation, m: IdealSpec, var: String },
    /// A maximal ideal `big` of `R[x]` lying over `m`, with the monic
    /// polynomial `f` such that `big = mR[x] + (f)`.
    PolyMaximal { ext: ConstructionResult, big: IdealSpec, m: IdealSpec, f: Option<Polynomial> },
    /// Primes `p ⊆ q` of one ring.
    PrimePair { p: IdealSpec, q: IdealSpec },
    /// A trivial extension or amalgamation and a maximal ideal of its base.
    Construction { construction: ConstructionResult, m: IdealSpec },
    /// An ideal, a module and optionally a larger ideal.
    Items { ideal: IdealSpec, module: ModulePresentation, larger: Option<IdealSpec> },
    Maximals(MaximalIdealList),
}

/// Checks one theorem on one instance. `prop-items` yields one report per
/// item; every other theorem yields one report.
pub fn verify_theorem(id: TheoremId, instance: &Instance, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let mismatch = || Error::invalid(format!("{} does not apply to this kind of instance", id.as_str()));
    let one = |r: Result<VerificationReport>| r.map(|r| vec![r]);
    match (id, instance) {
        (TheoremId::ThmDim, Instance::Maximals(mx)) => one(check_dim_bound(mx, cfg)),
        (TheoremId::PropGeq, Instance::PolyExt { base, m, var }) => one(verify_prop_geq(base, m, var, cfg)),
        (TheoremId::ThmPoly | TheoremId::ThmScr, Instance::PolyMaximal { ext, big, m, f }) => {
            one(verify_poly(id, ext, big, m, f.as_ref(), cfg))
        }
        (TheoremId::LemmaDepthHt, Instance::PrimePair { p, q }) => one(verify_depth_height(p, q, cfg)),
        (TheoremId::ThmTrivext | TheoremId::ThmAmg, Instance::Construction { construction, m }) => {
            one(verify_min_formula(id, construction, m, cfg))
        }
        (TheoremId::PropItems, Instance::Items { ideal, module, larger }) => {
            verify_prop_items(ideal, module, larger.as_ref(), cfg)
        }
        _ => Err(mismatch()),
    }
}

/// `K.grade(m + (x), R[x]) = K.grade(m, R) + 1`.
pub fn verify_prop_geq(base: &RingPresentation, m: &IdealSpec, var: &str, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let instance = json!({ "ring": base.to_string(), "ideal": m.to_string(), "variable": var });
    run(TheoremId::PropGeq, instance, cfg, || {
        base.check_same(m.ring(), "prop-geq")?;
        certify(m, cfg)?;
        let ext = crate::constructions::polynomial_extension(base, var)?;
        let big = transport_ideal(&ext, m)?;
        let lhs = koszul_grade(&big, &ring_module(ext.ring()), cfg.bound)?;
        let rhs = koszul_grade(m, &ring_module(base), cfg.bound)?;
        let holds = lhs.value.agrees_with(&rhs.value.shifted(1));
        Ok(compare(
            "lhs = rhs + 1",
            vec![Term::grade(format!("K.grade({big}, R[{var}])"), lhs)],
            vec![Term::grade(format!("K.grade({m}, R)"), rhs)],
            holds,
        ))
    })
}

/// True when `f` is monic of positive degree in variable `x`.
fn is_monic_in(f: &Polynomial, x: usize, ring: &RingPresentation) -> bool {
    let Some(d) = f.degree_in(x).filter(|&d| d > 0) else {
        return false;
    };
    let lead: Vec<_> = f
        .terms()
        .iter()
        .filter(|(mono, _)| mono.exponents()[x] == d)
        .map(|(mono, c)| {
            let mut e = mono.exponents().to_vec();
            e[x] = 0;
            (crate::monomial::Monomial::from_exponents(&e), c.clone())
        })
        .collect();
    let lc = Polynomial::from_terms(ring.ambient(), lead);
    ring.reduce(&(&lc - &ring.one())).is_zero()
}

/// `K.grade(M, R[x]) <= K.grade(m, R) + 1` for a maximal `M` over `m`.
pub fn verify_poly(
    id: TheoremId,
    ext: &ConstructionResult,
    big: &IdealSpec,
    m: &IdealSpec,
    f: Option<&Polynomial>,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let mut instance = json!({
        "ring": ext.ring().to_string(),
        "base": ext.base().to_string(),
        "ideal": big.to_string(),
        "contraction": m.to_string(),
    });
    if let Some(f) = f {
        instance["monic"] = json!(f.to_string());
    }
    run(id, instance, cfg, || {
        if ext.kind() != ConstructionKind::PolynomialExtension {
            return Err(Error::PreconditionViolation("the ring must be a polynomial extension".into()));
        }
        ext.ring().check_same(big.ring(), id.as_str())?;
        ext.base().check_same(m.ring(), id.as_str())?;
        certify(m, cfg)?;
        certify(big, cfg)?;
        let extended = ext.embedding().apply_ideal(m)?;
        if !big.contains_ideal(&extended)? {
            return Err(Error::PreconditionViolation(format!("{big} does not lie over {m}")));
        }
        match f {
            Some(f) => {
                let x = ext.base().nvars();
                if !is_monic_in(f, x, ext.ring()) {
                    return Err(Error::PreconditionViolation(format!("{f} is not monic in the new variable")));
                }
                let generated = extended.sum(&IdealSpec::new(ext.ring(), vec![f.clone()])?)?;
                if !generated.contains_ideal(big)? || !big.contains_ideal(&generated)? {
                    return Err(Error::PreconditionViolation(format!("{big} is not generated by {m} and {f}")));
                }
            }
            None if id == TheoremId::ThmPoly => {
                return Err(Error::PreconditionViolation("a monic polynomial f with M = mR[x] + (f) is required".into()))
            }
            None => {}
        }
        let lhs = koszul_grade(big, &ring_module(ext.ring()), cfg.bound)?;
        let rhs = koszul_grade(m, &ring_module(ext.base()), cfg.bound)?;
        let holds = lhs.value.le(&rhs.value.shifted(1));
        Ok(compare(
            "lhs <= rhs + 1",
            vec![Term::grade(format!("K.grade({big}, R[x])"), lhs)],
            vec![Term::grade(format!("K.grade({m}, R)"), rhs)],
            holds,
        ))
    })
}

/// `K.grade(q, R) <= K.grade(p, R) + 1` when `ht q = ht p + 1`.
pub fn verify_depth_height(p: &IdealSpec, q: &IdealSpec, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let ring = p.ring();
    let instance = json!({ "ring": ring.to_string(), "p": p.to_string(), "q": q.to_string() });
    run(TheoremId::LemmaDepthHt, instance, cfg, || {
        ring.check_same(q.ring(), "lemma-depthht")?;
        if !cfg.equidimensional {
            return Err(Error::PreconditionViolation(
                "heights are computed as dim R - dim R/p, which needs --equidimensional".into(),
            ));
        }
        if !q.contains_ideal(p)? {
            return Err(Error::PreconditionViolation(format!("{p} is not contained in {q}")));
        }
        let dim = krull_dimension(ring);
        let height = |i: &IdealSpec| -> Result<usize> {
            let d = quotient_dimension(i)?.ok_or_else(|| Error::PreconditionViolation(format!("{i} is the unit ideal")))?;
            Ok(dim - d)
        };
        let (hp, hq) = (height(p)?, height(q)?);
        if hq != hp + 1 {
            return Err(Error::PreconditionViolation(format!("ht q = {hq} is not ht p + 1 = {}", hp + 1)));
        }
        let r = ring_module(ring);
        let lhs = koszul_grade(q, &r, cfg.bound)?;
        let rhs = koszul_grade(p, &r, cfg.bound)?;
        let holds = lhs.value.le(&rhs.value.shifted(1));
        Ok(compare(
            "lhs <= rhs + 1",
            vec![Term::grade(format!("K.grade({q}, R)"), lhs)],
            vec![Term::grade(format!("K.grade({p}, R)"), rhs)],
            holds,
        ))
    })
}

/// Grade at the transported ideal equals `min(K.grade(m, R), K.grade(m, F))`
/// for the fiber `F` (the module `M`, or `J` over `A`).
pub fn verify_min_formula(
    id: TheoremId,
    c: &ConstructionResult,
    m: &IdealSpec,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let instance = json!({
        "construction": c.kind().as_str(),
        "ring": c.ring().to_string(),
        "base": c.base().to_string(),
        "fiber": c.fiber().map(|f| f.relations().to_string()),
        "ideal": m.to_string(),
    });
    run(id, instance, cfg, || {
        let expected = if id == TheoremId::ThmTrivext { ConstructionKind::TrivialExtension } else { ConstructionKind::Amalgamation };
        if c.kind() != expected {
            return Err(Error::PreconditionViolation(format!("{} needs a {} construction", id.as_str(), expected.as_str())));
        }
        let fiber = c.fiber().expect("trivext and amalg record their fiber");
        certify(m, cfg)?;
        let big = transport_ideal(c, m)?;
        let lhs = koszul_grade(&big, &ring_module(c.ring()), cfg.bound)?;
        let base = koszul_grade(m, &ring_module(c.base()), cfg.bound)?;
        let on_fiber = koszul_grade(m, fiber, cfg.bound)?;
        let holds = lhs.value.agrees_with(&base.value.min(on_fiber.value));
        Ok(compare(
            "lhs = min(rhs)",
            vec![Term::grade(format!("K.grade({big})"), lhs)],
            vec![Term::grade(format!("K.grade({m}, base)"), base), Term::grade(format!("K.grade({m}, fiber)"), on_fiber)],
            holds,
        ))
    })
}

/// Batch of grade identities on `(I, M)`: the regular-sequence shift,
/// monotonicity (with `larger`), Koszul grade of generator powers, Ext
/// grade of ideal powers, and Koszul = Ext.
pub fn verify_prop_items(
    ideal: &IdealSpec,
    m: &ModulePresentation,
    larger: Option<&IdealSpec>,
    cfg: &VerifyConfig,
) -> Result<Vec<VerificationReport>> {
    let instance = |item: &str| {
        let mut v = json!({
            "item": item,
            "ring": ideal.ring().to_string(),
            "ideal": ideal.to_string(),
            "module": m.relations().to_string(),
        });
        if let Some(j) = larger {
            v["larger"] = json!(j.to_string());
        }
        v
    };
    let mut out = Vec::new();
    out.push(run(TheoremId::PropItems, instance("regular-sequence-shift"), cfg, || {
        let oracle = regular_sequence_grade(ideal, m, cfg.trials, cfg.seed)?;
        let Some(Witness::RegularSequence(seq)) = &oracle.witness else {
            unreachable!("the oracle always records its sequence")
        };
        let t = seq.len();
        let whole = koszul_grade(ideal, m, cfg.bound)?;
        let rest = koszul_grade(ideal, &quotient_by_sequence(m, seq)?, cfg.bound)?;
        let holds = whole.value.agrees_with(&rest.value.shifted(t));
        Ok(compare(
            "lhs = t + rhs",
            vec![Term::grade("K.grade(I, M)", whole)],
            vec![Term::Number { label: "t".into(), value: t }, Term::grade("K.grade(I, M/yM)", rest)],
            holds,
        ))
    })?);
    if let Some(j) = larger {
        out.push(run(TheoremId::PropItems, instance("monotonicity"), cfg, || {
            if !j.contains_ideal(ideal)? {
                return Err(Error::PreconditionViolation(format!("{ideal} is not contained in {j}")));
            }
            let small = koszul_grade(ideal, m, cfg.bound)?;
            let big = koszul_grade(j, m, cfg.bound)?;
            let holds = small.value.le(&big.value);
            Ok(compare("lhs <= rhs", vec![Term::grade("K.grade(I, M)", small)], vec![Term::grade("K.grade(J, M)", big)], holds))
        })?);
    }
    out.push(run(TheoremId::PropItems, instance("koszul-generator-powers"), cfg, || {
        let base = koszul_grade(ideal, m, cfg.bound)?;
        let powers = cech_grade(ideal, m, cfg.bound, cfg.power_cap)?;
        let holds = powers.stabilization.iter().all(|t| t.value.agrees_with(&base.value));
        Ok(compare("every power of rhs = lhs", vec![Term::grade("K.grade(I, M)", base)], vec![Term::grade("K.grade(x^t, M)", powers)], holds))
    })?);
    out.push(run(TheoremId::PropItems, instance("ext-ideal-powers"), cfg, || {
        let base = ext_grade(ideal, m, cfg.bound)?;
        let powers = local_grade(ideal, m, cfg.bound, cfg.power_cap)?;
        let holds = powers.stabilization.iter().all(|t| t.value.agrees_with(&base.value));
        Ok(compare("every power of rhs = lhs", vec![Term::grade("E.grade(I, M)", base)], vec![Term::grade("E.grade(I^t, M)", powers)], holds))
    })?);
    out.push(run(TheoremId::PropItems, instance("koszul-ext"), cfg, || {
        let k = koszul_grade(ideal, m, cfg.bound)?;
        let e = ext_grade(ideal, m, cfg.bound)?;
        let holds = k.value.agrees_with(&e.value);
        Ok(compare("lhs = rhs", vec![Term::grade("K.grade(I, M)", k)], vec![Term::grade("E.grade(I, M)", e)], holds))
    })?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{amalgamation, polynomial_extension, trivial_extension, RingHom};
    use crate::groebner::tests::ring;

    fn cfg() -> VerifyConfig {
        VerifyConfig { power_cap: 3, trials: 50, ..VerifyConfig::default() }
    }

    fn ideal(r: &RingPresentation, gens: &[&str]) -> IdealSpec {
        IdealSpec::parse(r, gens).unwrap()
    }

    #[test]
    fn fpd_examples() {
        let r = ring(&["x", "y"], &[]);
        let mx = MaximalIdealList::new(&r, vec![ideal(&r, &["x", "y"]), ideal(&r, &["x-1", "y-2"])], &cfg()).unwrap();
        let est = fpd_estimate(&mx, &cfg()).unwrap();
        assert_eq!(est.value, GradeValue::Finite(2));
        assert!(est.lower_bound);

        let r = ring(&["x", "y"], &["x^2", "x*y"]);
        let mx = MaximalIdealList::new(&r, vec![ideal(&r, &["x", "y"])], &cfg()).unwrap();
        assert_eq!(fpd_estimate(&mx, &cfg()).unwrap().value, GradeValue::Finite(0));

        let q = ring(&[], &[]);
        let mx = MaximalIdealList::new(&q, vec![IdealSpec::zero(&q)], &cfg()).unwrap();
        assert_eq!(fpd_estimate(&mx, &cfg()).unwrap().value, GradeValue::Finite(0));

        let empty = MaximalIdealList::new(&q, vec![], &cfg()).unwrap();
        assert!(fpd_estimate(&empty, &cfg()).is_err());
    }

    #[test]
    fn maximal_list_rejects() {
        let r = ring(&["x", "y"], &[]);
        assert!(MaximalIdealList::new(&r, vec![ideal(&r, &["x"])], &cfg()).is_err());
        assert!(MaximalIdealList::new(&r, vec![ideal(&r, &["x^2-1", "y"])], &cfg()).is_err());
    }

    #[test]
    fn dim_bound_examples() {
        for (rels, dim) in [(vec!["x^2", "x*y"], 1), (vec![], 2), (vec!["x*y"], 1)] {
            let r = ring(&["x", "y"], &rels);
            let mx = MaximalIdealList::new(&r, vec![ideal(&r, &["x", "y"])], &cfg()).unwrap();
            let rep = check_dim_bound(&mx, &cfg()).unwrap();
            assert_eq!(rep.verdict, Verdict::Verified, "{}", rep.reason);
            assert_eq!(rep.rhs[0].value(), GradeValue::Finite(dim));
        }
    }

    #[test]
    fn prop_geq_example() {
        let r = ring(&["y"], &["y^2"]);
        let rep = verify_prop_geq(&r, &ideal(&r, &["y"]), "x", &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{}", rep.reason);
        assert_eq!(rep.lhs[0].value(), GradeValue::Finite(1));
    }

    #[test]
    fn poly_with_nonlinear_fiber() {
        let r = ring(&["y"], &[]);
        let ext = polynomial_extension(&r, "x").unwrap();
        let big = ideal(ext.ring(), &["y", "x^2-2"]);
        let f = ext.ring().parse("x^2-2").unwrap();
        let rep = verify_poly(TheoremId::ThmPoly, &ext, &big, &ideal(&r, &["y"]), Some(&f), &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{}", rep.reason);
        let bad = ext.ring().parse("2*x^2-4").unwrap();
        let rep = verify_poly(TheoremId::ThmPoly, &ext, &big, &ideal(&r, &["y"]), Some(&bad), &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        let rep = verify_poly(TheoremId::ThmScr, &ext, &big, &ideal(&r, &["y"]), None, &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified);
    }

    #[test]
    fn depth_height_needs_flag() {
        let r = ring(&["x", "y"], &[]);
        let (p, q) = (ideal(&r, &["x"]), ideal(&r, &["x", "y"]));
        assert_eq!(verify_depth_height(&p, &q, &cfg()).unwrap().verdict, Verdict::Inconclusive);
        let eq = VerifyConfig { equidimensional: true, ..cfg() };
        let rep = verify_depth_height(&p, &q, &eq).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{}", rep.reason);
    }

    #[test]
    fn trivext_example() {
        let r = ring(&["x"], &[]);
        let m = ideal(&r, &["x"]);
        let c = trivial_extension(&r, &ModulePresentation::cyclic(&m)).unwrap();
        let rep = verify_min_formula(TheoremId::ThmTrivext, &c, &m, &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{}", rep.reason);
        assert_eq!(rep.lhs[0].value(), GradeValue::Finite(0));
        let rep = verify_min_formula(TheoremId::ThmAmg, &c, &m, &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn amg_example() {
        let a = ring(&["x"], &[]);
        let b = ring(&["x", "e"], &["e^2"]);
        let f = RingHom::new(&a, &b, vec![b.var(0)]).unwrap();
        let c = amalgamation(&a, &b, &f, &ideal(&b, &["e"]), &[b.one(), b.var(1)]).unwrap();
        let rep = verify_min_formula(TheoremId::ThmAmg, &c, &ideal(&a, &["x"]), &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Verified, "{}", rep.reason);
        assert_eq!(rep.lhs[0].value(), GradeValue::Finite(1));
    }

    #[test]
    fn prop_items_batch() {
        let r = ring(&["x", "y"], &["x*y"]);
        let reps = verify_prop_items(
            &ideal(&r, &["x"]),
            &ModulePresentation::free(&r, 1),
            Some(&ideal(&r, &["x", "y"])),
            &cfg(),
        )
        .unwrap();
        assert_eq!(reps.len(), 5);
        for rep in reps {
            assert_eq!(rep.verdict, Verdict::Verified, "{}", rep.reason);
        }
    }
}
