//! Koszul, Ext, Čech and local-cohomology grades, and a randomized
//! regular-sequence oracle.

use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::complexes::koszul_cochain;
use crate::error::{Error, Result};
use crate::fpmodules::{is_regular_element, quotient_by_sequence, ExtProbe, ModulePresentation};
use crate::groebner::{ideal_power, IdealSpec};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradeValue {
    Finite(usize),
    /// Every probed degree `0..=n` vanished.
    InfiniteUpTo(usize),
}

impl GradeValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            GradeValue::Finite(n) => Some(*n),
            GradeValue::InfiniteUpTo(_) => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GradeValue::InfiniteUpTo(_))
    }

    /// Equal finite values, or both infinite regardless of probe depth.
    pub fn agrees_with(&self, other: &GradeValue) -> bool {
        match (self, other) {
            (GradeValue::Finite(a), GradeValue::Finite(b)) => a == b,
            (GradeValue::InfiniteUpTo(_), GradeValue::InfiniteUpTo(_)) => true,
            _ => false,
        }
    }

    /// `self + t`, keeping infinity infinite.
    pub fn shifted(&self, t: usize) -> GradeValue {
        match self {
            GradeValue::Finite(n) => GradeValue::Finite(n + t),
            GradeValue::InfiniteUpTo(n) => GradeValue::InfiniteUpTo(n + t),
        }
    }

    /// Order with every infinite value above every finite one.
    pub fn le(&self, other: &GradeValue) -> bool {
        match (self, other) {
            (GradeValue::Finite(a), GradeValue::Finite(b)) => a <= b,
            (_, GradeValue::InfiniteUpTo(_)) => true,
            (GradeValue::InfiniteUpTo(_), GradeValue::Finite(_)) => false,
        }
    }

    pub fn min(self, other: GradeValue) -> GradeValue {
        if self.le(&other) {
            self
        } else {
            other
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GradeValue::Finite(n) => json!({ "finite": n }),
            GradeValue::InfiniteUpTo(n) => json!({ "infinite_up_to": n }),
        }
    }
}

impl fmt::Display for GradeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradeValue::Finite(n) => write!(f, "{n}"),
            GradeValue::InfiniteUpTo(n) => write!(f, "infinite-up-to-{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradeKind {
    Koszul,
    Ext,
    Cech,
    Local,
    RegSeq,
}

impl GradeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GradeKind::Koszul => "koszul",
            GradeKind::Ext => "ext",
            GradeKind::Cech => "cech",
            GradeKind::Local => "local",
            GradeKind::RegSeq => "regseq",
        }
    }

    pub fn parse(s: &str) -> Option<GradeKind> {
        Some(match s {
            "koszul" => GradeKind::Koszul,
            "ext" => GradeKind::Ext,
            "cech" => GradeKind::Cech,
            "local" => GradeKind::Local,
            "regseq" => GradeKind::RegSeq,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Koszul cocycle in `M^{C(n,p)}` not in the image.
    Cocycle { degree: usize, vector: Vec<Polynomial> },
    /// Nonzero class of `Ext^p(R/I, M)` as an element of `M^{rank F_p}`.
    ExtClass { degree: usize, vector: Vec<Polynomial> },
    RegularSequence(Vec<Polynomial>),
}

impl Witness {
    pub fn to_json(&self) -> Value {
        let strs = |v: &[Polynomial]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        match self {
            Witness::Cocycle { degree, vector } => json!({ "type": "cocycle", "degree": degree, "vector": strs(vector) }),
            Witness::ExtClass { degree, vector } => json!({ "type": "ext-class", "degree": degree, "vector": strs(vector) }),
            Witness::RegularSequence(s) => json!({ "type": "regular-sequence", "elements": strs(s) }),
        }
    }
}

/// One power `t` of a Čech or local stabilization trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePoint {
    pub power: usize,
    pub value: GradeValue,
}

#[derive(Clone, Debug)]
pub struct GradeReport {
    pub kind: GradeKind,
    pub value: GradeValue,
    /// Degrees `0..=probed` were examined.
    pub probed: usize,
    pub witness: Option<Witness>,
    /// The generator list the grade was computed on.
    pub ideal: Vec<Polynomial>,
    pub stabilization: Vec<TracePoint>,
    pub stabilized: Option<bool>,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

impl GradeReport {
    fn new(kind: GradeKind, ideal: &IdealSpec, value: GradeValue, probed: usize) -> Self {
        GradeReport {
            kind,
            value,
            probed,
            witness: None,
            ideal: ideal.generators().to_vec(),
            stabilization: Vec::new(),
            stabilized: None,
            seed: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "kind": self.kind.as_str(),
            "value": self.value.to_json(),
            "probed_range": [0, self.probed],
            "witness": self.witness.as_ref().map(|w| w.to_json()),
            "ideal": self.ideal.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "notes": self.notes,
        });
        let obj = v.as_object_mut().expect("object");
        if matches!(self.kind, GradeKind::Cech | GradeKind::Local) {
            obj.insert(
                "stabilization".into(),
                self.stabilization.iter().map(|t| json!({ "power": t.power, "value": t.value.to_json() })).collect(),
            );
            obj.insert("stabilized".into(), json!(self.stabilized.unwrap_or(false)));
        }
        if let Some(s) = self.seed {
            obj.insert("seed".into(), json!(s));
        }
        v
    }
}

fn require_proper(ideal: &IdealSpec) -> Result<()> {
    if ideal.is_unit()? {
        return Err(Error::invalid(format!("grade of the unit ideal {ideal}")));
    }
    Ok(())
}

/// First nonzero generator of `M`, if any.
fn nonzero_generator(m: &ModulePresentation) -> Result<Option<Vec<Polynomial>>> {
    let ring = m.ring();
    for i in 0..m.rank() {
        let mut v = vec![ring.zero(); m.rank()];
        v[i] = ring.one();
        if !m.element_is_zero(&v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Least `p` with `H^p(x; M) != 0` on the stored generators of `I`.
pub fn koszul_grade(ideal: &IdealSpec, m: &ModulePresentation, bound: usize) -> Result<GradeReport> {
    ideal.ring().check_same(m.ring(), "koszul grade")?;
    require_proper(ideal)?;
    let gens = ideal.generators();
    let n = gens.len();
    let top = n.min(bound);
    if n == 0 {
        // K(empty) is R in degree 0, so H^0 = M.
        return Ok(match nonzero_generator(m)? {
            Some(v) => {
                let mut r = GradeReport::new(GradeKind::Koszul, ideal, GradeValue::Finite(0), 0);
                r.witness = Some(Witness::Cocycle { degree: 0, vector: v });
                r
            }
            None => GradeReport::new(GradeKind::Koszul, ideal, GradeValue::InfiniteUpTo(0), 0),
        });
    }
    if m.quotient_by_ideal(ideal)?.is_zero()? {
        let mut r = GradeReport::new(GradeKind::Koszul, ideal, GradeValue::InfiniteUpTo(top), top);
        r.notes.push("IM = M, so every Koszul cohomology vanishes".into());
        return Ok(r);
    }
    let c = koszul_cochain(gens, m)?;
    for p in 0..=top {
        let v = c.cohomology(p)?;
        if let Some(w) = v.witness {
            let mut r = GradeReport::new(GradeKind::Koszul, ideal, GradeValue::Finite(p), p);
            r.witness = Some(Witness::Cocycle { degree: p, vector: w });
            return Ok(r);
        }
    }
    Ok(GradeReport::new(GradeKind::Koszul, ideal, GradeValue::InfiniteUpTo(top), top))
}

/// Least `p <= bound` with `Ext^p(R/I, M) != 0`.
pub fn ext_grade(ideal: &IdealSpec, m: &ModulePresentation, bound: usize) -> Result<GradeReport> {
    ideal.ring().check_same(m.ring(), "ext grade")?;
    require_proper(ideal)?;
    let mut probe = ExtProbe::new(ideal, m)?;
    if probe.all_vanish() {
        let mut r = GradeReport::new(GradeKind::Ext, ideal, GradeValue::InfiniteUpTo(bound), bound);
        r.notes.push("IM = M, so every Ext vanishes".into());
        return Ok(r);
    }
    for p in 0..=bound {
        if let Some(w) = probe.witness(p)? {
            let mut r = GradeReport::new(GradeKind::Ext, ideal, GradeValue::Finite(p), p);
            r.witness = Some(Witness::ExtClass { degree: p, vector: w });
            return Ok(r);
        }
    }
    Ok(GradeReport::new(GradeKind::Ext, ideal, GradeValue::InfiniteUpTo(bound), bound))
}

fn stabilize(kind: GradeKind, ideal: &IdealSpec, mut reports: Vec<(usize, GradeReport)>) -> GradeReport {
    let trace: Vec<TracePoint> = reports.iter().map(|(t, r)| TracePoint { power: *t, value: r.value }).collect();
    let stabilized = trace.len() >= 2 && trace[trace.len() - 1].value == trace[trace.len() - 2].value;
    let (_, last) = reports.pop().expect("cap >= 1");
    let mut r = GradeReport::new(kind, ideal, last.value, last.probed);
    r.witness = last.witness;
    r.notes = last.notes;
    r.stabilization = trace;
    r.stabilized = Some(stabilized);
    if !stabilized {
        r.notes.push("values differ at the power cap".into());
    }
    r
}

/// Koszul grade of `(x_1^t, ..., x_n^t)` for `t = 1..=power_cap`.
pub fn cech_grade(ideal: &IdealSpec, m: &ModulePresentation, bound: usize, power_cap: usize) -> Result<GradeReport> {
    if power_cap == 0 {
        return Err(Error::invalid("power cap must be at least 1"));
    }
    require_proper(ideal)?;
    let mut reports = Vec::with_capacity(power_cap);
    for t in 1..=power_cap {
        let powered: Vec<Polynomial> = ideal.generators().iter().map(|g| g.pow(t as u32)).collect();
        let it = IdealSpec::new(ideal.ring(), powered)?;
        reports.push((t, koszul_grade(&it, m, bound)?));
    }
    Ok(stabilize(GradeKind::Cech, ideal, reports))
}

/// Ext grade of `I^t` for `t = 1..=power_cap`.
pub fn local_grade(ideal: &IdealSpec, m: &ModulePresentation, bound: usize, power_cap: usize) -> Result<GradeReport> {
    if power_cap == 0 {
        return Err(Error::invalid("power cap must be at least 1"));
    }
    require_proper(ideal)?;
    let mut reports = Vec::with_capacity(power_cap);
    for t in 1..=power_cap {
        reports.push((t, ext_grade(&ideal_power(ideal, t).ideal, m, bound)?));
    }
    Ok(stabilize(GradeKind::Local, ideal, reports))
}

/// Greedy regular sequence from random combinations of the generators.
pub fn regular_sequence_grade(ideal: &IdealSpec, m: &ModulePresentation, trials: usize, seed: u64) -> Result<GradeReport> {
    ideal.ring().check_same(m.ring(), "regular sequence")?;
    let ring = ideal.ring();
    let field = ring.field();
    let gens = ideal.generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seq: Vec<Polynomial> = Vec::new();
    let mut current = m.clone();
    let mut saturated = false;
    loop {
        if current.quotient_by_ideal(ideal)?.is_zero()? {
            saturated = true;
            break;
        }
        let mut tried: HashSet<Polynomial> = HashSet::new();
        let mut found = None;
        for _ in 0..trials {
            let mut a = ring.zero();
            for g in gens {
                let c = field.sample(&mut rng);
                if !field.is_zero(&c) {
                    a = &a + &g.scale(&c);
                }
            }
            let a = ring.reduce(&a);
            if a.is_zero() || !tried.insert(a.clone()) {
                continue;
            }
            if is_regular_element(&a, &current)? {
                found = Some(a);
                break;
            }
        }
        match found {
            Some(a) => {
                current = quotient_by_sequence(&current, std::slice::from_ref(&a))?;
                seq.push(a);
            }
            None => break,
        }
    }
    let len = seq.len();
    let value = if saturated { GradeValue::InfiniteUpTo(len) } else { GradeValue::Finite(len) };
    let mut r = GradeReport::new(GradeKind::RegSeq, ideal, value, len);
    if saturated {
        r.notes.push("IM = M on the final quotient, so no maximal sequence exists".into());
    }
    r.witness = Some(Witness::RegularSequence(seq));
    r.seed = Some(seed);
    Ok(r)
}

/// Computes a grade of the requested kind with shared parameters.
pub fn grade(
    kind: GradeKind,
    ideal: &IdealSpec,
    m: &ModulePresentation,
    bound: usize,
    power_cap: usize,
    trials: usize,
    seed: u64,
) -> Result<GradeReport> {
    match kind {
        GradeKind::Koszul => koszul_grade(ideal, m, bound),
        GradeKind::Ext => ext_grade(ideal, m, bound),
        GradeKind::Cech => cech_grade(ideal, m, bound, power_cap),
        GradeKind::Local => local_grade(ideal, m, bound, power_cap),
        GradeKind::RegSeq => regular_sequence_grade(ideal, m, trials, seed),
    }
}

/// Re-validates a report's witness from scratch.
pub fn validate_witness(report: &GradeReport, ideal: &IdealSpec, m: &ModulePresentation) -> Result<bool> {
    let Some(w) = &report.witness else {
        return Ok(true);
    };
    match w {
        Witness::Cocycle { degree, vector } => {
            let it = match report.stabilization.last() {
                Some(t) if report.kind == GradeKind::Cech => {
                    IdealSpec::new(ideal.ring(), ideal.generators().iter().map(|g| g.pow(t.power as u32)).collect())?
                }
                _ => ideal.clone(),
            };
            if it.generators().is_empty() {
                return Ok(!m.element_is_zero(vector)?);
            }
            koszul_cochain(it.generators(), m)?.validate_witness(*degree, vector)
        }
        Witness::ExtClass { degree, vector } => {
            let it = match report.stabilization.last() {
                Some(t) if report.kind == GradeKind::Local => ideal_power(ideal, t.power).ideal,
                _ => ideal.clone(),
            };
            ExtProbe::new(&it, m)?.validate(*degree, vector)
        }
        Witness::RegularSequence(seq) => {
            let mut current = m.clone();
            for a in seq {
                if !is_regular_element(a, &current)? {
                    return Ok(false);
                }
                current = quotient_by_sequence(&current, std::slice::from_ref(a))?;
            }
            Ok(seq.is_empty() || !current.is_zero()?)
        }
    }
}
