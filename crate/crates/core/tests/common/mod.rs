#![allow(dead_code)]

use fpdlab_core::groebner::{Budget, IdealSpec, RingPresentation};
use fpdlab_core::{CoefficientField, PolyRing, Polynomial};
use proptest::prelude::*;

pub fn try_ring(vars: &[&str], rels: &[&str]) -> fpdlab_core::Result<RingPresentation> {
    let ambient = PolyRing::grevlex(CoefficientField::Rationals, vars)?;
    let rels = rels.iter().map(|r| Polynomial::parse(&ambient, r)).collect::<fpdlab_core::Result<_>>()?;
    RingPresentation::new(ambient, rels, Budget::default())
}

pub fn ring(vars: &[&str], rels: &[&str]) -> RingPresentation {
    try_ring(vars, rels).unwrap()
}

pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}

pub fn polys(r: &RingPresentation, s: &[&str]) -> Vec<Polynomial> {
    s.iter().map(|t| r.parse(t).unwrap()).collect()
}

pub fn ideal(r: &RingPresentation, s: &[&str]) -> IdealSpec {
    IdealSpec::parse(r, s).unwrap()
}

/// A term as (coefficient, exponents).
pub type TermSpec = (i32, Vec<u32>);

/// Polynomial text with up to `terms` terms of degree at most `deg` in `nvars` variables.
pub fn poly_text(nvars: usize, deg: u32, terms: usize) -> impl Strategy<Value = String> {
    prop::collection::vec((-3i32..=3, prop::collection::vec(0..=deg, nvars)), 1..=terms).prop_map(move |ts| render(&ts, deg))
}

const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

pub fn names(n: usize) -> Vec<&'static str> {
    NAMES[..n].to_vec()
}

fn render(ts: &[TermSpec], deg: u32) -> String {
    let mut parts = Vec::new();
    for (c, e) in ts {
        if *c == 0 {
            continue;
        }
        let mut budget = deg;
        let mut t = format!("({c})");
        for (i, &k) in e.iter().enumerate() {
            let k = k.min(budget);
            budget -= k;
            if k > 0 {
                t.push_str(&format!("*{}^{k}", NAMES[i]));
            }
        }
        parts.push(t);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
