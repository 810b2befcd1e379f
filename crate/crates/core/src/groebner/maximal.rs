use std::collections::{BTreeSet, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::univariate::{irreducibility, Dense, Irreducibility};
use super::{groebner_basis, normal_form, GroebnerBasis, IdealSpec};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Largest quotient algebra handled by the linear algebra below.
const MAX_QUOTIENT_DIM: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaximalityVerdict {
    VerifiedMaximal,
    ProperZeroDimensionalUnconfirmed,
    NotMaximal,
}

impl MaximalityVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            MaximalityVerdict::VerifiedMaximal => "verified-maximal",
            MaximalityVerdict::ProperZeroDimensionalUnconfirmed => "proper-zero-dimensional-unconfirmed",
            MaximalityVerdict::NotMaximal => "not-maximal",
        }
    }
}

/// Outcome of a maximality probe, with the certificate behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    pub verdict: MaximalityVerdict,
    /// `dim_k R/m` when the quotient is finite-dimensional.
    pub quotient_dim: Option<usize>,
    /// Element and its minimal polynomial (in `t`) supporting the verdict.
    pub certificate: Option<(String, String)>,
    pub reason: String,
}

/// Standard monomials of a zero-dimensional basis, ascending in the order.
pub(crate) fn standard_monomials(gb: &GroebnerBasis, cap: usize) -> Result<Vec<Monomial>> {
    let n = gb.ring().nvars();
    let leads: Vec<Monomial> = gb.elements().iter().filter_map(|p| p.leading_monomial().cloned()).collect();
    let standard = |m: &Monomial| !leads.iter().any(|l| l.divides(m));
    let mut seen = BTreeSet::new();
    let mut frontier = vec![Monomial::one(n)];
    while let Some(m) = frontier.pop() {
        if !standard(&m) || !seen.insert(m.clone()) {
            continue;
        }
        if seen.len() > cap {
            return Err(Error::BudgetExceeded {
                context: "quotient algebra dimension".into(),
                basis_size: seen.len(),
                pending_pairs: frontier.len(),
            });
        }
        for i in 0..n {
            frontier.push(m.mul(&Monomial::variable(n, i, 1)));
        }
    }
    let order = gb.ring().ambient().order().clone();
    let mut out: Vec<Monomial> = seen.into_iter().collect();
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(out)
}

struct Quotient<'a> {
    gb: &'a GroebnerBasis,
    index: HashMap<Monomial, usize>,
    dim: usize,
}

impl Quotient<'_> {
    fn coords(&self, p: &Polynomial) -> Vec<Coeff> {
        let field = p.field();
        let mut v = vec![field.zero(); self.dim];
        for (m, c) in p.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    /// Minimal polynomial of `a`, coefficients ascending.
    fn minimal_polynomial(&self, a: &Polynomial) -> Result<Dense> {
        let field = a.field();
        let mut rows: Vec<(Vec<Coeff>, usize, Vec<Coeff>)> = Vec::new();
        let mut power = normal_form(&Polynomial::one(a.ring()), self.gb)?;
        for i in 0..=self.dim {
            let mut v = self.coords(&power);
            let mut combo = vec![field.zero(); self.dim + 1];
            combo[i] = field.one();
            for (row, piv, rc) in &rows {
                if field.is_zero(&v[*piv]) {
                    continue;
                }
                let f = field.div(&v[*piv], &row[*piv]).expect("pivot nonzero");
                for (x, y) in v.iter_mut().zip(row) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
                for (x, y) in combo.iter_mut().zip(rc) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
            }
            match v.iter().position(|c| !field.is_zero(c)) {
                None => return Ok(Dense::new(field, combo)),
                Some(piv) => rows.push((v, piv, combo)),
            }
            power = normal_form(&(&power * a), self.gb)?;
        }
        unreachable!("dim + 1 powers are linearly dependent")
    }
}

fn format_minpoly(f: &Dense) -> String {
    let ring = crate::poly::PolyRing::grevlex(f.field, &["t"]).expect("one variable");
    let terms = f
        .c
        .iter()
        .enumerate()
        .map(|(i, c)| (Monomial::from_exponents(&[i as u32]), c.clone()))
        .collect();
    Polynomial::from_terms(&ring, terms).to_string()
}

/// Probes whether `m` is a maximal ideal. A reducible minimal polynomial
/// of some element of `R/m` certifies non-maximality; an irreducible one of
/// degree `dim_k R/m` certifies maximality.
pub fn verify_maximal(m: &IdealSpec, trials: usize, seed: u64) -> Result<MaximalityReport> {
    let gb = groebner_basis(m)?;
    let not_maximal = |reason: String| MaximalityReport {
        verdict: MaximalityVerdict::NotMaximal,
        quotient_dim: None,
        certificate: None,
        reason,
    };
    match gb.dimension() {
        None => return Ok(not_maximal("unit ideal".into())),
        Some(d) if d > 0 => return Ok(not_maximal(format!("quotient has Krull dimension {d}"))),
        _ => {}
    }
    let std = standard_monomials(&gb, MAX_QUOTIENT_DIM)?;
    let dim = std.len();
    if dim == 1 {
        return Ok(MaximalityReport {
            verdict: MaximalityVerdict::VerifiedMaximal,
            quotient_dim: Some(1),
            certificate: None,
            reason: "residue ring is the coefficient field".into(),
        });
    }
    let q = Quotient { gb: &gb, index: std.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect(), dim };
    let ring = m.ring().ambient().clone();
    let field = ring.field();

    let mut candidates: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(&ring, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let terms = std.iter().map(|mono| (mono.clone(), field.sample(&mut rng))).collect();
        candidates.push(Polynomial::from_terms(&ring, terms));
    }
    for a in candidates {
        let a = normal_form(&a, &gb)?;
        if a.is_constant() {
            continue;
        }
        let f = q.minimal_polynomial(&a)?;
        let cert = || Some((a.to_string(), format_minpoly(&f)));
        match irreducibility(&f) {
            Irreducibility::Reducible => {
                return Ok(MaximalityReport {
                    verdict: MaximalityVerdict::NotMaximal,
                    quotient_dim: Some(dim),
                    certificate: cert(),
                    reason: "an element of the quotient has a reducible minimal polynomial".into(),
                })
            }
            Irreducibility::Irreducible if f.degree() == dim => {
                return Ok(MaximalityReport {
                    verdict: MaximalityVerdict::VerifiedMaximal,
                    quotient_dim: Some(dim),
                    certificate: cert(),
                    reason: "primitive element with irreducible minimal polynomial".into(),
                })
            }
            _ => {}
        }
    }
    Ok(MaximalityReport {
        verdict: MaximalityVerdict::ProperZeroDimensionalUnconfirmed,
        quotient_dim: Some(dim),
        certificate: None,
        reason: format!("no certifying element among {trials} samples"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::tests::ring;

    fn verdict(vars: &[&str], rels: &[&str], gens: &[&str]) -> MaximalityVerdict {
        let r = ring(vars, rels);
        verify_maximal(&IdealSpec::parse(&r, gens).unwrap(), 50, 0).unwrap().verdict
    }

    #[test]
    fn maximality_examples() {
        use MaximalityVerdict::*;
        assert_eq!(verdict(&["x", "y"], &[], &["x", "y"]), VerifiedMaximal);
        assert_eq!(verdict(&["x", "y"], &[], &["x^2-2", "y"]), VerifiedMaximal);
        assert_eq!(verdict(&["x", "y"], &[], &["x^2-1", "y"]), NotMaximal);
    }

    #[test]
    fn other_verdicts() {
        use MaximalityVerdict::*;
        assert_eq!(verdict(&["x", "y"], &[], &["x"]), NotMaximal);
        assert_eq!(verdict(&["x"], &[], &["1"]), NotMaximal);
        assert_eq!(verdict(&["x"], &[], &["x^2"]), NotMaximal);
        assert_eq!(verdict(&["x", "y"], &[], &["x^3-2", "y-x^2"]), VerifiedMaximal);
        // Q(sqrt2, sqrt3): every minimal polynomial splits modulo all primes
        assert_ne!(verdict(&["x", "y"], &[], &["x^2-2", "y^2-3"]), NotMaximal);
        assert_eq!(verdict(&["x", "y"], &["x*y"], &["x", "y"]), VerifiedMaximal);
    }

    #[test]
    fn prime_field_extension() {
        let amb = crate::poly::PolyRing::grevlex(crate::coeff::CoefficientField::Prime(2), &["x"]).unwrap();
        let r = super::super::RingPresentation::polynomial_ring(amb);
        let m = IdealSpec::parse(&r, &["x^2+x+1"]).unwrap();
        assert_eq!(verify_maximal(&m, 10, 0).unwrap().verdict, MaximalityVerdict::VerifiedMaximal);
        let m = IdealSpec::parse(&r, &["x^2+1"]).unwrap();
        assert_eq!(verify_maximal(&m, 10, 0).unwrap().verdict, MaximalityVerdict::NotMaximal);
    }
}
