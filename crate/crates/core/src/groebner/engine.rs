//! Buchberger's algorithm on submodules of free modules over the ambient
//! polynomial ring. Ideals are the rank-one case.
//!
//! Pairs are selected by the sugar strategy; the product criterion (rank
//! one only) and Buchberger's chain criterion prune pairs.

use std::cell::Cell;
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use crate::coeff::{Coeff, CoefficientField};
use crate::error::{Error, Result};
use crate::monomial::{grevlex_block, Monomial};
use crate::poly::{PolyRing, Polynomial};
use std::sync::Arc;

/// Caps on Buchberger's working state. Exceeding one is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Budget {
    pub max_basis: usize,
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_basis: 5000, max_pairs: 500_000 }
    }
}

thread_local! {
    static GB_RUNS: Cell<u64> = const { Cell::new(0) };
    static REDUCTIONS: Cell<u64> = const { Cell::new(0) };
}

/// Per-thread work counters: (Gröbner runs, S-pair reductions).
pub fn work_counters() -> (u64, u64) {
    (GB_RUNS.with(|c| c.get()), REDUCTIONS.with(|c| c.get()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct VTerm {
    pub comp: usize,
    pub mono: Monomial,
    pub coeff: Coeff,
}

/// Sparse vector in a free module; terms strictly descending in the
/// module order of the context that built it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct Vector {
    pub terms: Vec<VTerm>,
}

impl Vector {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
    }
}

/// Module term order. Components below `target` dominate (position over
/// term). With `elim > 0`, the other components compare grevlex on the
/// first `elim` variables first, then position, then grevlex on the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ModuleOrder {
    pub target: usize,
    pub elim: usize,
}

impl ModuleOrder {
    pub const POT: ModuleOrder = ModuleOrder { target: 0, elim: 0 };
}

pub(crate) struct Ctx<'a> {
    pub ring: &'a Arc<PolyRing>,
    pub order: ModuleOrder,
}

impl<'a> Ctx<'a> {
    pub fn new(ring: &'a Arc<PolyRing>, order: ModuleOrder) -> Self {
        Ctx { ring, order }
    }

    pub fn pot(ring: &'a Arc<PolyRing>) -> Self {
        Ctx { ring, order: ModuleOrder::POT }
    }

    fn field(&self) -> CoefficientField {
        self.ring.field()
    }

    #[inline]
    pub fn cmp(&self, ca: usize, ma: &Monomial, cb: usize, mb: &Monomial) -> Ordering {
        let ModuleOrder { target, elim } = self.order;
        if elim == 0 {
            return cb.cmp(&ca).then_with(|| self.ring.order().cmp(ma, mb));
        }
        let n = ma.nvars();
        let block = |a: &Monomial, b: &Monomial| {
            grevlex_block(a, b, 0..elim).then_with(|| grevlex_block(a, b, elim..n))
        };
        match (ca < target, cb < target) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (true, true) => cb.cmp(&ca).then_with(|| block(ma, mb)),
            (false, false) => grevlex_block(ma, mb, 0..elim)
                .then_with(|| cb.cmp(&ca))
                .then_with(|| grevlex_block(ma, mb, elim..n)),
        }
    }

    pub fn cmp_terms(&self, a: &VTerm, b: &VTerm) -> Ordering {
        self.cmp(a.comp, &a.mono, b.comp, &b.mono)
    }

    /// Builds a vector from (component, polynomial) pairs.
    pub fn vector(&self, entries: impl IntoIterator<Item = (usize, Polynomial)>) -> Vector {
        let mut terms = Vec::new();
        for (comp, p) in entries {
            for (mono, coeff) in p.into_terms() {
                terms.push(VTerm { comp, mono, coeff });
            }
        }
        self.normalize(terms)
    }

    pub fn vector_from_column(&self, column: &[Polynomial], offset: usize) -> Vector {
        self.vector(column.iter().enumerate().map(|(i, p)| (i + offset, p.clone())))
    }

    pub fn normalize(&self, mut terms: Vec<VTerm>) -> Vector {
        let field = self.field();
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        let mut out: Vec<VTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.comp == t.comp && last.mono == t.mono {
                    last.coeff = field.add(&last.coeff, &t.coeff);
                    if field.is_zero(&last.coeff) {
                        out.pop();
                    }
                    continue;
                }
            }
            if !field.is_zero(&t.coeff) {
                out.push(t);
            }
        }
        Vector { terms: out }
    }

    /// Splits a vector into one polynomial per component `0..rank`.
    pub fn components(&self, v: &Vector, rank: usize) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); rank];
        for t in &v.terms {
            parts[t.comp].push((t.mono.clone(), t.coeff.clone()));
        }
        parts.into_iter().map(|ts| Polynomial::from_terms(self.ring, ts)).collect()
    }

    pub fn monic(&self, v: &mut Vector) {
        let field = self.field();
        if let Some(lead) = v.terms.first() {
            if !field.is_one(&lead.coeff) {
                let inv = field.inv(&lead.coeff).expect("nonzero lead");
                for t in &mut v.terms {
                    t.coeff = field.mul(&t.coeff, &inv);
                }
            }
        }
    }

    fn quotient_coeff(&self, c: &Coeff, g: &Vector) -> Coeff {
        let field = self.field();
        let lc = &g.terms[0].coeff;
        if field.is_one(lc) {
            c.clone()
        } else {
            field.div(c, lc).expect("nonzero lead")
        }
    }

    /// terms[start..] -= c * m * g
    fn sub_mul_suffix(&self, v: &mut Vector, start: usize, c: &Coeff, m: &Monomial, g: &Vector) {
        let field = self.field();
        let tail = v.terms.split_off(start);
        let mut out = Vec::with_capacity(tail.len() + g.terms.len());
        let mut a = tail.into_iter().peekable();
        let mut b = g.terms.iter().map(|t| VTerm {
            comp: t.comp,
            mono: t.mono.mul(m),
            coeff: field.neg(&field.mul(c, &t.coeff)),
        });
        let mut nb = b.next();
        loop {
            match (a.peek(), &nb) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    out.push(nb.take().unwrap());
                    nb = b.next();
                }
                (Some(x), Some(y)) => match self.cmp_terms(x, y) {
                    Ordering::Greater => out.push(a.next().unwrap()),
                    Ordering::Less => {
                        out.push(nb.take().unwrap());
                        nb = b.next();
                    }
                    Ordering::Equal => {
                        let x = a.next().unwrap();
                        let y = nb.take().unwrap();
                        let s = field.add(&x.coeff, &y.coeff);
                        if !field.is_zero(&s) {
                            out.push(VTerm { coeff: s, ..x });
                        }
                        nb = b.next();
                    }
                },
            }
        }
        v.terms.extend(out);
    }

    /// Full normal form of `v` modulo `basis`; divisors are tried in list
    /// order.
    pub fn reduce(&self, mut v: Vector, basis: &[Vector]) -> Vector {
        let leads: Vec<Lead> = basis.iter().map(Lead::of).collect();
        self.reduce_with(&mut v, basis, &leads, 0);
        v
    }

    fn reduce_with(&self, v: &mut Vector, basis: &[Vector], leads: &[Lead], mut done: usize) {
        while done < v.terms.len() {
            let t = &v.terms[done];
            let mask = t.mono.support_mask();
            let hit = leads
                .iter()
                .position(|l| l.comp == t.comp && l.mask & !mask == 0 && l.mono.divides(&t.mono));
            match hit {
                Some(k) => {
                    let m = leads[k].mono.quotient_of(&t.mono);
                    let c = self.quotient_coeff(&t.coeff, &basis[k]);
                    self.sub_mul_suffix(v, done, &c, &m, &basis[k]);
                }
                None => done += 1,
            }
        }
    }

    /// Top-reduction only: stops as soon as the leading term is irreducible.
    fn reduce_top(&self, v: &mut Vector, basis: &[Vector], leads: &[Lead]) {
        while let Some(t) = v.terms.first() {
            let mask = t.mono.support_mask();
            let hit = leads
                .iter()
                .position(|l| l.comp == t.comp && l.mask & !mask == 0 && l.mono.divides(&t.mono));
            match hit {
                Some(k) => {
                    let m = leads[k].mono.quotient_of(&t.mono);
                    let c = self.quotient_coeff(&t.coeff, &basis[k]);
                    self.sub_mul_suffix(v, 0, &c, &m, &basis[k]);
                }
                None => return,
            }
        }
    }

    /// Reduced Gröbner basis of the submodule generated by `gens`, sorted
    /// descending by leading term.
    pub fn groebner(&self, gens: Vec<Vector>, budget: &Budget) -> Result<Vec<Vector>> {
        GB_RUNS.with(|c| c.set(c.get() + 1));
        let rank_one = gens.iter().all(|g| g.terms.iter().all(|t| t.comp == 0));
        let mut st = State { basis: Vec::new(), leads: Vec::new(), sugar: Vec::new(), heap: BinaryHeap::new(), pending: HashSet::new() };

        for g in gens {
            let mut g = g;
            let leads = st.leads.clone();
            self.reduce_with(&mut g, &st.basis, &leads, 0);
            if g.is_zero() {
                continue;
            }
            let s = g.degree();
            self.insert(&mut st, g, s, rank_one, budget)?;
            if rank_one && st.basis.last().unwrap().lead().unwrap().mono.is_one() {
                return Ok(vec![st.basis.pop().unwrap()]);
            }
        }

        while let Some(Reverse(key)) = st.heap.pop() {
            let (i, j) = (key.i, key.j);
            st.pending.remove(&(i, j));
            if self.chain_criterion(&st, i, j) {
                continue;
            }
            let (li, lj) = (&st.leads[i], &st.leads[j]);
            let lcm = li.mono.lcm(&lj.mono);
            let mi = li.mono.quotient_of(&lcm);
            let mj = lj.mono.quotient_of(&lcm);
            let sugar = (st.sugar[i] + mi.degree()).max(st.sugar[j] + mj.degree());
            let field = self.field();
            let mut s = Vector {
                terms: st.basis[i].terms.iter().map(|t| VTerm { comp: t.comp, mono: t.mono.mul(&mi), coeff: t.coeff.clone() }).collect(),
            };
            self.sub_mul_suffix(&mut s, 0, &field.one(), &mj, &st.basis[j]);
            REDUCTIONS.with(|c| c.set(c.get() + 1));
            let leads = std::mem::take(&mut st.leads);
            self.reduce_top(&mut s, &st.basis, &leads);
            if !s.is_zero() {
                self.reduce_with(&mut s, &st.basis, &leads, 1);
            }
            st.leads = leads;
            if s.is_zero() {
                continue;
            }
            self.insert(&mut st, s, sugar, rank_one, budget)?;
            if rank_one && st.basis.last().unwrap().lead().unwrap().mono.is_one() {
                return Ok(vec![st.basis.pop().unwrap()]);
            }
        }
        Ok(self.interreduce(st.basis))
    }

    fn insert(&self, st: &mut State, mut g: Vector, sugar: u32, rank_one: bool, budget: &Budget) -> Result<()> {
        self.monic(&mut g);
        let k = st.basis.len();
        let lk = Lead::of(&g);
        let dk = lk.mono.degree();
        for (i, li) in st.leads.iter().enumerate() {
            if li.comp != lk.comp {
                continue;
            }
            if rank_one && li.mono.coprime(&lk.mono) {
                continue;
            }
            let lcm = li.mono.lcm(&lk.mono);
            let d = lcm.degree();
            let s = st.sugar[i].saturating_sub(li.mono.degree()).max(sugar.saturating_sub(dk)) + d;
            st.heap.push(Reverse(PairKey { sugar: s, lcm_degree: d, j: k, i }));
            st.pending.insert((i, k));
        }
        st.basis.push(g);
        st.leads.push(lk);
        st.sugar.push(sugar.max(dk));
        if st.basis.len() > budget.max_basis || st.pending.len() > budget.max_pairs {
            return Err(Error::BudgetExceeded {
                context: "Buchberger".into(),
                basis_size: st.basis.len(),
                pending_pairs: st.pending.len(),
            });
        }
        Ok(())
    }

    fn chain_criterion(&self, st: &State, i: usize, j: usize) -> bool {
        let (li, lj) = (&st.leads[i], &st.leads[j]);
        let lcm = li.mono.lcm(&lj.mono);
        let mask = lcm.support_mask();
        st.leads.iter().enumerate().any(|(k, lk)| {
            k != i
                && k != j
                && lk.comp == li.comp
                && lk.mask & !mask == 0
                && lk.mono.divides(&lcm)
                && !st.pending.contains(&(i.min(k), i.max(k)))
                && !st.pending.contains(&(j.min(k), j.max(k)))
        })
    }

    fn interreduce(&self, basis: Vec<Vector>) -> Vec<Vector> {
        let leads: Vec<Lead> = basis.iter().map(Lead::of).collect();
        let keep: Vec<usize> = (0..basis.len())
            .filter(|&i| {
                !(0..basis.len()).any(|j| {
                    j != i
                        && leads[j].comp == leads[i].comp
                        && leads[j].mono.divides(&leads[i].mono)
                        && (leads[j].mono != leads[i].mono || j < i)
                })
            })
            .collect();
        let kept: Vec<Vector> = keep.iter().map(|&i| basis[i].clone()).collect();
        let kept_leads: Vec<Lead> = keep.iter().map(|&i| leads[i].clone()).collect();
        let mut out: Vec<Vector> = (0..kept.len())
            .map(|k| {
                let mut v = kept[k].clone();
                let others: Vec<Vector> = kept.iter().enumerate().filter(|(o, _)| *o != k).map(|(_, v)| v.clone()).collect();
                let other_leads: Vec<Lead> = kept_leads.iter().enumerate().filter(|(o, _)| *o != k).map(|(_, l)| l.clone()).collect();
                self.reduce_with(&mut v, &others, &other_leads, 1);
                self.monic(&mut v);
                v
            })
            .collect();
        out.sort_by(|a, b| self.cmp_terms(b.lead().unwrap(), a.lead().unwrap()));
        out
    }
}

#[derive(Debug, Clone)]
struct Lead {
    comp: usize,
    mono: Monomial,
    mask: u64,
}

impl Lead {
    fn of(v: &Vector) -> Lead {
        let t = v.lead().expect("nonzero basis element");
        Lead { comp: t.comp, mono: t.mono.clone(), mask: t.mono.support_mask() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u32,
    lcm_degree: u32,
    j: usize,
    i: usize,
}

struct State {
    basis: Vec<Vector>,
    leads: Vec<Lead>,
    sugar: Vec<u32>,
    heap: BinaryHeap<Reverse<PairKey>>,
    pending: HashSet<(usize, usize)>,
}

/// Checks that every S-pair of `basis` reduces to zero.
pub(crate) fn is_groebner(ctx: &Ctx, basis: &[Vector]) -> bool {
    let field = ctx.field();
    for j in 0..basis.len() {
        for i in 0..j {
            let (a, b) = (basis[i].lead().unwrap(), basis[j].lead().unwrap());
            if a.comp != b.comp {
                continue;
            }
            let lcm = a.mono.lcm(&b.mono);
            let mi = a.mono.quotient_of(&lcm);
            let mj = b.mono.quotient_of(&lcm);
            let ci = field.inv(&a.coeff).unwrap();
            let cj = field.inv(&b.coeff).unwrap();
            let mut s = Vector {
                terms: basis[i]
                    .terms
                    .iter()
                    .map(|t| VTerm { comp: t.comp, mono: t.mono.mul(&mi), coeff: field.mul(&t.coeff, &ci) })
                    .collect(),
            };
            ctx.sub_mul_suffix(&mut s, 0, &cj, &mj, &basis[j]);
            if !ctx.reduce(s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}
