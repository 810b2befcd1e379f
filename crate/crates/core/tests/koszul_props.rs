mod common;

use common::{cases, names, poly_text, ring};
use fpdlab_core::complexes::{binomial, koszul_chain, koszul_cochain, koszul_complex};
use fpdlab_core::fpmodules::{annihilator_submodule, Matrix, ModulePresentation};
use fpdlab_core::groebner::{IdealSpec, RingPresentation};
use fpdlab_core::Polynomial;
use proptest::prelude::*;

fn setup(nvars: usize, seq: &[String], module: &[String]) -> (RingPresentation, Vec<Polynomial>, ModulePresentation) {
    let r = ring(&names(nvars), &[]);
    let xs: Vec<Polynomial> = seq.iter().map(|s| r.parse(s).unwrap()).collect();
    let m = if module.is_empty() {
        ModulePresentation::free(&r, 1)
    } else {
        let es = module.iter().map(|s| r.parse(s).unwrap()).collect();
        ModulePresentation::new(&r, Matrix::new(1, module.len(), es).unwrap()).unwrap()
    };
    (r, xs, m)
}

fn verdicts(xs: &[Polynomial], m: &ModulePresentation) -> (Vec<bool>, Vec<bool>) {
    let co = koszul_cochain(xs, m).unwrap();
    let ch = koszul_chain(xs, m).unwrap();
    let n = xs.len();
    (
        (0..=n).map(|p| co.cohomology(p).unwrap().vanishes).collect(),
        (0..=n).map(|p| ch.cohomology(p).unwrap().vanishes).collect(),
    )
}

fn seq(nvars: usize, max_len: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(poly_text(nvars, 2, 2), 1..=max_len)
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn differentials_compose_to_zero(xs in seq(3, 5)) {
        let (r, xs, _) = setup(3, &xs, &[]);
        let k = koszul_complex(&xs, &r).unwrap();
        let n = xs.len();
        for p in 0..=n {
            prop_assert_eq!(k.ranks()[p], binomial(n, p));
        }
        for p in 1..n {
            let dd = k.differential(p).unwrap().mul(k.differential(p + 1).unwrap(), &r).unwrap();
            prop_assert!(dd.is_zero_mod(&r));
        }
    }

    #[test]
    fn h0_matches_annihilator_and_quotient(xs in seq(2, 3), rel in poly_text(2, 2, 2)) {
        let (r, xs, m) = setup(2, &xs, &[rel]);
        let i = IdealSpec::new(&r, xs.clone()).unwrap();
        let (co, ch) = verdicts(&xs, &m);
        let ann = annihilator_submodule(&i, &m).unwrap();
        prop_assert_eq!(co[0], ann.is_zero().unwrap());
        if let Some(w) = koszul_cochain(&xs, &m).unwrap().cohomology(0).unwrap().witness {
            prop_assert!(ann.contains(&w).unwrap());
        }
        prop_assert_eq!(ch[0], m.quotient_by_ideal(&i).unwrap().is_zero().unwrap());
    }

    #[test]
    fn verdicts_ignore_order(xs in seq(2, 4), rot in 0usize..4) {
        let (_, xs, m) = setup(2, &xs, &[]);
        let mut perm = xs.clone();
        let k = rot % perm.len();
        perm.rotate_left(k);
        perm.reverse();
        prop_assert_eq!(verdicts(&xs, &m), verdicts(&perm, &m));
    }

    #[test]
    fn unit_in_sequence_is_contractible(xs in seq(2, 3), at in 0usize..4, rel in poly_text(2, 2, 2)) {
        let (r, mut xs, m) = setup(2, &xs, &[rel]);
        let at = at % (xs.len() + 1);
        xs.insert(at, r.parse("-2").unwrap());
        let (co, ch) = verdicts(&xs, &m);
        prop_assert!(co.iter().all(|&v| v));
        prop_assert!(ch.iter().all(|&v| v));
    }
}
