mod common;

use common::{cases, names, poly_text, ring, try_ring};
use fpdlab_core::groebner::{groebner_basis, ideal_membership, krull_dimension, IdealSpec};
use proptest::prelude::*;

fn gens(nvars: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(poly_text(nvars, 2, 3), 1..=3)
}

fn basis_text(i: &IdealSpec) -> Vec<String> {
    groebner_basis(i).unwrap().elements().iter().map(|p| p.to_string()).collect()
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn reduced_basis_is_canonical(gs in gens(3), mult in poly_text(3, 1, 2)) {
        let r = ring(&names(3), &[]);
        let g: Vec<_> = gs.iter().map(|s| r.parse(s).unwrap()).collect();
        let i = IdealSpec::new(&r, g.clone()).unwrap();
        let first = groebner_basis(&i).unwrap();
        prop_assert!(first.is_reduced() && first.is_groebner());
        prop_assert_eq!(basis_text(&i), basis_text(&i));

        let mut shuffled = g.clone();
        shuffled.reverse();
        let combo = &g[0] * &r.parse(&mult).unwrap();
        shuffled.push(&combo + g.last().unwrap());
        prop_assert_eq!(basis_text(&i), basis_text(&IdealSpec::new(&r, shuffled).unwrap()));
    }

    #[test]
    fn combinations_are_members(gs in gens(3), cs in prop::collection::vec(poly_text(3, 2, 2), 3)) {
        let r = ring(&names(3), &[]);
        let g: Vec<_> = gs.iter().map(|s| r.parse(s).unwrap()).collect();
        let i = IdealSpec::new(&r, g.clone()).unwrap();
        let mut f = r.zero();
        for (gi, c) in g.iter().zip(&cs) {
            f = &f + &(gi * &r.parse(c).unwrap());
        }
        prop_assert!(ideal_membership(&f, &i).unwrap());
        for gi in &g {
            prop_assert!(ideal_membership(gi, &i).unwrap());
        }
    }

    #[test]
    fn dimension_ignores_presentation(rels in prop::collection::vec(poly_text(3, 2, 3), 1..=2), extra in poly_text(3, 1, 2)) {
        let n = names(3);
        let rs: Vec<&str> = rels.iter().map(String::as_str).collect();
        let base = try_ring(&n, &rs);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let d = krull_dimension(&base);
        prop_assert!(d <= 3);

        // redundant relation
        let redundant = format!("({})*({})", rels[0], extra);
        let mut more = rs.clone();
        more.push(&redundant);
        prop_assert_eq!(krull_dimension(&ring(&n, &more)), d);

        // variables listed in another order
        let reversed: Vec<&str> = n.iter().rev().copied().collect();
        prop_assert_eq!(krull_dimension(&ring(&reversed, &rs)), d);
    }

    #[test]
    fn independent_linear_relations_cut_dimension(nv in 1usize..=5, d in 0usize..=5, coeffs in prop::collection::vec(-3i32..=3, 25)) {
        let d = d.min(nv);
        let n = names(nv);
        // x_i + (combination of later variables) for i < d
        let rels: Vec<String> = (0..d)
            .map(|i| {
                let mut s = n[i].to_string();
                for j in i + 1..nv {
                    s.push_str(&format!(" + ({})*{}", coeffs[i * 5 + j], n[j]));
                }
                s
            })
            .collect();
        let rs: Vec<&str> = rels.iter().map(String::as_str).collect();
        prop_assert_eq!(krull_dimension(&ring(&n, &rs)), nv - d);
    }
}
