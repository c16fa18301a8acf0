mod common;

use common::*;
use latdiag::diagram::{
    build_chain_diagram, direct_sum_with_constant, induced_hom_to_constant, kernel_chain, verify_chain_hom,
    DiagramHom, InclusionDiagram, SplitSection,
};
use latdiag::lattice::quotient_invariants;
use latdiag::matrix::vector;
use latdiag::{AmbientFunctional, IntMatrix, Lattice};
use num_bigint::BigInt;
use proptest::prelude::*;

fn truncate(d: &InclusionDiagram, from: usize) -> InclusionDiagram {
    build_chain_diagram(d.ambient_dim(), d.nodes()[from..].to_vec()).unwrap()
}

fn phi() -> IntMatrix {
    // (0,1,0) ↦ (1,0,-32), (0,0,1) ↦ (0,0,1); the first row is never used
    IntMatrix::from_i64(&[&[0, 0, 0], &[1, 0, -32], &[0, 0, 1]])
}

fn pair_invariants_agree(s: &InclusionDiagram, t: &InclusionDiagram) -> bool {
    s.poset().strict_pairs().into_iter().all(|(i, j)| {
        quotient_invariants(s.node(j), s.node(i)).unwrap() == quotient_invariants(t.node(j), t.node(i)).unwrap()
    }) && (0..s.len()).all(|i| s.node(i).rank() == t.node(i).rank())
}

#[test]
fn split_sums_round_trip() {
    let a = a_chain();
    for (func, z) in [(f(), vector(&[1, 3, 0])), (g(), vector(&[3, 1, 0]))] {
        let k = kernel_chain(&a, &func).unwrap();
        let s = SplitSection::new(z, func.clone()).unwrap();
        let rebuilt = direct_sum_with_constant(&k, &s).unwrap();
        assert_eq!(rebuilt, a);
        assert_eq!(kernel_chain(&rebuilt, &func).unwrap(), k);
        for from in 1..3 {
            let kt = truncate(&k, from);
            assert_eq!(direct_sum_with_constant(&kt, &s).unwrap(), truncate(&a, from));
        }
    }
    // f(3,1,0) = 3, so this is not a section for f
    assert!(SplitSection::new(vector(&[3, 1, 0]), f()).is_err());
    let one_node = build_chain_diagram(2, vec![lat(2, &[&[0, 1]])]).unwrap();
    let s = SplitSection::new(vector(&[1, 0]), AmbientFunctional::coordinate(2, 0)).unwrap();
    assert_eq!(direct_sum_with_constant(&one_node, &s).unwrap().node(0), &Lattice::full(2));
}

#[test]
fn worked_isomorphism_on_the_upper_nodes() {
    let (b, c) = (b_chain(), c_chain());
    let top = DiagramHom::from_ambient(truncate(&b, 1), truncate(&c, 1), phi());
    let report = verify_chain_hom(&top, true);
    assert!(report.ok(), "{report:?}");
    assert!(pair_invariants_agree(&top.source, &top.target));

    let full = DiagramHom::from_ambient(b.clone(), c.clone(), phi());
    let report = verify_chain_hom(&full, true);
    let fail = report.first_failure().unwrap();
    assert_eq!(fail.node, 0);
    assert!(!fail.maps_into_target);
    assert!(fail.detail.as_deref().unwrap().contains("(8,0,-256)"));

    let id = DiagramHom::from_ambient(b.clone(), b, IntMatrix::identity(3));
    assert!(verify_chain_hom(&id, true).ok());
}

#[test]
fn constant_maps_restrict_along_inclusions() {
    for (d, func) in [(a_chain(), f()), (a_chain(), g()), (b_chain(), AmbientFunctional::from_i64(&[2, -1, 5]))] {
        let h = induced_hom_to_constant(&d, &func).unwrap();
        assert!(verify_chain_hom(&h, false).ok());
        for (i, j) in d.poset().strict_pairs() {
            for v in d.node(i).basis().row_iter() {
                assert_eq!(h.node_maps[j].apply_left(v).unwrap(), h.node_maps[i].apply_left(v).unwrap());
            }
        }
    }
    let zero = build_chain_diagram(3, vec![Lattice::full(3)]).unwrap();
    assert!(verify_chain_hom(&induced_hom_to_constant(&zero, &AmbientFunctional::from_i64(&[0, 0, 0])).unwrap(), false).ok());
}

#[test]
fn lower_maps_are_forced_by_the_top_map() {
    let b = b_chain();
    let top = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let restricted = DiagramHom {
        source: b.clone(),
        target: b.clone(),
        node_maps: vec![top.clone(); 3],
    };
    assert!(verify_chain_hom(&restricted, false).ok());
    // a node-0 map that differs from the restriction on (0,8,0) breaks the square
    let mut other = top.clone();
    other.set(1, 1, BigInt::from(2));
    let broken = DiagramHom {
        source: b.clone(),
        target: b,
        node_maps: vec![other, top.clone(), top],
    };
    let report = verify_chain_hom(&broken, false);
    assert!(!report.nodes[0].commutes || !report.nodes[0].maps_into_target);
}

fn chain_strategy() -> impl Strategy<Value = InclusionDiagram> {
    (small_matrix(3, 3, 6), prop::collection::vec(-4i64..=4, 9)).prop_filter_map("nonzero", |(top, combos)| {
        let big = Lattice::from_generators(top.cols(), &top).ok()?;
        if big.is_zero() {
            return None;
        }
        let r = big.rank();
        let c = matrix_from(r, r, &combos[..r * r]);
        let small = Lattice::from_generators(big.ambient_dim(), &(&c * big.basis())).ok()?;
        build_chain_diagram(big.ambient_dim(), vec![small, big]).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn isomorphisms_preserve_pair_invariants(d in chain_strategy(), ops in elementary_ops(3, 8), k in -2i64..=2) {
        let n = d.ambient_dim();
        let g = unimodular(n, &ops);
        let t = d.transformed(&g).unwrap();
        let h = DiagramHom::from_ambient(d.clone(), t.clone(), g.clone());
        prop_assert!(verify_chain_hom(&h, true).ok());
        prop_assert!(pair_invariants_agree(&d, &t));
        // a scaled map is a homomorphism but only an isomorphism when |k| = 1
        let scaled = DiagramHom::from_ambient(d.clone(), d.clone(), IntMatrix::identity(n).scaled(&BigInt::from(k)));
        let rep = verify_chain_hom(&scaled, true);
        if rep.ok() {
            prop_assert!(pair_invariants_agree(&d, &d));
            prop_assert!(k.abs() == 1 || d.node(1).is_zero());
        }
    }
}
