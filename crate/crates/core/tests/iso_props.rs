mod common;

use common::*;
use latdiag::diagram::{build_chain_diagram, InclusionDiagram, Poset};
use latdiag::iso::{
    constraint_lattice, decide_iso, invariant_screen, obstruction_at, obstruction_search, verify_obstruction,
    verify_witness, witness_search, IsoConfig, IsoVerdict, IsoWitness, NonIsoCert, VerdictKind,
    DEFAULT_RESIDUE_BUDGET,
};
use latdiag::lattice::pair_iso_decide;
use latdiag::{IntMatrix, Lattice};
use proptest::prelude::*;

fn stabilized() -> (InclusionDiagram, InclusionDiagram) {
    (b_chain().with_constant_summand(), c_chain().with_constant_summand())
}

fn vee(n: usize, bottom: Lattice, left: Lattice, right: Lattice) -> InclusionDiagram {
    InclusionDiagram::new(Poset::vee(), n, vec![bottom, left, right]).unwrap()
}

fn fixtures() -> Vec<InclusionDiagram> {
    let (bz, cz) = stabilized();
    vec![
        a_chain(),
        b_chain(),
        c_chain(),
        bz,
        cz,
        build_chain_diagram(2, vec![Lattice::full(2)]).unwrap(),
        vee(2, lat(2, &[&[2, 0], &[0, 2]]), lat(2, &[&[1, 0], &[0, 2]]), lat(2, &[&[2, 0], &[0, 1]])),
    ]
}

/// Runs both searches to completion and checks they never both succeed.
fn exclusive(b: &InclusionDiagram, c: &InclusionDiagram, bound: u64, moduli: &[u64]) -> (bool, bool) {
    let cl = constraint_lattice(b, c).unwrap();
    let witness = witness_search(&cl, bound);
    if let Some(w) = &witness {
        assert!(verify_witness(b, c, w).unwrap().ok);
    }
    let mut certified = false;
    for &m in moduli {
        if let Some(cert) = obstruction_at(&cl, m, DEFAULT_RESIDUE_BUDGET).unwrap() {
            assert!(verify_obstruction(b, c, &cert, DEFAULT_RESIDUE_BUDGET).unwrap().is_some());
            certified = true;
        }
    }
    assert!(!(witness.is_some() && certified));
    (witness.is_some(), certified)
}

#[test]
fn decisions_on_the_worked_pairs() {
    let (b, c) = (b_chain(), c_chain());
    match decide_iso(&b, &c, &IsoConfig::default()).unwrap() {
        IsoVerdict::NotIsomorphic(NonIsoCert::Modulus(cert)) => {
            assert_eq!(cert.modulus, 8);
            assert!(verify_obstruction(&b, &c, &cert, DEFAULT_RESIDUE_BUDGET).unwrap().is_some());
        }
        other => panic!("{other:?}"),
    }
    let (bz, cz) = stabilized();
    match decide_iso(&bz, &cz, &IsoConfig::default()).unwrap() {
        IsoVerdict::Isomorphic(w) => assert!(verify_witness(&bz, &cz, &w).unwrap().ok),
        other => panic!("{other:?}"),
    }
    assert_eq!(invariant_screen(&b, &c).unwrap(), None);
    assert_eq!(invariant_screen(&b, &b).unwrap(), None);
}

#[test]
fn composite_split_witness() {
    let (bz, cz) = stabilized();
    // (b, t) ↦ y = b + t(1,3,0) ↦ (y - g(y)(3,1,0), g(y))
    let m = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[-3, 0, 0, 1], &[0, 0, 1, 0], &[-8, 0, 0, 3]]);
    let w = IsoWitness::from_ambient(&bz, &cz, &m).unwrap().expect("maps nodes into nodes");
    assert!(verify_witness(&bz, &cz, &w).unwrap().ok);
    let seeded = IsoConfig {
        seeds: vec![m],
        ..IsoConfig::default()
    };
    assert_eq!(decide_iso(&bz, &cz, &seeded).unwrap(), IsoVerdict::Isomorphic(w));
}

#[test]
fn constraint_lattice_examples() {
    let b = b_chain();
    let cl = constraint_lattice(&b, &b).unwrap();
    let w = witness_search(&cl, 1).expect("identity is in the lattice");
    assert!(verify_witness(&b, &b, &w).unwrap().ok);
    for (x, node) in w.node_maps.iter().zip(b.nodes()) {
        assert_eq!(x, &IntMatrix::identity(node.rank()));
    }
    assert!(obstruction_search(&cl, &(2..=16).collect::<Vec<_>>(), DEFAULT_RESIDUE_BUDGET).unwrap().is_none());

    let z2 = build_chain_diagram(2, vec![Lattice::full(2)]).unwrap();
    assert_eq!(constraint_lattice(&z2, &z2).unwrap().basis(), &IntMatrix::identity(4));

    let cl = constraint_lattice(&b_chain(), &c_chain()).unwrap();
    assert!(witness_search(&cl, 4).is_none());
    assert!(obstruction_search(&cl, &[2, 4], DEFAULT_RESIDUE_BUDGET).unwrap().is_none());
    // every point has det ≡ -3u² (mod 8) on the top node
    for u11 in 0..8i64 {
        let det = (-3 * u11 * u11).rem_euclid(8);
        assert!(det != 1 && det != 7);
    }
}

#[test]
fn every_fixture_is_isomorphic_to_itself() {
    for d in fixtures() {
        let v = decide_iso(&d, &d, &IsoConfig::default()).unwrap();
        match &v {
            IsoVerdict::Isomorphic(w) => assert!(verify_witness(&d, &d, w).unwrap().ok),
            other => panic!("{other:?} for {d:?}"),
        }
    }
}

#[test]
fn searches_never_both_succeed() {
    let fx = fixtures();
    let moduli: Vec<u64> = (2..=8).collect();
    for (i, b) in fx.iter().enumerate() {
        for c in &fx[i..] {
            if b.poset() != c.poset() || invariant_screen(b, c).unwrap().is_some() {
                continue;
            }
            let bound = if b.ambient_dim() > 3 { 3 } else { 4 };
            exclusive(b, c, bound, &moduli);
        }
    }
    assert_eq!(exclusive(&b_chain(), &c_chain(), 4, &moduli), (false, true));
}

/// Random 2-node chain `small ⊆ big` inside `Z^n`.
fn two_node(n: usize) -> impl Strategy<Value = InclusionDiagram> {
    (
        prop::collection::vec(-5i64..=5, n * n),
        prop::collection::vec(-4i64..=4, n * n),
    )
        .prop_filter_map("nonzero top", move |(top, combos)| {
            let big = Lattice::from_generators(n, &matrix_from(n, n, &top)).ok()?;
            if big.is_zero() {
                return None;
            }
            let r = big.rank();
            let c = matrix_from(r, r, &combos[..r * r]);
            let small = Lattice::from_generators(n, &(&c * big.basis())).ok()?;
            build_chain_diagram(n, vec![small, big]).ok()
        })
}

fn kind(v: &IsoVerdict) -> VerdictKind {
    v.kind()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn two_node_chains_are_decided_by_invariants(
        left in two_node(3),
        right in two_node(3),
        ops in elementary_ops(3, 8),
        conjugate in any::<bool>(),
    ) {
        let right = if conjugate { left.transformed(&unimodular(3, &ops)).unwrap() } else { right };
        let v = decide_iso(&left, &right, &IsoConfig::default()).unwrap();
        let expected = pair_iso_decide(left.node(0), left.node(1), right.node(0), right.node(1)).unwrap();
        let want = if expected { VerdictKind::Isomorphic } else { VerdictKind::NotIsomorphic };
        prop_assert_eq!(kind(&v), want);
        if let IsoVerdict::Isomorphic(w) = &v {
            prop_assert!(verify_witness(&left, &right, w).unwrap().ok);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn verdicts_survive_ambient_changes(ops3 in elementary_ops(3, 8), ops4 in elementary_ops(4, 8)) {
        let (b, c) = (b_chain(), c_chain());
        let c_moved = c.transformed(&unimodular(3, &ops3)).unwrap();
        let v = decide_iso(&b, &c_moved, &IsoConfig::default()).unwrap();
        prop_assert_eq!(kind(&v), VerdictKind::NotIsomorphic);
        if let IsoVerdict::NotIsomorphic(NonIsoCert::Modulus(cert)) = &v {
            prop_assert!(verify_obstruction(&b, &c_moved, cert, DEFAULT_RESIDUE_BUDGET).unwrap().is_some());
        }

        let (bz, cz) = stabilized();
        let cz_moved = cz.transformed(&unimodular(4, &ops4)).unwrap();
        let v = decide_iso(&bz, &cz_moved, &IsoConfig::default()).unwrap();
        prop_assert_eq!(kind(&v), VerdictKind::Isomorphic);
        if let IsoVerdict::Isomorphic(w) = &v {
            prop_assert!(verify_witness(&bz, &cz_moved, w).unwrap().ok);
        }
    }
}
