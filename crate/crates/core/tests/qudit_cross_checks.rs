mod common;

use std::collections::HashSet;

use itertools::Itertools;
use makd::dense::{self, brute_force_qudit_stabilizers, mds_ame_4_3};
use makd::qudit::{ame_4_3, QuditPauli, QuditTableau};
use makd::Tableau;

use common::*;

#[test]
fn shipped_qutrit_file_matches_the_fixture() {
    let t = QuditTableau::parse(&data("ame43.qtab")).unwrap();
    assert_eq!(t, ame_4_3());
}

#[test]
fn ame43_local_stabilizers_act_as_dense_stabilizers() {
    let t = ame_4_3();
    let s = mds_ame_4_3();
    let report = t.verify_theorem2().unwrap();
    for e in &report.entries {
        for g in t.local_subgroup(&e.subset).unwrap() {
            let v = s.qudit_expectation(&g).unwrap();
            assert!((v.re - 1.0).abs() < 1e-9 && v.im.abs() < 1e-9, "{g}");
            assert!(g.support().iter().all(|q| e.subset.contains(q)));
        }
        let w = e.witness.as_ref().unwrap();
        assert_eq!(w.support(), e.subset);
    }
}

#[test]
fn brute_force_stabilizers_have_expected_order() {
    let found: HashSet<QuditPauli> = brute_force_qudit_stabilizers(&mds_ame_4_3()).unwrap().into_iter().collect();
    assert_eq!(found.len(), 81);
    for p in &found {
        assert!(ame_4_3().elements().contains(p));
    }
}

#[test]
fn entropies_are_symmetric() {
    let t = ame_4_3();
    for size in 0..=4 {
        for a in (0..4).combinations(size) {
            let b: Vec<usize> = (0..4).filter(|q| !a.contains(q)).collect();
            assert_eq!(t.entropy(&a).unwrap(), t.entropy(&b).unwrap());
        }
    }
}

#[test]
fn dimension_two_verdicts_match_the_qubit_engine() {
    for g in connected_graphs() {
        let t = Tableau::from_graph(&g);
        let q = QuditTableau::from_qubit(&t);
        assert_eq!(q.is_ame().unwrap(), t.is_ame());
        for a in (0..t.n()).combinations(t.n() / 2) {
            assert_eq!(q.entropy(&a).unwrap(), t.entanglement_entropy(&a).unwrap());
        }
        if t.n() <= 4 {
            let s = dense::state_from_tableau(&t).unwrap();
            let dense_group: HashSet<QuditPauli> = brute_force_qudit_stabilizers(&s).unwrap().into_iter().collect();
            let engine: HashSet<QuditPauli> = q.elements().into_iter().collect();
            assert_eq!(dense_group, engine);
        }
    }
}
