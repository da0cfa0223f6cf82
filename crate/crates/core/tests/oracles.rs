mod common;

use std::collections::HashSet;

use makd::dense::{self, brute_force_stabilizers, state_from_tableau, uniformity_check};
use makd::stabilizer::to_graph_state;
use makd::{states, PauliString, Tableau};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn commutation_matches_matrix_commutator() {
    for n in 1..=3 {
        let ps: Vec<PauliString> = all_paulis(n).into_iter().filter(|p| p.phase_exp() == 0).collect();
        let mats: Vec<Mat> = ps.iter().map(pauli_matrix).collect();
        for (a, ma) in ps.iter().zip(&mats) {
            for (b, mb) in ps.iter().zip(&mats) {
                let comm = close(&matmul(ma, mb), &matmul(mb, ma));
                assert_eq!(a.commutes(b).unwrap(), comm, "{a} {b}");
            }
        }
    }
}

#[test]
fn products_match_matrix_products() {
    let ps = all_paulis(2);
    for a in &ps {
        for b in &ps {
            let ab = a.multiply(b).unwrap();
            assert!(close(&pauli_matrix(&ab), &matmul(&pauli_matrix(a), &pauli_matrix(b))), "{a} {b}");
        }
    }
}

fn sorted(mut v: Vec<PauliString>) -> Vec<PauliString> {
    v.sort_by_key(|p| (p.x_bits(), p.z_bits(), p.phase_exp()));
    v
}

#[test]
fn dense_group_equals_engine_group_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let t = scramble(&Tableau::from_graph(&random_graph(n, 0.5, &mut rng)), &mut rng);
        let s = state_from_tableau(&t).unwrap();
        let brute = sorted(brute_force_stabilizers(&s).unwrap());
        assert_eq!(brute.len(), 1 << n);
        assert_eq!(brute, sorted(t.elements().collect()));
    }
}

#[test]
fn every_group_element_has_expectation_one() {
    for t in [states::ring5_tableau(), states::psi5_tableau(), states::ghz_tableau(4)] {
        let s = state_from_tableau(&t).unwrap();
        for p in t.elements() {
            let e = s.pauli_expectation(&p).unwrap();
            assert!((e.re - 1.0).abs() < 1e-12 && e.im.abs() < 1e-12, "{p}: {e}");
        }
    }
}

#[test]
fn ame_iff_uniform_reductions_on_all_small_connected_graphs() {
    for g in connected_graphs() {
        let t = Tableau::from_graph(&g);
        let s = state_from_tableau(&t).unwrap();
        let r = t.n() / 2;
        assert_eq!(t.is_ame(), uniformity_check(&s, r).unwrap(), "{:?}", g.edges());
    }
}

#[test]
fn local_subgroup_is_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let n = rng.gen_range(2..=10);
        let t = scramble(&Tableau::from_graph(&random_graph(n, 0.4, &mut rng)), &mut rng);
        let inside: u64 = rng.gen_range(0..1u64 << n);
        let a: Vec<usize> = (0..n).filter(|q| inside >> q & 1 == 1).collect();
        let local = t.local_subgroup(&a).unwrap();
        for g in &local.generators {
            assert!(g.support_mask() & !inside == 0);
            assert!(t.is_member(g).unwrap().is_some());
        }
        let reported: HashSet<PauliString> = local.elements().into_iter().collect();
        let scanned: HashSet<PauliString> = t.elements().filter(|p| p.support_mask() & !inside == 0).collect();
        assert_eq!(reported, scanned);
    }
}

#[test]
fn entropy_is_symmetric_and_bounds_local_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let n = rng.gen_range(2..=8);
        let t = scramble(&Tableau::from_graph(&random_graph(n, 0.4, &mut rng)), &mut rng);
        let m: u64 = rng.gen_range(1..(1u64 << n) - 1);
        let a: Vec<usize> = (0..n).filter(|q| m >> q & 1 == 1).collect();
        let b: Vec<usize> = (0..n).filter(|q| m >> q & 1 == 0).collect();
        let (ea, eb) = (t.entanglement_entropy(&a).unwrap(), t.entanglement_entropy(&b).unwrap());
        assert_eq!(ea, eb);
        let (sa, sb) = (t.local_subgroup(&a).unwrap(), t.local_subgroup(&b).unwrap());
        assert!(sa.order() * sb.order() <= 1 << n);
        assert_eq!(sa.order() * sb.order() == 1 << n, ea == 0);
    }
}

#[test]
fn graph_form_connectivity_matches_product_cuts() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..60 {
        let n = rng.gen_range(2..=8);
        let t = scramble(&Tableau::from_graph(&random_graph(n, 0.3, &mut rng)), &mut rng);
        let form = to_graph_state(&t);
        assert_eq!(form.graph.is_connected(), !has_product_cut(&t));
        for (i, j) in [(0, n - 1), (rng.gen_range(0..n), rng.gen_range(0..n))] {
            if i != j {
                assert_eq!(form.graph.connected(i, j).unwrap(), !separated(&t, i, j));
            }
        }
    }
}

#[test]
fn graph_reachability_matches_tableau_splits() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let n = rng.gen_range(2..=8);
        let g = random_graph(n, 0.25, &mut rng);
        let t = Tableau::from_graph(&g);
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(g.connected(i, j).unwrap(), !separated(&t, i, j));
            }
        }
    }
}

#[test]
fn printed_table_entry_is_not_in_the_group() {
    let s = state_from_tableau(&states::psi5_tableau()).unwrap();
    let printed = PauliString::parse("-IYYYI").unwrap();
    let e = s.pauli_expectation(&printed).unwrap();
    assert!(e.norm() < 1e-12);
    let corrected = PauliString::parse("-IYYXI").unwrap();
    assert!((s.pauli_expectation(&corrected).unwrap().re - 1.0).abs() < 1e-12);
}

#[test]
fn dense_limits_are_enforced() {
    let big = Tableau::from_graph(&states::chain9_graph());
    let s = state_from_tableau(&big).unwrap();
    assert!(brute_force_stabilizers(&s).is_err());
    assert!(state_from_tableau(&states::ghz_tableau(dense::MAX_QUBITS + 1)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scrambled_states_match_their_groups(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = scramble(&Tableau::from_graph(&random_graph(n, 0.5, &mut rng)), &mut rng);
        let s = state_from_tableau(&t).unwrap();
        prop_assert_eq!(sorted(brute_force_stabilizers(&s).unwrap()), sorted(t.elements().collect()));
    }
}
