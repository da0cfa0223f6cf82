mod common;

use makd::planner::{self, validate_multi, Mode, MultiOutcome};
use makd::protocol::{run_conference, run_session, session_rng};
use makd::stabilizer::{MeasurementBasis, StabilizerFrame};
use makd::{states, Tableau};
use rand::Rng;

use common::*;

#[test]
fn identical_seeds_give_identical_transcripts() {
    let t = states::ring5_tableau();
    for plan in planner::pair_table(&states::ring5_graph()).unwrap() {
        for seed in [0, 1, u64::MAX] {
            let a = run_session(&t, &plan, seed).unwrap();
            let b = run_session(&t, &plan, seed).unwrap();
            assert_eq!(a.to_string(), b.to_string());
            assert_eq!(a, b);
        }
    }
}

#[test]
fn secure_plans_always_agree() {
    for g in connected_graphs().into_iter().filter(|g| g.n() <= 5) {
        let t = Tableau::from_graph(&g);
        for plan in planner::pair_table(&g).unwrap() {
            for seed in 0..20 {
                let tr = run_session(&t, &plan, seed).unwrap();
                let (a, b) = (tr.key_of(plan.i), tr.key_of(plan.j));
                assert!(a.is_some() && a == b, "{plan} seed {seed}");
            }
        }
    }
}

#[test]
fn public_view_never_holds_keys() {
    let t = states::fig6_tableau();
    for plan in planner::pair_table(&states::fig6_graph()).unwrap().into_iter().take(12) {
        let tr = run_session(&t, &plan, 99).unwrap();
        let text = tr.to_string();
        let (public, private) = text.split_once("---PRIVATE---").unwrap();
        assert!(!public.contains("KEY"));
        assert!(private.contains("KEY"));
        assert!(!tr.public_view().to_string().contains("KEY"));
    }
}

#[test]
fn cooperator_bits_are_fair_coins_on_ame_states() {
    let t = states::ring5_tableau();
    let plan = planner::table_plan(&states::ring5_graph(), 0, 2).unwrap();
    assert_eq!(plan.cooperators, vec![1]);
    let sessions = 10_000;
    let ones: usize = (0..sessions)
        .map(|s| {
            let tr = run_session(&t, &plan, s).unwrap();
            tr.public_view().public[0].outcome.bit() as usize
        })
        .sum();
    let frac = ones as f64 / sessions as f64;
    let sigma = (0.25 / sessions as f64).sqrt();
    assert!((frac - 0.5).abs() < 3.0 * sigma, "{frac}");
}

#[test]
fn single_qubit_outcomes_multiply_to_the_sign() {
    let t = states::psi5_tableau();
    let mut rng = session_rng(4);
    let elements: Vec<_> = t.elements().filter(|p| p.weight() > 0).collect();
    let trials = 10_000;
    let mut ones = [0usize; 5];
    for k in 0..trials {
        let sigma = &elements[k % elements.len()];
        let mut frame = StabilizerFrame::new(&t);
        let mut product = 1i8;
        for q in sigma.support() {
            let basis = MeasurementBasis::from_letter(sigma.letter(q)).unwrap();
            let (o, _) = frame.measure_qubit_in_place(q, basis, &mut rng).unwrap();
            product *= o.value();
        }
        let sign = if sigma.is_negative() { -1 } else { 1 };
        assert_eq!(product, sign, "{sigma}");
        // a fresh copy for the single-qubit bias check
        let mut fresh = StabilizerFrame::new(&t);
        let q = rng.gen_range(0..5);
        let (o, _) = fresh.measure_qubit_in_place(q, MeasurementBasis::Z, &mut rng).unwrap();
        ones[q] += o.bit() as usize;
    }
    let total: usize = ones.iter().sum();
    let frac = total as f64 / trials as f64;
    assert!((frac - 0.5).abs() < 3.0 * (0.25 / trials as f64).sqrt(), "{frac}");
}

#[test]
fn conference_participants_share_one_bit() {
    let t = Tableau::from_graph(&states::chain9_graph());
    let plans = planner::load_plans(&t, &data("fig7.plans")).unwrap();
    let MultiOutcome::Valid(mp) = validate_multi(&t, &plans, Mode::Conference).unwrap() else {
        panic!("chain conference should validate");
    };
    let mut ones = 0;
    for seed in 0..500 {
        let run = run_conference(&t, &mp, seed).unwrap();
        assert!(run.agreed(), "seed {seed}");
        assert_eq!(run.groups[0].keys.len(), 5);
        ones += run.groups[0].bit() as usize;
    }
    assert!((100..400).contains(&ones));
}
