mod common;

use common::{circuit_matrix, expectation, generator_matrix, max_abs_diff, sum_matrix, word_matrix};
use pivotgrad::adapt::{build_groups, GroupingStrategy};
use pivotgrad::fixtures::{random_hamiltonian, random_state};
use pivotgrad::grouping::{
    anchor_partition, anchor_partition_with, build_gradient_groups, diagonalize_words, g_pool_partition,
    synthesize_measurement_rotation, verify_group, Pivot, SingleAssignment,
};
use pivotgrad::pools::{g_pool, qubit_pool};
use pivotgrad::rng::{stream, tags};
use pivotgrad::shots::ShotPlan;
use pivotgrad::sim::estimate_pool_gradients;
use pivotgrad::{OperatorPool, PauliWord, PoolKind};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn anchored_partition_is_a_qubit_wise_cover(n in 2usize..10) {
        let pool = qubit_pool(n).unwrap();
        let sets = anchor_partition(&pool).unwrap();
        prop_assert_eq!(sets.len(), 2 * n);
        let mut ids: Vec<usize> = sets.iter().flat_map(|s| s.member_ids.iter().copied()).collect();
        ids.sort_unstable();
        prop_assert_eq!(ids, (0..pool.len()).collect::<Vec<_>>());
        for set in &sets {
            for (k, &a) in set.member_ids.iter().enumerate() {
                for &b in &set.member_ids[k + 1..] {
                    let wa = &pool.operators[a].generator.terms()[0].1;
                    let wb = &pool.operators[b].generator.terms()[0].1;
                    prop_assert!(wa.qubit_wise_commutes_with(wb));
                }
            }
        }
    }

    #[test]
    fn groups_commute_and_carry_pivot_weight(seed in 0u64..1000, n in 2usize..6) {
        let mut rng = stream(seed, tags::FIXTURE, 0);
        let h = random_hamiltonian(n, 10, false, &mut rng).unwrap();
        let pool = qubit_pool(n).unwrap();
        let groups = build_gradient_groups(&h, &anchor_partition(&pool).unwrap(), &pool).unwrap();
        for g in &groups {
            prop_assert!(verify_group(g));
            let Some(Pivot::HamiltonianTerm { index, coeff }) = g.pivot else { panic!("anchored groups have term pivots") };
            prop_assert_eq!(h.terms()[index].0, coeff);
            for o in &g.observables {
                prop_assert!((o.coeff.abs() - 2.0 * coeff.abs()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn both_single_assignment_duplicates_singles() {
    let pool = qubit_pool(4).unwrap();
    let sets = anchor_partition_with(&pool, SingleAssignment::Both).unwrap();
    let total: usize = sets.iter().map(|s| s.member_ids.len()).sum();
    let singles = pool.operators.iter().filter(|o| o.generator.terms()[0].1.weight() == 2).count();
    assert_eq!(total, pool.len() + singles);
}

#[test]
fn g_pool_sets_follow_parity_of_the_y_qubit() {
    let pool = g_pool(4).unwrap();
    let labels = |ids: &[usize]| -> Vec<String> {
        let mut v: Vec<String> = ids.iter().map(|&i| pool.operators[i].generator.terms()[0].1.to_text()).collect();
        v.sort();
        v
    };
    let [first, second] = g_pool_partition(&pool).unwrap();
    assert_eq!(labels(&first.member_ids), ["Y0 Z1", "Y2", "Y2 Z3"]);
    assert_eq!(labels(&second.member_ids), ["Y1", "Y1 Z2", "Y3"]);
}

/// `⟨ψ|[H, A]|ψ⟩` from dense matrices.
fn dense_gradient(h: &common::Mat, a: &common::Mat, psi: &[num_complex::Complex64]) -> f64 {
    let comm = h * a - a * h;
    expectation(&comm, psi).re
}

#[test]
fn every_strategy_reconstructs_dense_commutators() {
    let n = 4;
    let mut rng = stream(11, tags::FIXTURE, 0);
    let h = random_hamiltonian(n, 16, false, &mut rng).unwrap();
    let state = random_state(n, &mut rng).unwrap();
    let hm = sum_matrix(&h);
    let cases = [
        (PoolKind::Qubit, GroupingStrategy::Anchored),
        (PoolKind::Qubit, GroupingStrategy::PerOperator),
        (PoolKind::Qubit, GroupingStrategy::Greedy),
        (PoolKind::Qeb, GroupingStrategy::Anchored),
        (PoolKind::Qeb, GroupingStrategy::PerOperator),
        (PoolKind::Fermionic, GroupingStrategy::PerOperator),
        (PoolKind::Fermionic, GroupingStrategy::Greedy),
        (PoolKind::G, GroupingStrategy::Anchored),
        (PoolKind::G, GroupingStrategy::Greedy),
    ];
    for (kind, strategy) in cases {
        let pool = OperatorPool::build(kind, n).unwrap();
        let groups = build_groups(&h, &pool, strategy).unwrap();
        assert!(groups.iter().all(verify_group), "{kind} {strategy}");
        let est = estimate_pool_gradients(&state, &groups, &ShotPlan::exact(groups.len()), 0).unwrap();
        for op in &pool.operators {
            let dense = dense_gradient(&hm, &generator_matrix(&op.generator), state.amplitudes());
            let summed = est.estimates.get(&op.id).map_or(0.0, |e| e.value);
            assert!((dense - summed).abs() < 1e-10, "{kind} {strategy} {}: {dense} vs {summed}", op.label);
        }
    }
}

#[test]
fn synthesized_rotations_diagonalize_exactly() {
    for n in 2..=5 {
        let mut rng = stream(n as u64, tags::FIXTURE, 5);
        let h = random_hamiltonian(n, 12, false, &mut rng).unwrap();
        for kind in [PoolKind::Qubit, PoolKind::Fermionic] {
            let pool = OperatorPool::build(kind, n).unwrap();
            let strategy = if kind == PoolKind::Qubit { GroupingStrategy::Anchored } else { GroupingStrategy::Greedy };
            for g in build_groups(&h, &pool, strategy).unwrap() {
                let rot = synthesize_measurement_rotation(&g).unwrap();
                let u = circuit_matrix(&rot.gates, n);
                assert_eq!(rot.entangling_count, rot.gates.iter().filter(|g| g.is_entangling()).count());
                for (obs, diag) in g.observables.iter().zip(&rot.diagonal) {
                    assert_eq!(diag.x_bits(), 0);
                    let conj = &u * word_matrix(&obs.word) * u.adjoint();
                    assert!(max_abs_diff(&conj, &word_matrix(diag)) < 1e-12, "{} -> {}", obs.word, diag);
                }
            }
        }
    }
}

#[test]
fn entangled_eigenbasis_needs_entanglers() {
    let n = 2;
    let words = [PauliWord::parse("X0 X1", n).unwrap(), PauliWord::parse("Z0 Z1", n).unwrap(), PauliWord::parse("Y0 Y1", n).unwrap()];
    let rot = diagonalize_words(&words).unwrap();
    assert!(rot.entangling_count >= 1);
    let u = circuit_matrix(&rot.gates, n);
    for (w, d) in words.iter().zip(&rot.diagonal) {
        assert!(max_abs_diff(&(&u * word_matrix(w) * u.adjoint()), &word_matrix(d)) < 1e-12);
    }
    let qwc = [PauliWord::parse("X0 X1", n).unwrap(), PauliWord::parse("X0", n).unwrap()];
    assert_eq!(diagonalize_words(&qwc).unwrap().entangling_count, 0);
    let bad = [PauliWord::parse("X0", n).unwrap(), PauliWord::parse("Z0", n).unwrap()];
    assert!(diagonalize_words(&bad).is_err());
}
