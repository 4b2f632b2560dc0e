use pivotgrad::adapt::{build_groups, GroupingStrategy};
use pivotgrad::fixtures::random_hamiltonian;
use pivotgrad::grouping::Pivot;
use pivotgrad::rng::{stream, tags};
use pivotgrad::shots::{
    allocation_error_sq, budget_for_target_error, grouped_gradient_cost, integerize, naive_vqe_budget,
    optimal_fractional_allocation, total_budget, worst_case_shots_per_pivot, AllocationRule, ShotPlan, VarianceModel,
};
use pivotgrad::{OperatorPool, PoolKind};
use proptest::prelude::*;

fn positive(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..5.0, len)
}

proptest! {
    #[test]
    fn optimal_split_beats_uniform_and_matches_closed_form(
        (coeffs, vars) in (1usize..8).prop_flat_map(|k| (positive(k), proptest::collection::vec(0.01f64..1.0, k))),
        budget in 10.0f64..1e6,
    ) {
        let opt = optimal_fractional_allocation(&coeffs, &vars, budget).unwrap();
        prop_assert!((opt.iter().sum::<f64>() - budget).abs() < 1e-6 * budget);
        let err = allocation_error_sq(&coeffs, &vars, &opt);
        let norm: f64 = coeffs.iter().zip(&vars).map(|(c, v)| c * v.sqrt()).sum();
        prop_assert!((err - norm * norm / budget).abs() <= 1e-12 * err.max(1.0));
        let uniform = vec![budget / coeffs.len() as f64; coeffs.len()];
        prop_assert!(err <= allocation_error_sq(&coeffs, &vars, &uniform) * (1.0 + 1e-12));
    }

    #[test]
    fn formulas_scale_as_inverse_epsilon_squared(
        coeffs in positive(4),
        eps in 0.01f64..1.0,
    ) {
        let vars = [1.0; 4];
        let (s1, _) = budget_for_target_error(&coeffs, &vars, eps).unwrap();
        let (s2, _) = budget_for_target_error(&coeffs, &vars, eps / 2.0).unwrap();
        prop_assert!((s2 / s1 - 4.0).abs() < 1e-9);
        let sets = vec![coeffs.clone()];
        let g = grouped_gradient_cost(&sets, eps).unwrap();
        let sum_sq: f64 = coeffs.iter().map(|c| c * c).sum();
        prop_assert!((g - sum_sq / (eps * eps)).abs() < 1e-9 * g);
    }

    #[test]
    fn integerize_hits_budget_with_minimum_one(
        fractional in proptest::collection::vec(0.0f64..100.0, 1..20),
        extra in 0u64..500,
    ) {
        let positive = fractional.iter().filter(|&&f| f > 0.0).count() as u64;
        let budget = positive + extra;
        let shots = integerize(&fractional, budget).unwrap();
        prop_assert_eq!(shots.iter().sum::<u64>(), budget);
        for (f, s) in fractional.iter().zip(&shots) {
            if *f > 0.0 {
                prop_assert!(*s >= 1);
            }
        }
        if positive > 0 {
            prop_assert!(integerize(&fractional, positive - 1).is_err());
        }
    }

    #[test]
    fn worst_case_budget_is_eight_n_times_naive(seed in any::<u64>(), n in 2usize..7, eps in 0.01f64..0.5) {
        let h = random_hamiltonian(n, 10, false, &mut stream(seed, tags::FIXTURE, 0)).unwrap();
        let per_pivot: f64 = h.terms().iter().map(|(c, _)| worst_case_shots_per_pivot(*c, h.abs_sum(), n, eps).unwrap()).sum();
        let total = total_budget(&h, eps).unwrap();
        prop_assert!((per_pivot - total).abs() <= 1e-9 * total);
        prop_assert!((total / naive_vqe_budget(&h, eps).unwrap() - 8.0 * n as f64).abs() < 1e-9);
    }
}

#[test]
fn anchored_worst_case_plans_respect_the_budget_and_scale_with_pivot_weight() {
    for (seed, n) in [(0u64, 3usize), (1, 4), (2, 5)] {
        let h = random_hamiltonian(n, 14, false, &mut stream(seed, tags::FIXTURE, 0)).unwrap();
        let pool = OperatorPool::build(PoolKind::Qubit, n).unwrap();
        let groups = build_groups(&h, &pool, GroupingStrategy::Anchored).unwrap();
        let eps = 0.05;
        let cap = total_budget(&h, eps).unwrap().floor() as u64;
        let plan =
            ShotPlan::for_target_error(&groups, &VarianceModel::UpperBound, AllocationRule::WorstCase, h.abs_sum(), eps, Some(cap))
                .unwrap();
        assert!(plan.total <= cap);
        let ratios: Vec<f64> = groups
            .iter()
            .zip(&plan.per_group)
            .map(|(g, &s)| match g.pivot {
                Some(Pivot::HamiltonianTerm { coeff, .. }) => s as f64 / coeff.abs(),
                _ => unreachable!(),
            })
            .collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
        assert!(hi / lo < 1.01, "shots not proportional to |h_j|: {lo} .. {hi}");
    }
}

#[test]
fn tight_plans_meet_the_target_error() {
    let h = random_hamiltonian(4, 20, false, &mut stream(3, tags::FIXTURE, 0)).unwrap();
    for (kind, strategy) in [
        (PoolKind::Qubit, GroupingStrategy::Anchored),
        (PoolKind::Qubit, GroupingStrategy::Greedy),
        (PoolKind::Fermionic, GroupingStrategy::PerOperator),
    ] {
        let pool = OperatorPool::build(kind, 4).unwrap();
        let groups = build_groups(&h, &pool, strategy).unwrap();
        let plan = ShotPlan::for_target_error(&groups, &VarianceModel::UpperBound, AllocationRule::Tight, h.abs_sum(), 0.05, None).unwrap();
        let errors = plan.predicted_errors(&groups, &VarianceModel::UpperBound).unwrap();
        assert!(errors.values().all(|&e| e <= 0.05 * (1.0 + 1e-12)), "{kind} {strategy}");
    }
}

#[test]
fn budget_plans_spend_exactly_the_budget() {
    let h = random_hamiltonian(3, 8, false, &mut stream(4, tags::FIXTURE, 0)).unwrap();
    let pool = OperatorPool::build(PoolKind::Qubit, 3).unwrap();
    let groups = build_groups(&h, &pool, GroupingStrategy::Anchored).unwrap();
    let plan = ShotPlan::for_budget(&groups, &VarianceModel::UpperBound, 5000).unwrap();
    assert_eq!(plan.total, 5000);
    assert!(plan.per_group.iter().all(|&s| s >= 1));
    let starved = ShotPlan::for_budget(&groups, &VarianceModel::UpperBound, 3).unwrap();
    assert_eq!(starved.total, 3);
    assert!(!starved.warnings.is_empty());
}

#[test]
fn merging_by_magnitude_is_cheaper() {
    let split = grouped_gradient_cost(&[vec![1.0, 2.0], vec![1.0, 2.0]], 1.0).unwrap();
    let merged = grouped_gradient_cost(&[vec![1.0, 1.0], vec![2.0, 2.0]], 1.0).unwrap();
    assert!((split - 20.0).abs() < 1e-12);
    assert!((merged - 18.0).abs() < 1e-12);
    assert!(grouped_gradient_cost(&[vec![1.0]], 0.0).is_err());
}
