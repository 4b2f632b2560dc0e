//! Shot plans for a target gradient precision, compared with the cost of
//! measuring the energy once.

use pivotgrad::adapt::{build_groups, GroupingStrategy};
use pivotgrad::hamiltonian_file::load_hamiltonian;
use pivotgrad::shots::{grouped_gradient_cost, naive_vqe_budget, total_budget, AllocationRule, ShotPlan, VarianceModel};
use pivotgrad::{OperatorPool, PoolKind, Result};

fn main() -> Result<()> {
    let h = load_hamiltonian(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/random_real_4q.txt"))?;
    let n = h.n_qubits();
    let eps = 0.05;
    let naive = naive_vqe_budget(&h, eps)?;
    println!("naive energy estimate at eps={eps}: {naive:.0} shots");
    let pool = OperatorPool::build(PoolKind::Qubit, n)?;
    for strategy in [GroupingStrategy::Anchored, GroupingStrategy::PerOperator, GroupingStrategy::Greedy] {
        let groups = build_groups(&h, &pool, strategy)?;
        let cap = (strategy == GroupingStrategy::Anchored).then(|| total_budget(&h, eps).unwrap().floor() as u64);
        for rule in [AllocationRule::Tight, AllocationRule::WorstCase] {
            if rule == AllocationRule::WorstCase && strategy != GroupingStrategy::Anchored {
                continue;
            }
            let plan = ShotPlan::for_target_error(&groups, &VarianceModel::UpperBound, rule, h.abs_sum(), eps, cap)?;
            println!(
                "{strategy:>12} {rule:?}: {:>4} groups, {:>8} shots = {:.2} x naive (bound {})",
                groups.len(),
                plan.total,
                plan.total as f64 / naive,
                8 * n
            );
        }
    }
    let split = grouped_gradient_cost(&[vec![1.0, 2.0], vec![1.0, 2.0]], 1.0)?;
    let merged = grouped_gradient_cost(&[vec![1.0, 1.0], vec![2.0, 2.0]], 1.0)?;
    println!("grouping by magnitude: {split:.1} vs {merged:.1} shots at eps=1");
    Ok(())
}
