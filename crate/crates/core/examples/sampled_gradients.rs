//! Sampled pool gradients from anchored groups against their exact values.

use pivotgrad::adapt::{build_groups, GroupingStrategy};
use pivotgrad::fixtures::random_state;
use pivotgrad::hamiltonian_file::load_hamiltonian;
use pivotgrad::rng::{stream, tags};
use pivotgrad::shots::{AllocationRule, ShotPlan, VarianceModel};
use pivotgrad::sim::estimate_pool_gradients;
use pivotgrad::{OperatorPool, PoolKind, Result};

fn main() -> Result<()> {
    let h = load_hamiltonian(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/random_real_4q.txt"))?;
    let pool = OperatorPool::build(PoolKind::Qubit, h.n_qubits())?;
    let groups = build_groups(&h, &pool, GroupingStrategy::Anchored)?;
    let state = random_state(h.n_qubits(), &mut stream(1, tags::FIXTURE, 0))?;
    let eps = 0.05;
    let plan = ShotPlan::for_target_error(&groups, &VarianceModel::UpperBound, AllocationRule::Tight, h.abs_sum(), eps, None)?;
    let est = estimate_pool_gradients(&state, &groups, &plan, 42)?;
    println!("{} shots over {} groups", est.shots_used, groups.len());
    println!("{:<16} {:>9} {:>9} {:>8}", "operator", "exact", "sampled", "stderr");
    for op in &pool.operators {
        let exact = state.exact_gradient(&h, &op.generator)?;
        let (value, se) = est.estimates.get(&op.id).map_or((0.0, 0.0), |e| (e.value, e.std_error));
        println!("{:<16} {exact:>9.4} {value:>9.4} {se:>8.4}", op.label);
    }
    Ok(())
}
