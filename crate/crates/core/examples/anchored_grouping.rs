//! Anchored partition of the qubit pool, gradient groups for a Hamiltonian,
//! and the measurement circuits that diagonalize each group.

use pivotgrad::grouping::{anchor_partition, build_gradient_groups, synthesize_measurement_rotation, verify_group};
use pivotgrad::hamiltonian_file::load_hamiltonian;
use pivotgrad::pools::qubit_pool;
use pivotgrad::Result;

fn main() -> Result<()> {
    let h = load_hamiltonian(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h2_sto3g_4q.txt"))?;
    let pool = qubit_pool(h.n_qubits())?;
    let sets = anchor_partition(&pool)?;
    println!("{} pool operators in {} commuting sets", pool.len(), sets.len());
    for set in &sets {
        let labels: Vec<&str> = set.member_ids.iter().map(|&i| pool.operators[i].label.as_str()).collect();
        println!("  set {} [{}]", set.set_id, labels.join(", "));
    }

    let groups = build_gradient_groups(&h, &sets, &pool)?;
    println!("{} Hamiltonian terms -> {} non-empty gradient groups", h.len(), groups.len());
    assert!(groups.iter().all(verify_group));
    let largest = groups.iter().max_by_key(|g| g.observables.len()).unwrap();
    let rotation = synthesize_measurement_rotation(largest)?;
    println!("largest group {} ({} observables):", largest.group_id, largest.observables.len());
    for (obs, diag) in largest.observables.iter().zip(&rotation.diagonal) {
        println!("  {:+.4} {:<14} -> {}", obs.coeff, obs.word.to_text(), diag.to_text());
    }
    println!("  circuit: {:?} ({} entangling)", rotation.gates, rotation.entangling_count);
    Ok(())
}
