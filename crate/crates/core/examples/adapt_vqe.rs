//! ADAPT-VQE on a small molecular Hamiltonian, with exact and sampled
//! gradient screening.

use pivotgrad::adapt::{run_adapt, AdaptConfig, GradientMode};
use pivotgrad::hamiltonian_file::load_hamiltonian;
use pivotgrad::sim::exact_ground_state;
use pivotgrad::{PoolKind, Result};

fn main() -> Result<()> {
    let h = load_hamiltonian(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h2_sto3g_4q.txt"))?;
    let (exact, _) = exact_ground_state(&h)?;
    for (pool, mode) in [
        (PoolKind::Qubit, GradientMode::Exact),
        (PoolKind::Qeb, GradientMode::Exact),
        (PoolKind::Qubit, GradientMode::Sampled),
    ] {
        let config = AdaptConfig {
            pool_kind: pool,
            gradient_mode: mode,
            reference_occupied: vec![0, 1],
            epsilon: 0.02,
            grad_norm_threshold: if mode == GradientMode::Exact { 1e-6 } else { 0.25 },
            max_iterations: 10,
            ..AdaptConfig::default()
        };
        let trace = run_adapt(&h, &config)?;
        println!("{pool} / {mode:?}: {:?} after {} operators", trace.status, trace.ansatz.len());
        for rec in &trace.iterations {
            println!(
                "  {:>2} {:<14} g={:+.4} E={:.10} shots={}",
                rec.iteration, rec.chosen_label, rec.chosen_gradient_value, rec.energy, rec.shots
            );
        }
        println!("  error vs exact: {:.2e}", trace.final_energy - exact);
    }
    Ok(())
}
