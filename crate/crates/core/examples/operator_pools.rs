//! Sizes and sample members of the four operator pools.

use pivotgrad::{OperatorPool, PoolKind, Result};

fn main() -> Result<()> {
    for n in [4, 6] {
        for kind in [PoolKind::Fermionic, PoolKind::Qeb, PoolKind::Qubit, PoolKind::G] {
            let pool = OperatorPool::build(kind, n)?;
            let sample: Vec<&str> = pool.operators.iter().take(3).map(|op| op.label.as_str()).collect();
            println!("n={n} {kind:>9}: {:>4} operators, e.g. {}", pool.len(), sample.join(", "));
        }
    }
    let g = OperatorPool::build(PoolKind::G, 4)?;
    for op in &g.operators {
        let words: Vec<String> = op.generator.terms().iter().map(|(_, w)| w.to_text()).collect();
        println!("  G[{}] = i {}", op.id, words.join(" + "));
    }
    Ok(())
}
