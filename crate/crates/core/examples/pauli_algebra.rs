//! Products, commutation and commutators of Pauli words, and the fact that
//! commutators sharing a pivot inherit commutation from their partners.

use pivotgrad::pauli::{commutator, multiply};
use pivotgrad::{PauliWord, Result};

fn main() -> Result<()> {
    let n = 4;
    let x0 = PauliWord::parse("X0", n)?;
    let y0 = PauliWord::parse("Y0", n)?;
    let prod = multiply(&x0, &y0)?;
    println!("X0 * Y0 = {} (phase i^{})", prod.unphased().to_text(), prod.phase_power());

    let pivot = PauliWord::parse("Z0 X2", n)?;
    let a = PauliWord::parse("Y0 X1", n)?;
    let b = PauliWord::parse("X0 Y1 Y2 Y3", n)?;
    println!("{} and {} commute: {}", a.to_text(), b.to_text(), a.commutes_with(&b));
    for s in [&a, &b] {
        match commutator(&pivot, s)? {
            Some((scalar, word)) => println!("[{}, {}] = {scalar} * {}", pivot.to_text(), s.to_text(), word.to_text()),
            None => println!("[{}, {}] = 0", pivot.to_text(), s.to_text()),
        }
    }
    if let (Some((_, ca)), Some((_, cb))) = (commutator(&pivot, &a)?, commutator(&pivot, &b)?) {
        println!("the two commutators commute: {}", ca.commutes_with(&cb));
    }
    println!("qubit-wise commuting X0X1 / X0Z2: {}", PauliWord::parse("X0 X1", n)?.qubit_wise_commutes_with(&PauliWord::parse("X0 Z2", n)?));
    Ok(())
}
