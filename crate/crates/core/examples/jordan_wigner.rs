//! Fermionic excitation generators under Jordan-Wigner and their qubit
//! (parity-string-free) counterparts.

use pivotgrad::jw::{jw_double_excitation, jw_single_excitation, qubit_double_excitation, qubit_single_excitation};
use pivotgrad::{AntihermitianSum, Result};

fn show(name: &str, a: &AntihermitianSum) {
    println!("{name}:");
    for (c, w) in a.terms() {
        println!("  {c:+.3} i {}", w.to_text());
    }
}

fn main() -> Result<()> {
    let n = 6;
    show("fermionic single 0 -> 3", &jw_single_excitation(0, 3, n)?);
    show("qubit single 0 -> 3", &qubit_single_excitation(0, 3, n)?);
    show("fermionic double (0,2) -> (3,5)", &jw_double_excitation(0, 2, 3, 5, n)?);
    show("qubit double (0,2) -> (3,5)", &qubit_double_excitation(0, 2, 3, 5, n)?);
    Ok(())
}
