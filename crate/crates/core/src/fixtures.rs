//! Random words, states and Hamiltonians for experiments and self-checks.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::operator::WeightedPauliSum;
use crate::pauli::{Pauli, PauliWord};
use crate::sim::StateVector;

fn random_pauli(rng: &mut impl Rng) -> Pauli {
    match rng.random_range(0..4) {
        0 => Pauli::I,
        1 => Pauli::X,
        2 => Pauli::Y,
        _ => Pauli::Z,
    }
}

/// Uniform over the `4^n` phase-free words.
pub fn random_word(n: usize, rng: &mut impl Rng) -> PauliWord {
    let mut w = PauliWord::identity(n);
    for q in 0..n {
        w.set(q, random_pauli(rng));
    }
    w
}

/// A uniformly drawn word that commutes with `other`.
pub fn random_commuting_word(other: &PauliWord, rng: &mut impl Rng) -> PauliWord {
    loop {
        let w = random_word(other.n_qubits(), rng);
        if w.commutes_with(other) {
            return w;
        }
    }
}

/// `terms` distinct non-identity words with coefficients uniform in `[-1, 1)`.
/// With `real_only`, words carry an even number of `Y` so the matrix is real.
pub fn random_hamiltonian(n: usize, terms: usize, real_only: bool, rng: &mut impl Rng) -> Result<WeightedPauliSum> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(terms);
    let available = if real_only { (4usize.pow(n as u32) + 2usize.pow(n as u32)) / 2 - 1 } else { 4usize.pow(n as u32) - 1 };
    while out.len() < terms.min(available) {
        let w = random_word(n, rng);
        if w.is_identity() || (real_only && w.count(Pauli::Y) % 2 == 1) || !seen.insert(w.clone()) {
            continue;
        }
        out.push((rng.random_range(-1.0..1.0), w));
    }
    WeightedPauliSum::new(n, out)
}

/// Gaussian-distributed amplitudes, normalized.
pub fn random_state(n: usize, rng: &mut impl Rng) -> Result<StateVector> {
    let amps = (0..1usize << n)
        .map(|_| {
            let (a, b): (f64, f64) = (rng.random(), rng.random());
            let r = (-2.0 * (1.0 - a).ln()).sqrt();
            let t = std::f64::consts::TAU * b;
            Complex64::new(r * t.cos(), r * t.sin())
        })
        .collect();
    StateVector::from_amplitudes(n, amps)
}

/// Occupation list of the computational basis state with the lowest energy.
pub fn lowest_basis_occupation(h: &WeightedPauliSum) -> Result<Vec<usize>> {
    let n = h.n_qubits();
    let mut best = (f64::INFINITY, 0usize);
    for b in 0..1usize << n {
        let e: f64 = h
            .terms()
            .iter()
            .filter(|(_, w)| w.x_bits() == 0)
            .map(|(c, w)| if (w.z_bits() & b as u64).count_ones() % 2 == 1 { -c } else { *c })
            .sum();
        if e < best.0 {
            best = (e, b);
        }
    }
    Ok((0..n).filter(|q| best.1 >> q & 1 == 1).collect())
}
