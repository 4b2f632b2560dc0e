use serde::Serialize;

use super::GradientGroup;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliWord};

/// Elementary Clifford gates used to rotate a commuting set into the
/// computational basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum CliffordGate {
    H { qubit: usize },
    S { qubit: usize },
    Sdg { qubit: usize },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
}

fn single(n: usize, q: usize, p: Pauli) -> PauliWord {
    let mut w = PauliWord::identity(n);
    w.set(q, p);
    w
}

fn pair(n: usize, a: usize, pa: Pauli, b: usize, pb: Pauli) -> PauliWord {
    let mut w = single(n, a, pa);
    w.set(b, pb);
    w
}

impl CliffordGate {
    pub fn is_entangling(self) -> bool {
        matches!(self, CliffordGate::Cnot { .. } | CliffordGate::Cz { .. })
    }

    pub fn qubits(self) -> Vec<usize> {
        match self {
            CliffordGate::H { qubit } | CliffordGate::S { qubit } | CliffordGate::Sdg { qubit } => vec![qubit],
            CliffordGate::Cnot { control, target } => vec![control, target],
            CliffordGate::Cz { a, b } => vec![a, b],
        }
    }

    /// `U X_q U†`
    fn image_x(self, n: usize, q: usize) -> PauliWord {
        match self {
            CliffordGate::H { qubit } if qubit == q => single(n, q, Pauli::Z),
            CliffordGate::S { qubit } if qubit == q => single(n, q, Pauli::Y),
            CliffordGate::Sdg { qubit } if qubit == q => single(n, q, Pauli::Y).with_phase(2),
            CliffordGate::Cnot { control, target } if control == q => pair(n, control, Pauli::X, target, Pauli::X),
            CliffordGate::Cz { a, b } if a == q => pair(n, a, Pauli::X, b, Pauli::Z),
            CliffordGate::Cz { a, b } if b == q => pair(n, a, Pauli::Z, b, Pauli::X),
            _ => single(n, q, Pauli::X),
        }
    }

    /// `U Z_q U†`
    fn image_z(self, n: usize, q: usize) -> PauliWord {
        match self {
            CliffordGate::H { qubit } if qubit == q => single(n, q, Pauli::X),
            CliffordGate::Cnot { control, target } if target == q => pair(n, control, Pauli::Z, target, Pauli::Z),
            _ => single(n, q, Pauli::Z),
        }
    }

    /// `U P U†`, phase included.
    pub fn conjugate(self, word: &PauliWord) -> PauliWord {
        let n = word.n_qubits();
        let touched = self.qubits();
        if word.factors().all(|(q, _)| !touched.contains(&q)) {
            return word.clone();
        }
        // P = i^(phase + #Y) · X^x · Z^z
        let y_count = word.count(Pauli::Y) as u8;
        let mut out = PauliWord::identity(n).with_phase((word.phase_power() + y_count) % 4);
        let factors: Vec<(usize, Pauli)> = word.factors().collect();
        for &(q, p) in &factors {
            if p.bits().0 {
                out = out.mul(&self.image_x(n, q));
            }
        }
        for &(q, p) in &factors {
            if p.bits().1 {
                out = out.mul(&self.image_z(n, q));
            }
        }
        out
    }
}

/// Gates to apply (in order) before a computational-basis measurement, and
/// the signed Z-only image of every observable word.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementRotation {
    pub gates: Vec<CliffordGate>,
    /// One entry per group observable, in observable order; phase 0 or 2.
    pub diagonal: Vec<PauliWord>,
    pub entangling_count: usize,
}

fn apply(gate: CliffordGate, words: &mut [PauliWord], gates: &mut Vec<CliffordGate>) {
    for w in words.iter_mut() {
        *w = gate.conjugate(w);
    }
    gates.push(gate);
}

fn has_x(word: &PauliWord) -> bool {
    word.x_mask().iter().any(|&m| m != 0)
}

/// Diagonalizes a commuting list of words by Gaussian elimination on the
/// symplectic representation. Qubit-wise commuting lists need no entangling
/// gates.
pub fn diagonalize_words(words: &[PauliWord]) -> Result<MeasurementRotation> {
    let Some(n) = words.first().map(PauliWord::n_qubits) else {
        return Ok(MeasurementRotation {
            gates: Vec::new(),
            diagonal: Vec::new(),
            entangling_count: 0,
        });
    };
    for (k, a) in words.iter().enumerate() {
        for b in &words[k + 1..] {
            if b.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: b.n_qubits(),
                });
            }
            if !a.commutes_with(b) {
                return Err(Error::NonCommutingGroup { group_id: 0 });
            }
        }
    }
    let mut current = words.to_vec();
    let mut gates = Vec::new();

    for q in 0..n {
        let letters: Vec<Pauli> = current.iter().map(|w| w.get(q)).filter(|&p| p != Pauli::I).collect();
        if letters.is_empty() {
            continue;
        }
        if letters.iter().all(|&p| p == Pauli::X) {
            apply(CliffordGate::H { qubit: q }, &mut current, &mut gates);
        } else if letters.iter().all(|&p| p == Pauli::Y) {
            apply(CliffordGate::Sdg { qubit: q }, &mut current, &mut gates);
            apply(CliffordGate::H { qubit: q }, &mut current, &mut gates);
        }
    }

    while let Some(k) = current.iter().position(has_x) {
        let pivot_word = &current[k];
        let x_qubits: Vec<usize> = pivot_word.factors().filter(|(_, p)| p.bits().0).map(|(q, _)| q).collect();
        let q = x_qubits[0];
        for &t in &x_qubits[1..] {
            apply(CliffordGate::Cnot { control: q, target: t }, &mut current, &mut gates);
        }
        if current[k].get(q) == Pauli::Y {
            apply(CliffordGate::Sdg { qubit: q }, &mut current, &mut gates);
        }
        let z_qubits: Vec<usize> = current[k]
            .factors()
            .filter(|&(t, p)| t != q && p == Pauli::Z)
            .map(|(t, _)| t)
            .collect();
        for t in z_qubits {
            apply(CliffordGate::Cz { a: q, b: t }, &mut current, &mut gates);
        }
        apply(CliffordGate::H { qubit: q }, &mut current, &mut gates);
    }

    let entangling_count = gates.iter().filter(|g| g.is_entangling()).count();
    Ok(MeasurementRotation {
        gates,
        diagonal: current,
        entangling_count,
    })
}

pub fn synthesize_measurement_rotation(group: &GradientGroup) -> Result<MeasurementRotation> {
    let words: Vec<PauliWord> = group.observables.iter().map(|o| o.word.clone()).collect();
    diagonalize_words(&words).map_err(|e| match e {
        Error::NonCommutingGroup { .. } => Error::NonCommutingGroup {
            group_id: group.group_id,
        },
        other => other,
    })
}
