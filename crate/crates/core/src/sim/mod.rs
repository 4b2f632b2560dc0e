//! Dense statevector simulation: ansatz preparation, expectation values,
//! exact gradients, joint sampling of commuting groups and exact ground
//! states.
//!
//! Basis index bit `q` holds qubit `q`, so `|b⟩` with bit `q` set has qubit
//! `q` in `|1⟩`.

mod ground;
mod sampling;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grouping::CliffordGate;
use crate::operator::{AntihermitianSum, WeightedPauliSum};
use crate::pauli::PauliWord;

pub use ground::{exact_ground_state, hamiltonian_matrix, DENSE_EIGEN_LIMIT, GROUND_STATE_LIMIT};
pub use sampling::{
    estimate_pool_gradients, rotated_joint_samples, sample_group, sample_group_rotated, sample_group_sequential,
    sequential_joint_samples, GradientEstimate, GradientEstimates, GroupSampleResult, Histogram, JointDistribution,
    ObservableStats, ENUMERATION_QUBIT_LIMIT,
};

/// Largest register a statevector is allocated for.
pub const MAX_QUBITS: usize = 26;

const PAR_THRESHOLD: usize = 1 << 14;

/// `P|b⟩ = phase(b)·|b ⊕ x⟩` for a word of at most 64 qubits.
#[derive(Clone, Copy, Debug)]
pub(crate) struct WordAction {
    pub x: u64,
    pub z: u64,
    /// `i^k` for the `b`-independent part.
    pub base: Complex64,
}

impl WordAction {
    pub fn new(word: &PauliWord) -> Self {
        let x = word.x_bits();
        let z = word.z_bits();
        let k = (word.phase_power() as u32 + (x & z).count_ones()) % 4;
        WordAction {
            x,
            z,
            base: crate::pauli::phase_factor(k as u8),
        }
    }

    #[inline]
    pub fn factor(&self, b: usize) -> Complex64 {
        if (b as u64 & self.z).count_ones() % 2 == 1 {
            -self.base
        } else {
            self.base
        }
    }

    /// Real-valued `±1` of a diagonal word on basis state `b`; only
    /// meaningful when `x == 0` and the phase is 0 or 2.
    #[inline]
    pub fn diagonal_sign(&self, b: usize) -> f64 {
        self.factor(b).re
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooLarge {
            n_qubits: n,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    if a.len() >= PAR_THRESHOLD {
        a.par_iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    } else {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }
}

/// `out += coeff · P ψ`.
pub(crate) fn accumulate_word(out: &mut [Complex64], psi: &[Complex64], action: &WordAction, coeff: Complex64) {
    let x = action.x as usize;
    let body = |(b, o): (usize, &mut Complex64)| {
        let src = b ^ x;
        *o += coeff * action.factor(src) * psi[src];
    };
    if out.len() >= PAR_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(body);
    } else {
        out.iter_mut().enumerate().for_each(body);
    }
}

/// `⟨ψ|P|ψ⟩` for a Hermitian word.
pub(crate) fn word_expectation_raw(psi: &[Complex64], action: &WordAction) -> f64 {
    let x = action.x as usize;
    let term = |b: usize| (psi[b ^ x].conj() * action.factor(b) * psi[b]).re;
    if psi.len() >= PAR_THRESHOLD {
        (0..psi.len()).into_par_iter().map(term).sum()
    } else {
        (0..psi.len()).map(term).sum()
    }
}

/// `ψ ← e^{i·angle·P} ψ = cos(angle)ψ + i·sin(angle)·Pψ`.
pub(crate) fn rotate_raw(psi: &mut [Complex64], action: &WordAction, angle: f64) {
    let (s, c) = angle.sin_cos();
    let is = Complex64::new(0.0, s);
    let x = action.x as usize;
    if x == 0 {
        for (b, amp) in psi.iter_mut().enumerate() {
            *amp *= c + is * action.factor(b);
        }
        return;
    }
    let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
    for b in 0..psi.len() {
        if b & top != 0 {
            continue;
        }
        let partner = b ^ x;
        let (pb, pp) = (psi[b], psi[partner]);
        psi[b] = c * pb + is * action.factor(partner) * pp;
        psi[partner] = c * pp + is * action.factor(b) * pb;
    }
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} outside a {n_qubits}-qubit register")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits)?;
        check_dims(1 << n_qubits, amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NonFinite("state has zero or non-finite norm".into()));
        }
        Ok(StateVector {
            n_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    fn check_word(&self, word: &PauliWord) -> Result<()> {
        check_dims(self.n_qubits, word.n_qubits())
    }

    /// `ψ ← Pψ`, phase included.
    pub fn apply_word(&mut self, word: &PauliWord) -> Result<()> {
        self.check_word(word)?;
        let action = WordAction::new(word);
        let x = action.x as usize;
        let old = self.amplitudes.clone();
        for (b, amp) in self.amplitudes.iter_mut().enumerate() {
            *amp = action.factor(b ^ x) * old[b ^ x];
        }
        Ok(())
    }

    /// `ψ ← e^{i·angle·P}ψ` for a Hermitian word `P`.
    pub fn apply_pauli_rotation(&mut self, word: &PauliWord, angle: f64) -> Result<()> {
        self.check_word(word)?;
        if !word.is_hermitian() {
            return Err(Error::InvalidArgument(format!("rotation word {word} is not Hermitian")));
        }
        rotate_raw(&mut self.amplitudes, &WordAction::new(word), angle);
        Ok(())
    }

    /// `ψ ← e^{θA}ψ` with `A = i·Σ c_k P_k`; the words must commute so the
    /// exponential factorizes exactly.
    pub fn apply_generator_exponential(&mut self, generator: &AntihermitianSum, theta: f64) -> Result<()> {
        check_dims(self.n_qubits, generator.n_qubits())?;
        if !generator.terms_commute() {
            return Err(Error::NonCommutingGenerator);
        }
        for (c, word) in generator.terms() {
            rotate_raw(&mut self.amplitudes, &WordAction::new(word), c * theta);
        }
        Ok(())
    }

    /// `Oψ` as a raw amplitude vector.
    pub fn apply_sum(&self, op: &WeightedPauliSum) -> Result<Vec<Complex64>> {
        check_dims(self.n_qubits, op.n_qubits())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (c, word) in op.terms() {
            accumulate_word(&mut out, &self.amplitudes, &WordAction::new(word), Complex64::new(*c, 0.0));
        }
        Ok(out)
    }

    /// `Aψ` with `A = i·Σ c P`.
    pub fn apply_generator(&self, generator: &AntihermitianSum) -> Result<Vec<Complex64>> {
        check_dims(self.n_qubits, generator.n_qubits())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (c, word) in generator.terms() {
            accumulate_word(&mut out, &self.amplitudes, &WordAction::new(word), Complex64::new(0.0, *c));
        }
        Ok(out)
    }

    pub fn word_expectation(&self, word: &PauliWord) -> Result<f64> {
        self.check_word(word)?;
        Ok(word_expectation_raw(&self.amplitudes, &WordAction::new(word)))
    }

    pub fn expectation(&self, op: &WeightedPauliSum) -> Result<f64> {
        check_dims(self.n_qubits, op.n_qubits())?;
        Ok(op
            .terms()
            .iter()
            .map(|(c, w)| c * word_expectation_raw(&self.amplitudes, &WordAction::new(w)))
            .sum())
    }

    /// `⟨[H, A]⟩ = 2·Re⟨Hψ|Aψ⟩`, the derivative of `⟨e^{−θA} H e^{θA}⟩` at 0.
    pub fn exact_gradient(&self, h: &WeightedPauliSum, generator: &AntihermitianSum) -> Result<f64> {
        let h_psi = self.apply_sum(h)?;
        self.gradient_with(&h_psi, generator)
    }

    /// Same as [`exact_gradient`](Self::exact_gradient) with `Hψ` precomputed.
    pub fn gradient_with(&self, h_psi: &[Complex64], generator: &AntihermitianSum) -> Result<f64> {
        check_dims(self.dim(), h_psi.len())?;
        let a_psi = self.apply_generator(generator)?;
        Ok(2.0 * inner(h_psi, &a_psi).re)
    }

    pub fn apply_clifford(&mut self, gate: CliffordGate) -> Result<()> {
        let qubits = gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        let amps = &mut self.amplitudes;
        let i = Complex64::new(0.0, 1.0);
        match gate {
            CliffordGate::H { qubit } => {
                let m = 1usize << qubit;
                let r = std::f64::consts::FRAC_1_SQRT_2;
                for b in (0..amps.len()).filter(|b| b & m == 0) {
                    let (a0, a1) = (amps[b], amps[b | m]);
                    amps[b] = (a0 + a1) * r;
                    amps[b | m] = (a0 - a1) * r;
                }
            }
            CliffordGate::S { qubit } | CliffordGate::Sdg { qubit } => {
                let m = 1usize << qubit;
                let phase = if matches!(gate, CliffordGate::S { .. }) { i } else { -i };
                for (b, a) in amps.iter_mut().enumerate() {
                    if b & m != 0 {
                        *a *= phase;
                    }
                }
            }
            CliffordGate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for b in 0..amps.len() {
                    if b & c != 0 && b & t == 0 {
                        amps.swap(b, b | t);
                    }
                }
            }
            CliffordGate::Cz { a, b: other } => {
                let m = (1usize << a) | (1usize << other);
                for (b, amp) in amps.iter_mut().enumerate() {
                    if b & m == m {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    /// `|amplitude|²` per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Basis state with ones on `occupied`.
pub fn prepare_reference(n_qubits: usize, occupied: &[usize]) -> Result<StateVector> {
    let mut index = 0usize;
    for &q in occupied {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        index |= 1 << q;
    }
    StateVector::basis(n_qubits, index)
}
