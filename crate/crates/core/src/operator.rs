//! Real-weighted sums of Pauli words: Hermitian observables and
//! antihermitian generators.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::PauliWord;

/// Coefficients below this magnitude are dropped on construction.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

/// Folds duplicate words together, keeping first-appearance order, and
/// normalizes `-P` to `P` with a negated weight.
fn combine<I>(n_qubits: usize, terms: I) -> Result<Vec<(f64, PauliWord)>>
where
    I: IntoIterator<Item = (f64, PauliWord)>,
{
    let mut out: Vec<(f64, PauliWord)> = Vec::new();
    let mut index: HashMap<PauliWord, usize> = HashMap::new();
    for (c, word) in terms {
        if word.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch {
                left: n_qubits,
                right: word.n_qubits(),
            });
        }
        if !c.is_finite() {
            return Err(Error::NonFinite(format!("coefficient of {word}")));
        }
        let c = match word.phase_power() {
            0 => c,
            2 => -c,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "word {word} is not Hermitian; fold the phase into the coefficient"
                )))
            }
        };
        let word = word.unphased();
        match index.get(&word) {
            Some(&k) => out[k].0 += c,
            None => {
                index.insert(word.clone(), out.len());
                out.push((c, word));
            }
        }
    }
    out.retain(|(c, _)| c.abs() >= PRUNE_TOLERANCE);
    Ok(out)
}

/// `H = Σ_j h_j P_j` with real `h_j` and distinct phase-free words.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedPauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliWord)>,
}

impl WeightedPauliSum {
    pub fn new<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliWord)>,
    {
        Ok(Self {
            n_qubits,
            terms: combine(n_qubits, terms)?,
        })
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliWord)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_j |h_j|`, the naive-VQE cost scale.
    pub fn abs_sum(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.n_qubits, self.terms.iter().map(|(c, w)| (c * factor, w.clone())))
            .expect("scaling preserves validity")
    }

    pub fn add(&self, other: &WeightedPauliSum) -> Result<Self> {
        Self::new(
            self.n_qubits,
            self.terms.iter().chain(&other.terms).cloned(),
        )
    }

    /// Terms ordered by descending magnitude, ties by canonical word order.
    pub fn sorted_by_magnitude(&self) -> Vec<(f64, PauliWord)> {
        let mut v = self.terms.clone();
        v.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()).then_with(|| a.1.cmp(&b.1)));
        v
    }
}

/// `A = i · Σ_k c_k P_k` with real `c_k`; antihermitian by construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntihermitianSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliWord)>,
}

impl AntihermitianSum {
    pub fn new<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliWord)>,
    {
        Ok(Self {
            n_qubits,
            terms: combine(n_qubits, terms)?,
        })
    }

    /// `i · word`
    pub fn single(word: PauliWord) -> Self {
        let n = word.n_qubits();
        Self::new(n, [(1.0, word)]).expect("single Hermitian word")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliWord)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms_commute(&self) -> bool {
        self.terms.iter().enumerate().all(|(k, (_, a))| {
            self.terms[k + 1..].iter().all(|(_, b)| a.commutes_with(b))
        })
    }
}

/// Complex-weighted Pauli sum used to expand products of ladder operators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexPauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl ComplexPauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Complex64, PauliWord)>,
    {
        let mut s = Self::zero(n_qubits);
        for (c, w) in terms {
            s.add_term(c, w);
        }
        s
    }

    pub fn add_term(&mut self, c: Complex64, word: PauliWord) {
        assert_eq!(word.n_qubits(), self.n_qubits, "dimension mismatch");
        let c = c * word.phase_factor();
        *self.terms.entry(word.unphased()).or_default() += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &ComplexPauliSum) -> ComplexPauliSum {
        let mut out = Self::zero(self.n_qubits);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(ca * cb, a.mul(b));
            }
        }
        out.pruned()
    }

    pub fn sub(&self, other: &ComplexPauliSum) -> ComplexPauliSum {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(-c, w.clone());
        }
        out.pruned()
    }

    pub fn add(&self, other: &ComplexPauliSum) -> ComplexPauliSum {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*c, w.clone());
        }
        out.pruned()
    }

    pub fn scale(&self, s: Complex64) -> ComplexPauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.pruned()
    }

    /// Pauli words are Hermitian, so the adjoint conjugates the weights.
    pub fn adjoint(&self) -> ComplexPauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOLERANCE);
        self
    }

    pub fn into_hermitian(self) -> Result<WeightedPauliSum> {
        let n = self.n_qubits;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (w, c) in self.terms {
            if c.im.abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "operator is not Hermitian: {w} has weight {c}"
                )));
            }
            terms.push((c.re, w));
        }
        WeightedPauliSum::new(n, terms)
    }

    pub fn into_antihermitian(self) -> Result<AntihermitianSum> {
        let n = self.n_qubits;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (w, c) in self.terms {
            if c.re.abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "operator is not antihermitian: {w} has weight {c}"
                )));
            }
            terms.push((c.im, w));
        }
        AntihermitianSum::new(n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(t: &str, n: usize) -> PauliWord {
        PauliWord::parse(t, n).unwrap()
    }

    #[test]
    fn duplicates_combine_and_cancellations_prune() {
        let h = WeightedPauliSum::new(
            2,
            [(0.5, w("Z0", 2)), (0.5, w("Z0", 2)), (1.0, w("X1", 2)), (-1.0, w("X1", 2))],
        )
        .unwrap();
        assert_eq!(h.terms(), &[(1.0, w("Z0", 2))]);
    }

    #[test]
    fn negative_phase_folds_into_weight() {
        let h = WeightedPauliSum::new(1, [(2.0, w("Z0", 1).with_phase(2))]).unwrap();
        assert_eq!(h.terms(), &[(-2.0, w("Z0", 1))]);
        assert!(WeightedPauliSum::new(1, [(2.0, w("Z0", 1).with_phase(1))]).is_err());
    }

    #[test]
    fn mismatched_words_are_rejected() {
        assert!(matches!(
            WeightedPauliSum::new(2, [(1.0, w("Z0", 3))]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn abs_sum_and_sorting() {
        let h = WeightedPauliSum::new(2, [(0.1, w("Z0", 2)), (-2.0, w("X1", 2)), (1.0, w("I", 2))])
            .unwrap();
        assert!((h.abs_sum() - 3.1).abs() < 1e-15);
        let sorted: Vec<f64> = h.sorted_by_magnitude().iter().map(|t| t.0).collect();
        assert_eq!(sorted, [-2.0, 1.0, 0.1]);
    }

    #[test]
    fn complex_sum_products() {
        // (X + iY)/2 · (X - iY)/2 = (I + Z)/2
        let half = Complex64::new(0.5, 0.0);
        let lower = ComplexPauliSum::from_terms(1, [(half, w("X0", 1)), (Complex64::new(0.0, 0.5), w("Y0", 1))]);
        let raise = lower.adjoint();
        let n = lower.mul(&raise).into_hermitian().unwrap();
        assert_eq!(n.terms(), &[(0.5, w("I", 1)), (0.5, w("Z0", 1))]);
    }
}
