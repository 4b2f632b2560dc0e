//! N-qubit Pauli words in the symplectic bit-pair encoding.
//!
//! A word stores two bit masks: bit `q` of `x` is set when qubit `q` carries
//! `X` or `Y`, bit `q` of `z` when it carries `Z` or `Y`. The represented
//! operator is `i^phase · σ_0 ⊗ σ_1 ⊗ …` where `σ(1,1)` is the Hermitian `Y`,
//! so a word is Hermitian exactly when `phase` is even.
//!
//! Masks live in `u64` chunks, so products and commutation tests cost
//! `O(n / 64)` word operations.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const BITS: usize = 64;

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Powers of `i`, indexed by `phase_power`.
pub fn phase_factor(power: u8) -> Complex64 {
    match power & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn chunks(n_qubits: usize) -> usize {
    n_qubits.div_ceil(BITS).max(1)
}

fn check_dims(a: &PauliWord, b: &PauliWord) -> Result<()> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::DimensionMismatch {
            left: a.n_qubits,
            right: b.n_qubits,
        });
    }
    Ok(())
}

impl PauliWord {
    pub fn identity(n_qubits: usize) -> Self {
        let len = chunks(n_qubits);
        Self {
            n_qubits,
            x: vec![0; len],
            z: vec![0; len],
            phase: 0,
        }
    }

    /// Builds a phase-free word from `(qubit, factor)` pairs. Identity factors
    /// are accepted and ignored, but every index must be distinct.
    pub fn from_paulis<I>(n_qubits: usize, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Pauli)>,
    {
        let mut word = Self::identity(n_qubits);
        let mut seen = vec![false; n_qubits];
        for (q, p) in factors {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit { index: q });
            }
            seen[q] = true;
            word.set(q, p);
        }
        Ok(word)
    }

    /// Builds a word from a dense letter list, qubit 0 first (`"XIZY"`).
    pub fn from_letters(letters: &str) -> Result<Self> {
        let n = letters.chars().count();
        let mut factors = Vec::with_capacity(n);
        for (q, c) in letters.chars().enumerate() {
            let p = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => {
                    return Err(Error::MalformedToken {
                        token: letters.to_string(),
                    })
                }
            };
            factors.push((q, p));
        }
        Self::from_paulis(n, factors)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    pub fn x_mask(&self) -> &[u64] {
        &self.x
    }

    pub fn z_mask(&self) -> &[u64] {
        &self.z
    }

    /// Low 64 bits of the x mask; the statevector engine never exceeds them.
    pub fn x_bits(&self) -> u64 {
        self.x[0]
    }

    pub fn z_bits(&self) -> u64 {
        self.z[0]
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// The same tensor product with the global phase stripped.
    pub fn unphased(&self) -> Self {
        self.clone().with_phase(0)
    }

    pub fn phase_factor(&self) -> Complex64 {
        phase_factor(self.phase)
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n_qubits, "qubit {q} out of range");
        let (c, b) = (q / BITS, q % BITS);
        Pauli::from_bits(self.x[c] >> b & 1 == 1, self.z[c] >> b & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n_qubits, "qubit {q} out of range");
        let (c, b) = (q / BITS, q % BITS);
        let (x, z) = p.bits();
        self.x[c] = (self.x[c] & !(1 << b)) | ((x as u64) << b);
        self.z[c] = (self.z[c] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// True when the represented matrix equals its adjoint.
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn count(&self, p: Pauli) -> usize {
        if p == Pauli::I {
            return self.n_qubits - self.weight();
        }
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| {
                let m = match p {
                    Pauli::X => x & !z,
                    Pauli::Y => x & z,
                    _ => !x & z,
                };
                m.count_ones() as usize
            })
            .sum()
    }

    /// Non-identity factors in ascending qubit order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        (0..self.n_qubits).filter_map(move |q| match self.get(q) {
            Pauli::I => None,
            p => Some((q, p)),
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.factors().map(|(q, _)| q).collect()
    }

    /// Product `self · other` with the phase accumulated exactly.
    ///
    /// Panics on a dimension mismatch; see [`multiply`] for the checked form.
    pub fn mul(&self, other: &PauliWord) -> PauliWord {
        assert_eq!(self.n_qubits, other.n_qubits, "dimension mismatch");
        let mut phase = self.phase as i64 + other.phase as i64;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for c in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[c], self.z[c], other.x[c], other.z[c]);
            let (xa, ya, za) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (xb, yb, zb) = (x2 & !z2, x2 & z2, !x2 & z2);
            // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
            let plus = (xa & yb) | (ya & zb) | (za & xb);
            let minus = (xa & zb) | (ya & xb) | (za & yb);
            phase += plus.count_ones() as i64 - minus.count_ones() as i64;
            x.push(x1 ^ x2);
            z.push(z1 ^ z2);
        }
        PauliWord {
            n_qubits: self.n_qubits,
            x,
            z,
            phase: phase.rem_euclid(4) as u8,
        }
    }

    /// Parity of the symplectic form. Panics on a dimension mismatch.
    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        assert_eq!(self.n_qubits, other.n_qubits, "dimension mismatch");
        let mut parity = 0u32;
        for c in 0..self.x.len() {
            parity ^= ((self.x[c] & other.z[c]) ^ (self.z[c] & other.x[c])).count_ones() & 1;
        }
        parity == 0
    }

    /// Every qubit carries equal factors or at least one identity.
    pub fn qubit_wise_commutes_with(&self, other: &PauliWord) -> bool {
        assert_eq!(self.n_qubits, other.n_qubits, "dimension mismatch");
        (0..self.x.len()).all(|c| {
            let both = (self.x[c] | self.z[c]) & (other.x[c] | other.z[c]);
            let differ = (self.x[c] ^ other.x[c]) | (self.z[c] ^ other.z[c]);
            both & differ == 0
        })
    }

    /// Canonical text: ascending qubit index, `I` for the identity. The phase
    /// is not part of the text grammar; see `Display` for a phase-prefixed form.
    pub fn to_text(&self) -> String {
        let tokens: Vec<String> = self
            .factors()
            .map(|(q, p)| format!("{}{}", p.letter(), q))
            .collect();
        if tokens.is_empty() {
            "I".to_string()
        } else {
            tokens.join(" ")
        }
    }

    /// Parses whitespace-separated `[XYZ]<uint>` tokens or the lone token `I`.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let tokens = parse_tokens(text)?;
        Self::from_paulis(n_qubits, tokens)
    }
}

/// Tokenizes Pauli text without fixing the register size.
pub fn parse_tokens(text: &str) -> Result<Vec<(usize, Pauli)>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::MalformedToken {
            token: text.to_string(),
        });
    }
    if tokens == ["I"] {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(tokens.len());
    let mut seen = std::collections::BTreeSet::new();
    for tok in tokens {
        let mut chars = tok.chars();
        let p = match chars.next() {
            Some('X') => Pauli::X,
            Some('Y') => Pauli::Y,
            Some('Z') => Pauli::Z,
            _ => {
                return Err(Error::MalformedToken {
                    token: tok.to_string(),
                })
            }
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::MalformedToken {
                token: tok.to_string(),
            });
        }
        let q: usize = digits.parse().map_err(|_| Error::MalformedToken {
            token: tok.to_string(),
        })?;
        if !seen.insert(q) {
            return Err(Error::DuplicateQubit { index: q });
        }
        out.push((q, p));
    }
    Ok(out)
}

fn cmp_mask(a: &[u64], b: &[u64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Canonical word order: register size, then the x mask and the z mask
/// compared as unsigned integers, then phase. Grouping heuristics break ties
/// with this order.
impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| cmp_mask(&self.x, &other.x))
            .then_with(|| cmp_mask(&self.z, &other.z))
            .then_with(|| self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i ",
            2 => "-",
            _ => "-i ",
        };
        write!(f, "{prefix}{}", self.to_text())
    }
}

impl Serialize for PauliWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses with the register sized to the largest index present.
impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = parse_tokens(s)?;
        let n = tokens.iter().map(|(q, _)| q + 1).max().unwrap_or(1);
        Self::from_paulis(n, tokens)
    }
}

pub fn multiply(a: &PauliWord, b: &PauliWord) -> Result<PauliWord> {
    check_dims(a, b)?;
    Ok(a.mul(b))
}

pub fn commutes(a: &PauliWord, b: &PauliWord) -> Result<bool> {
    check_dims(a, b)?;
    Ok(a.commutes_with(b))
}

pub fn qubit_wise_commutes(a: &PauliWord, b: &PauliWord) -> Result<bool> {
    check_dims(a, b)?;
    Ok(a.qubit_wise_commutes_with(b))
}

/// `[a, b]` as `(scalar, word)` with the word phase-free, or `None` when the
/// pair commutes. For anticommuting words `[a, b] = 2ab`.
pub fn commutator(a: &PauliWord, b: &PauliWord) -> Result<Option<(Complex64, PauliWord)>> {
    check_dims(a, b)?;
    if a.commutes_with(b) {
        return Ok(None);
    }
    let prod = a.mul(b);
    let scalar = prod.phase_factor() * 2.0;
    Ok(Some((scalar, prod.with_phase(0))))
}
