//! Jordan–Wigner images of fermionic excitations and Hamiltonian terms.
//!
//! Convention: qubit `p` is spin-orbital `p`, `|1⟩` is occupied, and
//! `a_p = Z_0 ⋯ Z_{p-1} (X_p + iY_p)/2`. Under it the closed forms below
//! match the ladder-operator products exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{AntihermitianSum, ComplexPauliSum, WeightedPauliSum};
use crate::pauli::{Pauli, PauliWord};

const DOUBLE_PATTERN: [(&str, f64); 8] = [
    ("XYXX", 1.0),
    ("YXXX", 1.0),
    ("YYYX", 1.0),
    ("YYXY", 1.0),
    ("XXYX", -1.0),
    ("XXXY", -1.0),
    ("YXYY", -1.0),
    ("XYYY", -1.0),
];

const TWO_BODY_PATTERN: [(&str, f64); 8] = [
    ("YYXX", 1.0),
    ("XXYY", 1.0),
    ("XXXX", -1.0),
    ("YXYX", -1.0),
    ("XYYX", -1.0),
    ("YXXY", -1.0),
    ("XYXY", -1.0),
    ("YYYY", -1.0),
];

fn letter(c: char) -> Pauli {
    match c {
        'X' => Pauli::X,
        'Y' => Pauli::Y,
        'Z' => Pauli::Z,
        _ => Pauli::I,
    }
}

/// Places `pattern[k]` on `positions[k]` and `Z` on every qubit of `z_string`.
fn placed(n: usize, pattern: &str, positions: &[usize], z_string: &[usize]) -> PauliWord {
    let mut word = PauliWord::identity(n);
    for &q in z_string {
        word.set(q, Pauli::Z);
    }
    for (c, &q) in pattern.chars().zip(positions) {
        word.set(q, letter(c));
    }
    word
}

fn between(lo: usize, hi: usize) -> impl Iterator<Item = usize> {
    lo + 1..hi
}

fn check_range(indices: &[usize], n: usize) -> Result<()> {
    if indices.iter().any(|&q| q >= n) {
        return Err(Error::InvalidIndices {
            indices: indices.to_vec(),
            reason: "index out of range",
        });
    }
    Ok(())
}

fn check_increasing(indices: &[usize], n: usize) -> Result<()> {
    check_range(indices, n)?;
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidIndices {
            indices: indices.to_vec(),
            reason: "indices must be strictly increasing",
        });
    }
    Ok(())
}

fn check_distinct(indices: &[usize], n: usize) -> Result<()> {
    check_range(indices, n)?;
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidIndices {
            indices: indices.to_vec(),
            reason: "indices must be distinct",
        });
    }
    Ok(())
}

/// `a†_i a_j − a†_j a_i = (i/2)(X_i Y_j − Y_i X_j) ∏_{i<p<j} Z_p` for `i < j`.
pub fn jw_single_excitation(i: usize, j: usize, n: usize) -> Result<AntihermitianSum> {
    check_increasing(&[i, j], n)?;
    let z: Vec<usize> = between(i, j).collect();
    AntihermitianSum::new(
        n,
        [
            (0.5, placed(n, "XY", &[i, j], &z)),
            (-0.5, placed(n, "YX", &[i, j], &z)),
        ],
    )
}

/// `a†_i a†_j a_k a_l − a†_l a†_k a_j a_i` for `i < j < k < l`: eight words of
/// weight ±1/8 with parity strings between `i, j` and between `k, l`.
pub fn jw_double_excitation(i: usize, j: usize, k: usize, l: usize, n: usize) -> Result<AntihermitianSum> {
    check_increasing(&[i, j, k, l], n)?;
    let z: Vec<usize> = between(i, j).chain(between(k, l)).collect();
    AntihermitianSum::new(
        n,
        DOUBLE_PATTERN
            .iter()
            .map(|&(p, s)| (s / 8.0, placed(n, p, &[i, j, k, l], &z))),
    )
}

/// `coeff · (a†_p a†_q a_r a_s + h.c.)` for `p > q > r > s`.
pub fn jw_two_body_term(p: usize, q: usize, r: usize, s: usize, coeff: f64, n: usize) -> Result<WeightedPauliSum> {
    check_increasing(&[s, r, q, p], n)?;
    let z: Vec<usize> = between(s, r).chain(between(q, p)).collect();
    WeightedPauliSum::new(
        n,
        TWO_BODY_PATTERN
            .iter()
            .map(|&(pat, sign)| (coeff * sign / 8.0, placed(n, pat, &[p, q, r, s], &z))),
    )
}

/// `coeff · a†_p a_p` when `p == q`, otherwise `coeff · (a†_p a_q + a†_q a_p)`;
/// requires `p ≥ q`.
pub fn jw_one_body_term(p: usize, q: usize, coeff: f64, n: usize) -> Result<WeightedPauliSum> {
    check_range(&[p, q], n)?;
    if p < q {
        return Err(Error::InvalidIndices {
            indices: vec![p, q],
            reason: "one-body term requires p >= q",
        });
    }
    if p == q {
        return WeightedPauliSum::new(
            n,
            [
                (coeff / 2.0, PauliWord::identity(n)),
                (-coeff / 2.0, placed(n, "Z", &[p], &[])),
            ],
        );
    }
    let z: Vec<usize> = between(q, p).collect();
    WeightedPauliSum::new(
        n,
        [
            (coeff / 2.0, placed(n, "XX", &[q, p], &z)),
            (coeff / 2.0, placed(n, "YY", &[q, p], &z)),
        ],
    )
}

/// `a_p` expanded as a two-word complex sum.
pub fn annihilation(p: usize, n: usize) -> ComplexPauliSum {
    let z: Vec<usize> = (0..p).collect();
    ComplexPauliSum::from_terms(
        n,
        [
            (Complex64::new(0.5, 0.0), placed(n, "X", &[p], &z)),
            (Complex64::new(0.0, 0.5), placed(n, "Y", &[p], &z)),
        ],
    )
}

pub fn creation(p: usize, n: usize) -> ComplexPauliSum {
    annihilation(p, n).adjoint()
}

/// `a†_i a†_j a_k a_l − h.c.` for any four distinct indices, built by
/// multiplying out ladder operators.
pub fn fermionic_double_excitation(i: usize, j: usize, k: usize, l: usize, n: usize) -> Result<AntihermitianSum> {
    check_distinct(&[i, j, k, l], n)?;
    let t = creation(i, n)
        .mul(&creation(j, n))
        .mul(&annihilation(k, n))
        .mul(&annihilation(l, n));
    t.sub(&t.adjoint()).into_antihermitian()
}

/// Single qubit excitation: the JW single with its parity string dropped.
pub fn qubit_single_excitation(i: usize, j: usize, n: usize) -> Result<AntihermitianSum> {
    check_distinct(&[i, j], n)?;
    AntihermitianSum::new(
        n,
        [(0.5, placed(n, "XY", &[i, j], &[])), (-0.5, placed(n, "YX", &[i, j], &[]))],
    )
}

/// Double qubit excitation: the JW double with its parity strings dropped.
/// With commuting qubit ladder operators this is `−(Q†_i Q†_j Q_k Q_l − h.c.)`;
/// indices only need to be distinct.
pub fn qubit_double_excitation(i: usize, j: usize, k: usize, l: usize, n: usize) -> Result<AntihermitianSum> {
    check_distinct(&[i, j, k, l], n)?;
    AntihermitianSum::new(
        n,
        DOUBLE_PATTERN
            .iter()
            .map(|&(p, s)| (s / 8.0, placed(n, p, &[i, j, k, l], &[]))),
    )
}
