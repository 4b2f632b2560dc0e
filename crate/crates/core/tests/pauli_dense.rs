mod common;

use common::{c, max_abs_diff, word_matrix};
use pivotgrad::pauli::{commutator, multiply};
use pivotgrad::{Pauli, PauliWord};
use proptest::prelude::*;

fn word_strategy(n: usize) -> impl Strategy<Value = PauliWord> {
    (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(letters, phase)| {
        let mut w = PauliWord::identity(n);
        for (q, l) in letters.into_iter().enumerate() {
            w.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]);
        }
        w.with_phase(phase)
    })
}

fn pair(max_n: usize) -> impl Strategy<Value = (PauliWord, PauliWord)> {
    (1..=max_n).prop_flat_map(|n| (word_strategy(n), word_strategy(n)))
}

proptest! {
    #[test]
    fn product_matches_dense((a, b) in pair(4)) {
        let prod = multiply(&a, &b).unwrap();
        let dense = word_matrix(&a) * word_matrix(&b);
        prop_assert!(max_abs_diff(&word_matrix(&prod), &dense) < 1e-12);
    }

    #[test]
    fn commutation_matches_dense((a, b) in pair(4)) {
        let (ma, mb) = (word_matrix(&a), word_matrix(&b));
        let commute = max_abs_diff(&(&ma * &mb), &(&mb * &ma)) < 1e-12;
        prop_assert_eq!(a.commutes_with(&b), commute);
        let qwc = (0..a.n_qubits()).all(|q| {
            let (p, r) = (a.get(q), b.get(q));
            p == Pauli::I || r == Pauli::I || p == r
        });
        prop_assert_eq!(a.qubit_wise_commutes_with(&b), qwc);
    }

    #[test]
    fn commutator_matches_dense((a, b) in pair(4)) {
        let (ma, mb) = (word_matrix(&a), word_matrix(&b));
        let dense = &ma * &mb - &mb * &ma;
        let ours = match commutator(&a, &b).unwrap() {
            None => dense.map(|_| c(0.0, 0.0)),
            Some((scalar, w)) => {
                prop_assert_eq!(w.phase_power(), 0);
                word_matrix(&w) * scalar
            }
        };
        prop_assert!(max_abs_diff(&ours, &dense) < 1e-12);
    }

    #[test]
    fn hermitian_iff_dense_hermitian(w in (1usize..4).prop_flat_map(word_strategy)) {
        let m = word_matrix(&w);
        prop_assert_eq!(w.is_hermitian(), max_abs_diff(&m, &m.adjoint()) < 1e-12);
    }

    #[test]
    fn text_round_trip_keeps_letters(w in (1usize..6).prop_flat_map(word_strategy)) {
        let back = PauliWord::parse(&w.to_text(), w.n_qubits()).unwrap();
        prop_assert_eq!(back, w.unphased());
    }

    #[test]
    fn pivot_lemma(
        (pivot, a, b) in (1usize..8).prop_flat_map(|n| (word_strategy(n), word_strategy(n), word_strategy(n)))
    ) {
        prop_assume!(a.commutes_with(&b));
        if let (Some((_, ca)), Some((_, cb))) = (commutator(&pivot, &a).unwrap(), commutator(&pivot, &b).unwrap()) {
            prop_assert!(ca.commutes_with(&cb));
        }
    }

    #[test]
    fn canonical_order_is_total((a, b) in pair(3)) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!(a == b, a.cmp(&b).is_eq());
    }
}

#[test]
fn wide_words_cross_chunk_boundaries() {
    let n = 130;
    let a = PauliWord::parse("X0 Y64 Z129", n).unwrap();
    let b = PauliWord::parse("Z0 Y64 X129", n).unwrap();
    assert!(a.commutes_with(&b));
    let prod = multiply(&a, &b).unwrap();
    assert_eq!(prod.to_text(), "Y0 Y129");
    assert_eq!(prod.phase_power(), 0);
    assert!(multiply(&a, &PauliWord::identity(4)).is_err());
}
