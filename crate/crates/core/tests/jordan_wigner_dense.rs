mod common;

use common::{annihilation_matrix, dagger, generator_matrix, max_abs_diff, sum_matrix, Mat};
use pivotgrad::jw::{
    fermionic_double_excitation, jw_double_excitation, jw_one_body_term, jw_single_excitation, jw_two_body_term,
    qubit_double_excitation, qubit_single_excitation,
};
use pivotgrad::operator::ComplexPauliSum;

fn complex_matrix(s: &ComplexPauliSum, n: usize) -> Mat {
    let dim = 1 << n;
    s.terms().fold(Mat::zeros(dim, dim), |acc, (w, coef)| acc + common::word_matrix(w) * *coef)
}

/// `Q_p = |0⟩⟨1|` on qubit p without parity.
fn qubit_lowering(p: usize, n: usize) -> Mat {
    let dim = 1usize << n;
    Mat::from_fn(dim, dim, |r, col| {
        if col >> p & 1 == 1 && r == col ^ (1 << p) {
            common::c(1.0, 0.0)
        } else {
            common::c(0.0, 0.0)
        }
    })
}

#[test]
fn ladder_operators_match_dense_and_anticommute() {
    let n = 4;
    for p in 0..n {
        let a = complex_matrix(&pivotgrad::jw::annihilation(p, n), n);
        assert!(max_abs_diff(&a, &annihilation_matrix(p, n)) < 1e-12);
        for q in 0..n {
            let b = annihilation_matrix(q, n);
            let anti = &a * dagger(&b) + dagger(&b) * &a;
            let expected = if p == q { Mat::identity(1 << n, 1 << n) } else { Mat::zeros(1 << n, 1 << n) };
            assert!(max_abs_diff(&anti, &expected) < 1e-12);
        }
    }
}

#[test]
fn excitation_generators_match_ladder_products() {
    let n = 5;
    let a = |p| annihilation_matrix(p, n);
    let ad = |p| dagger(&annihilation_matrix(p, n));
    for (i, j) in [(0, 1), (0, 3), (1, 4), (2, 4)] {
        let t = ad(i) * a(j);
        let dense = &t - dagger(&t);
        assert!(max_abs_diff(&generator_matrix(&jw_single_excitation(i, j, n).unwrap()), &dense) < 1e-12);
        let q = dagger(&qubit_lowering(i, n)) * qubit_lowering(j, n);
        let qd = &q - dagger(&q);
        assert!(max_abs_diff(&generator_matrix(&qubit_single_excitation(i, j, n).unwrap()), &qd) < 1e-12);
    }
    for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 3, 4), (0, 1, 3, 4)] {
        let t = ad(i) * ad(j) * a(k) * a(l);
        let dense = &t - dagger(&t);
        assert!(max_abs_diff(&generator_matrix(&jw_double_excitation(i, j, k, l, n).unwrap()), &dense) < 1e-12);
        assert!(max_abs_diff(&generator_matrix(&fermionic_double_excitation(i, j, k, l, n).unwrap()), &dense) < 1e-12);
        let ql = |p| qubit_lowering(p, n);
        let q = dagger(&ql(i)) * dagger(&ql(j)) * ql(k) * ql(l);
        let qd = dagger(&q) - &q;
        assert!(max_abs_diff(&generator_matrix(&qubit_double_excitation(i, j, k, l, n).unwrap()), &qd) < 1e-12);
    }
}

#[test]
fn hamiltonian_terms_match_dense() {
    let n = 5;
    let a = |p| annihilation_matrix(p, n);
    let ad = |p| dagger(&annihilation_matrix(p, n));
    let one = jw_one_body_term(3, 1, 0.7, n).unwrap();
    let t = ad(3) * a(1);
    let dense = (&t + dagger(&t)) * common::c(0.7, 0.0);
    assert!(max_abs_diff(&sum_matrix(&one), &dense) < 1e-12);
    let number = jw_one_body_term(2, 2, -1.5, n).unwrap();
    assert!(max_abs_diff(&sum_matrix(&number), &(ad(2) * a(2) * common::c(-1.5, 0.0))) < 1e-12);
    let two = jw_two_body_term(4, 2, 1, 0, 0.3, n).unwrap();
    let t = ad(4) * ad(2) * a(1) * a(0);
    let dense = (&t + dagger(&t)) * common::c(0.3, 0.0);
    assert!(max_abs_diff(&sum_matrix(&two), &dense) < 1e-12);
}

#[test]
fn bad_indices_are_rejected() {
    assert!(jw_single_excitation(2, 1, 4).is_err());
    assert!(jw_double_excitation(0, 1, 1, 2, 4).is_err());
    assert!(qubit_double_excitation(0, 1, 2, 9, 4).is_err());
}
