use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use super::{accumulate_word, inner, StateVector, WordAction};
use crate::error::{Error, Result};
use crate::operator::WeightedPauliSum;
use crate::rng::{stream, tags};

/// Registers up to this size are diagonalized densely.
pub const DENSE_EIGEN_LIMIT: usize = 9;
pub const GROUND_STATE_LIMIT: usize = 14;

const RESIDUAL_TOL: f64 = 1e-9;

/// Dense `2^n × 2^n` matrix of a Pauli sum.
pub fn hamiltonian_matrix(h: &WeightedPauliSum) -> Result<DMatrix<Complex64>> {
    let n = h.n_qubits();
    if n > GROUND_STATE_LIMIT {
        return Err(Error::TooLarge {
            n_qubits: n,
            limit: GROUND_STATE_LIMIT,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (c, word) in h.terms() {
        let action = WordAction::new(word);
        for b in 0..dim {
            m[(b ^ action.x as usize, b)] += action.factor(b) * *c;
        }
    }
    Ok(m)
}

fn apply(h: &WeightedPauliSum, actions: &[(f64, WordAction)], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    debug_assert_eq!(actions.len(), h.len());
    for (c, a) in actions {
        accumulate_word(&mut out, v, a, Complex64::new(*c, 0.0));
    }
    out
}

fn residual(h: &WeightedPauliSum, actions: &[(f64, WordAction)], v: &[Complex64], e: f64) -> f64 {
    let hv = apply(h, actions, v);
    hv.iter().zip(v).map(|(a, b)| (a - b * e).norm_sqr()).sum::<f64>().sqrt()
}

/// Restarted Lanczos with full reorthogonalization.
fn lanczos(h: &WeightedPauliSum) -> Result<(f64, Vec<Complex64>)> {
    let dim = 1usize << h.n_qubits();
    let actions: Vec<(f64, WordAction)> = h.terms().iter().map(|(c, w)| (*c, WordAction::new(w))).collect();
    let mut rng = stream(0, tags::LANCZOS, h.n_qubits() as u64);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let krylov = dim.min(160);
    let mut best = (f64::INFINITY, start.clone());
    for _restart in 0..60 {
        let norm = inner(&start, &start).re.sqrt();
        let mut basis: Vec<Vec<Complex64>> = vec![start.iter().map(|a| a / norm).collect()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for k in 0..krylov {
            let mut w = apply(h, &actions, &basis[k]);
            alpha.push(inner(&basis[k], &w).re);
            for _pass in 0..2 {
                for q in &basis {
                    let overlap = inner(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= overlap * qi;
                    }
                }
            }
            let b = inner(&w, &w).re.sqrt();
            if k + 1 == krylov || b < 1e-12 {
                break;
            }
            beta.push(b);
            basis.push(w.into_iter().map(|a| a / b).collect());
        }
        let m = alpha.len();
        let t = DMatrix::<f64>::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let (k, &e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty tridiagonal");
        let coeffs: DVector<f64> = eig.eigenvectors.column(k).into_owned();
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        for (c, q) in coeffs.iter().zip(&basis) {
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi += qi * *c;
            }
        }
        let nv = inner(&v, &v).re.sqrt();
        v.iter_mut().for_each(|a| *a /= nv);
        let r = residual(h, &actions, &v, e);
        if e < best.0 || r < RESIDUAL_TOL {
            best = (e, v.clone());
        }
        if r < RESIDUAL_TOL {
            return Ok(best);
        }
        start = v;
    }
    Ok(best)
}

/// Lowest eigenvalue and a normalized eigenvector.
pub fn exact_ground_state(h: &WeightedPauliSum) -> Result<(f64, StateVector)> {
    let n = h.n_qubits();
    if n > GROUND_STATE_LIMIT {
        return Err(Error::TooLarge {
            n_qubits: n,
            limit: GROUND_STATE_LIMIT,
        });
    }
    let (energy, vector) = if n <= DENSE_EIGEN_LIMIT {
        let eig = hamiltonian_matrix(h)?.symmetric_eigen();
        let (k, &e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty spectrum");
        (e, eig.eigenvectors.column(k).iter().copied().collect())
    } else {
        lanczos(h)?
    };
    Ok((energy, StateVector::from_amplitudes(n, vector)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliWord;

    fn sum(n: usize, terms: &[(f64, &str)]) -> WeightedPauliSum {
        WeightedPauliSum::new(n, terms.iter().map(|(c, t)| (*c, PauliWord::parse(t, n).unwrap()))).unwrap()
    }

    #[test]
    fn single_qubit_ground_states() {
        let (e, s) = exact_ground_state(&sum(1, &[(-1.0, "Z0")])).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
        let (e, s) = exact_ground_state(&sum(1, &[(1.0, "X0")])).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        assert!((s.word_expectation(&PauliWord::parse("X0", 1).unwrap()).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_matches_dense() {
        let n = 7;
        let h = sum(
            n,
            &[
                (0.8, "Z0 Z1"),
                (-0.4, "X1 X2"),
                (0.3, "Y2 Y3 Z6"),
                (0.5, "Z4"),
                (-0.7, "X0 X5 X6"),
                (0.2, "Y1 Z3 Y5"),
                (0.1, "X3 Y4 Y6"),
            ],
        );
        let (dense, _) = exact_ground_state(&h).unwrap();
        let (iterative, v) = lanczos(&h).unwrap();
        assert!((dense - iterative).abs() < 1e-10);
        let actions: Vec<_> = h.terms().iter().map(|(c, w)| (*c, WordAction::new(w))).collect();
        assert!(residual(&h, &actions, &v, iterative) < 1e-8);
    }

    #[test]
    fn size_limit() {
        let h = sum(15, &[(1.0, "Z14")]);
        assert!(matches!(exact_ground_state(&h), Err(Error::TooLarge { .. })));
    }
}
