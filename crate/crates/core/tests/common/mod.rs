//! Dense-matrix oracles written independently of the library's bit tricks.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use pivotgrad::pauli::phase_factor;
use pivotgrad::{AntihermitianSum, Pauli, PauliWord, WeightedPauliSum};

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 single-qubit matrix, rows/cols indexed by the bit value.
pub fn single(p: Pauli) -> [[Complex64; 2]; 2] {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match p {
        Pauli::I => [[one, o], [o, one]],
        Pauli::X => [[o, one], [one, o]],
        Pauli::Y => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
        Pauli::Z => [[one, o], [o, -one]],
    }
}

/// Element-wise tensor product with qubit `q` on bit `q` of the index.
pub fn word_matrix(w: &PauliWord) -> Mat {
    let n = w.n_qubits();
    let dim = 1usize << n;
    let factors: Vec<_> = (0..n).map(|q| single(w.get(q))).collect();
    let phase = phase_factor(w.phase_power());
    DMatrix::from_fn(dim, dim, |r, col| {
        let mut v = phase;
        for (q, f) in factors.iter().enumerate() {
            v *= f[(r >> q) & 1][(col >> q) & 1];
            if v == c(0.0, 0.0) {
                break;
            }
        }
        v
    })
}

pub fn sum_matrix(h: &WeightedPauliSum) -> Mat {
    let dim = 1usize << h.n_qubits();
    h.terms()
        .iter()
        .fold(Mat::zeros(dim, dim), |acc, (coef, w)| acc + word_matrix(w) * c(*coef, 0.0))
}

/// Matrix of the anti-Hermitian operator `Σ i·c·W`.
pub fn generator_matrix(a: &AntihermitianSum) -> Mat {
    let dim = 1usize << a.n_qubits();
    a.terms()
        .iter()
        .fold(Mat::zeros(dim, dim), |acc, (coef, w)| acc + word_matrix(w) * c(0.0, *coef))
}

/// Dense `a_p` with `|1⟩` occupied and parity over lower modes.
pub fn annihilation_matrix(p: usize, n: usize) -> Mat {
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |r, col| {
        if col >> p & 1 == 1 && r == col ^ (1 << p) {
            let parity = (col & ((1 << p) - 1)).count_ones();
            c(if parity % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn dagger(m: &Mat) -> Mat {
    m.adjoint()
}

/// `exp(M)` by scaling and squaring with a Taylor core.
pub fn expm(m: &Mat) -> Mat {
    let norm: f64 = m.iter().map(|v| v.norm()).sum();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0) as u32;
    let scaled = m * c(1.0 / 2f64.powi(squarings as i32), 0.0);
    let dim = m.nrows();
    let mut result = Mat::identity(dim, dim);
    let mut term = Mat::identity(dim, dim);
    for k in 1..30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn expectation(m: &Mat, psi: &[Complex64]) -> Complex64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * m * &v)[(0, 0)]
}

pub fn apply(m: &Mat, psi: &[Complex64]) -> Vec<Complex64> {
    let v = nalgebra::DVector::from_column_slice(psi);
    (m * v).iter().copied().collect()
}

pub fn ground_energy(h: &WeightedPauliSum) -> f64 {
    let m = sum_matrix(h);
    m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Central finite difference of `⟨ψ(θ)|H|ψ(θ)⟩` with `ψ(θ) = e^{θA}ψ` at 0.
pub fn finite_difference_gradient(h: &Mat, a: &Mat, psi: &[Complex64], step: f64) -> f64 {
    let energy = |theta: f64| {
        let u = expm(&(a * c(theta, 0.0)));
        let phi = apply(&u, psi);
        expectation(h, &phi).re
    };
    (energy(step) - energy(-step)) / (2.0 * step)
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Reads the `# exact_ground_energy` comment shipped with a fixture.
pub fn fixture_reference_energy(name: &str) -> f64 {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix("# exact_ground_energy "))
        .expect("fixture carries a reference energy")
        .trim()
        .parse()
        .unwrap()
}

/// Dense unitary of one Clifford gate, qubit `q` on bit `q`.
pub fn gate_matrix(gate: pivotgrad::grouping::CliffordGate, n: usize) -> Mat {
    use pivotgrad::grouping::CliffordGate as G;
    let dim = 1usize << n;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let one_qubit = |q: usize, u: [[Complex64; 2]; 2]| {
        DMatrix::from_fn(dim, dim, |r, col| {
            if (r ^ col) & !(1 << q) != 0 {
                c(0.0, 0.0)
            } else {
                u[(r >> q) & 1][(col >> q) & 1]
            }
        })
    };
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match gate {
        G::H { qubit } => one_qubit(qubit, [[c(s2, 0.0), c(s2, 0.0)], [c(s2, 0.0), c(-s2, 0.0)]]),
        G::S { qubit } => one_qubit(qubit, [[one, o], [o, c(0.0, 1.0)]]),
        G::Sdg { qubit } => one_qubit(qubit, [[one, o], [o, c(0.0, -1.0)]]),
        G::Cnot { control, target } => DMatrix::from_fn(dim, dim, |r, col| {
            let image = if col >> control & 1 == 1 { col ^ (1 << target) } else { col };
            if r == image { one } else { o }
        }),
        G::Cz { a, b } => DMatrix::from_fn(dim, dim, |r, col| {
            if r != col {
                o
            } else if col >> a & 1 == 1 && col >> b & 1 == 1 {
                -one
            } else {
                one
            }
        }),
    }
}

/// Unitary of a gate list applied first to last.
pub fn circuit_matrix(gates: &[pivotgrad::grouping::CliffordGate], n: usize) -> Mat {
    gates
        .iter()
        .fold(Mat::identity(1 << n, 1 << n), |acc, &g| gate_matrix(g, n) * acc)
}
