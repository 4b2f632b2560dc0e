use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{AntihermitianSum, WeightedPauliSum};
use crate::sim::{accumulate_word, inner, rotate_raw, StateVector, WordAction};

pub const VQE_ITERATION_CAP: usize = 500;

/// `e^{θ_k A_k} ⋯ e^{θ_1 A_1} |reference⟩`.
pub fn prepare_state(reference: &StateVector, generators: &[AntihermitianSum], params: &[f64]) -> Result<StateVector> {
    if generators.len() != params.len() {
        return Err(Error::DimensionMismatch {
            left: generators.len(),
            right: params.len(),
        });
    }
    let mut state = reference.clone();
    for (a, &theta) in generators.iter().zip(params) {
        state.apply_generator_exponential(a, theta)?;
    }
    Ok(state)
}

fn exp_raw(v: &mut [Complex64], a: &AntihermitianSum, theta: f64) {
    for (c, w) in a.terms() {
        rotate_raw(v, &WordAction::new(w), c * theta);
    }
}

/// Energy and all partial derivatives, the latter by one reverse sweep
/// through the ansatz.
pub fn energy_and_gradient(
    h: &WeightedPauliSum,
    reference: &StateVector,
    generators: &[AntihermitianSum],
    params: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let state = prepare_state(reference, generators, params)?;
    let mut lambda = state.apply_sum(h)?;
    let energy = inner(state.amplitudes(), &lambda).re;
    let mut psi = state.amplitudes().to_vec();
    let mut grad = vec![0.0; params.len()];
    let zero = Complex64::new(0.0, 0.0);
    let mut a_psi = vec![zero; psi.len()];
    for m in (0..generators.len()).rev() {
        a_psi.iter_mut().for_each(|v| *v = zero);
        for (c, w) in generators[m].terms() {
            accumulate_word(&mut a_psi, &psi, &WordAction::new(w), Complex64::new(0.0, *c));
        }
        grad[m] = 2.0 * inner(&lambda, &a_psi).re;
        exp_raw(&mut psi, &generators[m], -params[m]);
        exp_raw(&mut lambda, &generators[m], -params[m]);
    }
    if !energy.is_finite() || grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("energy or gradient evaluated to a non-finite value".into()));
    }
    Ok((energy, grad))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VqeResult {
    pub parameters: Vec<f64>,
    pub energy: f64,
    pub iterations: usize,
    /// Gradient infinity-norm fell below the tolerance.
    pub converged: bool,
    pub line_search_failed: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(g: &[f64]) -> f64 {
    g.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// BFGS with Armijo backtracking and analytic gradients. Deterministic;
/// never returns an energy above the starting one.
pub fn vqe_optimize(
    h: &WeightedPauliSum,
    reference: &StateVector,
    generators: &[AntihermitianSum],
    initial: &[f64],
    tolerance: f64,
) -> Result<VqeResult> {
    if initial.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("initial parameters".into()));
    }
    let dim = initial.len();
    let mut x = initial.to_vec();
    let (mut f, mut g) = energy_and_gradient(h, reference, generators, &x)?;
    let identity = |dim: usize| {
        let mut m = vec![vec![0.0; dim]; dim];
        (0..dim).for_each(|k| m[k][k] = 1.0);
        m
    };
    let mut hinv = identity(dim);
    let mut fresh = true;
    let mut result = VqeResult {
        parameters: x.clone(),
        energy: f,
        iterations: 0,
        converged: false,
        line_search_failed: false,
    };
    for iteration in 0..VQE_ITERATION_CAP {
        result.iterations = iteration;
        if inf_norm(&g) < tolerance {
            result.converged = true;
            break;
        }
        let mut d: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hinv = identity(dim);
            fresh = true;
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let (ft, gt) = energy_and_gradient(h, reference, generators, &trial)?;
            if ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            if fresh {
                result.line_search_failed = true;
                break;
            }
            hinv = identity(dim);
            fresh = true;
            continue;
        };
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            if fresh {
                let scale = sy / dot(&y, &y);
                hinv = identity(dim);
                hinv.iter_mut().enumerate().for_each(|(k, row)| row[k] = scale);
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = hinv.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..dim {
                for j in 0..dim {
                    hinv[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }
        x = x_new;
        f = f_new;
        g = g_new;
        result.iterations = iteration + 1;
    }
    if !result.converged && inf_norm(&g) < tolerance {
        result.converged = true;
    }
    result.parameters = x;
    result.energy = f;
    Ok(result)
}
