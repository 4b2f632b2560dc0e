//! The ADAPT-VQE outer loop: screen pool gradients, append the steepest
//! operator with a zero parameter, re-optimize all parameters, repeat.

mod screen;
mod vqe;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{AntihermitianSum, WeightedPauliSum};
use crate::pools::{OperatorPool, PoolKind};
use crate::rng::{derive_seed, tags};
use crate::sim::prepare_reference;

pub use screen::{
    build_groups, check_compatible, screen_gradients, GradientMode, GradientScreener, GroupingStrategy, Screening,
};
pub use vqe::{energy_and_gradient, prepare_state, vqe_optimize, VqeResult, VQE_ITERATION_CAP};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptConfig {
    pub pool_kind: PoolKind,
    pub grouping_strategy: GroupingStrategy,
    pub gradient_mode: GradientMode,
    /// Target standard error per gradient in sampled mode.
    pub epsilon: f64,
    pub grad_norm_threshold: f64,
    pub max_iterations: usize,
    pub vqe_tolerance: f64,
    pub master_seed: u64,
    pub reference_occupied: Vec<usize>,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        AdaptConfig {
            pool_kind: PoolKind::Qubit,
            grouping_strategy: GroupingStrategy::Anchored,
            gradient_mode: GradientMode::Exact,
            epsilon: 0.05,
            grad_norm_threshold: 1e-3,
            max_iterations: 50,
            vqe_tolerance: 1e-7,
            master_seed: 0,
            reference_occupied: Vec::new(),
        }
    }
}

impl AdaptConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        positive("epsilon", self.epsilon)?;
        positive("grad_norm_threshold", self.grad_norm_threshold)?;
        positive("vqe_tolerance", self.vqe_tolerance)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdaptStatus {
    Converged,
    MaxIterations,
    /// Every eligible operator has exactly zero gradient while the norm is
    /// still above threshold, or the inner optimizer's line search failed.
    Stalled,
}

impl AdaptStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            AdaptStatus::Converged => 0,
            AdaptStatus::MaxIterations => 2,
            AdaptStatus::Stalled => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub chosen_operator_id: usize,
    pub chosen_label: String,
    pub chosen_gradient_value: f64,
    pub pool_gradient_norm: f64,
    pub energy: f64,
    pub shots: u64,
    pub cumulative_shots: u64,
    pub parameters: Vec<f64>,
    pub vqe_iterations: usize,
    /// False when the inner optimizer hit its cap or its line search failed.
    pub vqe_converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptTrace {
    pub reference_energy: f64,
    pub iterations: Vec<IterationRecord>,
    pub status: AdaptStatus,
    pub final_energy: f64,
    pub final_gradient_norm: f64,
    pub total_shots: u64,
    pub ansatz: Vec<usize>,
}

/// `√(Σ g²)`.
pub fn pool_gradient_norm(gradients: &[f64]) -> f64 {
    gradients.iter().map(|g| g * g).sum::<f64>().sqrt()
}

/// Largest `|g|` among ids other than `excluded`; lowest id wins ties.
pub fn select_operator(gradients: &[f64], excluded: Option<usize>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &g) in gradients.iter().enumerate() {
        if Some(i) == excluded {
            continue;
        }
        if best.is_none_or(|(_, b)| g.abs() > b.abs()) {
            best = Some((i, g));
        }
    }
    best
}

pub fn run_adapt(h: &WeightedPauliSum, config: &AdaptConfig) -> Result<AdaptTrace> {
    let pool = OperatorPool::build(config.pool_kind, h.n_qubits())?;
    run_adapt_with_pool(h, &pool, config)
}

pub fn run_adapt_with_pool(h: &WeightedPauliSum, pool: &OperatorPool, config: &AdaptConfig) -> Result<AdaptTrace> {
    config.validate()?;
    if pool.is_empty() {
        return Err(Error::InvalidArgument("operator pool is empty".into()));
    }
    let reference = prepare_reference(h.n_qubits(), &config.reference_occupied)?;
    let screener = GradientScreener::new(h, pool, config.grouping_strategy, config.gradient_mode, config.epsilon)?;
    let reference_energy = reference.expectation(h)?;

    let mut ansatz: Vec<usize> = Vec::new();
    let mut generators: Vec<AntihermitianSum> = Vec::new();
    let mut params: Vec<f64> = Vec::new();
    let mut energy = reference_energy;
    let mut records = Vec::new();
    let mut total_shots = 0u64;
    let mut iteration = 0usize;
    let (status, final_norm) = loop {
        let state = prepare_state(&reference, &generators, &params)?;
        let seed = derive_seed(config.master_seed, tags::SCREENING, iteration as u64);
        let screening = screener.screen(&state, seed)?;
        total_shots = total_shots.saturating_add(screening.shots_used);
        let norm = pool_gradient_norm(&screening.gradients);
        if norm < config.grad_norm_threshold {
            break (AdaptStatus::Converged, norm);
        }
        if iteration == config.max_iterations {
            break (AdaptStatus::MaxIterations, norm);
        }
        let Some((chosen, value)) = select_operator(&screening.gradients, ansatz.last().copied()) else {
            break (AdaptStatus::Stalled, norm);
        };
        if value == 0.0 {
            break (AdaptStatus::Stalled, norm);
        }
        ansatz.push(chosen);
        generators.push(pool.operators[chosen].generator.clone());
        params.push(0.0);
        let vqe = vqe_optimize(h, &reference, &generators, &params, config.vqe_tolerance)?;
        if !vqe.energy.is_finite() {
            return Err(Error::NonFinite(format!("energy at iteration {iteration}")));
        }
        params = vqe.parameters.clone();
        energy = vqe.energy;
        records.push(IterationRecord {
            iteration,
            chosen_operator_id: chosen,
            chosen_label: pool.operators[chosen].label.clone(),
            chosen_gradient_value: value,
            pool_gradient_norm: norm,
            energy,
            shots: screening.shots_used,
            cumulative_shots: total_shots,
            parameters: params.clone(),
            vqe_iterations: vqe.iterations,
            vqe_converged: vqe.converged,
        });
        iteration += 1;
        if vqe.line_search_failed {
            let state = prepare_state(&reference, &generators, &params)?;
            let h_psi = state.apply_sum(h)?;
            let gradients = pool
                .operators
                .iter()
                .map(|op| state.gradient_with(&h_psi, &op.generator))
                .collect::<Result<Vec<_>>>()?;
            break (AdaptStatus::Stalled, pool_gradient_norm(&gradients));
        }
    };
    Ok(AdaptTrace {
        reference_energy,
        iterations: records,
        status,
        final_energy: energy,
        final_gradient_norm: final_norm,
        total_shots,
        ansatz,
    })
}
