//! Shot allocation: the variance-optimal split of a budget across
//! observables, worst-case budgets, and integer shot plans for gradient
//! groups.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouping::{GradientGroup, Pivot};
use crate::operator::WeightedPauliSum;
use crate::pauli::PauliWord;

/// Shot count meaning "use exact expectation values".
pub const INFINITE_SHOTS: u64 = u64::MAX;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

fn check_weights(coeffs: &[f64], variances: &[f64]) -> Result<f64> {
    if coeffs.len() != variances.len() {
        return Err(Error::DimensionMismatch {
            left: coeffs.len(),
            right: variances.len(),
        });
    }
    if coeffs.iter().chain(variances).any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("coefficients and variances must be finite and nonnegative".into()));
    }
    let norm: f64 = coeffs.iter().zip(variances).map(|(c, v)| c * v.sqrt()).sum();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("all weighted coefficients are zero".into()));
    }
    Ok(norm)
}

/// `s_k = S·|c_k|√Var_k / Σ|c|√Var`, the minimizer of `Σ c²Var/s` at fixed `S`.
pub fn optimal_fractional_allocation(coeffs: &[f64], variances: &[f64], budget: f64) -> Result<Vec<f64>> {
    let norm = check_weights(coeffs, variances)?;
    if !(budget > 0.0) {
        return Err(Error::InvalidArgument(format!("budget must be positive, got {budget}")));
    }
    Ok(coeffs
        .iter()
        .zip(variances)
        .map(|(c, v)| budget * c * v.sqrt() / norm)
        .collect())
}

/// `Σ c²Var/s`; observables with zero shots and nonzero weight give infinity.
pub fn allocation_error_sq(coeffs: &[f64], variances: &[f64], shots: &[f64]) -> f64 {
    coeffs
        .iter()
        .zip(variances)
        .zip(shots)
        .map(|((c, v), s)| {
            let w = c * c * v;
            if w == 0.0 {
                0.0
            } else {
                w / s
            }
        })
        .sum()
}

/// Smallest total `S = (Σ|c|√Var)²/ε²` reaching error `ε`, with its optimal split.
pub fn budget_for_target_error(coeffs: &[f64], variances: &[f64], epsilon: f64) -> Result<(f64, Vec<f64>)> {
    check_epsilon(epsilon)?;
    let norm = check_weights(coeffs, variances)?;
    let total = norm * norm / (epsilon * epsilon);
    let shots = optimal_fractional_allocation(coeffs, variances, total)?;
    Ok((total, shots))
}

/// Worst-case shots for all commutators with pivot `h_j`:
/// `(2n)·2|h_j|·Σ_k 2|h_k| / ε²`.
pub fn worst_case_shots_per_pivot(h_j: f64, sum_abs_h: f64, n: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::InvalidArgument("register size must be at least 1".into()));
    }
    Ok((2 * n) as f64 * 2.0 * h_j.abs() * 2.0 * sum_abs_h / (epsilon * epsilon))
}

/// `8n(Σ|h|)²/ε²`.
pub fn total_budget(h: &WeightedPauliSum, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let s = h.abs_sum();
    Ok(8.0 * h.n_qubits() as f64 * s * s / (epsilon * epsilon))
}

/// Cost of one energy estimate at precision `ε`: `(Σ|h|)²/ε²`.
pub fn naive_vqe_budget(h: &WeightedPauliSum, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let s = h.abs_sum();
    Ok(s * s / (epsilon * epsilon))
}

/// `(Σ_g √(Σ_j c_gj²))² / ε²` for one gradient measured in the given sets.
pub fn grouped_gradient_cost(sets: &[Vec<f64>], epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let s: f64 = sets
        .iter()
        .map(|set| set.iter().map(|c| c * c).sum::<f64>().sqrt())
        .sum();
    Ok(s * s / (epsilon * epsilon))
}

/// Floors, then hands out the remainder by largest fractional part (lower
/// index first on ties). `fractional` is rescaled to sum to `budget`.
fn largest_remainder(fractional: &[f64], budget: u64) -> Vec<u64> {
    let sum: f64 = fractional.iter().sum();
    if sum <= 0.0 || budget == 0 {
        return vec![0; fractional.len()];
    }
    let scaled: Vec<f64> = fractional.iter().map(|f| f * budget as f64 / sum).collect();
    let mut shots: Vec<u64> = scaled.iter().map(|f| f.floor() as u64).collect();
    let assigned: u64 = shots.iter().sum();
    let mut order: Vec<usize> = (0..scaled.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = scaled[a] - scaled[a].floor();
        let rb = scaled[b] - scaled[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let remaining = budget.saturating_sub(assigned) as usize;
    for &k in order.iter().take(remaining) {
        shots[k] += 1;
    }
    shots
}

/// Largest-remainder rounding to exactly `budget` shots; every positive share
/// receives at least one shot.
pub fn integerize(fractional: &[f64], budget: u64) -> Result<Vec<u64>> {
    if fractional.iter().any(|f| !(*f >= 0.0) || !f.is_finite()) {
        return Err(Error::InvalidArgument("fractional shots must be finite and nonnegative".into()));
    }
    let positive = fractional.iter().filter(|&&f| f > 0.0).count();
    if (budget as usize) < positive {
        return Err(Error::BudgetTooSmall {
            budget,
            required: positive,
        });
    }
    let mut shots = largest_remainder(fractional, budget);
    ensure_minimum(fractional, &mut shots);
    Ok(shots)
}

/// Moves single shots from the richest groups to starved positive shares.
fn ensure_minimum(fractional: &[f64], shots: &mut [u64]) {
    for k in 0..shots.len() {
        if fractional[k] > 0.0 && shots[k] == 0 {
            let donor = (0..shots.len())
                .filter(|&d| shots[d] > 1)
                .max_by(|&a, &b| shots[a].cmp(&shots[b]).then(b.cmp(&a)));
            if let Some(d) = donor {
                shots[d] -= 1;
                shots[k] = 1;
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum VarianceModel {
    /// `Var(C) = 1` for every Pauli observable.
    #[default]
    UpperBound,
    /// Per-word variances, clamped below by `floor`; unknown words use 1.
    Empirical { variances: HashMap<PauliWord, f64>, floor: f64 },
}

impl VarianceModel {
    pub const DEFAULT_FLOOR: f64 = 0.01;

    /// `Var(C) = 1 − ⟨C⟩²` from running expectation estimates.
    pub fn from_expectations<'a>(expectations: impl IntoIterator<Item = (&'a PauliWord, f64)>, floor: f64) -> Self {
        VarianceModel::Empirical {
            variances: expectations
                .into_iter()
                .map(|(w, e)| (w.unphased(), (1.0 - e * e).clamp(0.0, 1.0)))
                .collect(),
            floor,
        }
    }

    pub fn variance(&self, word: &PauliWord) -> f64 {
        match self {
            VarianceModel::UpperBound => 1.0,
            VarianceModel::Empirical { variances, floor } => variances
                .get(&word.unphased())
                .copied()
                .unwrap_or(1.0)
                .max(*floor)
                .min(1.0),
        }
    }

    /// Standard deviation of gradient `i`'s per-shot contribution from each
    /// group, keyed by gradient index. The upper-bound model uses `Σ|c|`,
    /// which bounds the spread of the combined observable.
    pub fn group_weights(&self, group: &GradientGroup) -> BTreeMap<usize, f64> {
        let mut sums: BTreeMap<usize, f64> = BTreeMap::new();
        match self {
            VarianceModel::UpperBound => {
                for o in &group.observables {
                    *sums.entry(o.gradient_index).or_default() += o.coeff.abs();
                }
            }
            VarianceModel::Empirical { .. } => {
                for o in &group.observables {
                    *sums.entry(o.gradient_index).or_default() += o.coeff * o.coeff * self.variance(&o.word);
                }
                for v in sums.values_mut() {
                    *v = v.sqrt();
                }
            }
        }
        sums
    }
}

/// How a target precision is turned into per-group shot counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocationRule {
    /// `s_g = max_i w_gi · Σ_g' w_g'i / ε²`, which keeps every gradient's
    /// standard error at or below `ε`.
    #[default]
    Tight,
    /// `s_g = 2|h_j| · 2Σ|h| / ε²` for a group with Hamiltonian pivot `h_j`;
    /// proportional to `|h_j|` and summing to at most `8n(Σ|h|)²/ε²`.
    WorstCase,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotPlan {
    /// Indexed by group id.
    pub per_group: Vec<u64>,
    pub total: u64,
    pub target_epsilon: Option<f64>,
    pub budget: Option<u64>,
    pub warnings: Vec<String>,
}

fn per_gradient_totals(weights: &[BTreeMap<usize, f64>]) -> BTreeMap<usize, f64> {
    let mut totals: BTreeMap<usize, f64> = BTreeMap::new();
    for w in weights {
        for (&i, &v) in w {
            *totals.entry(i).or_default() += v;
        }
    }
    totals
}

fn check_ids(groups: &[GradientGroup]) -> Result<()> {
    if groups.iter().enumerate().any(|(k, g)| g.group_id != k) {
        return Err(Error::PlanMismatch("group ids must be 0..len in order".into()));
    }
    Ok(())
}

/// Fractional shots per group under `rule`, before integer rounding.
pub fn fractional_plan(
    groups: &[GradientGroup],
    model: &VarianceModel,
    rule: AllocationRule,
    sum_abs_h: f64,
    epsilon: f64,
) -> Result<Vec<f64>> {
    check_epsilon(epsilon)?;
    let eps2 = epsilon * epsilon;
    match rule {
        AllocationRule::Tight => {
            let weights: Vec<BTreeMap<usize, f64>> = groups.iter().map(|g| model.group_weights(g)).collect();
            let totals = per_gradient_totals(&weights);
            Ok(weights
                .iter()
                .map(|w| w.iter().map(|(i, v)| v * totals[i]).fold(0.0, f64::max) / eps2)
                .collect())
        }
        AllocationRule::WorstCase => groups
            .iter()
            .map(|g| match g.pivot {
                Some(Pivot::HamiltonianTerm { coeff, .. }) => Ok(2.0 * coeff.abs() * 2.0 * sum_abs_h / eps2),
                _ => Err(Error::InvalidArgument(format!(
                    "worst-case rule needs Hamiltonian-term pivots (group {})",
                    g.group_id
                ))),
            })
            .collect(),
    }
}

impl ShotPlan {
    /// Every group measured with exact expectations.
    pub fn exact(n_groups: usize) -> Self {
        ShotPlan {
            per_group: vec![INFINITE_SHOTS; n_groups],
            total: INFINITE_SHOTS,
            target_epsilon: None,
            budget: None,
            warnings: Vec::new(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.per_group.iter().all(|&s| s == INFINITE_SHOTS)
    }

    /// Rounds each fractional share up. When `cap` is given and the rounded
    /// total would exceed it, the plan is instead rounded to exactly `cap`.
    pub fn for_target_error(
        groups: &[GradientGroup],
        model: &VarianceModel,
        rule: AllocationRule,
        sum_abs_h: f64,
        epsilon: f64,
        cap: Option<u64>,
    ) -> Result<Self> {
        check_ids(groups)?;
        let fractional = fractional_plan(groups, model, rule, sum_abs_h, epsilon)?;
        let mut per_group: Vec<u64> = fractional.iter().map(|f| f.ceil() as u64).collect();
        let mut warnings = Vec::new();
        let total: u64 = per_group.iter().sum();
        if let Some(cap) = cap {
            if total > cap {
                per_group = match integerize(&fractional, cap) {
                    Ok(shots) => shots,
                    Err(_) => {
                        warnings.push(format!("cap {cap} below the number of groups; some groups get no shots"));
                        largest_remainder(&fractional, cap)
                    }
                };
            }
        }
        Ok(ShotPlan {
            total: per_group.iter().sum(),
            per_group,
            target_epsilon: Some(epsilon),
            budget: None,
            warnings,
        })
    }

    /// Splits exactly `budget` shots across groups in the proportions of the
    /// tight rule.
    pub fn for_budget(groups: &[GradientGroup], model: &VarianceModel, budget: u64) -> Result<Self> {
        check_ids(groups)?;
        let fractional = fractional_plan(groups, model, AllocationRule::Tight, 0.0, 1.0)?;
        let mut warnings = Vec::new();
        let per_group = match integerize(&fractional, budget) {
            Ok(shots) => shots,
            Err(Error::BudgetTooSmall { required, .. }) => {
                warnings.push(format!(
                    "budget {budget} is below the {required} groups with nonzero weight; smallest shares get no shots"
                ));
                largest_remainder(&fractional, budget)
            }
            Err(e) => return Err(e),
        };
        Ok(ShotPlan {
            total: per_group.iter().sum(),
            per_group,
            target_epsilon: None,
            budget: Some(budget),
            warnings,
        })
    }

    /// Predicted standard error `√(Σ_g w_gi²/s_g)` per gradient; infinite when
    /// a contributing group has no shots.
    pub fn predicted_errors(&self, groups: &[GradientGroup], model: &VarianceModel) -> Result<BTreeMap<usize, f64>> {
        if groups.len() != self.per_group.len() {
            return Err(Error::PlanMismatch(format!(
                "plan has {} groups, grouping has {}",
                self.per_group.len(),
                groups.len()
            )));
        }
        let mut err2: BTreeMap<usize, f64> = BTreeMap::new();
        for (g, &s) in groups.iter().zip(&self.per_group) {
            for (i, w) in model.group_weights(g) {
                let term = match s {
                    INFINITE_SHOTS => 0.0,
                    0 if w > 0.0 => f64::INFINITY,
                    0 => 0.0,
                    s => w * w / s as f64,
                };
                *err2.entry(i).or_default() += term;
            }
        }
        Ok(err2.into_iter().map(|(i, e)| (i, e.sqrt())).collect())
    }
}
