use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouping::{
    anchor_partition, build_gradient_groups, build_greedy_baseline_groups, build_per_operator_groups,
    g_pool_partition, qeb_assembly_map, relabel_groups, GradientGroup,
};
use crate::operator::WeightedPauliSum;
use crate::pools::{qubit_pool, OperatorPool, PoolKind};
use crate::shots::{total_budget, AllocationRule, ShotPlan, VarianceModel};
use crate::sim::{estimate_pool_gradients, StateVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupingStrategy {
    /// Hamiltonian-term pivots over anchored pool sets.
    #[default]
    Anchored,
    /// Pool-word pivots over commuting sets of Hamiltonian terms.
    #[serde(rename = "per_operator_disjoint")]
    PerOperator,
    /// Greedy cover of all commutator observables.
    #[serde(rename = "greedy_baseline")]
    Greedy,
}

impl GroupingStrategy {
    pub fn name(self) -> &'static str {
        match self {
            GroupingStrategy::Anchored => "anchored",
            GroupingStrategy::PerOperator => "per-operator",
            GroupingStrategy::Greedy => "greedy",
        }
    }
}

impl fmt::Display for GroupingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupingStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anchored" => Ok(GroupingStrategy::Anchored),
            "per-operator" | "per_operator" | "per_operator_disjoint" => Ok(GroupingStrategy::PerOperator),
            "greedy" | "greedy_baseline" => Ok(GroupingStrategy::Greedy),
            other => Err(Error::InvalidArgument(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    #[default]
    Exact,
    Sampled,
}

impl FromStr for GradientMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(GradientMode::Exact),
            "sampled" => Ok(GradientMode::Sampled),
            other => Err(Error::InvalidArgument(format!("unknown gradient mode `{other}`"))),
        }
    }
}

pub fn check_compatible(pool: &OperatorPool, strategy: GroupingStrategy) -> Result<()> {
    if strategy == GroupingStrategy::Anchored && pool.kind == PoolKind::Fermionic {
        return Err(Error::IncompatiblePool {
            found: pool.kind.to_string(),
            reason: "anchored grouping needs Z-free pool words; use per-operator or greedy".into(),
        });
    }
    Ok(())
}

/// Gradient groups for `pool` under `strategy`. QEB gradients are assembled
/// from the qubit-pool groups of the same register.
pub fn build_groups(h: &WeightedPauliSum, pool: &OperatorPool, strategy: GroupingStrategy) -> Result<Vec<GradientGroup>> {
    check_compatible(pool, strategy)?;
    match strategy {
        GroupingStrategy::Anchored => match pool.kind {
            PoolKind::Qubit => build_gradient_groups(h, &anchor_partition(pool)?, pool),
            PoolKind::G => build_gradient_groups(h, &g_pool_partition(pool)?, pool),
            PoolKind::Qeb => {
                let qubit = qubit_pool(pool.n_qubits)?;
                let groups = build_gradient_groups(h, &anchor_partition(&qubit)?, &qubit)?;
                Ok(relabel_groups(&groups, &qeb_assembly_map(pool, &qubit)?))
            }
            PoolKind::Fermionic => unreachable!("rejected by check_compatible"),
        },
        GroupingStrategy::PerOperator => build_per_operator_groups(h, pool),
        GroupingStrategy::Greedy => build_greedy_baseline_groups(h, pool),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Screening {
    /// Indexed by pool operator id.
    pub gradients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub shots_used: u64,
}

/// Gradient screening with the groups built once for a fixed Hamiltonian,
/// pool and strategy.
pub struct GradientScreener {
    hamiltonian: WeightedPauliSum,
    pool: OperatorPool,
    mode: GradientMode,
    epsilon: f64,
    groups: Vec<GradientGroup>,
    cap: Option<u64>,
}

impl GradientScreener {
    pub fn new(
        h: &WeightedPauliSum,
        pool: &OperatorPool,
        strategy: GroupingStrategy,
        mode: GradientMode,
        epsilon: f64,
    ) -> Result<Self> {
        if h.n_qubits() != pool.n_qubits {
            return Err(Error::DimensionMismatch {
                left: h.n_qubits(),
                right: pool.n_qubits,
            });
        }
        check_compatible(pool, strategy)?;
        let (groups, cap) = match mode {
            GradientMode::Exact => (Vec::new(), None),
            GradientMode::Sampled => {
                let groups = build_groups(h, pool, strategy)?;
                let cap = (strategy == GroupingStrategy::Anchored)
                    .then(|| total_budget(h, epsilon).map(|b| b.floor() as u64))
                    .transpose()?;
                (groups, cap)
            }
        };
        Ok(GradientScreener {
            hamiltonian: h.clone(),
            pool: pool.clone(),
            mode,
            epsilon,
            groups,
            cap,
        })
    }

    pub fn groups(&self) -> &[GradientGroup] {
        &self.groups
    }

    pub fn plan(&self) -> Result<ShotPlan> {
        ShotPlan::for_target_error(
            &self.groups,
            &VarianceModel::UpperBound,
            AllocationRule::Tight,
            self.hamiltonian.abs_sum(),
            self.epsilon,
            self.cap,
        )
    }

    pub fn screen(&self, state: &StateVector, seed: u64) -> Result<Screening> {
        let len = self.pool.len();
        match self.mode {
            GradientMode::Exact => {
                let h_psi = state.apply_sum(&self.hamiltonian)?;
                let gradients = self
                    .pool
                    .operators
                    .iter()
                    .map(|op| state.gradient_with(&h_psi, &op.generator))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Screening {
                    gradients,
                    std_errors: vec![0.0; len],
                    shots_used: 0,
                })
            }
            GradientMode::Sampled => {
                let est = estimate_pool_gradients(state, &self.groups, &self.plan()?, seed)?;
                let mut gradients = vec![0.0; len];
                let mut std_errors = vec![0.0; len];
                for (&i, e) in &est.estimates {
                    gradients[i] = e.value;
                    std_errors[i] = e.std_error;
                }
                Ok(Screening {
                    gradients,
                    std_errors,
                    shots_used: est.shots_used,
                })
            }
        }
    }
}

/// One-off screening; prefer [`GradientScreener`] inside loops.
pub fn screen_gradients(
    state: &StateVector,
    h: &WeightedPauliSum,
    pool: &OperatorPool,
    strategy: GroupingStrategy,
    mode: GradientMode,
    epsilon: f64,
    seed: u64,
) -> Result<Screening> {
    GradientScreener::new(h, pool, strategy, mode, epsilon)?.screen(state, seed)
}
