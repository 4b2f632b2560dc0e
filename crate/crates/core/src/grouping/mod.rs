//! Partitioning pools into commuting sets and building jointly measurable
//! gradient-observable groups.
//!
//! A [`GradientGroup`] pairs one pivot with one set of mutually commuting
//! words. Because the commutators of commuting words with a common pivot
//! commute, every group is a single joint measurement.

mod anchored;
mod baseline;
mod rotation;

use serde::Serialize;

use crate::pauli::PauliWord;

pub use anchored::{
    anchor_partition, anchor_partition_with, build_gradient_groups, g_pool_partition, qeb_assembly_map,
    relabel_groups, SingleAssignment,
};
pub use baseline::{
    build_greedy_baseline_groups, build_per_operator_groups, greedy_commuting_partition,
    hamiltonian_disjoint_partition,
};
pub use rotation::{diagonalize_words, synthesize_measurement_rotation, CliffordGate, MeasurementRotation};

use crate::pools::Anchor;

/// A commuting set of pool operators. `anchor` is `None` for sets that are
/// not anchored (the two `G`-pool sets).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnchoredSet {
    pub set_id: usize,
    pub anchor: Option<Anchor>,
    pub member_ids: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutationMode {
    General,
    QubitWise,
}

impl CommutationMode {
    pub fn test(self, a: &PauliWord, b: &PauliWord) -> bool {
        match self {
            CommutationMode::General => a.commutes_with(b),
            CommutationMode::QubitWise => a.qubit_wise_commutes_with(b),
        }
    }
}

/// The word every observable in a group was commuted against.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Pivot {
    HamiltonianTerm { index: usize, coeff: f64 },
    PoolWord { operator_id: usize, term: usize },
}

/// One commutator observable `c · C` feeding gradient `gradient_index`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupObservable {
    pub gradient_index: usize,
    pub coeff: f64,
    pub word: PauliWord,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradientGroup {
    pub group_id: usize,
    pub pivot: Option<Pivot>,
    pub set_id: Option<usize>,
    /// Sorted by canonical word order, then gradient index.
    pub observables: Vec<GroupObservable>,
}

impl GradientGroup {
    pub fn new(group_id: usize, pivot: Option<Pivot>, set_id: Option<usize>, mut observables: Vec<GroupObservable>) -> Self {
        observables.sort_by(|a, b| a.word.cmp(&b.word).then(a.gradient_index.cmp(&b.gradient_index)));
        Self {
            group_id,
            pivot,
            set_id,
            observables,
        }
    }

    pub fn pivot_coeff(&self) -> Option<f64> {
        match self.pivot {
            Some(Pivot::HamiltonianTerm { coeff, .. }) => Some(coeff),
            _ => None,
        }
    }

    /// Distinct observable words in canonical order.
    pub fn distinct_words(&self) -> Vec<PauliWord> {
        let mut words: Vec<PauliWord> = self.observables.iter().map(|o| o.word.clone()).collect();
        words.dedup();
        words
    }

    /// Gradient indices touched by this group, ascending.
    pub fn gradient_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.observables.iter().map(|o| o.gradient_index).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// True when every pair of observable words commutes.
pub fn verify_group(group: &GradientGroup) -> bool {
    let words = group.distinct_words();
    words
        .iter()
        .enumerate()
        .all(|(k, a)| words[k + 1..].iter().all(|b| a.n_qubits() == b.n_qubits() && a.commutes_with(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(g: usize, c: f64, t: &str) -> GroupObservable {
        GroupObservable {
            gradient_index: g,
            coeff: c,
            word: PauliWord::parse(t, 2).unwrap(),
        }
    }

    #[test]
    fn corrupted_group_fails_verification() {
        let bad = GradientGroup::new(0, None, None, vec![obs(0, 1.0, "Z0"), obs(1, 1.0, "X0")]);
        assert!(!verify_group(&bad));
        let good = GradientGroup::new(0, None, None, vec![obs(0, 1.0, "Z0"), obs(1, 1.0, "Z0 Z1")]);
        assert!(verify_group(&good));
    }

    #[test]
    fn observables_sorted_and_deduplicated_views() {
        let g = GradientGroup::new(3, None, None, vec![obs(2, 1.0, "X0"), obs(1, 1.0, "Z0"), obs(0, -1.0, "X0")]);
        let texts: Vec<String> = g.distinct_words().iter().map(|w| w.to_text()).collect();
        assert_eq!(texts, ["Z0", "X0"]);
        assert_eq!(g.gradient_indices(), [0, 1, 2]);
        assert_eq!(g.observables[1].gradient_index, 0);
    }
}
