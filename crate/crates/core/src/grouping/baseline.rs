use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::anchored::commutator_observable;
use super::{CommutationMode, GradientGroup, GroupObservable, Pivot};
use crate::error::{Error, Result};
use crate::operator::WeightedPauliSum;
use crate::pauli::PauliWord;
use crate::pools::OperatorPool;

/// First-fit partition of Hamiltonian terms such that terms sharing a set
/// have pairwise disjoint index supports. `supports[j]` is the spin-orbital
/// support of term `j`.
pub fn hamiltonian_disjoint_partition(h: &WeightedPauliSum, supports: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    if supports.len() < h.len() {
        return Err(Error::InvalidArgument(format!(
            "index support missing for term {} (got {} supports for {} terms)",
            supports.len(),
            supports.len(),
            h.len()
        )));
    }
    let mut sets: Vec<(HashSet<usize>, Vec<usize>)> = Vec::new();
    for (j, support) in supports.iter().take(h.len()).enumerate() {
        match sets
            .iter_mut()
            .find(|(used, _)| support.iter().all(|q| !used.contains(q)))
        {
            Some((used, members)) => {
                used.extend(support.iter().copied());
                members.push(j);
            }
            None => sets.push((support.iter().copied().collect(), vec![j])),
        }
    }
    Ok(sets.into_iter().map(|(_, m)| m).collect())
}

/// Sorts by descending `|coeff|` (ties in canonical word order) and assigns
/// each observable to the first set it commutes with entirely. Returns
/// indices into `observables`.
pub fn greedy_commuting_partition(observables: &[(f64, PauliWord)], mode: CommutationMode) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..observables.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, wa) = &observables[a];
        let (cb, wb) = &observables[b];
        cb.abs().total_cmp(&ca.abs()).then_with(|| wa.cmp(wb)).then(a.cmp(&b))
    });
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for k in order {
        let word = &observables[k].1;
        match sets
            .iter_mut()
            .find(|set| set.iter().all(|&m| mode.test(&observables[m].1, word)))
        {
            Some(set) => set.push(k),
            None => sets.push(vec![k]),
        }
    }
    sets
}

/// Each pool word is a pivot; the Hamiltonian terms it does not commute with
/// are split into commuting sets, one group per set.
pub fn build_per_operator_groups(h: &WeightedPauliSum, pool: &OperatorPool) -> Result<Vec<GradientGroup>> {
    if h.n_qubits() != pool.n_qubits {
        return Err(Error::DimensionMismatch {
            left: h.n_qubits(),
            right: pool.n_qubits,
        });
    }
    let pivots: Vec<(usize, usize)> = pool
        .operators
        .iter()
        .flat_map(|op| (0..op.generator.len()).map(move |t| (op.id, t)))
        .collect();
    let built: Vec<Vec<GradientGroup>> = pivots
        .par_iter()
        .map(|&(id, t)| {
            let (a, word) = &pool.operators[id].generator.terms()[t];
            let coupled: Vec<(f64, PauliWord)> = h
                .terms()
                .iter()
                .filter(|(_, hw)| !hw.commutes_with(word))
                .cloned()
                .collect();
            greedy_commuting_partition(&coupled, CommutationMode::General)
                .into_iter()
                .map(|set| {
                    let observables = set
                        .iter()
                        .filter_map(|&k| {
                            let (hj, hw) = &coupled[k];
                            commutator_observable(*hj, hw, *a, word).map(|(c, w)| GroupObservable {
                                gradient_index: id,
                                coeff: c,
                                word: w,
                            })
                        })
                        .collect();
                    GradientGroup::new(
                        0,
                        Some(Pivot::PoolWord {
                            operator_id: id,
                            term: t,
                        }),
                        None,
                        observables,
                    )
                })
                .collect()
        })
        .collect();
    Ok(renumber(built.into_iter().flatten()))
}

/// All (operator, term) commutator observables, with their distinct words
/// grouped greedily by total weight `Σ|c|`. Groups carry no pivot.
pub fn build_greedy_baseline_groups(h: &WeightedPauliSum, pool: &OperatorPool) -> Result<Vec<GradientGroup>> {
    if h.n_qubits() != pool.n_qubits {
        return Err(Error::DimensionMismatch {
            left: h.n_qubits(),
            right: pool.n_qubits,
        });
    }
    let per_op: Vec<Vec<GroupObservable>> = pool
        .operators
        .par_iter()
        .map(|op| {
            let mut out = Vec::new();
            for (a, word) in op.generator.terms() {
                for (hj, hw) in h.terms() {
                    if let Some((c, w)) = commutator_observable(*hj, hw, *a, word) {
                        out.push(GroupObservable {
                            gradient_index: op.id,
                            coeff: c,
                            word: w,
                        });
                    }
                }
            }
            out
        })
        .collect();
    let mut by_word: BTreeMap<PauliWord, (f64, Vec<GroupObservable>)> = BTreeMap::new();
    for o in per_op.into_iter().flatten() {
        let entry = by_word.entry(o.word.clone()).or_insert((0.0, Vec::new()));
        entry.0 += o.coeff.abs();
        entry.1.push(o);
    }
    let (weights, members): (Vec<(f64, PauliWord)>, Vec<Vec<GroupObservable>>) = by_word
        .into_iter()
        .map(|(w, (s, obs))| ((s, w), obs))
        .unzip();
    let mut members: Vec<Option<Vec<GroupObservable>>> = members.into_iter().map(Some).collect();
    let groups = greedy_commuting_partition(&weights, CommutationMode::General)
        .into_iter()
        .map(|set| {
            let observables = set.iter().flat_map(|&k| members[k].take().unwrap()).collect();
            GradientGroup::new(0, None, None, observables)
        });
    Ok(renumber(groups))
}

fn renumber(groups: impl Iterator<Item = GradientGroup>) -> Vec<GradientGroup> {
    groups
        .filter(|g| !g.observables.is_empty())
        .enumerate()
        .map(|(id, mut g)| {
            g.group_id = id;
            g
        })
        .collect()
}
