use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{AnchoredSet, GradientGroup, GroupObservable, Pivot};
use crate::error::{Error, Result};
use crate::operator::WeightedPauliSum;
use crate::pauli::{commutator, Pauli, PauliWord};
use crate::pools::{Anchor, AnchorKind, OperatorKind, OperatorPool, PoolKind};

/// Where the single-like qubit operators `iY_aX_b` are placed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SingleAssignment {
    /// Only the Y-anchored set of qubit `a`; every observable is measured once.
    #[default]
    YAnchorOnly,
    /// Also the X-anchored set of qubit `b`. Observables of such operators
    /// carry half weight in each set so the two estimates are averaged.
    Both,
}

fn set_index(n: usize, anchor: Anchor) -> usize {
    match anchor.kind {
        AnchorKind::YAnchor => anchor.qubit,
        AnchorKind::XAnchor => n + anchor.qubit,
    }
}

pub fn anchor_partition(pool: &OperatorPool) -> Result<Vec<AnchoredSet>> {
    anchor_partition_with(pool, SingleAssignment::default())
}

/// Splits a qubit pool into `2n` anchored sets: set `q` holds the operators
/// with their lone `Y` on qubit `q`, set `n + q` those with their lone `X` on
/// qubit `q`. Sets can be empty for tiny registers.
pub fn anchor_partition_with(pool: &OperatorPool, singles: SingleAssignment) -> Result<Vec<AnchoredSet>> {
    if pool.kind != PoolKind::Qubit {
        return Err(Error::IncompatiblePool {
            found: pool.kind.to_string(),
            reason: "anchored partition needs the qubit pool".into(),
        });
    }
    let n = pool.n_qubits;
    let mut sets: Vec<AnchoredSet> = (0..2 * n)
        .map(|s| AnchoredSet {
            set_id: s,
            anchor: Some(Anchor {
                qubit: s % n,
                kind: if s < n { AnchorKind::YAnchor } else { AnchorKind::XAnchor },
            }),
            member_ids: Vec::new(),
        })
        .collect();
    for op in &pool.operators {
        let anchor = op.anchor_hint.ok_or_else(|| Error::IncompatiblePool {
            found: format!("{:?}", op.kind),
            reason: format!("operator {} has no anchor", op.label),
        })?;
        sets[set_index(n, anchor)].member_ids.push(op.id);
        if singles == SingleAssignment::Both && op.kind == OperatorKind::QubitSingle {
            let word = &op.generator.terms()[0].1;
            let (x_qubit, _) = word
                .factors()
                .find(|&(_, p)| p == Pauli::X)
                .expect("qubit single has an X factor");
            let second = Anchor {
                qubit: x_qubit,
                kind: AnchorKind::XAnchor,
            };
            sets[set_index(n, second)].member_ids.push(op.id);
        }
    }
    Ok(sets)
}

/// Two sets: operators whose `Y` sits on an even qubit, then on an odd one.
pub fn g_pool_partition(pool: &OperatorPool) -> Result<[AnchoredSet; 2]> {
    if pool.kind != PoolKind::G {
        return Err(Error::IncompatiblePool {
            found: pool.kind.to_string(),
            reason: "two-set partition needs the G pool".into(),
        });
    }
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for op in &pool.operators {
        let word = &op.generator.terms()[0].1;
        let (y, _) = word
            .factors()
            .find(|&(_, p)| p == Pauli::Y)
            .expect("G operators carry one Y");
        if y % 2 == 0 {
            even.push(op.id);
        } else {
            odd.push(op.id);
        }
    }
    Ok([
        AnchoredSet {
            set_id: 0,
            anchor: None,
            member_ids: even,
        },
        AnchoredSet {
            set_id: 1,
            anchor: None,
            member_ids: odd,
        },
    ])
}

/// Real weight `c` with `[h·H, i·a·S] = c·W`, if the words anticommute.
pub(crate) fn commutator_observable(h: f64, pivot: &PauliWord, a: f64, word: &PauliWord) -> Option<(f64, PauliWord)> {
    let (scalar, w) = commutator(pivot, word).expect("dimensions checked by caller")?;
    let c = Complex64::new(0.0, 1.0) * h * a * scalar;
    debug_assert!(c.im.abs() <= 1e-12 * c.norm().max(1.0));
    Some((c.re, w))
}

/// One group per (Hamiltonian term, set) pair with at least one
/// non-vanishing commutator, ordered term-major. Members whose commutator with
/// the pivot vanishes are left out.
pub fn build_gradient_groups(h: &WeightedPauliSum, partition: &[AnchoredSet], pool: &OperatorPool) -> Result<Vec<GradientGroup>> {
    if h.n_qubits() != pool.n_qubits {
        return Err(Error::DimensionMismatch {
            left: h.n_qubits(),
            right: pool.n_qubits,
        });
    }
    let mut multiplicity = vec![0usize; pool.len()];
    for set in partition {
        for &id in &set.member_ids {
            let slot = multiplicity.get_mut(id).ok_or_else(|| {
                Error::InvalidArgument(format!("set {} references unknown operator {id}", set.set_id))
            })?;
            *slot += 1;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..h.len())
        .flat_map(|j| (0..partition.len()).map(move |s| (j, s)))
        .collect();
    let built: Vec<Option<GradientGroup>> = pairs
        .par_iter()
        .map(|&(j, s)| {
            let (hj, pivot) = &h.terms()[j];
            let set = &partition[s];
            let mut observables = Vec::new();
            for &id in &set.member_ids {
                let op = &pool.operators[id];
                let share = 1.0 / multiplicity[id] as f64;
                for (a, word) in op.generator.terms() {
                    if let Some((c, w)) = commutator_observable(*hj, pivot, *a, word) {
                        observables.push(GroupObservable {
                            gradient_index: id,
                            coeff: c * share,
                            word: w,
                        });
                    }
                }
            }
            (!observables.is_empty()).then(|| {
                GradientGroup::new(
                    0,
                    Some(Pivot::HamiltonianTerm { index: j, coeff: *hj }),
                    Some(set.set_id),
                    observables,
                )
            })
        })
        .collect();
    Ok(built
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(id, mut g)| {
            g.group_id = id;
            g
        })
        .collect())
}

/// For each qubit-pool id, the `(qeb id, weight)` pairs in which its word
/// appears: a QEB gradient is the weighted sum of qubit-pool gradients.
pub fn qeb_assembly_map(qeb: &OperatorPool, qubit: &OperatorPool) -> Result<Vec<Vec<(usize, f64)>>> {
    if qeb.kind != PoolKind::Qeb || qubit.kind != PoolKind::Qubit || qeb.n_qubits != qubit.n_qubits {
        return Err(Error::IncompatiblePool {
            found: format!("{}/{}", qeb.kind, qubit.kind),
            reason: "assembly maps a QEB pool onto the qubit pool of the same size".into(),
        });
    }
    let index: HashMap<&PauliWord, usize> = qubit
        .operators
        .iter()
        .map(|op| (&op.generator.terms()[0].1, op.id))
        .collect();
    let mut map = vec![Vec::new(); qubit.len()];
    for op in &qeb.operators {
        for (a, word) in op.generator.terms() {
            let &qid = index.get(word).ok_or_else(|| {
                Error::InvalidArgument(format!("word {word} of {} is not in the qubit pool", op.label))
            })?;
            map[qid].push((op.id, *a));
        }
    }
    Ok(map)
}

/// Re-targets each observable `(i, c, C)` to `(t, w·c, C)` for every
/// `(t, w)` in `map[i]`; groups left empty are dropped and ids renumbered.
pub fn relabel_groups(groups: &[GradientGroup], map: &[Vec<(usize, f64)>]) -> Vec<GradientGroup> {
    groups
        .iter()
        .filter_map(|g| {
            let observables: Vec<GroupObservable> = g
                .observables
                .iter()
                .flat_map(|o| {
                    map[o.gradient_index].iter().map(move |&(t, w)| GroupObservable {
                        gradient_index: t,
                        coeff: o.coeff * w,
                        word: o.word.clone(),
                    })
                })
                .collect();
            (!observables.is_empty()).then(|| GradientGroup::new(0, g.pivot.clone(), g.set_id, observables))
        })
        .enumerate()
        .map(|(id, mut g)| {
            g.group_id = id;
            g
        })
        .collect()
}
