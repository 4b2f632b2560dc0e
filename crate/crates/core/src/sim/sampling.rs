use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{accumulate_word, StateVector, WordAction};
use crate::error::{Error, Result};
use crate::grouping::{diagonalize_words, verify_group, GradientGroup, MeasurementRotation};
use crate::pauli::PauliWord;
use crate::rng::{stream, tags};
use crate::shots::{ShotPlan, INFINITE_SHOTS};

/// Above this size joint outcomes are drawn through a basis rotation rather
/// than by enumerating projective branches.
pub const ENUMERATION_QUBIT_LIMIT: usize = 10;

const BRANCH_PRUNE: f64 = 1e-15;

/// Joint outcomes (one `±1` per word) with their histogram counts.
pub type Histogram = BTreeMap<Vec<i8>, u64>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObservableStats {
    pub mean: f64,
    pub variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSampleResult {
    pub group_id: usize,
    pub shots_used: u64,
    /// Per distinct word, in canonical order.
    pub per_word: Vec<(PauliWord, ObservableStats)>,
    /// Per gradient, statistics of the combined per-shot value `Σ c·C`.
    pub per_gradient: BTreeMap<usize, ObservableStats>,
}

/// Exact distribution of joint outcomes of a commuting word list, obtained by
/// branching through sequential projective measurements.
#[derive(Clone, Debug)]
pub struct JointDistribution {
    pub outcomes: Vec<Vec<i8>>,
    pub probabilities: Vec<f64>,
}

fn check_commuting(words: &[PauliWord], n: usize) -> Result<()> {
    for (k, a) in words.iter().enumerate() {
        if a.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: a.n_qubits(),
            });
        }
        if !a.is_hermitian() || words[k + 1..].iter().any(|b| !a.commutes_with(b)) {
            return Err(Error::NonCommutingGroup { group_id: 0 });
        }
    }
    Ok(())
}

fn project(psi: &[Complex64], action: &WordAction) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut p_psi = vec![Complex64::new(0.0, 0.0); psi.len()];
    accumulate_word(&mut p_psi, psi, action, Complex64::new(1.0, 0.0));
    let plus = psi.iter().zip(&p_psi).map(|(a, b)| (a + b) * 0.5).collect();
    let minus = psi.iter().zip(&p_psi).map(|(a, b)| (a - b) * 0.5).collect();
    (plus, minus)
}

fn weight(psi: &[Complex64]) -> f64 {
    psi.iter().map(|a| a.norm_sqr()).sum()
}

impl JointDistribution {
    pub fn enumerate(state: &StateVector, words: &[PauliWord]) -> Result<Self> {
        check_commuting(words, state.n_qubits())?;
        let actions: Vec<WordAction> = words.iter().map(WordAction::new).collect();
        let mut dist = JointDistribution {
            outcomes: Vec::new(),
            probabilities: Vec::new(),
        };
        let mut stack: Vec<(Vec<Complex64>, Vec<i8>)> = vec![(state.amplitudes().to_vec(), Vec::new())];
        while let Some((psi, signs)) = stack.pop() {
            let k = signs.len();
            if k == words.len() {
                dist.probabilities.push(weight(&psi));
                dist.outcomes.push(signs);
                continue;
            }
            let (plus, minus) = project(&psi, &actions[k]);
            for (branch, sign) in [(minus, -1i8), (plus, 1i8)] {
                if weight(&branch) > BRANCH_PRUNE {
                    let mut s = signs.clone();
                    s.push(sign);
                    stack.push((branch, s));
                }
            }
        }
        let total: f64 = dist.probabilities.iter().sum();
        dist.probabilities.iter_mut().for_each(|p| *p /= total);
        Ok(dist)
    }

    /// Categorical draws, returned as a histogram.
    pub fn draw(&self, shots: u64, rng: &mut impl Rng) -> Histogram {
        let mut cdf = Vec::with_capacity(self.probabilities.len());
        let mut acc = 0.0;
        for p in &self.probabilities {
            acc += p;
            cdf.push(acc);
        }
        let mut counts = vec![0u64; cdf.len()];
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * acc;
            let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            counts[k] += 1;
        }
        self.outcomes
            .iter()
            .cloned()
            .zip(counts)
            .filter(|(_, c)| *c > 0)
            .collect()
    }

    /// Probability of one joint outcome.
    pub fn probability_of(&self, outcome: &[i8]) -> f64 {
        self.outcomes
            .iter()
            .zip(&self.probabilities)
            .filter(|(o, _)| o.as_slice() == outcome)
            .map(|(_, p)| p)
            .sum()
    }
}

/// One projective measurement per word per shot, in `order`, collapsing the
/// state after each outcome. Signs are reported in `words` order.
pub fn sequential_joint_samples(
    state: &StateVector,
    words: &[PauliWord],
    order: &[usize],
    shots: u64,
    rng: &mut impl Rng,
) -> Result<Histogram> {
    check_commuting(words, state.n_qubits())?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..words.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument("measurement order must be a permutation of the words".into()));
    }
    let actions: Vec<WordAction> = words.iter().map(WordAction::new).collect();
    let mut hist = Histogram::new();
    for _ in 0..shots {
        let mut psi = state.amplitudes().to_vec();
        let mut signs = vec![0i8; words.len()];
        for &k in order {
            let (plus, minus) = project(&psi, &actions[k]);
            let p_plus = weight(&plus) / weight(&psi);
            if rng.random::<f64>() < p_plus {
                signs[k] = 1;
                psi = plus;
            } else {
                signs[k] = -1;
                psi = minus;
            }
        }
        *hist.entry(signs).or_default() += 1;
    }
    Ok(hist)
}

/// Applies the rotation circuit, samples computational basis states and
/// reads each word off its diagonal image.
pub fn rotated_joint_samples(
    state: &StateVector,
    rotation: &MeasurementRotation,
    shots: u64,
    rng: &mut impl Rng,
) -> Result<Histogram> {
    let mut rotated = state.clone();
    for &gate in &rotation.gates {
        rotated.apply_clifford(gate)?;
    }
    let probs = rotated.probabilities();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    let actions: Vec<WordAction> = rotation.diagonal.iter().map(WordAction::new).collect();
    let mut basis_counts: HashMap<usize, u64> = HashMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let b = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        *basis_counts.entry(b).or_default() += 1;
    }
    let mut hist = Histogram::new();
    for (b, count) in basis_counts {
        let signs: Vec<i8> = actions.iter().map(|a| a.diagonal_sign(b) as i8).collect();
        *hist.entry(signs).or_default() += count;
    }
    Ok(hist)
}

fn unbiased(mean: f64, mean_sq: f64, shots: u64) -> f64 {
    if shots < 2 {
        return 0.0;
    }
    ((mean_sq - mean * mean) * shots as f64 / (shots - 1) as f64).max(0.0)
}

/// Per-word and per-gradient statistics from a joint histogram over
/// `words` (the group's distinct words).
fn aggregate(group: &GradientGroup, words: &[PauliWord], hist: &Histogram) -> GroupSampleResult {
    let index: HashMap<&PauliWord, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let shots: u64 = hist.values().sum();
    let total = shots as f64;
    let mut word_sum = vec![0.0; words.len()];
    let mut grad_sum: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    for (signs, &count) in hist {
        let c = count as f64;
        for (k, &s) in signs.iter().enumerate() {
            word_sum[k] += c * s as f64;
        }
        let mut values: BTreeMap<usize, f64> = BTreeMap::new();
        for o in &group.observables {
            *values.entry(o.gradient_index).or_default() += o.coeff * signs[index[&o.word]] as f64;
        }
        for (i, v) in values {
            let e = grad_sum.entry(i).or_default();
            e.0 += c * v;
            e.1 += c * v * v;
        }
    }
    let per_word = words
        .iter()
        .zip(word_sum)
        .map(|(w, s)| {
            let mean = s / total;
            (
                w.clone(),
                ObservableStats {
                    mean,
                    variance: unbiased(mean, 1.0, shots),
                },
            )
        })
        .collect();
    let per_gradient = grad_sum
        .into_iter()
        .map(|(i, (s, s2))| {
            let mean = s / total;
            (
                i,
                ObservableStats {
                    mean,
                    variance: unbiased(mean, s2 / total, shots),
                },
            )
        })
        .collect();
    GroupSampleResult {
        group_id: group.group_id,
        shots_used: shots,
        per_word,
        per_gradient,
    }
}

fn exact_result(state: &StateVector, group: &GradientGroup, words: &[PauliWord]) -> Result<GroupSampleResult> {
    let means: HashMap<&PauliWord, f64> = words
        .iter()
        .map(|w| state.word_expectation(w).map(|m| (w, m)))
        .collect::<Result<_>>()?;
    let mut per_gradient: BTreeMap<usize, ObservableStats> = BTreeMap::new();
    for o in &group.observables {
        let m = means[&o.word];
        let e = per_gradient.entry(o.gradient_index).or_insert(ObservableStats {
            mean: 0.0,
            variance: 0.0,
        });
        e.mean += o.coeff * m;
        e.variance += o.coeff * o.coeff * (1.0 - m * m).max(0.0);
    }
    Ok(GroupSampleResult {
        group_id: group.group_id,
        shots_used: 0,
        per_word: words
            .iter()
            .map(|w| {
                let m = means[w];
                (
                    w.clone(),
                    ObservableStats {
                        mean: m,
                        variance: (1.0 - m * m).max(0.0),
                    },
                )
            })
            .collect(),
        per_gradient,
    })
}

fn checked_words(group: &GradientGroup, state: &StateVector) -> Result<Vec<PauliWord>> {
    if !verify_group(group) {
        return Err(Error::NonCommutingGroup {
            group_id: group.group_id,
        });
    }
    let words = group.distinct_words();
    if let Some(w) = words.iter().find(|w| w.n_qubits() != state.n_qubits()) {
        return Err(Error::DimensionMismatch {
            left: state.n_qubits(),
            right: w.n_qubits(),
        });
    }
    Ok(words)
}

/// `shots` joint samples of every observable in the group. With
/// [`INFINITE_SHOTS`] the exact expectations are returned; per-gradient
/// variances then ignore covariances between words.
pub fn sample_group(state: &StateVector, group: &GradientGroup, shots: u64, rng: &mut impl Rng) -> Result<GroupSampleResult> {
    let words = checked_words(group, state)?;
    if shots == 0 {
        return Err(Error::InvalidArgument(format!("group {} needs at least one shot", group.group_id)));
    }
    if shots == INFINITE_SHOTS {
        return exact_result(state, group, &words);
    }
    let hist = if state.n_qubits() <= ENUMERATION_QUBIT_LIMIT {
        JointDistribution::enumerate(state, &words)?.draw(shots, rng)
    } else {
        rotated_joint_samples(state, &diagonalize_words(&words)?, shots, rng)?
    };
    Ok(aggregate(group, &words, &hist))
}

/// Per-shot sequential measurement, in canonical word order or reversed.
pub fn sample_group_sequential(
    state: &StateVector,
    group: &GradientGroup,
    shots: u64,
    reverse: bool,
    rng: &mut impl Rng,
) -> Result<GroupSampleResult> {
    let words = checked_words(group, state)?;
    let mut order: Vec<usize> = (0..words.len()).collect();
    if reverse {
        order.reverse();
    }
    let hist = sequential_joint_samples(state, &words, &order, shots, rng)?;
    Ok(aggregate(group, &words, &hist))
}

/// Sampling through the synthesized measurement circuit.
pub fn sample_group_rotated(state: &StateVector, group: &GradientGroup, shots: u64, rng: &mut impl Rng) -> Result<GroupSampleResult> {
    let words = checked_words(group, state)?;
    let hist = rotated_joint_samples(state, &diagonalize_words(&words)?, shots, rng)?;
    Ok(aggregate(group, &words, &hist))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GradientEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Some contributing group received no shots.
    pub starved: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradientEstimates {
    pub estimates: BTreeMap<usize, GradientEstimate>,
    pub shots_used: u64,
    #[serde(skip)]
    pub samples: Vec<GroupSampleResult>,
}

/// Samples every group with its planned shots (each on its own RNG stream
/// derived from `seed` and the group id) and sums contributions per
/// gradient. Gradients absent from every group are absent from the map.
pub fn estimate_pool_gradients(
    state: &StateVector,
    groups: &[GradientGroup],
    plan: &ShotPlan,
    seed: u64,
) -> Result<GradientEstimates> {
    if plan.per_group.len() != groups.len() {
        return Err(Error::PlanMismatch(format!(
            "plan covers {} groups, grouping has {}",
            plan.per_group.len(),
            groups.len()
        )));
    }
    let results: Vec<Option<GroupSampleResult>> = groups
        .par_iter()
        .zip(&plan.per_group)
        .map(|(g, &shots)| {
            if shots == 0 {
                return Ok(None);
            }
            let mut rng = stream(seed, tags::GROUP_SAMPLING, g.group_id as u64);
            sample_group(state, g, shots, &mut rng).map(Some)
        })
        .collect::<Result<_>>()?;
    let mut acc: BTreeMap<usize, (f64, f64, bool)> = BTreeMap::new();
    let mut shots_used = 0u64;
    let mut samples = Vec::new();
    for (g, r) in groups.iter().zip(results) {
        match r {
            Some(r) => {
                shots_used = shots_used.saturating_add(r.shots_used);
                for (&i, stats) in &r.per_gradient {
                    let e = acc.entry(i).or_default();
                    e.0 += stats.mean;
                    if r.shots_used > 0 {
                        e.1 += stats.variance / r.shots_used as f64;
                    }
                }
                samples.push(r);
            }
            None => {
                for i in g.gradient_indices() {
                    acc.entry(i).or_default().2 = true;
                }
            }
        }
    }
    let estimates = acc
        .into_iter()
        .map(|(i, (value, var, starved))| {
            let std_error = if starved { f64::INFINITY } else { var.sqrt() };
            (
                i,
                GradientEstimate {
                    value,
                    std_error,
                    starved,
                },
            )
        })
        .collect();
    Ok(GradientEstimates {
        estimates,
        shots_used,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouping::GroupObservable;
    use crate::sim::prepare_reference;

    fn w(t: &str, n: usize) -> PauliWord {
        PauliWord::parse(t, n).unwrap()
    }

    fn group(n: usize, words: &[&str]) -> GradientGroup {
        GradientGroup::new(
            0,
            None,
            None,
            words
                .iter()
                .enumerate()
                .map(|(i, t)| GroupObservable {
                    gradient_index: i,
                    coeff: 1.0,
                    word: w(t, n),
                })
                .collect(),
        )
    }

    fn bell() -> StateVector {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(
            2,
            vec![Complex64::new(r, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(r, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn deterministic_outcomes() {
        let mut rng = stream(1, 0, 0);
        let r = sample_group(&prepare_reference(2, &[]).unwrap(), &group(2, &["Z0", "Z1"]), 37, &mut rng).unwrap();
        assert_eq!(r.shots_used, 37);
        for (_, s) in &r.per_word {
            assert_eq!(s.mean, 1.0);
            assert_eq!(s.variance, 0.0);
        }
        let d = JointDistribution::enumerate(&bell(), &[w("X0 X1", 2), w("Z0 Z1", 2)]).unwrap();
        assert_eq!(d.outcomes, vec![vec![1, 1]]);
        assert!((d.probabilities[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbiased_coin() {
        let mut rng = stream(2, 0, 0);
        let r = sample_group(&prepare_reference(1, &[]).unwrap(), &group(1, &["X0"]), 10_000, &mut rng).unwrap();
        assert!(r.per_word[0].1.mean.abs() < 0.05);
    }

    #[test]
    fn three_paths_agree_on_bell_state() {
        let words = [w("X0 X1", 2), w("Y0 Y1", 2), w("Z0 Z1", 2)];
        let mut rng = stream(3, 0, 0);
        let seq = sequential_joint_samples(&bell(), &words, &[2, 0, 1], 50, &mut rng).unwrap();
        let rot = rotated_joint_samples(&bell(), &diagonalize_words(&words).unwrap(), 50, &mut rng).unwrap();
        let expected: Histogram = [(vec![1, -1, 1], 50)].into_iter().collect();
        assert_eq!(seq, expected);
        assert_eq!(rot, expected);
    }

    #[test]
    fn invalid_requests() {
        let mut rng = stream(4, 0, 0);
        let s = prepare_reference(1, &[]).unwrap();
        assert!(sample_group(&s, &group(1, &["Z0"]), 0, &mut rng).is_err());
        assert!(matches!(
            sample_group(&s, &group(1, &["Z0", "X0"]), 10, &mut rng),
            Err(Error::NonCommutingGroup { .. })
        ));
    }

    #[test]
    fn exact_plan_reproduces_expectations() {
        let s = bell();
        let g = group(2, &["X0 X1", "Z0 Z1", "Y0 Y1"]);
        let est = estimate_pool_gradients(&s, &[g], &ShotPlan::exact(1), 0).unwrap();
        assert_eq!(est.shots_used, 0);
        assert!((est.estimates[&0].value - 1.0).abs() < 1e-12);
        assert!((est.estimates[&1].value - 1.0).abs() < 1e-12);
        assert!((est.estimates[&2].value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn starved_groups_are_flagged() {
        let s = bell();
        let g = group(2, &["Z0"]);
        let plan = ShotPlan {
            per_group: vec![0],
            total: 0,
            target_epsilon: None,
            budget: Some(0),
            warnings: vec![],
        };
        let est = estimate_pool_gradients(&s, &[g], &plan, 0).unwrap();
        assert!(est.estimates[&0].starved);
        assert!(est.estimates[&0].std_error.is_infinite());
    }
}
