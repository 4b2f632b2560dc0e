//! Report-producing entry points behind the command-line binary. Every report
//! embeds a [`RunManifest`] and serializes deterministically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::adapt::{run_adapt, AdaptConfig, AdaptTrace, GroupingStrategy};
use crate::adapt::{build_groups, check_compatible};
use crate::error::{Error, Result};
use crate::fixtures::{random_commuting_word, random_hamiltonian, random_state, random_word};
use crate::grouping::{
    anchor_partition, build_gradient_groups, synthesize_measurement_rotation, verify_group, GradientGroup,
    GroupObservable, Pivot,
};
use crate::hamiltonian_file::load_hamiltonian;
use crate::operator::WeightedPauliSum;
use crate::pauli::{commutator, PauliWord};
use crate::pools::{qubit_pool, OperatorPool, PoolKind};
use crate::rng::{stream, tags};
use crate::shots::{naive_vqe_budget, total_budget, AllocationRule, ShotPlan, VarianceModel};
use crate::sim::{estimate_pool_gradients, exact_ground_state, GROUND_STATE_LIMIT};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub config: serde_json::Value,
    pub master_seed: u64,
    pub output: Option<String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, inputs: &[&Path], config: &impl Serialize, seed: u64, output: Option<&Path>) -> Result<Self> {
        Ok(RunManifest {
            command: command.to_string(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            config: serde_json::to_value(config)?,
            master_seed: seed,
            output: output.map(|p| p.display().to_string()),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `out`, or stdout when `None`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load(path: &Path) -> Result<WeightedPauliSum> {
    load_hamiltonian(path)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupArgs {
    pub hamiltonian: PathBuf,
    pub pool: PoolKind,
    pub strategy: GroupingStrategy,
    pub synthesize: bool,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglingSummary {
    pub total: usize,
    pub max_per_group: usize,
    /// entangling gates → number of groups
    pub histogram: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupReport {
    pub manifest: RunManifest,
    pub n_qubits: usize,
    pub hamiltonian_terms: usize,
    pub pool: PoolKind,
    pub pool_size: usize,
    pub strategy: GroupingStrategy,
    /// Commuting pool sets per pivot (anchored strategy only).
    pub partition_sets: Option<usize>,
    pub groups: usize,
    pub observables: usize,
    /// observables per group → number of groups
    pub observables_per_group: BTreeMap<usize, usize>,
    pub greedy_baseline_groups: usize,
    pub entangling: Option<EntanglingSummary>,
}

fn histogram(values: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

pub fn partition_set_count(pool: &OperatorPool, strategy: GroupingStrategy) -> Option<usize> {
    match (strategy, pool.kind) {
        (GroupingStrategy::Anchored, PoolKind::Qubit | PoolKind::Qeb) => Some(2 * pool.n_qubits),
        (GroupingStrategy::Anchored, PoolKind::G) => Some(2),
        _ => None,
    }
}

pub fn group_report(h: &WeightedPauliSum, args: &GroupArgs) -> Result<GroupReport> {
    let pool = OperatorPool::build(args.pool, h.n_qubits())?;
    let groups = build_groups(h, &pool, args.strategy)?;
    let greedy_baseline_groups = if args.strategy == GroupingStrategy::Greedy {
        groups.len()
    } else {
        build_groups(h, &pool, GroupingStrategy::Greedy)?.len()
    };
    let entangling = if args.synthesize {
        let counts = groups
            .iter()
            .map(|g| synthesize_measurement_rotation(g).map(|r| r.entangling_count))
            .collect::<Result<Vec<_>>>()?;
        Some(EntanglingSummary {
            total: counts.iter().sum(),
            max_per_group: counts.iter().copied().max().unwrap_or(0),
            histogram: histogram(counts.into_iter()),
        })
    } else {
        None
    };
    Ok(GroupReport {
        manifest: RunManifest::new("group", &[&args.hamiltonian], args, 0, args.out.as_deref())?,
        n_qubits: h.n_qubits(),
        hamiltonian_terms: h.len(),
        pool: args.pool,
        pool_size: pool.len(),
        strategy: args.strategy,
        partition_sets: partition_set_count(&pool, args.strategy),
        groups: groups.len(),
        observables: groups.iter().map(|g| g.observables.len()).sum(),
        observables_per_group: histogram(groups.iter().map(|g| g.observables.len())),
        greedy_baseline_groups,
        entangling,
    })
}

pub fn cmd_group(args: &GroupArgs) -> Result<GroupReport> {
    let report = group_report(&load(&args.hamiltonian)?, args)?;
    emit(&to_json(&report)?, args.out.as_deref())?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct AllocateArgs {
    pub hamiltonian: PathBuf,
    pub pool: PoolKind,
    pub strategy: GroupingStrategy,
    pub epsilon: f64,
    /// Defaults to worst-case for anchored groups and tight otherwise.
    pub rule: Option<AllocationRule>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupShots {
    pub group_id: usize,
    pub pivot_term: Option<usize>,
    pub pivot_coeff: Option<f64>,
    pub set_id: Option<usize>,
    pub observables: usize,
    pub shots: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AllocateReport {
    pub manifest: RunManifest,
    pub n_qubits: usize,
    pub epsilon: f64,
    pub rule: AllocationRule,
    pub sum_abs_coefficients: f64,
    pub per_group: Vec<GroupShots>,
    pub total: u64,
    pub naive_vqe_shots: f64,
    /// `total / naive_vqe_shots`
    pub ratio: f64,
    pub bound_8n: f64,
    pub within_bound: bool,
    pub max_predicted_error: f64,
    pub warnings: Vec<String>,
}

pub fn allocate_report(h: &WeightedPauliSum, args: &AllocateArgs) -> Result<AllocateReport> {
    let pool = OperatorPool::build(args.pool, h.n_qubits())?;
    let groups = build_groups(h, &pool, args.strategy)?;
    let rule = args.rule.unwrap_or(if args.strategy == GroupingStrategy::Anchored {
        AllocationRule::WorstCase
    } else {
        AllocationRule::Tight
    });
    let cap = (args.strategy == GroupingStrategy::Anchored)
        .then(|| total_budget(h, args.epsilon).map(|b| b.floor() as u64))
        .transpose()?;
    let plan = ShotPlan::for_target_error(&groups, &VarianceModel::UpperBound, rule, h.abs_sum(), args.epsilon, cap)?;
    let errors = plan.predicted_errors(&groups, &VarianceModel::UpperBound)?;
    let naive = naive_vqe_budget(h, args.epsilon)?;
    let ratio = if naive > 0.0 { plan.total as f64 / naive } else { 0.0 };
    let bound = 8.0 * h.n_qubits() as f64;
    Ok(AllocateReport {
        manifest: RunManifest::new("allocate", &[&args.hamiltonian], args, 0, args.out.as_deref())?,
        n_qubits: h.n_qubits(),
        epsilon: args.epsilon,
        rule,
        sum_abs_coefficients: h.abs_sum(),
        per_group: groups
            .iter()
            .zip(&plan.per_group)
            .map(|(g, &shots)| {
                let (pivot_term, pivot_coeff) = match g.pivot {
                    Some(Pivot::HamiltonianTerm { index, coeff }) => (Some(index), Some(coeff)),
                    _ => (None, None),
                };
                GroupShots {
                    group_id: g.group_id,
                    pivot_term,
                    pivot_coeff,
                    set_id: g.set_id,
                    observables: g.observables.len(),
                    shots,
                }
            })
            .collect(),
        total: plan.total,
        naive_vqe_shots: naive,
        ratio,
        bound_8n: bound,
        within_bound: ratio <= bound,
        max_predicted_error: errors.values().copied().fold(0.0, f64::max),
        warnings: plan.warnings,
    })
}

pub fn cmd_allocate(args: &AllocateArgs) -> Result<AllocateReport> {
    let report = allocate_report(&load(&args.hamiltonian)?, args)?;
    emit(&to_json(&report)?, args.out.as_deref())?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdaptArgs {
    pub hamiltonian: PathBuf,
    pub config: AdaptConfig,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptReport {
    pub manifest: RunManifest,
    pub trace: AdaptTrace,
    pub final_energy: f64,
    pub exact_ground_energy: Option<f64>,
    pub error_vs_exact: Option<f64>,
    pub total_shots: u64,
}

pub fn adapt_report(h: &WeightedPauliSum, args: &AdaptArgs) -> Result<AdaptReport> {
    let trace = run_adapt(h, &args.config)?;
    let exact = if h.n_qubits() <= GROUND_STATE_LIMIT {
        Some(exact_ground_state(h)?.0)
    } else {
        None
    };
    Ok(AdaptReport {
        manifest: RunManifest::new("adapt", &[&args.hamiltonian], &args.config, args.config.master_seed, args.out.as_deref())?,
        final_energy: trace.final_energy,
        error_vs_exact: exact.map(|e| trace.final_energy - e),
        exact_ground_energy: exact,
        total_shots: trace.total_shots,
        trace,
    })
}

/// Runs ADAPT and returns the exit code of its final status.
pub fn cmd_adapt(args: &AdaptArgs) -> Result<i32> {
    args.config.validate()?;
    let h = load(&args.hamiltonian)?;
    let pool = OperatorPool::build(args.config.pool_kind, h.n_qubits())?;
    check_compatible(&pool, args.config.grouping_strategy)?;
    let report = adapt_report(&h, args)?;
    emit(&to_json(&report)?, args.out.as_deref())?;
    Ok(report.trace.status.exit_code())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub terms: usize,
    pub max_abs: f64,
    pub min_abs: f64,
    pub ratio: f64,
}

/// CSV of `rank,coefficient,abs_coefficient` sorted by signed coefficient,
/// descending, followed by a `#` summary line.
pub fn spectrum_csv(h: &WeightedPauliSum) -> (String, SpectrumSummary) {
    let mut coeffs: Vec<(f64, PauliWord)> = h.terms().to_vec();
    coeffs.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut csv = String::from("rank,coefficient,abs_coefficient,word\n");
    for (rank, (c, w)) in coeffs.iter().enumerate() {
        writeln!(csv, "{},{},{},{}", rank + 1, c, c.abs(), w.to_text()).unwrap();
    }
    let max_abs = coeffs.iter().map(|(c, _)| c.abs()).fold(0.0, f64::max);
    let min_abs = coeffs.iter().map(|(c, _)| c.abs()).fold(f64::INFINITY, f64::min);
    let summary = SpectrumSummary {
        terms: coeffs.len(),
        max_abs,
        min_abs,
        ratio: max_abs / min_abs,
    };
    writeln!(
        csv,
        "# terms={} max_abs={} min_abs={} ratio={}",
        summary.terms, summary.max_abs, summary.min_abs, summary.ratio
    )
    .unwrap();
    (csv, summary)
}

pub fn cmd_spectrum(hamiltonian: &Path, out: Option<&Path>) -> Result<SpectrumSummary> {
    let (csv, summary) = spectrum_csv(&load(hamiltonian)?);
    emit(&csv, out)?;
    Ok(summary)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyArgs {
    pub qubits: usize,
    pub trials: usize,
    pub seed: u64,
    /// Adds a deliberately non-commuting group to the grouping check.
    pub inject_corrupt_group: bool,
    pub out: Option<PathBuf>,
}

impl Default for VerifyArgs {
    fn default() -> Self {
        VerifyArgs {
            qubits: 6,
            trials: 2000,
            seed: 0,
            inject_corrupt_group: false,
            out: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub manifest: RunManifest,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Commutators of commuting words with a shared pivot must commute.
pub fn pivot_lemma_violations(n: usize, trials: usize, seed: u64) -> Result<usize> {
    let mut rng = stream(seed, tags::FIXTURE, 1);
    let mut violations = 0;
    for _ in 0..trials {
        let pivot = random_word(n, &mut rng);
        let a = random_word(n, &mut rng);
        let b = random_commuting_word(&a, &mut rng);
        if let (Some((_, ca)), Some((_, cb))) = (commutator(&pivot, &a)?, commutator(&pivot, &b)?) {
            if !ca.commutes_with(&cb) {
                violations += 1;
            }
        }
    }
    Ok(violations)
}

fn grouping_check(n: usize, seed: u64, inject: bool) -> Result<CheckResult> {
    let mut rng = stream(seed, tags::FIXTURE, 2);
    let pool = qubit_pool(n)?;
    let sets = anchor_partition(&pool)?;
    let mut members: Vec<usize> = sets.iter().flat_map(|s| s.member_ids.clone()).collect();
    members.sort_unstable();
    if sets.len() != 2 * n || members != (0..pool.len()).collect::<Vec<_>>() {
        return Ok(check("anchored_partition", false, format!("{} sets for n={n}", sets.len())));
    }
    let h = random_hamiltonian(n, 3 * n, false, &mut rng)?;
    let mut groups = build_gradient_groups(&h, &sets, &pool)?;
    if inject {
        let word = |t: &str| PauliWord::parse(t, n);
        groups.push(GradientGroup::new(
            groups.len(),
            None,
            None,
            vec![
                GroupObservable {
                    gradient_index: 0,
                    coeff: 1.0,
                    word: word("Z0")?,
                },
                GroupObservable {
                    gradient_index: 1,
                    coeff: 1.0,
                    word: word("X0")?,
                },
            ],
        ));
    }
    let bad: Vec<usize> = groups.iter().filter(|g| !verify_group(g)).map(|g| g.group_id).collect();
    let weights_ok = groups.iter().all(|g| match g.pivot_coeff() {
        Some(hj) => g.observables.iter().all(|o| (o.coeff.abs() - 2.0 * hj.abs()).abs() < 1e-12),
        None => true,
    });
    Ok(check(
        "group_commutation",
        bad.is_empty() && weights_ok,
        if bad.is_empty() {
            format!("{} groups commute; uniform weights: {weights_ok}", groups.len())
        } else {
            format!("non-commuting groups {bad:?}")
        },
    ))
}

fn reconstruction_check(n: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = stream(seed, tags::FIXTURE, 3);
    let pool = qubit_pool(n)?;
    let h = random_hamiltonian(n, 20, false, &mut rng)?;
    let state = random_state(n, &mut rng)?;
    let groups = build_gradient_groups(&h, &anchor_partition(&pool)?, &pool)?;
    let est = estimate_pool_gradients(&state, &groups, &ShotPlan::exact(groups.len()), 0)?;
    let mut worst = 0.0f64;
    for op in &pool.operators {
        let exact = state.exact_gradient(&h, &op.generator)?;
        let summed = est.estimates.get(&op.id).map_or(0.0, |e| e.value);
        worst = worst.max((exact - summed).abs());
    }
    Ok(check("group_sum_reconstruction", worst < 1e-10, format!("max deviation {worst:.3e}")))
}

fn finite_difference_check(n: usize, trials: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = stream(seed, tags::FIXTURE, 4);
    let pool = qubit_pool(n.max(2))?;
    let h = random_hamiltonian(n.max(2), 12, false, &mut rng)?;
    let mut worst = 0.0f64;
    let step = 1e-5;
    for t in 0..trials {
        let state = random_state(n.max(2), &mut rng)?;
        let op = &pool.operators[t % pool.len()];
        let exact = state.exact_gradient(&h, &op.generator)?;
        let energy = |theta: f64| -> Result<f64> {
            let mut s = state.clone();
            s.apply_generator_exponential(&op.generator, theta)?;
            s.expectation(&h)
        };
        let fd = (energy(step)? - energy(-step)?) / (2.0 * step);
        worst = worst.max((exact - fd).abs());
    }
    Ok(check("gradient_finite_difference", worst < 1e-6, format!("max deviation {worst:.3e}")))
}

pub fn verify_report(args: &VerifyArgs) -> Result<VerifyReport> {
    if args.qubits < 2 {
        return Err(Error::InvalidArgument("verify needs at least 2 qubits".into()));
    }
    let violations = pivot_lemma_violations(args.qubits, args.trials, args.seed)?;
    let small = args.qubits.min(6);
    let checks = vec![
        check(
            "pivot_lemma",
            violations == 0,
            format!("{violations} violations in {} trials on {} qubits", args.trials, args.qubits),
        ),
        grouping_check(args.qubits.min(12), args.seed, args.inject_corrupt_group)?,
        reconstruction_check(small.min(5), args.seed)?,
        finite_difference_check(small, args.trials.min(100), args.seed)?,
    ];
    Ok(VerifyReport {
        manifest: RunManifest::new("verify", &[], args, args.seed, args.out.as_deref())?,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Exit code 0 when every check passes, 1 otherwise.
pub fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let report = verify_report(args)?;
    emit(&to_json(&report)?, args.out.as_deref())?;
    Ok(if report.passed { 0 } else { 1 })
}
