use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;

use orderlab::entropy::{
    block_entropy_rate_with, conditional_entropy_finite_past, measure_entropy, pinsker_check,
    FinitePartitionSpec, PinskerCheckReport, ShiftMeasure,
};
use orderlab::folner::defect_trend_with;
use orderlab::group::{enumerate_box, standard_generators};
use orderlab::order::{verify_admissibility_with, verify_past_axioms_with, AxiomReport, AdmissibilityReport};
use orderlab::pairs::{
    chaotic_difference_sets, chaotic_sample, cyclic_flip, difference_violation_set,
    enumeration_prefix, is_asymptotic_truncated_with, li_yorke_base_window, li_yorke_witness,
    make_finite_difference_pair, prefix_length_for, seeded_configuration, stable_set_sample,
    PairReport, PairVerdict, SparseSet, VerdictKind, Witness,
};
use orderlab::shift::{top_entropy_estimate_with, Alphabet, EntropyEstimate, ShiftSystem};
use orderlab::{Error, FiniteWindow, GroupElement, GroupId, OrderedGroupContext, Strategy};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    AsymptoticArgs, ChaoticArgs, EntropyArgs, FolnerArgs, LiYorkeArgs, PairsCommand, StableArgs,
    VerifyArgs,
};
use crate::output::{Outcome, Rendered};

pub const THREADS_VAR: &str = "ORDERLAB_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or parameters: exit 2.
    Usage(String),
    /// An internal cross-check disagreed: exit 1.
    Check(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => CliError::Check(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

type CmdResult = Result<Outcome, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Reads `ORDERLAB_THREADS`; a value of 1 runs everything sequentially.
pub fn configure_threads() -> Result<Strategy, CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(Strategy::default());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    if threads == 1 {
        return Ok(Strategy::Sequential);
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("thread pool: {e}")))?;
    Ok(Strategy::Parallel)
}

fn positive(name: &str, value: u64) -> Result<(), CliError> {
    if value == 0 {
        Err(usage(format!("--{name} must be positive")))
    } else {
        Ok(())
    }
}

fn alphabet(size: usize) -> Result<Alphabet, CliError> {
    Ok(Alphabet::new(size)?)
}

/// `none`, or `;`-separated cells each given as coordinates or a generator name.
fn parse_cells(group: GroupId, text: &str) -> Result<FiniteWindow, CliError> {
    let text = text.trim();
    if text.is_empty() || text == "none" {
        return Ok(FiniteWindow::empty(group));
    }
    let cells = text
        .split(';')
        .map(|c| GroupElement::parse(group, c))
        .collect::<orderlab::Result<Vec<_>>>()?;
    Ok(FiniteWindow::from_elements(group, cells)?)
}

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("--range expects a:b, got {text:?}")))?;
    let parse = |s: &str| s.trim().parse::<u64>().map_err(|e| usage(format!("--range {text:?}: {e}")));
    let (lo, hi) = (parse(a)?, parse(b)?);
    if lo < 1 || lo >= hi {
        return Err(usage("--range needs 1 ≤ a < b"));
    }
    Ok((lo, hi))
}

fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
}

#[derive(Serialize)]
struct VerifyReport {
    axioms: AxiomReport,
    admissibility: AdmissibilityReport,
}

pub fn verify(a: &VerifyArgs, strategy: Strategy) -> CmdResult {
    let group = a.group.resolve()?;
    positive("radius", a.radius)?;
    positive("nmax", a.nmax)?;
    let ctx = OrderedGroupContext::standard(group)?;
    let axioms = verify_past_axioms_with(&ctx, a.radius, strategy)?;
    let admissibility = verify_admissibility_with(&ctx, a.nmax, a.radius, strategy)?;
    let passed = axioms.passed && admissibility.passed;

    let rows = [
        ("axiom1", axioms.axiom1_violations.len()),
        ("axiom2", axioms.axiom2_violations.len()),
        ("axiom3", axioms.axiom3_violations.len()),
        ("closure", admissibility.closure_violations.len()),
        ("containment", admissibility.containment_violations.len()),
        ("conjugation", admissibility.conjugation_violations.len()),
        ("sequences", admissibility.sequence_violations.len()),
        ("certificates", admissibility.certificates.iter().filter(|c| !c.ok).count()),
        ("count_bound", admissibility.bound_violations.len()),
        ("count_errors", admissibility.count_errors.len()),
    ];
    let mut csv = String::from("check,violations\n");
    let mut text = format!("group {group}, box radius {}, n_max {}\n", a.radius, a.nmax);
    for (name, count) in rows {
        let _ = writeln!(csv, "{name},{count}");
        let _ = writeln!(text, "{name:<14} {count} violations");
    }
    for (n, c) in &admissibility.counts_below {
        let _ = write!(text, "count below f_{n}: {c}");
        match admissibility.bound_values.get(n) {
            Some(b) => {
                let _ = writeln!(text, " (bound {b})");
            }
            None => text.push('\n'),
        }
    }
    let report = VerifyReport { axioms, admissibility };
    Rendered {
        command: "verify",
        passed,
        config: json!({ "group": group, "radius": a.radius, "nmax": a.nmax }),
        report: &report,
        csv: Some(csv),
        text,
    }
    .emit(&a.output)
    .map_err(CliError::from)
}

pub fn folner(a: &FolnerArgs, strategy: Strategy) -> CmdResult {
    let group = a.group.resolve()?;
    let g = GroupElement::parse(group, &a.g)?;
    let (lo, hi) = parse_range(&a.range)?;
    let series = defect_trend_with(group, &g, lo, hi, a.threshold, strategy)?;
    let mut text = format!("group {group}, translator {g}\n");
    for p in &series.values {
        let _ = writeln!(text, "n={:<4} |F|={:<8} defect={}/{} ({})", p.n, p.window_size, p.numerator, p.denominator, p.value);
    }
    let _ = writeln!(text, "strictly decreasing: {}", series.strictly_decreasing);
    Rendered {
        command: "folner",
        passed: series.passed,
        config: json!({ "group": group, "g": g, "range": [lo, hi], "threshold": a.threshold }),
        report: &series,
        csv: Some(series.to_csv()),
        text,
    }
    .emit(&a.output)
    .map_err(CliError::from)
}

#[derive(Serialize)]
struct TopologicalReport {
    group: GroupId,
    alphabet: usize,
    full_shift: bool,
    forbidden_patterns: usize,
    estimates: Vec<EntropyEstimate>,
    /// `ln k`, attained exactly by the full shift at every `n`.
    log_alphabet: f64,
}

#[derive(Serialize)]
struct PastComparison {
    rate: f64,
    past_one: f64,
    past_three: f64,
    rate_gap: f64,
    deepening_gap: f64,
}

#[derive(Serialize)]
struct MeasureReport {
    group: GroupId,
    measure: ShiftMeasure,
    entropy: f64,
    block_rate: Option<(u64, f64)>,
    past_comparison: Option<PastComparison>,
    pinsker: Option<PinskerCheckReport>,
}

pub fn entropy(a: &EntropyArgs, strategy: Strategy) -> CmdResult {
    if let Some(path) = &a.measure {
        return measure_entropy_cmd(a, path, strategy);
    }
    let sys = match (&a.sft, a.full) {
        (Some(path), _) => ShiftSystem::from_sft_text(&read_file(path)?)?,
        (None, true) => ShiftSystem::full(a.group.resolve()?, alphabet(a.alphabet)?),
        (None, false) => return Err(usage("entropy needs one of --sft, --full or --measure")),
    };
    let n_max = a.n.ok_or_else(|| usage("--n is required for topological entropy"))?;
    positive("n", n_max)?;
    let estimates = (1..=n_max)
        .map(|n| top_entropy_estimate_with(&sys, n, strategy))
        .collect::<orderlab::Result<Vec<_>>>()?;
    let log_alphabet = (sys.alphabet().size() as f64).ln();
    let passed = !sys.is_full() || estimates.iter().all(|e| e.estimate == log_alphabet);
    let mut csv = String::from("n,window_size,pattern_count,estimate\n");
    let mut text = format!("shift on {} over {} symbols\n", sys.group(), sys.alphabet().size());
    for e in &estimates {
        let _ = writeln!(csv, "{},{},{},{}", e.n, e.window_size, e.pattern_count, e.estimate);
        let _ = writeln!(text, "n={:<4} |F|={:<6} patterns={} estimate={}", e.n, e.window_size, e.pattern_count, e.estimate);
    }
    let report = TopologicalReport {
        group: sys.group(),
        alphabet: sys.alphabet().size(),
        full_shift: sys.is_full(),
        forbidden_patterns: sys.forbidden().len(),
        estimates,
        log_alphabet,
    };
    Rendered {
        command: "entropy",
        passed,
        config: json!({
            "group": report.group,
            "sft": a.sft.as_ref().map(|p| p.display().to_string()),
            "full": a.full,
            "alphabet": report.alphabet,
            "n": n_max,
        }),
        report: &report,
        csv: Some(csv),
        text,
    }
    .emit(&a.output)
    .map_err(CliError::from)
}

fn measure_entropy_cmd(a: &EntropyArgs, path: &std::path::Path, strategy: Strategy) -> CmdResult {
    let group = a.group.resolve()?;
    let mu = ShiftMeasure::from_json(&read_file(path)?)?;
    mu.supports(group)?;
    let entropy = measure_entropy(&mu);
    let block_rate = match a.n {
        Some(n) => Some((n, block_entropy_rate_with(&mu, group, n, strategy)?)),
        None => None,
    };
    let past_comparison = if mu.is_markov() && group == GroupId::IntegerLattice(1) {
        let alpha = FinitePartitionSpec::at_identity(group);
        let past = |cells: &str| parse_cells(group, cells);
        let past_one = conditional_entropy_finite_past(&mu, &alpha, &past("-1")?)?;
        let past_three = conditional_entropy_finite_past(&mu, &alpha, &past("-1;-2;-3")?)?;
        Some(PastComparison {
            rate: entropy,
            past_one,
            past_three,
            rate_gap: (past_one - entropy).abs(),
            deepening_gap: (past_three - past_one).abs(),
        })
    } else {
        None
    };
    let pinsker = if a.pinsker {
        positive("radius", a.radius)?;
        let alpha = match &a.alpha {
            Some(t) => FinitePartitionSpec::new(parse_cells(group, t)?)?,
            None => FinitePartitionSpec::at_identity(group),
        };
        let beta = match &a.beta {
            Some(t) => FinitePartitionSpec::new(parse_cells(group, t)?)?,
            None => FinitePartitionSpec::at(standard_generators(group)[0].1.clone()),
        };
        Some(pinsker_check(&mu, &alpha, &beta, a.radius)?)
    } else {
        None
    };
    let passed = past_comparison.as_ref().is_none_or(|c| c.rate_gap < 1e-12 && c.deepening_gap < 1e-12)
        && pinsker.as_ref().is_none_or(|p| p.passed);

    let mut text = format!("{} measure on {group}: entropy {entropy}\n", mu.kind());
    if let Some((n, rate)) = block_rate {
        let _ = writeln!(text, "block rate at n={n}: {rate}");
    }
    if let Some(c) = &past_comparison {
        let _ = writeln!(text, "H(x0 | x-1) = {}, H(x0 | x-1,x-2,x-3) = {}", c.past_one, c.past_three);
    }
    if let Some(p) = &pinsker {
        let _ = writeln!(text, "pinsker radius {}: lhs {} rhs {} gap {:e}", p.truncation_radius, p.lhs, p.rhs, p.gap);
    }
    let report = MeasureReport { group, measure: mu, entropy, block_rate, past_comparison, pinsker };
    Rendered {
        command: "entropy",
        passed,
        config: json!({
            "group": group,
            "measure": path.display().to_string(),
            "n": a.n,
            "pinsker": a.pinsker,
            "radius": a.radius,
        }),
        report: &report,
        csv: None,
        text,
    }
    .emit(&a.output)
    .map_err(CliError::from)
}

pub fn pairs(cmd: PairsCommand, strategy: Strategy) -> CmdResult {
    match cmd {
        PairsCommand::Liyorke(a) => liyorke(&a),
        PairsCommand::Asymptotic(a) => asymptotic(&a, strategy),
        PairsCommand::Stable(a) => stable(&a),
        PairsCommand::Chaotic(a) => chaotic(&a),
    }
}

fn lattice_only(group: GroupId) -> Result<(), CliError> {
    if group.is_abelian() {
        Ok(())
    } else {
        Err(usage("Li-Yorke constructions are only available on ℤ^d"))
    }
}

/// Cap on the cells of a Li-Yorke evaluation window.
const MAX_WINDOW_CELLS: u128 = 1 << 24;

fn li_yorke_window(diff: &SparseSet) -> Result<FiniteWindow, CliError> {
    let side = 2 * diff.required_radius() as u128 + 1;
    let cells = side.checked_pow(diff.group().rank() as u32).unwrap_or(u128::MAX);
    if cells > MAX_WINDOW_CELLS {
        return Err(usage(format!(
            "the construction needs {cells} cells on {}; lower --depth or --k0, or use a smaller --d",
            diff.group()
        )));
    }
    Ok(li_yorke_base_window(diff))
}

fn witness_csv(verdict: &PairVerdict) -> String {
    let mut csv = String::from("role,s,first_disagreement,distance\n");
    let groups: [(&str, &[Witness]); 3] = [
        ("violation", &verdict.violations),
        ("distal", &verdict.distal_witnesses),
        ("proximal", &verdict.proximal_witnesses),
    ];
    for (role, list) in groups {
        for w in list {
            let index = w.distance.first_disagreement.map(|i| i.to_string()).unwrap_or_default();
            let _ = writeln!(csv, "{role},\"{}\",{index},{:e}", w.s, w.distance.value());
        }
    }
    csv
}

fn witness_text(verdict: &PairVerdict) -> String {
    let mut text = format!("verdict: {:?}\n", verdict.kind);
    for w in &verdict.distal_witnesses {
        let _ = writeln!(text, "distal   s={} d={}", w.s, w.distance);
    }
    for w in &verdict.proximal_witnesses {
        let _ = writeln!(text, "proximal s={} d={}", w.s, w.distance);
    }
    text
}

#[derive(Serialize)]
struct LiYorkeReport<'a> {
    difference_set: &'a SparseSet,
    window_radius: u64,
    verdict: &'a PairVerdict,
}

fn liyorke(a: &LiYorkeArgs) -> CmdResult {
    let group = a.group.resolve()?;
    lattice_only(group)?;
    let k = alphabet(a.alphabet)?;
    let diff = SparseSet::diagonal(group, a.k0, a.depth)?;
    let base = seeded_configuration(li_yorke_window(&diff)?, k, a.seed);
    let (_, verdict) = li_yorke_witness(&base, k, &diff, a.delta)?;
    let passed = verdict.kind == VerdictKind::LiYorkeWitnessed && verdict.reverified;
    let report = LiYorkeReport { difference_set: &diff, window_radius: diff.required_radius(), verdict: &verdict };
    Rendered {
        command: "pairs liyorke",
        passed,
        config: json!({
            "group": group, "alphabet": a.alphabet, "delta": a.delta,
            "depth": a.depth, "k0": a.k0, "seed": a.seed,
        }),
        report: &report,
        csv: Some(witness_csv(&verdict)),
        text: witness_text(&verdict),
    }
    .emit(&a.output)
    .map_err(CliError::from)
}

/// Smallest window on which every `d(s·x, s·y)` over `members` and the
/// ε-prefix can be evaluated, together with the difference cells.
fn evaluation_window(
    group: GroupId,
    members: &[GroupElement],
    prefix: &FiniteWindow,
    diff: &FiniteWindow,
) -> Result<FiniteWindow, CliError> {
    let mut cells: HashSet<GroupElement> = diff.iter().cloned().collect();
    for s in members {
        let s_inv = s.inverse();
        for p in prefix {
            cells.insert(s_inv.multiply(p)?);
        }
    }
    Ok(FiniteWindow::from_elements(group, cells.into_iter().collect::<Vec<_>>())?)
}

#[derive(Serialize)]
struct AsymptoticReport<'a> {
    difference_set: &'a FiniteWindow,
    prefix_length: u64,
    semigroup_members: usize,
    verdict: &'a PairVerdict,
    oracle_violations: usize,
    matches_oracle: bool,
    boundary_violations: usize,
}

fn asymptotic(a: &AsymptoticArgs, strategy: Strategy) -> CmdResult {
    let group = a.group.resolve()?;
    positive("horizon", a.horizon)?;
    let k = alphabet(a.alphabet)?;
    let diff = parse_cells(group, &a.diff)?;
    let m = prefix_length_for(a.epsilon)?;
    let prefix = enumeration_prefix(group, m);
    let members = OrderedGroupContext::standard(group)?.semigroup_members(a.horizon);
    let window = evaluation_window(group, &members, &prefix, &diff)?;
    let x = seeded_configuration(window, k, a.seed);
    let y = make_finite_difference_pair(&x, &diff, k, cyclic_flip(k))?;
    let verdict = is_asymptotic_truncated_with(&x, &y, &members, a.epsilon, a.horizon, strategy)?;
    let oracle = difference_violation_set(&members, &diff, &prefix);
    let observed: Vec<&GroupElement> = verdict.violations.iter().map(|w| &w.s).collect();
    let matches_oracle = observed == oracle.iter().collect::<Vec<_>>();
    let boundary_violations = observed.iter().filter(|s| s.box_level() == a.horizon).count();
    let passed = verdict.kind == VerdictKind::AsymptoticWithinHorizon && matches_oracle;

    let mut text = witness_text(&verdict);
    let _ = writeln!(
        text,
        "{} violations of {} semigroup members, cutoff {:?}, boundary violations {}, oracle match {}",
        verdict.violations.len(),
        members.len(),
        verdict.violation_cutoff,
        boundary_violations,
        matches_oracle
    );
    let report = AsymptoticReport {
        difference_set: &diff,
        prefix_length: m,
        semigroup_members: members.len(),
        verdict: &verdict,
        oracle_violations: oracle.len(),
        matches_oracle,
        boundary_violations,
    };
    Rendered {
        command: "pairs asymptotic",
        passed,
        config: json!({
            "group": group, "alphabet": a.alphabet, "diff": diff,
            "horizon": a.horizon, "epsilon": a.epsilon, "seed": a.seed,
        }),
        report: &report,
        csv: Some(witness_csv(&verdict)),
        text,
    }
    .emit(&a.output)
    .map_err(CliError::from)
}

#[derive(Serialize)]
struct StableEntry {
    changed_cells: Vec<GroupElement>,
    kind: VerdictKind,
    violations: usize,
    violation_cutoff: Option<u64>,
}

fn stable(a: &StableArgs) -> CmdResult {
    let group = a.group.resolve()?;
    positive("horizon", a.horizon)?;
    let k = alphabet(a.alphabet)?;
    let m = prefix_length_for(a.epsilon)?;
    let prefix = enumeration_prefix(group, m);
    let members = OrderedGroupContext::standard(group)?.semigroup_members(a.horizon);
    let cells = enumerate_box(group, a.cell_radius);
    let window = evaluation_window(group, &members, &prefix, &cells)?;
    let x = seeded_configuration(window, k, a.seed);
    let sample = stable_set_sample(
        &x, k, &members, a.epsilon, a.horizon, a.budget, a.max_cells, a.cell_radius, a.seed,
    )?;
    let entries: Vec<StableEntry> = sample
        .iter()
        .map(|m| StableEntry {
            changed_cells: m.changed_cells.clone(),
            kind: m.verdict.kind,
            violations: m.verdict.violations.len(),
            violation_cutoff: m.verdict.violation_cutoff,
        })
        .collect();
    let passed = !entries.is_empty();
    let mut csv = String::from("member,changed_cells,violations,cutoff\n");
    let mut text = format!("{} stable-set members found (budget {})\n", entries.len(), a.budget);
    for (i, e) in entries.iter().enumerate() {
        let cells: Vec<String> = e.changed_cells.iter().map(|g| g.to_string()).collect();
        let cutoff = e.violation_cutoff.map(|c| c.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{i},\"{}\",{},{cutoff}", cells.join(" "), e.violations);
        let _ = writeln!(text, "#{i}: {} changed, {} violations", cells.join(" "), e.violations);
    }
    Rendered {
        command: "pairs stable",
        passed,
        config: json!({
            "group": group, "alphabet": a.alphabet, "horizon": a.horizon, "epsilon": a.epsilon,
            "budget": a.budget, "max_cells": a.max_cells, "cell_radius": a.cell_radius, "seed": a.seed,
        }),
        report: &entries,
        csv: Some(csv),
        text,
    }
    .emit(&a.output)
    .map_err(CliError::from)
}

#[derive(Serialize)]
struct ChaoticReport<'a> {
    difference_sets: &'a [SparseSet],
    pairs: &'a [PairReport],
}

fn chaotic(a: &ChaoticArgs) -> CmdResult {
    let group = a.group.resolve()?;
    lattice_only(group)?;
    let k = alphabet(a.alphabet)?;
    let sets = chaotic_difference_sets(group, a.members, a.k0, a.depth)?;
    // every pair is evaluated over its own union, so size the window for the widest one
    let mut widest: Option<SparseSet> = None;
    for (i, di) in sets.iter().enumerate() {
        for dj in &sets[i + 1..] {
            let u = di.union(dj)?;
            if widest.as_ref().is_none_or(|w| u.required_radius() > w.required_radius()) {
                widest = Some(u);
            }
        }
    }
    let widest = widest.expect("at least two members");
    let base = seeded_configuration(li_yorke_window(&widest)?, k, a.seed);
    let sample = chaotic_sample(&base, k, sets, a.delta)?;
    let mut csv = String::from("i,j,verdict,distal,proximal\n");
    let mut text = format!("{} members, {} pairs\n", sample.members.len(), sample.pairs.len());
    for p in &sample.pairs {
        let kind = serde_json::to_value(p.verdict.kind).map_err(|e| e.to_string())?;
        let kind = kind.as_str().unwrap_or_default().to_string();
        let _ = writeln!(csv, "{},{},{kind},{},{}", p.i, p.j, p.verdict.distal_witnesses.len(), p.verdict.proximal_witnesses.len());
        let _ = writeln!(text, "({}, {}): {kind}", p.i, p.j);
    }
    let report = ChaoticReport { difference_sets: &sample.difference_sets, pairs: &sample.pairs };
    Rendered {
        command: "pairs chaotic",
        passed: sample.passed,
        config: json!({
            "group": group, "alphabet": a.alphabet, "members": a.members, "delta": a.delta,
            "depth": a.depth, "k0": a.k0, "seed": a.seed,
        }),
        report: &report,
        csv: Some(csv),
        text,
    }
    .emit(&a.output)
    .map_err(CliError::from)
}
