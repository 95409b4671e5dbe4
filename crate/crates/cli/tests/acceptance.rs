//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use orderlab::entropy::{
    conditional_entropy_finite_past, measure_entropy, pinsker_check, FinitePartitionSpec, ShiftMeasure,
};
use orderlab::folner::{defect_trend_with, folner_window};
use orderlab::order::{count_below_with, count_bound, verify_admissibility_with, verify_past_axioms_with};
use orderlab::pairs::{
    chaotic_difference_sets, chaotic_sample, cyclic_flip, is_asymptotic_truncated_with,
    li_yorke_base_window, li_yorke_witness, make_finite_difference_pair, seeded_configuration,
    SparseSet, VerdictKind,
};
use orderlab::shift::{top_entropy_estimate_with, Alphabet, Configuration, ShiftSystem};
use orderlab::{FiniteWindow, GroupElement, GroupId, OrderedGroupContext, Strategy};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ctx(group: GroupId) -> OrderedGroupContext {
    OrderedGroupContext::standard(group).expect("standard context")
}

const AXIOM_CASES: [(GroupId, u64); 4] = [
    (GroupId::IntegerLattice(2), 4),
    (GroupId::IntegerLattice(3), 3),
    (GroupId::Heisenberg, 2),
    (GroupId::Unipotent(3), 1),
];

fn order_axioms() -> Outcome {
    let mut slowest = Duration::ZERO;
    for (group, radius) in &AXIOM_CASES {
        let start = Instant::now();
        let report = verify_past_axioms_with(&ctx(*group), *radius, Strategy::Sequential)
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let violations = report.axiom1_violations.len()
            + report.axiom2_violations.len()
            + report.axiom3_violations.len();
        check(report.passed && violations == 0, format!("{group} radius {radius}: {violations} violations"))?;
        check(elapsed < Duration::from_secs(30), format!("{group} radius {radius} took {elapsed:?}"))?;
    }
    Ok(format!("4 groups, zero violations, slowest single-threaded run {:.2}s", slowest.as_secs_f64()))
}

fn admissibility() -> Outcome {
    for (group, radius) in &AXIOM_CASES {
        let r = verify_admissibility_with(&ctx(*group), 3, *radius, Strategy::default())
            .map_err(|e| e.to_string())?;
        check(r.closure_violations.is_empty(), format!("{group}: closure"))?;
        check(r.containment_violations.is_empty(), format!("{group}: containment"))?;
        check(r.conjugation_violations.is_empty(), format!("{group}: conjugation invariance"))?;
        check(r.certificates.iter().all(|c| c.ok) && r.generator_check, format!("{group}: certificates"))?;
        check(r.sequence_violations.is_empty(), format!("{group}: f/h monotonicity"))?;
        check(r.passed, format!("{group}: report not passed"))?;
    }
    Ok("closure, containment, conjugation, certificates, f/h monotone on 4 groups".into())
}

/// `#{(n₃,n₂,n₁) : 0 ≤ n₂ ≤ n₃ < n, 0 ≤ n₁ ≤ n₃²}`.
fn heisenberg_count_closed_form(n: u64) -> u64 {
    (0..n).map(|m| (m + 1) * (m * m + 1)).sum()
}

fn counting_bound() -> Outcome {
    let heis = ctx(GroupId::Heisenberg);
    let mut counts = Vec::new();
    for n in 1..=5 {
        // count_below itself rejects counts that move under one box-enlargement step
        let c = count_below_with(&heis, n, Strategy::default()).map_err(|e| e.to_string())?;
        let bound = (n * n + 1).pow(3);
        check(count_bound(GroupId::Heisenberg, n) == Some(bound), "bound formula")?;
        check(c <= bound, format!("n={n}: {c} > {bound}"))?;
        check(c == heisenberg_count_closed_form(n), format!("n={n}: {c} disagrees with the closed form"))?;
        counts.push(c);
    }
    let line = ctx(GroupId::IntegerLattice(1));
    for n in 1..=20 {
        let c = count_below_with(&line, n, Strategy::default()).map_err(|e| e.to_string())?;
        check(c == n, format!("ℤ: count below {n} is {c}"))?;
    }
    Ok(format!("Heisenberg counts {counts:?} within (n²+1)³; ℤ counts equal n"))
}

fn folner() -> Outcome {
    let z2 = GroupId::IntegerLattice(2);
    let g = GroupElement::new(z2, &[1, 0]).unwrap();
    let series = defect_trend_with(z2, &g, 2, 20, 0.2, Strategy::default()).map_err(|e| e.to_string())?;
    for p in &series.values {
        // p.numerator / p.denominator == 2 / (n+1) as rationals
        check(
            p.numerator * (p.n + 1) == 2 * p.denominator,
            format!("n={}: {}/{}", p.n, p.numerator, p.denominator),
        )?;
        let side = p.n + 1;
        check(folner_window(z2, p.n).len() as u64 == side * side, "window is the (n+1)² box")?;
    }
    let last = series.values.last().unwrap();
    check((last.numerator, last.denominator) == (2, 21), "final defect 2/21")?;

    let heis = GroupId::Heisenberg;
    let t2 = GroupElement::generator(heis, "T2").unwrap();
    let h = defect_trend_with(heis, &t2, 3, 12, 0.2, Strategy::default()).map_err(|e| e.to_string())?;
    let at3 = &h.values[0];
    let at12 = h.values.last().unwrap();
    // at12 < at3 / 2, cross-multiplied in u128
    let lhs = 2 * at12.numerator as u128 * at3.denominator as u128;
    let rhs = at3.numerator as u128 * at12.denominator as u128;
    check(lhs < rhs, format!("T2 defect {} at n=12 vs {} at n=3", at12.value, at3.value))?;
    Ok(format!(
        "ℤ² defects 2/(n+1) exactly for n=2..20; Heisenberg T2 {:.4} at 12 vs {:.4} at 3",
        at12.value, at3.value
    ))
}

/// Words of length `n` over {0,1} without two adjacent 1s.
fn fibonacci_words(n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 2u64);
    for _ in 1..n {
        (a, b) = (b, a + b);
    }
    b
}

fn entropy() -> Outcome {
    let full = ShiftSystem::full(GroupId::IntegerLattice(2), Alphabet::new(2).unwrap());
    for n in 1..=5 {
        let e = top_entropy_estimate_with(&full, n, Strategy::default()).map_err(|e| e.to_string())?;
        check(e.estimate == 2f64.ln(), format!("full 2-shift n={n}: {}", e.estimate))?;
        check(
            e.pattern_count.to_string() == (1u128 << e.window_size).to_string(),
            "full shift count is 2^|F|",
        )?;
    }

    let golden = ShiftSystem::from_sft_text("alphabet 2\n0:1 1:1\n").unwrap();
    let e = top_entropy_estimate_with(&golden, 25, Strategy::default()).map_err(|e| e.to_string())?;
    check(e.pattern_count.to_string() == fibonacci_words(26).to_string(), format!("golden count {}", e.pattern_count))?;
    let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let rel = (e.estimate - log_phi).abs() / log_phi;
    check(rel < 0.02, format!("golden mean estimate off by {:.2}%", rel * 100.0))?;

    let z = GroupId::IntegerLattice(1);
    let mu = ShiftMeasure::markov(&[vec![0.9, 0.1], vec![0.4, 0.6]], None).map_err(|e| e.to_string())?;
    let p = (0.9f64, 0.1f64, 0.4f64, 0.6f64);
    let h = |a: f64, b: f64| -(a * a.ln() + b * b.ln());
    // π = (0.8, 0.2) for this chain
    let rate_oracle = 0.8 * h(p.0, p.1) + 0.2 * h(p.2, p.3);
    let alpha = FinitePartitionSpec::at_identity(z);
    let past = |cells: &[i64]| {
        FiniteWindow::from_elements(z, cells.iter().map(|&c| GroupElement::new(z, &[c]).unwrap()).collect::<Vec<_>>())
            .unwrap()
    };
    let one = conditional_entropy_finite_past(&mu, &alpha, &past(&[-1])).map_err(|e| e.to_string())?;
    let three = conditional_entropy_finite_past(&mu, &alpha, &past(&[-1, -2, -3])).map_err(|e| e.to_string())?;
    let rate = measure_entropy(&mu);
    check((rate - rate_oracle).abs() < 1e-12, "rate formula")?;
    check((one - rate).abs() < 1e-12, format!("past {{-1}}: {one} vs rate {rate}"))?;
    check((three - one).abs() < 1e-12, format!("deepened past moved by {:e}", (three - one).abs()))?;
    Ok(format!(
        "log 2 exact for n≤5; golden mean {:.5} ({:.2}% off); Markov gap {:.1e}",
        e.estimate,
        rel * 100.0,
        (one - rate).abs()
    ))
}

fn cells(group: GroupId, pts: &[&[i64]]) -> FinitePartitionSpec {
    FinitePartitionSpec::new(
        FiniteWindow::from_elements(group, pts.iter().map(|c| GroupElement::new(group, c).unwrap()).collect::<Vec<_>>())
            .unwrap(),
    )
    .unwrap()
}

fn pinsker() -> Outcome {
    let z1 = GroupId::IntegerLattice(1);
    let z2 = GroupId::IntegerLattice(2);
    let bern = ShiftMeasure::bernoulli(&[0.25, 0.75]).unwrap();
    let bern3 = ShiftMeasure::bernoulli(&[0.5, 0.3, 0.2]).unwrap();
    let markov = ShiftMeasure::markov(&[vec![0.9, 0.1], vec![0.4, 0.6]], None).unwrap();
    let cases = [
        ("bernoulli ℤ", &bern, cells(z1, &[&[0]]), cells(z1, &[&[1]]), 1e-12),
        ("bernoulli ℤ²", &bern3, cells(z2, &[&[0, 0]]), cells(z2, &[&[1, 0], &[0, 1]]), 1e-12),
        (
            "bernoulli heisenberg",
            &bern,
            cells(GroupId::Heisenberg, &[&[0, 0, 0]]),
            cells(GroupId::Heisenberg, &[&[0, 0, 1]]),
            1e-12,
        ),
        ("markov ℤ", &markov, cells(z1, &[&[0]]), cells(z1, &[&[1], &[2]]), 1e-10),
    ];
    let mut worst = 0f64;
    for (name, mu, alpha, beta, tol) in cases {
        let r = pinsker_check(mu, &alpha, &beta, 3).map_err(|e| format!("{name}: {e}"))?;
        check(r.gap < tol && r.passed, format!("{name}: gap {:e}", r.gap))?;
        worst = worst.max(r.gap);
    }
    Ok(format!("4 cases at radius 3, largest gap {worst:e}"))
}

/// Canonical ℤ² order: box level, then lexicographic.
fn z2_prefix(m: usize) -> Vec<(i64, i64)> {
    let r = 4i64;
    let mut pts: Vec<(i64, i64)> = (-r..=r).flat_map(|a| (-r..=r).map(move |b| (a, b))).collect();
    pts.sort_by_key(|&(a, b)| (a.abs().max(b.abs()), a, b));
    pts.truncate(m);
    pts
}

fn asymptotic_pairs() -> Outcome {
    let z2 = GroupId::IntegerLattice(2);
    let k = Alphabet::new(2).unwrap();
    let horizon = 10u64;
    let epsilon = 1.0 / 64.0;
    let prefix: BTreeSet<(i64, i64)> = z2_prefix(6).into_iter().collect();
    let members = ctx(z2).semigroup_members(horizon);
    let oracle_members: BTreeSet<(i64, i64)> =
        (0..=horizon as i64).flat_map(|a| (0..=horizon as i64).map(move |b| (a, b))).collect();
    let listed: BTreeSet<(i64, i64)> = members.iter().map(|s| (s.coords()[0], s.coords()[1])).collect();
    check(listed == oracle_members, "semigroup members of box(10) are [0,10]²")?;

    let candidates: Vec<(i64, i64)> = (-3..=3).flat_map(|a| (-3..=3).map(move |b| (a, b))).collect();
    let mut total_violations = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.random_range(1..=4);
        let diff: Vec<(i64, i64)> = candidates.choose_multiple(&mut rng, count).copied().collect();
        let window = FiniteWindow::lattice_rectangle(z2, &[-15, -15], &[5, 5]).unwrap();
        let x = seeded_configuration(window, k, seed);
        let diff_window = FiniteWindow::from_elements(
            z2,
            diff.iter().map(|&(a, b)| GroupElement::new(z2, &[a, b]).unwrap()).collect::<Vec<_>>(),
        )
        .unwrap();
        let y = make_finite_difference_pair(&x, &diff_window, k, cyclic_flip(k)).map_err(|e| e.to_string())?;
        let v = is_asymptotic_truncated_with(&x, &y, &members, epsilon, horizon, Strategy::default())
            .map_err(|e| e.to_string())?;
        check(v.kind == VerdictKind::AsymptoticWithinHorizon, format!("seed {seed}: {:?}", v.kind))?;
        let found: BTreeSet<(i64, i64)> = v.violations.iter().map(|w| (w.s.coords()[0], w.s.coords()[1])).collect();
        let expected: BTreeSet<(i64, i64)> = oracle_members
            .iter()
            .copied()
            .filter(|&(s1, s2)| diff.iter().any(|&(d1, d2)| prefix.contains(&(s1 + d1, s2 + d2))))
            .collect();
        check(found == expected, format!("seed {seed}: violation set {found:?} vs oracle {expected:?}"))?;
        total_violations += found.len();
    }
    Ok(format!("100 seeded ℤ² pairs asymptotic, {total_violations} violations all matching the oracle"))
}

/// First disagreement of `s·x` and `s·y` on ℤ, scanning `[-h, h]` in
/// canonical order (0, -1, 1, -2, 2, ...).
fn line_distance_index(x: &Configuration, y: &Configuration, s: i64, h: i64) -> Option<u64> {
    let z = GroupId::IntegerLattice(1);
    let order = std::iter::once(0).chain((1..=h).flat_map(|t| [-t, t]));
    for (index, cell) in order.enumerate() {
        let source = GroupElement::new(z, &[cell - s]).unwrap();
        if x.get(&source).expect("inside window") != y.get(&source).expect("inside window") {
            return Some(index as u64);
        }
    }
    None
}

fn li_yorke() -> Outcome {
    let z = GroupId::IntegerLattice(1);
    let k = Alphabet::new(2).unwrap();
    let diff = SparseSet::diagonal(z, 3, 4).map_err(|e| e.to_string())?;
    let base = seeded_configuration(li_yorke_base_window(&diff), k, 7);
    let (y, v) = li_yorke_witness(&base, k, &diff, 0.5).map_err(|e| e.to_string())?;
    check(v.kind == VerdictKind::LiYorkeWitnessed && v.reverified, format!("verdict {:?}", v.kind))?;
    check(v.distal_witnesses.len() >= 4, "fewer than 4 distal witnesses")?;
    let h = v.horizon as i64;
    for w in &v.distal_witnesses {
        let s = w.s.coords()[0];
        let index = line_distance_index(&base, &y, s, h);
        check(index == Some(0) && w.distance.value() == 1.0, format!("distal s={s}: {index:?}"))?;
    }
    let mut previous = f64::INFINITY;
    let mut indices = Vec::new();
    for w in &v.proximal_witnesses {
        let s = w.s.coords()[0];
        let index = line_distance_index(&base, &y, s, h).ok_or("proximal witness with no disagreement")?;
        check(w.distance.first_disagreement == Some(index), format!("proximal s={s}: {index} re-evaluated"))?;
        let d = 2f64.powi(-(index as i32));
        check(d < previous, "proximal distances not strictly decreasing")?;
        previous = d;
        indices.push(index);
    }
    check(indices.len() >= 2 && *indices.last().unwrap() > 10, format!("proximal indices {indices:?}"))?;

    let sets = chaotic_difference_sets(z, 4, 2, 2).map_err(|e| e.to_string())?;
    let radius = sets.iter().map(|s| s.required_radius()).max().unwrap() as i64;
    let window = FiniteWindow::lattice_rectangle(z, &[-radius], &[radius]).unwrap();
    let sample = chaotic_sample(&seeded_configuration(window, k, 3), k, sets, 0.5).map_err(|e| e.to_string())?;
    check(sample.passed && sample.pairs.len() == 6, "chaotic sample")?;
    for p in &sample.pairs {
        let (xi, xj) = (&sample.members[p.i], &sample.members[p.j]);
        let h = p.verdict.horizon as i64;
        for w in &p.verdict.distal_witnesses {
            check(line_distance_index(xi, xj, w.s.coords()[0], h) == Some(0), "chaotic distal")?;
        }
        for w in &p.verdict.proximal_witnesses {
            let index = line_distance_index(xi, xj, w.s.coords()[0], h);
            check(index == w.distance.first_disagreement, "chaotic proximal")?;
        }
    }
    Ok(format!(
        "{} distal at distance 1, proximal indices {indices:?}; 4-member sample verified pairwise",
        v.distal_witnesses.len()
    ))
}

fn write_inputs(dir: &std::path::Path) {
    std::fs::write(dir.join("golden.txt"), "alphabet 2\n0:1 1:1\n").unwrap();
    std::fs::write(dir.join("bern.json"), "{\"kind\":\"bernoulli\",\"p\":[\"1/4\",\"3/4\"]}\n").unwrap();
}

fn run_cli(args: &[String], threads: Option<&str>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_orderlab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("ORDERLAB_THREADS", t),
        None => cmd.env_remove("ORDERLAB_THREADS"),
    };
    let out = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_inputs(dir.path());
    let golden = dir.path().join("golden.txt").display().to_string();
    let bern = dir.path().join("bern.json").display().to_string();
    let commands: Vec<Vec<String>> = [
        "verify --group heisenberg --radius 2 --nmax 3".to_string(),
        "verify --group zd --d 2 --radius 4".into(),
        "folner --group zd --d 2 --g 1,0 --range 2:20".into(),
        "folner --group heisenberg --g T2 --range 2:8".into(),
        format!("entropy --sft {golden} --n 25"),
        format!("entropy --measure {bern} --pinsker --radius 3"),
        "entropy --full --alphabet 2 --group zd --d 2 --n 5".into(),
        "pairs asymptotic --diff 5,5;1,1 --horizon 10 --seed 3".into(),
        "pairs stable --seed 5".into(),
        "pairs liyorke --group zd --d 1 --delta 0.5 --depth 4 --seed 7".into(),
        "pairs chaotic --group zd --d 1 --seed 11".into(),
    ]
    .iter()
    .map(|c| c.split_whitespace().map(String::from).collect())
    .collect();
    for args in &commands {
        let first = run_cli(args, None)?;
        check(!first.is_empty(), format!("{args:?} printed nothing"))?;
        check(run_cli(args, None)? == first, format!("{args:?} differs on a rerun"))?;
        check(run_cli(args, Some("1"))? == first, format!("{args:?} differs single-threaded"))?;
    }
    Ok(format!("{} commands byte-identical across reruns and thread counts", commands.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("order axioms", order_axioms),
        ("admissibility", admissibility),
        ("counting bound", counting_bound),
        ("folner defects", folner),
        ("entropy", entropy),
        ("pinsker identity", pinsker),
        ("asymptotic pairs", asymptotic_pairs),
        ("li-yorke pairs", li_yorke),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
