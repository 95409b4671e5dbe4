use orderlab::entropy::{
    block_entropy_rate, conditional_entropy, conditional_entropy_finite_past, cylinder_entropy,
    joint_entropy, measure_entropy, partition_entropy, pinsker_check, FinitePartitionSpec,
    ShiftMeasure,
};
use orderlab::group::enumerate_box;
use orderlab::shift::{top_entropy_estimate, Alphabet, ShiftSystem};
use orderlab::{FiniteWindow, GroupElement, GroupId, OrderedGroupContext};
use proptest::prelude::*;
use std::collections::HashSet;

fn z1() -> GroupId {
    GroupId::IntegerLattice(1)
}

fn cells(group: GroupId, pts: &[&[i64]]) -> FiniteWindow {
    FiniteWindow::from_elements(
        group,
        pts.iter().map(|c| GroupElement::new(group, c).unwrap()).collect::<Vec<_>>(),
    )
    .unwrap()
}

fn line(pts: &[i64]) -> FiniteWindow {
    cells(z1(), &pts.iter().map(std::slice::from_ref).collect::<Vec<_>>())
}

fn sticky() -> ShiftMeasure {
    ShiftMeasure::markov(&[vec![0.9, 0.1], vec![0.5, 0.5]], None).unwrap()
}

/// Entropy rate straight from π = (5/6, 1/6).
fn sticky_rate() -> f64 {
    let h = |p: f64| -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
    5.0 / 6.0 * h(0.9) + 1.0 / 6.0 * h(0.5)
}

#[test]
fn measure_entropies() {
    assert!((measure_entropy(&ShiftMeasure::uniform(2).unwrap()) - 2f64.ln()).abs() < 1e-15);
    let frozen = ShiftMeasure::markov(&[vec![1.0, 0.0], vec![0.0, 1.0]], Some(&[0.5, 0.5])).unwrap();
    assert_eq!(measure_entropy(&frozen), 0.0);
    assert!((measure_entropy(&sticky()) - sticky_rate()).abs() < 1e-15);
    let b = ShiftMeasure::bernoulli(&[0.2, 0.3, 0.5]).unwrap();
    assert!((measure_entropy(&b) - partition_entropy(&[0.2, 0.3, 0.5]).unwrap()).abs() < 1e-15);
}

#[test]
fn markov_conditional_on_one_step_past() {
    let alpha = FinitePartitionSpec::at_identity(z1());
    let one = conditional_entropy_finite_past(&sticky(), &alpha, &line(&[-1])).unwrap();
    assert!((one - measure_entropy(&sticky())).abs() < 1e-12);
    assert!((one - sticky_rate()).abs() < 1e-12);
    let three = conditional_entropy_finite_past(&sticky(), &alpha, &line(&[-3, -2, -1])).unwrap();
    assert!((three - one).abs() < 1e-12);
    let two = conditional_entropy_finite_past(&sticky(), &alpha, &line(&[-2, -1])).unwrap();
    assert!((two - one).abs() < 1e-12);
}

#[test]
fn markov_conditional_matches_cylinder_enumeration() {
    let mu = sticky();
    for (target, given) in [
        (vec![0], vec![-1]),
        (vec![0], vec![-2]),
        (vec![0, 1], vec![-3, -1]),
        (vec![0, 4], vec![-2, 2]),
    ] {
        let t = line(&target);
        let g = line(&given);
        let union: Vec<i64> = target.iter().chain(&given).copied().collect();
        let brute = cylinder_entropy(&mu, &line(&union)).unwrap() - cylinder_entropy(&mu, &g).unwrap();
        assert!((conditional_entropy(&mu, &t, &g).unwrap() - brute).abs() < 1e-12);
    }
}

#[test]
fn deeper_pasts_never_increase_entropy() {
    let mu = sticky();
    let alpha = FinitePartitionSpec::at_identity(z1());
    let chain: [&[i64]; 5] = [&[-5], &[-5, -4], &[-7, -5, -4], &[-7, -5, -4, -2], &[-7, -5, -4, -2, -1]];
    let values: Vec<f64> = chain
        .iter()
        .map(|p| conditional_entropy_finite_past(&mu, &alpha, &line(p)).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{values:?}");
    assert!(values[0] > values[4] + 1e-3);
}

#[test]
fn chain_rule_on_cylinders() {
    let mu = sticky();
    let a = line(&[0, 3]);
    let b = line(&[-2, 1]);
    let ab = line(&[-2, 0, 1, 3]);
    let lhs = cylinder_entropy(&mu, &ab).unwrap();
    let rhs = cylinder_entropy(&mu, &b).unwrap() + conditional_entropy(&mu, &a, &b).unwrap();
    assert!((lhs - rhs).abs() < 1e-12);
    assert!((lhs - joint_entropy(&mu, &ab).unwrap()).abs() < 1e-12);

    let z2 = GroupId::IntegerLattice(2);
    let bern = ShiftMeasure::bernoulli(&[0.2, 0.3, 0.5]).unwrap();
    let w = cells(z2, &[&[0, 0], &[1, 0], &[0, 1], &[5, -2]]);
    let h = partition_entropy(&[0.2, 0.3, 0.5]).unwrap();
    assert!((cylinder_entropy(&bern, &w).unwrap() - 4.0 * h).abs() < 1e-12);
}

#[test]
fn block_entropy_rate_converges() {
    let mu = sticky();
    let rate = block_entropy_rate(&mu, z1(), 20).unwrap();
    assert!((rate - sticky_rate()).abs() < 0.01, "{rate}");
    let closed = joint_entropy(&mu, &line(&(0..=20).collect::<Vec<_>>())).unwrap() / 21.0;
    assert!((rate - closed).abs() < 1e-9);
}

#[test]
fn uniform_measure_matches_topological_entropy() {
    for k in [2usize, 3] {
        let top = top_entropy_estimate(&ShiftSystem::full(z1(), Alphabet::new(k).unwrap()), 4)
            .unwrap()
            .estimate;
        assert!((measure_entropy(&ShiftMeasure::uniform(k).unwrap()) - top).abs() < 1e-12);
        let mut p = vec![1.0 / k as f64; k];
        p[0] += 0.1;
        p[1] -= 0.1;
        let skewed = ShiftMeasure::bernoulli(&p).unwrap();
        assert!(measure_entropy(&skewed) < top - 1e-6);
    }
}

#[test]
fn pinsker_bernoulli_cases() {
    let bern = ShiftMeasure::uniform(2).unwrap();
    let a = FinitePartitionSpec::at_identity(z1());
    let r = pinsker_check(&bern, &a, &a, 3).unwrap();
    assert!(r.passed && r.gap < 1e-12);
    assert!((r.lhs - 2f64.ln()).abs() < 1e-12);

    let z2 = GroupId::IntegerLattice(2);
    let alpha = FinitePartitionSpec::at_identity(z2);
    let beta = FinitePartitionSpec::at(GroupElement::new(z2, &[1, 0]).unwrap());
    let r = pinsker_check(&bern, &alpha, &beta, 3).unwrap();
    assert!(r.passed && r.gap < 1e-12, "{r:?}");
    assert!((r.lhs - 2f64.ln()).abs() < 1e-12);

    let h = GroupId::Heisenberg;
    let t1 = GroupElement::generator(h, "T1").unwrap();
    let r = pinsker_check(
        &ShiftMeasure::bernoulli(&[0.3, 0.7]).unwrap(),
        &FinitePartitionSpec::at_identity(h),
        &FinitePartitionSpec::at(t1),
        1,
    )
    .unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn pinsker_markov_case() {
    let a = FinitePartitionSpec::at_identity(z1());
    for radius in 1..=3 {
        let r = pinsker_check(&sticky(), &a, &a, radius).unwrap();
        assert!(r.gap < 1e-10, "{r:?}");
        assert!((r.lhs - sticky_rate()).abs() < 1e-12);
    }
    let b = FinitePartitionSpec::at(GroupElement::new(z1(), &[1]).unwrap());
    let r = pinsker_check(&sticky(), &a, &b, 3).unwrap();
    assert!(r.gap < 1e-10, "{r:?}");
}

/// Brute-force both sides at radius 1 from explicit coordinate sets.
#[test]
fn pinsker_sides_by_cylinder_enumeration() {
    let z2 = GroupId::IntegerLattice(2);
    let mu = ShiftMeasure::bernoulli(&[0.25, 0.75]).unwrap();
    let ctx = OrderedGroupContext::standard(z2).unwrap();
    let window = enumerate_box(z2, 1);
    let past: Vec<GroupElement> = window.iter().filter(|g| ctx.in_past(g).unwrap()).cloned().collect();
    let a = vec![GroupElement::identity(z2)];
    let b = vec![GroupElement::new(z2, &[1, 0]).unwrap()];
    let translate = |ts: &[GroupElement], cs: &[GroupElement]| -> HashSet<GroupElement> {
        ts.iter().flat_map(|t| cs.iter().map(move |c| t.multiply(c).unwrap())).collect()
    };
    let as_window = |s: HashSet<GroupElement>| FiniteWindow::from_elements(z2, s).unwrap();
    let h = |s: &HashSet<GroupElement>| cylinder_entropy(&mu, &as_window(s.clone())).unwrap();
    let cond = |t: &[GroupElement], g: HashSet<GroupElement>| {
        let mut all = g.clone();
        all.extend(t.iter().cloned());
        h(&all) - h(&g)
    };
    let gamma: Vec<GroupElement> = a.iter().chain(&b).cloned().collect();
    let lhs = cond(&gamma, translate(&past, &gamma));
    let mut alpha_given = translate(window.elements(), &b);
    alpha_given.extend(translate(&past, &a));
    let rhs = cond(&b, translate(&past, &b)) + cond(&a, alpha_given);
    let report = pinsker_check(
        &mu,
        &FinitePartitionSpec::at_identity(z2),
        &FinitePartitionSpec::at(b[0].clone()),
        1,
    )
    .unwrap();
    assert!((report.lhs - lhs).abs() < 1e-12);
    assert!((report.rhs - rhs).abs() < 1e-12);
    assert!((lhs - rhs).abs() < 1e-12);
}

#[test]
fn invalid_pasts_are_rejected() {
    let alpha = FinitePartitionSpec::new(line(&[0, -1])).unwrap();
    let mu = sticky();
    assert!(conditional_entropy_finite_past(&mu, &alpha, &line(&[-1, -2])).is_err());
    assert!(conditional_entropy_finite_past(&mu, &alpha, &line(&[2])).is_err());
    assert!(FinitePartitionSpec::new(FiniteWindow::empty(z1())).is_err());
}

fn past_window(seed: Vec<(i64, i64)>) -> FiniteWindow {
    let z2 = GroupId::IntegerLattice(2);
    let ctx = OrderedGroupContext::standard(z2).unwrap();
    let set: HashSet<GroupElement> = seed
        .into_iter()
        .map(|(a, b)| GroupElement::new(z2, &[a, b]).unwrap())
        .filter(|g| ctx.in_past(g).unwrap())
        .collect();
    FiniteWindow::from_elements(z2, set).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn bernoulli_ignores_the_past(seed in prop::collection::vec((-4i64..=4, -4i64..=4), 1..12)) {
        let z2 = GroupId::IntegerLattice(2);
        let mu = ShiftMeasure::bernoulli(&[0.1, 0.2, 0.7]).unwrap();
        let alpha = FinitePartitionSpec::new(cells(z2, &[&[0, 0], &[2, 1]])).unwrap();
        let past = past_window(seed);
        let h = conditional_entropy_finite_past(&mu, &alpha, &past).unwrap();
        prop_assert!((h - 2.0 * measure_entropy(&mu)).abs() < 1e-12);
    }
}
