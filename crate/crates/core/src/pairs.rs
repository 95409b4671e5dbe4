//! Finite-horizon evidence for asymptotic pairs, stable sets and Li-Yorke
//! pairs in full shifts.
//!
//! Every distance is measured by direct evaluation of `d(s·x, s·y)`.
//! Asymptoticity is reported only with explicit cutoff evidence: the
//! violation set has to stay strictly inside the horizon.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{ensure_same_group, Error, Result};
use crate::exec::{self, Strategy};
use crate::group::{enumerate_box, FiniteWindow, GroupElement, GroupId};
use crate::shift::{
    act, shift_metric, translated_distance, Alphabet, Configuration, ShiftDistance, Symbol,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    AsymptoticWithinHorizon,
    LiYorkeWitnessed,
    Refuted,
    /// Too little data to support or refute the claim.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub s: GroupElement,
    pub distance: ShiftDistance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairVerdict {
    pub kind: VerdictKind,
    pub horizon: u64,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    /// Largest box level among the violations.
    pub violation_cutoff: Option<u64>,
    pub violations: Vec<Witness>,
    pub proximal_witnesses: Vec<Witness>,
    pub distal_witnesses: Vec<Witness>,
    /// Set once the witnesses were recomputed through `act` and the metric.
    pub reverified: bool,
}

/// Difference set for Li-Yorke constructions: points `t·v` on a lattice
/// ray with `t` at least doubling from one point to the next.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseSet {
    group: GroupId,
    direction: Vec<i64>,
    steps: Vec<i64>,
}

impl SparseSet {
    pub fn new(group: GroupId, direction: &[i64], steps: Vec<i64>) -> Result<Self> {
        let GroupId::IntegerLattice(d) = group else {
            return Err(Error::unsupported("sparse sets live in ℤ^d"));
        };
        if direction.len() != d || direction.iter().all(|&c| c == 0) {
            return Err(Error::invalid("direction must be a nonzero vector of the right rank"));
        }
        if steps.first().is_some_and(|&t| t < 1) {
            return Err(Error::invalid("sparse set points must lie on the open ray"));
        }
        if steps.windows(2).any(|w| w[1] < 2 * w[0]) {
            return Err(Error::invalid("consecutive sparse set points need gap ratio ≥ 2"));
        }
        Ok(SparseSet { group, direction: direction.to_vec(), steps })
    }

    /// `{2^k·(1,…,1) : k₀ ≤ k ≤ k₀+depth}`.
    pub fn diagonal(group: GroupId, k0: u32, depth: u32) -> Result<Self> {
        Self::diagonal_exponents(group, (k0..=k0 + depth).collect())
    }

    /// `{2^k·(1,…,1) : k ∈ exponents}`, exponents strictly increasing.
    pub fn diagonal_exponents(group: GroupId, exponents: Vec<u32>) -> Result<Self> {
        if exponents.iter().any(|&k| k > 40) {
            return Err(Error::invalid("exponents above 40 are out of range"));
        }
        let d = group.rank();
        Self::new(group, &vec![1; d], exponents.iter().map(|&k| 1i64 << k).collect())
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn point(&self, t: i64) -> GroupElement {
        let c: Vec<i64> = self.direction.iter().map(|&v| v * t).collect();
        GroupElement::new(self.group, &c).expect("rank checked")
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.steps.iter().map(|&t| self.point(t)).collect()
    }

    pub fn to_window(&self) -> FiniteWindow {
        FiniteWindow::from_elements(self.group, self.elements()).expect("distinct points")
    }

    /// Union with another set on the same ray.
    pub fn union(&self, other: &SparseSet) -> Result<SparseSet> {
        ensure_same_group(self.group, other.group)?;
        if self.direction != other.direction {
            return Err(Error::invalid("sparse sets lie on different rays"));
        }
        let mut steps: Vec<i64> = self.steps.iter().chain(&other.steps).copied().collect();
        steps.sort_unstable();
        steps.dedup();
        SparseSet::new(self.group, &self.direction, steps)
    }

    fn scale(&self) -> i64 {
        self.direction.iter().map(|c| c.abs()).max().unwrap_or(1)
    }

    /// Midpoints between consecutive points (rounded down along the ray).
    fn midpoints(&self) -> Vec<GroupElement> {
        self.steps.windows(2).map(|w| self.point((w[0] + w[1]).div_euclid(2))).collect()
    }

    /// Metric horizon large enough to see the nearest point from every
    /// midpoint.
    pub fn horizon(&self) -> u64 {
        let half_gap = self.steps.windows(2).map(|w| (w[1] - w[0] + 1) / 2).max().unwrap_or(1);
        (half_gap * self.scale()) as u64
    }

    /// Smallest cube radius containing every point plus the metric horizon.
    pub fn required_radius(&self) -> u64 {
        let far = self.steps.last().copied().unwrap_or(0) * self.scale();
        far as u64 + self.horizon()
    }
}

/// `y` equal to `x` off `diff` and `flip(x(d))` on each `d ∈ diff`.
pub fn make_finite_difference_pair(
    x: &Configuration,
    diff: &FiniteWindow,
    alphabet: Alphabet,
    flip: impl Fn(Symbol) -> Symbol,
) -> Result<Configuration> {
    ensure_same_group(x.group(), diff.group())?;
    let mut changes = Vec::with_capacity(diff.len());
    for d in diff {
        let old = x
            .get(d)
            .ok_or_else(|| Error::invalid(format!("difference cell {d} is outside the window")))?;
        let new = flip(old);
        if !alphabet.contains(new) {
            return Err(Error::invalid(format!("flip produced symbol {new} outside the alphabet")));
        }
        if new == old {
            return Err(Error::invalid(format!("flip leaves the symbol at {d} unchanged")));
        }
        changes.push((d.clone(), new));
    }
    x.with_changes(&changes)
}

/// The flip `s ↦ s+1 mod k`.
pub fn cyclic_flip(alphabet: Alphabet) -> impl Fn(Symbol) -> Symbol {
    let k = alphabet.size();
    move |s| ((s as usize + 1) % k) as Symbol
}

/// Smallest `m` with `2^{-m} ≤ ε`: distances above `ε` are exactly those
/// whose first disagreement has index below `m`.
pub fn prefix_length_for(epsilon: f64) -> Result<u64> {
    if epsilon.is_nan() || epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::invalid("ε must be positive and finite"));
    }
    let mut m = 0u64;
    while 2f64.powi(-(m as i32)) > epsilon {
        m += 1;
    }
    Ok(m)
}

/// The first `m` elements of the canonical enumeration.
pub fn enumeration_prefix(group: GroupId, m: u64) -> FiniteWindow {
    let mut radius = 0;
    while group.box_size(radius) < m as u128 {
        radius += 1;
    }
    let full = enumerate_box(group, radius);
    FiniteWindow::from_elements(group, full.elements()[..m as usize].to_vec())
        .expect("prefix of a window")
}

/// `{s ∈ S : s·D ∩ prefix_m ≠ ∅}` evaluated set-theoretically.
pub fn difference_violation_set(
    s_members: &[GroupElement],
    diff: &FiniteWindow,
    prefix: &FiniteWindow,
) -> Vec<GroupElement> {
    s_members
        .iter()
        .filter(|s| diff.iter().any(|d| prefix.contains(&s.mul(d))))
        .cloned()
        .collect()
}

/// Evaluates `d(s·x, s·y)` for every listed `s` and reports the
/// violations `d > ε`.
pub fn is_asymptotic_truncated(
    x: &Configuration,
    y: &Configuration,
    s_members: &[GroupElement],
    epsilon: f64,
    horizon: u64,
) -> Result<PairVerdict> {
    is_asymptotic_truncated_with(x, y, s_members, epsilon, horizon, Strategy::default())
}

pub fn is_asymptotic_truncated_with(
    x: &Configuration,
    y: &Configuration,
    s_members: &[GroupElement],
    epsilon: f64,
    horizon: u64,
    strategy: Strategy,
) -> Result<PairVerdict> {
    let group = x.group();
    ensure_same_group(group, y.group())?;
    for s in s_members {
        ensure_same_group(group, s.group())?;
        if s.box_level() > horizon {
            return Err(Error::invalid(format!("semigroup member {s} lies outside box({horizon})")));
        }
    }
    let prefix = enumeration_prefix(group, prefix_length_for(epsilon)?);
    let distances = exec::map(strategy, s_members, |s| translated_distance(s, x, y, &prefix));
    let mut violations = Vec::new();
    for (s, d) in s_members.iter().zip(distances) {
        let d = d?;
        if !d.is_zero() {
            violations.push(Witness { s: s.clone(), distance: d });
        }
    }
    let cutoff = violations.iter().map(|w| w.s.box_level()).max();
    let kind = match cutoff {
        Some(c) if c >= horizon => VerdictKind::Refuted,
        _ => VerdictKind::AsymptoticWithinHorizon,
    };
    Ok(PairVerdict {
        kind,
        horizon,
        epsilon: Some(epsilon),
        delta: None,
        violation_cutoff: cutoff,
        violations,
        proximal_witnesses: Vec::new(),
        distal_witnesses: Vec::new(),
        reverified: false,
    })
}

/// The cube `[-R, R]^d` with `R` the set's required radius: large enough
/// for every witness evaluation of a Li-Yorke construction over `diff`.
pub fn li_yorke_base_window(diff: &SparseSet) -> FiniteWindow {
    let r = diff.required_radius() as i64;
    let d = diff.group.rank();
    FiniteWindow::lattice_rectangle(diff.group, &vec![-r; d], &vec![r; d]).expect("lattice cube")
}

/// Flips `base` on `diff` and collects distal witnesses `s = -d` and
/// proximal witnesses at the negated midpoints of consecutive points.
pub fn li_yorke_witness(
    base: &Configuration,
    alphabet: Alphabet,
    diff: &SparseSet,
    delta: f64,
) -> Result<(Configuration, PairVerdict)> {
    ensure_same_group(base.group(), diff.group)?;
    let y = make_finite_difference_pair(base, &diff.to_window(), alphabet, cyclic_flip(alphabet))?;
    let verdict = li_yorke_verdict(base, &y, diff, delta)?;
    Ok((y, verdict))
}

/// Li-Yorke verdict for a pair whose difference set is exactly `diff`.
pub fn li_yorke_verdict(
    x: &Configuration,
    y: &Configuration,
    diff: &SparseSet,
    delta: f64,
) -> Result<PairVerdict> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::invalid("δ must lie in [0, 1)"));
    }
    let horizon = diff.horizon();
    let horizon_box = enumerate_box(x.group(), horizon);
    let evaluate = |targets: Vec<GroupElement>| -> Result<Vec<Witness>> {
        targets
            .into_iter()
            .map(|p| {
                let s = p.inverse();
                let distance = translated_distance(&s, x, y, &horizon_box)?;
                Ok(Witness { s, distance })
            })
            .collect()
    };
    let distal = evaluate(diff.elements())?;
    let proximal = evaluate(diff.midpoints())?;

    let distal_ok = !distal.is_empty() && distal.iter().all(|w| w.distance.value() > delta);
    let decreasing = proximal.windows(2).all(|w| w[1].distance < w[0].distance);
    let kind = if !distal_ok || !decreasing {
        VerdictKind::Refuted
    } else if proximal.len() < 2 {
        VerdictKind::Inconclusive
    } else {
        VerdictKind::LiYorkeWitnessed
    };
    let mut verdict = PairVerdict {
        kind,
        horizon,
        epsilon: None,
        delta: Some(delta),
        violation_cutoff: None,
        violations: Vec::new(),
        proximal_witnesses: proximal,
        distal_witnesses: distal,
        reverified: false,
    };
    verdict.reverified = reverify_witnesses(x, y, &verdict)?;
    if !verdict.reverified {
        return Err(Error::Consistency("witness distances changed on re-evaluation".into()));
    }
    Ok(verdict)
}

/// Recomputes every witness distance by materializing `s·x` and `s·y` on
/// the horizon box and applying the shift metric, then re-checks the
/// distal bound and the proximal monotonicity.
pub fn reverify_witnesses(x: &Configuration, y: &Configuration, verdict: &PairVerdict) -> Result<bool> {
    let horizon_box = enumerate_box(x.group(), verdict.horizon);
    let recompute = |w: &Witness| -> Result<ShiftDistance> {
        let sx = act(&w.s, x, &horizon_box)?;
        let sy = act(&w.s, y, &horizon_box)?;
        shift_metric(&sx, &sy, verdict.horizon)
    };
    for w in verdict.distal_witnesses.iter().chain(&verdict.proximal_witnesses) {
        if recompute(w)? != w.distance {
            return Ok(false);
        }
    }
    if let Some(delta) = verdict.delta {
        if verdict.kind == VerdictKind::LiYorkeWitnessed {
            let distal_ok = verdict.distal_witnesses.iter().all(|w| w.distance.value() > delta);
            let decreasing =
                verdict.proximal_witnesses.windows(2).all(|w| w[1].distance < w[0].distance);
            return Ok(distal_ok && decreasing);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub verdict: PairVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChaoticSample {
    pub members: Vec<Configuration>,
    pub difference_sets: Vec<SparseSet>,
    pub pairs: Vec<PairReport>,
    pub passed: bool,
}

pub const MAX_CHAOTIC_MEMBERS: usize = 6;

/// Interleaved difference sets `D_j = {2^{k₀+j+k·t}·(1,…,1) : 0 ≤ t ≤ depth}`
/// for `j < k`.
pub fn chaotic_difference_sets(group: GroupId, k: usize, k0: u32, depth: u32) -> Result<Vec<SparseSet>> {
    if !(2..=MAX_CHAOTIC_MEMBERS).contains(&k) {
        return Err(Error::invalid(format!("sample size must be in 2..={MAX_CHAOTIC_MEMBERS}")));
    }
    if k0 < 1 {
        return Err(Error::invalid("k₀ must be ≥ 1"));
    }
    (0..k as u32)
        .map(|j| {
            SparseSet::diagonal_exponents(
                group,
                (0..=depth).map(|t| k0 + j + k as u32 * t).collect(),
            )
        })
        .collect()
}

/// `k` configurations, member `j` being `base` flipped on `D_j`; every
/// pair differs exactly on `D_i ∪ D_j` and is checked as a Li-Yorke pair.
pub fn chaotic_sample(
    base: &Configuration,
    alphabet: Alphabet,
    sets: Vec<SparseSet>,
    delta: f64,
) -> Result<ChaoticSample> {
    let members = sets
        .iter()
        .map(|d| make_finite_difference_pair(base, &d.to_window(), alphabet, cyclic_flip(alphabet)))
        .collect::<Result<Vec<_>>>()?;
    let index_pairs: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|i| (i + 1..members.len()).map(move |j| (i, j)))
        .collect();
    let verdicts = exec::map(Strategy::default(), &index_pairs, |&(i, j)| {
        let union = sets[i].union(&sets[j])?;
        li_yorke_verdict(&members[i], &members[j], &union, delta)
    });
    let mut pairs = Vec::with_capacity(index_pairs.len());
    for (&(i, j), v) in index_pairs.iter().zip(verdicts) {
        pairs.push(PairReport { i, j, verdict: v? });
    }
    let passed = pairs.iter().all(|p| p.verdict.kind == VerdictKind::LiYorkeWitnessed);
    Ok(ChaoticSample { members, difference_sets: sets, pairs, passed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StableMember {
    pub changed_cells: Vec<GroupElement>,
    pub verdict: PairVerdict,
    #[serde(skip)]
    pub configuration: Configuration,
}

/// Up to `budget` distinct finite perturbations `y` of `x`, each changing
/// between 1 and `max_cells` cells of `box(cell_radius)` and each passing
/// the truncated asymptotic check. With `max_cells = 0` the only member
/// is `x` itself. Deterministic in `seed` (ChaCha8).
#[allow(clippy::too_many_arguments)]
pub fn stable_set_sample(
    x: &Configuration,
    alphabet: Alphabet,
    s_members: &[GroupElement],
    epsilon: f64,
    horizon: u64,
    budget: usize,
    max_cells: usize,
    cell_radius: u64,
    seed: u64,
) -> Result<Vec<StableMember>> {
    if budget < 1 {
        return Err(Error::invalid("budget must be ≥ 1"));
    }
    let group = x.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<GroupElement> =
        enumerate_box(group, cell_radius).iter().filter(|g| x.get(g).is_some()).cloned().collect();
    let mut seen: HashSet<Vec<(GroupElement, Symbol)>> = HashSet::new();
    let mut out = Vec::new();
    let attempts = budget * 20 + 20;
    for _ in 0..attempts {
        if out.len() == budget {
            break;
        }
        let mut changes: Vec<(GroupElement, Symbol)> = Vec::new();
        if max_cells > 0 && !candidates.is_empty() {
            let count = rng.random_range(1..=max_cells.min(candidates.len()));
            let cells: Vec<&GroupElement> = candidates.choose_multiple(&mut rng, count).collect();
            for g in cells {
                let old = x.get(g).expect("candidate inside the window");
                let shift = rng.random_range(1..alphabet.size());
                changes.push((g.clone(), ((old as usize + shift) % alphabet.size()) as Symbol));
            }
            changes.sort_by_key(|c| c.0.enumeration_index());
        }
        if !seen.insert(changes.clone()) {
            if max_cells == 0 || candidates.is_empty() {
                break;
            }
            continue;
        }
        let y = x.with_changes(&changes)?;
        let verdict = is_asymptotic_truncated(x, &y, s_members, epsilon, horizon)?;
        if verdict.kind == VerdictKind::AsymptoticWithinHorizon {
            out.push(StableMember {
                changed_cells: changes.into_iter().map(|c| c.0).collect(),
                verdict,
                configuration: y,
            });
        }
    }
    Ok(out)
}

/// A seeded random configuration on `window`.
pub fn seeded_configuration(window: FiniteWindow, alphabet: Alphabet, seed: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Configuration::random(Arc::new(window), alphabet, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(d: usize) -> GroupId {
        GroupId::IntegerLattice(d)
    }

    fn el(group: GroupId, c: &[i64]) -> GroupElement {
        GroupElement::new(group, c).unwrap()
    }

    #[test]
    fn prefix_lengths() {
        assert_eq!(prefix_length_for(1.0).unwrap(), 0);
        assert_eq!(prefix_length_for(0.5).unwrap(), 1);
        assert_eq!(prefix_length_for(0.125).unwrap(), 3);
        assert_eq!(prefix_length_for(0.1).unwrap(), 4);
        assert!(prefix_length_for(0.0).is_err());
        let p = enumeration_prefix(z(1), 4);
        let coords: Vec<i64> = p.iter().map(|g| g.coords()[0]).collect();
        assert_eq!(coords, vec![0, -1, 1, -2]);
    }

    #[test]
    fn sparse_set_validation() {
        assert!(SparseSet::new(z(1), &[1], vec![2, 3]).is_err());
        assert!(SparseSet::new(z(1), &[0], vec![2, 4]).is_err());
        assert!(SparseSet::new(GroupId::Heisenberg, &[1, 1, 1], vec![2]).is_err());
        let s = SparseSet::diagonal(z(1), 3, 2).unwrap();
        let pts: Vec<i64> = s.elements().iter().map(|g| g.coords()[0]).collect();
        assert_eq!(pts, vec![8, 16, 32]);
        assert_eq!(s.horizon(), 8);
    }

    #[test]
    fn single_flip_pair() {
        let g = z(2);
        let alphabet = Alphabet::new(2).unwrap();
        let x = seeded_configuration(enumerate_box(g, 10), alphabet, 1);
        let diff = FiniteWindow::singleton(el(g, &[5, 5]));
        let y = make_finite_difference_pair(&x, &diff, alphabet, cyclic_flip(alphabet)).unwrap();
        assert_eq!(x.difference_set(&y).unwrap(), vec![el(g, &[5, 5])]);
        let outside = FiniteWindow::singleton(el(g, &[11, 0]));
        assert!(make_finite_difference_pair(&x, &outside, alphabet, cyclic_flip(alphabet)).is_err());
        assert!(make_finite_difference_pair(&x, &diff, alphabet, |s| s).is_err());
    }

    #[test]
    fn half_space_flip_is_refuted() {
        let g = z(1);
        let x = Configuration::constant(enumerate_box(g, 20), 0);
        let y = Configuration::from_fn(enumerate_box(g, 20), |h| (h.coords()[0] < 0) as Symbol);
        let members: Vec<GroupElement> = (0..=10).map(|n| el(g, &[n])).collect();
        let v = is_asymptotic_truncated(&x, &y, &members, 0.5, 10).unwrap();
        assert_eq!(v.kind, VerdictKind::Refuted);
        assert_eq!(v.violations.len(), 10);
    }

    #[test]
    fn depth_zero_is_inconclusive() {
        let g = z(1);
        let alphabet = Alphabet::new(2).unwrap();
        let d = SparseSet::diagonal(g, 3, 0).unwrap();
        let x = seeded_configuration(li_yorke_base_window(&d), alphabet, 3);
        let (_, v) = li_yorke_witness(&x, alphabet, &d, 0.5).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert_eq!(v.distal_witnesses.len(), 1);
        assert_eq!(v.distal_witnesses[0].distance.value(), 1.0);
    }

    #[test]
    fn small_window_is_reported() {
        let g = z(1);
        let alphabet = Alphabet::new(2).unwrap();
        let d = SparseSet::diagonal(g, 3, 2).unwrap();
        let x = seeded_configuration(enumerate_box(g, 33), alphabet, 3);
        assert!(matches!(
            li_yorke_witness(&x, alphabet, &d, 0.5),
            Err(Error::InsufficientWindow(_))
        ));
    }
}
