//! Algebraic pasts, the induced left-invariant orders, admissible
//! semigroups and their exhaustive verification on boxes.
//!
//! An algebraic past Φ ⊂ G satisfies Φ ∩ Φ⁻¹ = ∅, Φ ∪ Φ⁻¹ ∪ {e} = G and
//! Φ·Φ ⊆ Φ; it orders G by `g₁ < g₂ ⇔ g₂⁻¹g₁ ∈ Φ`. The standard pasts are:
//!
//! * ℤ^d: the tuple of partial sums `(P_d, P_{d-1}, …, P_1)`, with
//!   `P_m = n₁ + … + n_m`, is lexicographically negative;
//! * Heisenberg: `(n₃, n₂, n₁)` is lexicographically negative;
//! * U_{d+1}(ℤ): `(a_d¹, …, a_1¹; a_{d-1}², …, a_1²; …; a_1^d)` is
//!   lexicographically negative.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{ensure_same_group, Error, Result};
use crate::exec::{self, Strategy};
use crate::group::{
    enumerate_box, unipotent_index, FiniteWindow, GroupElement, GroupId, RangeProduct,
};

pub type Predicate = Arc<dyn Fn(&GroupElement) -> bool + Send + Sync>;

/// One letter of a word over S ∪ S⁻¹.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Letter {
    pub element: GroupElement,
    pub inverted: bool,
}

/// A word over S ∪ S⁻¹ claimed to multiply out to a standard generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCertificate {
    pub name: String,
    pub target: GroupElement,
    pub word: Vec<Letter>,
}

/// A group with its algebraic past Φ, semigroup S, sequences `f_n`, `h_n`
/// and generator certificates for `<S> = G`.
#[derive(Clone)]
pub struct OrderedGroupContext {
    group: GroupId,
    past: Predicate,
    semigroup: Predicate,
    certificates: Vec<GeneratorCertificate>,
}

impl fmt::Debug for OrderedGroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrderedGroupContext")
            .field("group", &self.group)
            .field("certificates", &self.certificates.len())
            .finish_non_exhaustive()
    }
}

fn lex_negative(seq: impl IntoIterator<Item = i64>) -> bool {
    for v in seq {
        if v != 0 {
            return v < 0;
        }
    }
    false
}

fn lattice_past(g: &GroupElement) -> bool {
    let c = g.coords();
    let mut partial: Vec<i128> = Vec::with_capacity(c.len());
    let mut acc = 0i128;
    for &x in c {
        acc += x as i128;
        partial.push(acc);
    }
    for &p in partial.iter().rev() {
        if p != 0 {
            return p < 0;
        }
    }
    false
}

/// Coordinates in the order the lexicographic comparison reads them.
pub fn order_reading(g: &GroupElement) -> Vec<i64> {
    let c = g.coords();
    match g.group() {
        GroupId::IntegerLattice(_) => {
            let mut partial = Vec::with_capacity(c.len());
            let mut acc = 0i64;
            for &x in c {
                acc = acc.checked_add(x).expect("partial sum overflow");
                partial.push(acc);
            }
            partial.reverse();
            partial
        }
        GroupId::Heisenberg => c.to_vec(),
        GroupId::Unipotent(d) => (1..=d)
            .flat_map(|k| (1..=d - k + 1).rev().map(move |i| c[unipotent_index(d, k, i)]))
            .collect(),
    }
}

fn standard_past(group: GroupId) -> Predicate {
    match group {
        GroupId::IntegerLattice(_) => Arc::new(lattice_past),
        GroupId::Heisenberg => Arc::new(|g: &GroupElement| lex_negative(g.coords().iter().copied())),
        GroupId::Unipotent(_) => Arc::new(|g: &GroupElement| lex_negative(order_reading(g))),
    }
}

fn standard_semigroup(group: GroupId) -> Predicate {
    match group {
        GroupId::IntegerLattice(_) => Arc::new(|g: &GroupElement| g.coords().iter().all(|&c| c >= 0)),
        GroupId::Heisenberg => Arc::new(|g: &GroupElement| {
            let [n3, n2, n1] = [g.coords()[0], g.coords()[1], g.coords()[2]];
            n3 >= n2 && n2 >= 0 && (n3 as i128) * (n3 as i128) >= n1 as i128 && n1 >= 0
        }),
        GroupId::Unipotent(d) => Arc::new(move |g: &GroupElement| {
            let c = g.coords();
            let lead = c[unipotent_index(d, 1, d)];
            if lead < 0 {
                return false;
            }
            (1..=d).all(|k| {
                let cap = (lead as i128).checked_pow(k as u32).unwrap_or(i128::MAX);
                (1..=d - k + 1).all(|i| {
                    let a = c[unipotent_index(d, k, i)];
                    a >= 0 && (a as i128) <= cap
                })
            })
        }),
    }
}

fn leading_generator(group: GroupId) -> GroupElement {
    match group {
        GroupId::IntegerLattice(d) => GroupElement::new(group, &vec![1; d]).expect("rank"),
        GroupId::Heisenberg => GroupElement::generator(group, "T3").expect("T3"),
        GroupId::Unipotent(d) => {
            GroupElement::generator(group, &format!("T{},{}", d, d + 1)).expect("T_{d,d+1}")
        }
    }
}

fn standard_certificates(group: GroupId) -> Vec<GeneratorCertificate> {
    let letter = |element: GroupElement, inverted: bool| Letter { element, inverted };
    crate::group::standard_generators(group)
        .into_iter()
        .map(|(name, target)| {
            let word = match group {
                GroupId::IntegerLattice(_) => vec![letter(target.clone(), false)],
                GroupId::Heisenberg | GroupId::Unipotent(_) => {
                    let lead = leading_generator(group);
                    if target == lead {
                        vec![letter(lead, false)]
                    } else {
                        // t = lead⁻¹ · (lead · t), with lead and lead·t in S
                        vec![letter(lead.clone(), true), letter(lead.mul(&target), false)]
                    }
                }
            };
            GeneratorCertificate { name, target, word }
        })
        .collect()
}

impl OrderedGroupContext {
    pub fn standard(group: GroupId) -> Result<Self> {
        let group = group.validated()?;
        Ok(OrderedGroupContext {
            group,
            past: standard_past(group),
            semigroup: standard_semigroup(group),
            certificates: standard_certificates(group),
        })
    }

    /// Replaces the past predicate (used to probe the verifiers).
    pub fn with_past(mut self, past: impl Fn(&GroupElement) -> bool + Send + Sync + 'static) -> Self {
        self.past = Arc::new(past);
        self
    }

    /// Replaces the semigroup predicate.
    pub fn with_semigroup(
        mut self,
        semigroup: impl Fn(&GroupElement) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.semigroup = Arc::new(semigroup);
        self
    }

    pub fn with_certificates(mut self, certificates: Vec<GeneratorCertificate>) -> Self {
        self.certificates = certificates;
        self
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn certificates(&self) -> &[GeneratorCertificate] {
        &self.certificates
    }

    /// The increasing sequence: `(n,…,n)`, `T₃ⁿ`, `T_{d,d+1}ⁿ`.
    pub fn f_seq(&self, n: i64) -> GroupElement {
        leading_generator(self.group).pow(n)
    }

    /// The decreasing sequence `h_n = f_n⁻¹`.
    pub fn h_seq(&self, n: i64) -> GroupElement {
        leading_generator(self.group).pow(-n)
    }

    pub(crate) fn past_raw(&self, g: &GroupElement) -> bool {
        (self.past)(g)
    }

    pub(crate) fn semigroup_raw(&self, g: &GroupElement) -> bool {
        (self.semigroup)(g)
    }

    pub(crate) fn less_raw(&self, g1: &GroupElement, g2: &GroupElement) -> bool {
        self.past_raw(&g2.inverse().mul(g1))
    }

    pub fn in_past(&self, g: &GroupElement) -> Result<bool> {
        ensure_same_group(self.group, g.group())?;
        Ok(self.past_raw(g))
    }

    pub fn in_semigroup(&self, s: &GroupElement) -> Result<bool> {
        ensure_same_group(self.group, s.group())?;
        Ok(self.semigroup_raw(s))
    }

    /// `g1 <_Φ g2`, i.e. `g2⁻¹ g1 ∈ Φ`.
    pub fn less_than(&self, g1: &GroupElement, g2: &GroupElement) -> Result<bool> {
        ensure_same_group(self.group, g1.group())?;
        ensure_same_group(self.group, g2.group())?;
        Ok(self.less_raw(g1, g2))
    }

    /// `S ∩ box(radius)` in canonical order.
    pub fn semigroup_members(&self, radius: u64) -> Vec<GroupElement> {
        enumerate_box(self.group, radius)
            .iter()
            .filter(|g| self.semigroup_raw(g))
            .cloned()
            .collect()
    }

    /// `S⁻¹ ∩ box(radius)` in canonical order.
    pub fn inverse_semigroup_members(&self, radius: u64) -> Vec<GroupElement> {
        enumerate_box(self.group, radius)
            .iter()
            .filter(|g| self.semigroup_raw(&g.inverse()))
            .cloned()
            .collect()
    }

    /// `Φ ∩ box(radius)` in canonical order.
    pub fn past_members(&self, radius: u64) -> FiniteWindow {
        let b = enumerate_box(self.group, radius);
        FiniteWindow::from_elements(self.group, b.iter().filter(|g| self.past_raw(g)).cloned())
            .expect("subset of a window")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub group: GroupId,
    pub box_radius: u64,
    /// `g` with both `g` and `g⁻¹` in Φ.
    pub axiom1_violations: Vec<GroupElement>,
    /// `g ≠ e` with neither `g` nor `g⁻¹` in Φ.
    pub axiom2_violations: Vec<GroupElement>,
    /// `(g, h)` in Φ with `gh ∉ Φ`.
    pub axiom3_violations: Vec<(GroupElement, GroupElement)>,
    pub passed: bool,
}

pub fn verify_past_axioms(ctx: &OrderedGroupContext, box_radius: u64) -> Result<AxiomReport> {
    verify_past_axioms_with(ctx, box_radius, Strategy::default())
}

pub fn verify_past_axioms_with(
    ctx: &OrderedGroupContext,
    box_radius: u64,
    strategy: Strategy,
) -> Result<AxiomReport> {
    if box_radius < 1 {
        return Err(Error::invalid("box radius must be ≥ 1"));
    }
    let b = enumerate_box(ctx.group, box_radius);
    let elements = b.elements();
    let flags: Vec<(bool, bool)> =
        exec::map(strategy, elements, |g| (ctx.past_raw(g), ctx.past_raw(&g.inverse())));

    let mut axiom1_violations = Vec::new();
    let mut axiom2_violations = Vec::new();
    let mut past = Vec::new();
    for (g, &(p, q)) in elements.iter().zip(&flags) {
        if p && q {
            axiom1_violations.push(g.clone());
        }
        if !g.is_identity() && !p && !q {
            axiom2_violations.push(g.clone());
        }
        if p {
            past.push(g.clone());
        }
    }
    let axiom3_violations = exec::flat_map(strategy, &past, |g| {
        past.iter()
            .filter(|h| !ctx.past_raw(&g.mul(h)))
            .map(|h| (g.clone(), h.clone()))
            .collect()
    });
    let passed =
        axiom1_violations.is_empty() && axiom2_violations.is_empty() && axiom3_violations.is_empty();
    Ok(AxiomReport {
        group: ctx.group,
        box_radius,
        axiom1_violations,
        axiom2_violations,
        axiom3_violations,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugationViolation {
    pub n: u64,
    pub element: GroupElement,
    pub conjugate: GroupElement,
    pub element_in_past: bool,
}

/// Checks `g ∈ Φ ⇔ f_n g f_n⁻¹ ∈ Φ` for `1 ≤ n ≤ n_max` and every `g` in
/// the box.
pub fn verify_conjugation_invariance(
    ctx: &OrderedGroupContext,
    n_max: u64,
    box_radius: u64,
) -> Result<Vec<ConjugationViolation>> {
    verify_conjugation_invariance_with(ctx, n_max, box_radius, Strategy::default())
}

pub fn verify_conjugation_invariance_with(
    ctx: &OrderedGroupContext,
    n_max: u64,
    box_radius: u64,
    strategy: Strategy,
) -> Result<Vec<ConjugationViolation>> {
    if n_max < 1 {
        return Err(Error::invalid("n_max must be ≥ 1"));
    }
    let b = enumerate_box(ctx.group, box_radius);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let f = ctx.f_seq(n as i64);
        out.extend(exec::flat_map(strategy, b.elements(), |g| {
            let conj = g.conjugate_by(&f);
            let p = ctx.past_raw(g);
            if p != ctx.past_raw(&conj) {
                vec![ConjugationViolation { n, element: g.clone(), conjugate: conj, element_in_past: p }]
            } else {
                Vec::new()
            }
        }));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceIssue {
    /// `f_n ∈ Φ`.
    FInPast,
    /// `f_n <_Φ f_{n+1}` fails.
    FNotIncreasing,
    /// `h_{n+1} <_Φ h_n` fails.
    HNotDecreasing,
    /// `h_n⁻¹ ∉ S`.
    HNotInInverseSemigroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceViolation {
    pub n: u64,
    pub issue: SequenceIssue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub group: GroupId,
    pub box_radius: u64,
    pub n_max: u64,
    /// `(s, t)` in S ∩ box with `st ∉ S`.
    pub closure_violations: Vec<(GroupElement, GroupElement)>,
    /// `s ∈ S ∩ box` with `s ∉ Φ⁻¹ ∪ {e}`.
    pub containment_violations: Vec<GroupElement>,
    pub conjugation_violations: Vec<ConjugationViolation>,
    pub sequence_violations: Vec<SequenceViolation>,
    pub certificates: Vec<CertificateCheck>,
    pub generator_check: bool,
    pub counts_below: BTreeMap<u64, u64>,
    /// Only present for groups where a closed-form bound is known.
    pub bound_values: BTreeMap<u64, u64>,
    pub bound_violations: Vec<u64>,
    pub count_errors: Vec<String>,
    pub passed: bool,
}

pub fn check_certificate(ctx: &OrderedGroupContext, cert: &GeneratorCertificate) -> CertificateCheck {
    let mut acc = GroupElement::identity(ctx.group);
    for (i, letter) in cert.word.iter().enumerate() {
        if letter.element.group() != ctx.group {
            return CertificateCheck {
                name: cert.name.clone(),
                ok: false,
                detail: format!("letter {i} belongs to {}", letter.element.group()),
            };
        }
        if !ctx.semigroup_raw(&letter.element) {
            return CertificateCheck {
                name: cert.name.clone(),
                ok: false,
                detail: format!("letter {i} = {} is not in S", letter.element),
            };
        }
        let factor = if letter.inverted { letter.element.inverse() } else { letter.element.clone() };
        acc = acc.mul(&factor);
    }
    let ok = acc == cert.target;
    let detail = if ok {
        format!("word of length {} multiplies to {}", cert.word.len(), cert.target)
    } else {
        format!("word multiplies to {acc}, expected {}", cert.target)
    };
    CertificateCheck { name: cert.name.clone(), ok, detail }
}

/// Closed-form upper bound for `#{s ∈ S : s <_Φ f_n}`, where one exists:
/// `(n²+1)³` for the Heisenberg group and `∏ (n^k + 1)` over all
/// coordinates of U_{d+1}(ℤ).
pub fn count_bound(group: GroupId, n: u64) -> Option<u64> {
    match group {
        GroupId::IntegerLattice(_) => None,
        GroupId::Heisenberg => (n * n + 1).checked_pow(3),
        GroupId::Unipotent(_) => group
            .weights()
            .iter()
            .try_fold(1u64, |acc, &w| acc.checked_mul(n.checked_pow(w)?.checked_add(1)?)),
    }
}

/// Coordinate ranges certified to contain every `s ∈ S` with `s <_Φ f_n`
/// at scale `t`: elements of S have nonnegative coordinates, and the
/// leading order coordinate of such `s` is at most that of `f_n`.
fn count_ranges(group: GroupId, t: u64) -> Vec<(i64, i64)> {
    group
        .weights()
        .iter()
        .map(|&w| (0, (t as i64).checked_pow(w).expect("count box overflow")))
        .collect()
}

fn count_scale(group: GroupId, n: u64) -> u64 {
    match group {
        // s ≥ 0 and s < f_n force n₁ + … + n_d ≤ d·n.
        GroupId::IntegerLattice(d) => d as u64 * n,
        GroupId::Heisenberg | GroupId::Unipotent(_) => n,
    }
}

fn count_in_ranges(
    ctx: &OrderedGroupContext,
    f: &GroupElement,
    ranges: &[(i64, i64)],
    strategy: Strategy,
) -> u64 {
    let (lo, hi) = ranges[0];
    let heads: Vec<i64> = (lo..=hi).collect();
    let rest = &ranges[1..];
    let f_inv = f.inverse();
    exec::map(strategy, &heads, |&head| {
        let mut count = 0u64;
        for tail in RangeProduct::new(rest) {
            let mut coords = crate::group::Coords::with_capacity(ranges.len());
            coords.push(head);
            coords.extend_from_slice(&tail);
            let s = GroupElement::from_coords(ctx.group, coords);
            if ctx.semigroup_raw(&s) && ctx.past_raw(&f_inv.mul(&s)) {
                count += 1;
            }
        }
        count
    })
    .into_iter()
    .sum()
}

/// Exact `#{s ∈ S : s <_Φ f_n}`, checked stable under enlarging the
/// enumeration box by one step.
pub fn count_below(ctx: &OrderedGroupContext, n: u64) -> Result<u64> {
    count_below_with(ctx, n, Strategy::default())
}

pub fn count_below_with(ctx: &OrderedGroupContext, n: u64, strategy: Strategy) -> Result<u64> {
    if n < 1 {
        return Err(Error::invalid("n must be ≥ 1"));
    }
    let f = ctx.f_seq(n as i64);
    let t = count_scale(ctx.group, n);
    let count = count_in_ranges(ctx, &f, &count_ranges(ctx.group, t), strategy);
    let enlarged = count_in_ranges(ctx, &f, &count_ranges(ctx.group, t + 1), strategy);
    if count != enlarged {
        return Err(Error::Consistency(format!(
            "count below f_{n} grew from {count} to {enlarged} when the box was enlarged"
        )));
    }
    Ok(count)
}

pub fn verify_admissibility(
    ctx: &OrderedGroupContext,
    n_max: u64,
    box_radius: u64,
) -> Result<AdmissibilityReport> {
    verify_admissibility_with(ctx, n_max, box_radius, Strategy::default())
}

pub fn verify_admissibility_with(
    ctx: &OrderedGroupContext,
    n_max: u64,
    box_radius: u64,
    strategy: Strategy,
) -> Result<AdmissibilityReport> {
    if n_max < 1 || box_radius < 1 {
        return Err(Error::invalid("n_max and box radius must be ≥ 1"));
    }
    let members = ctx.semigroup_members(box_radius);

    let closure_violations = exec::flat_map(strategy, &members, |s| {
        members
            .iter()
            .filter(|t| !ctx.semigroup_raw(&s.mul(t)))
            .map(|t| (s.clone(), t.clone()))
            .collect()
    });

    let containment_violations: Vec<GroupElement> = members
        .iter()
        .filter(|s| !s.is_identity() && !ctx.past_raw(&s.inverse()))
        .cloned()
        .collect();

    let conjugation_violations =
        verify_conjugation_invariance_with(ctx, n_max, box_radius, strategy)?;

    let mut sequence_violations = Vec::new();
    for n in 1..=n_max {
        let ni = n as i64;
        let mut push = |issue| sequence_violations.push(SequenceViolation { n, issue });
        if ctx.past_raw(&ctx.f_seq(ni)) {
            push(SequenceIssue::FInPast);
        }
        if !ctx.less_raw(&ctx.f_seq(ni), &ctx.f_seq(ni + 1)) {
            push(SequenceIssue::FNotIncreasing);
        }
        if !ctx.less_raw(&ctx.h_seq(ni + 1), &ctx.h_seq(ni)) {
            push(SequenceIssue::HNotDecreasing);
        }
        if !ctx.semigroup_raw(&ctx.h_seq(ni).inverse()) {
            push(SequenceIssue::HNotInInverseSemigroup);
        }
    }

    let certificates: Vec<CertificateCheck> =
        ctx.certificates.iter().map(|c| check_certificate(ctx, c)).collect();
    let covered = crate::group::standard_generators(ctx.group)
        .iter()
        .all(|(_, g)| ctx.certificates.iter().any(|c| &c.target == g));
    let generator_check = covered && certificates.iter().all(|c| c.ok);

    let mut counts_below = BTreeMap::new();
    let mut bound_values = BTreeMap::new();
    let mut bound_violations = Vec::new();
    let mut count_errors = Vec::new();
    for n in 1..=n_max {
        match count_below_with(ctx, n, strategy) {
            Ok(c) => {
                counts_below.insert(n, c);
                if let Some(b) = count_bound(ctx.group, n) {
                    bound_values.insert(n, b);
                    if c > b {
                        bound_violations.push(n);
                    }
                }
            }
            Err(e) => count_errors.push(format!("n={n}: {e}")),
        }
    }

    let passed = closure_violations.is_empty()
        && containment_violations.is_empty()
        && conjugation_violations.is_empty()
        && sequence_violations.is_empty()
        && generator_check
        && bound_violations.is_empty()
        && count_errors.is_empty();

    Ok(AdmissibilityReport {
        group: ctx.group,
        box_radius,
        n_max,
        closure_violations,
        containment_violations,
        conjugation_violations,
        sequence_violations,
        certificates,
        generator_check,
        counts_below,
        bound_values,
        bound_violations,
        count_errors,
        passed,
    })
}
