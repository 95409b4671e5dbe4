//! Exact entropy of Bernoulli and Markov shift measures: cylinder
//! probabilities in rational arithmetic, joint and conditional entropies
//! of coordinate partitions, and truncated Pinsker-formula checks.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{ensure_same_group, Error, Result};
use crate::exec::{self, Strategy};
use crate::group::{enumerate_box, FiniteWindow, GroupElement, GroupId};
use crate::order::OrderedGroupContext;

/// Tolerance for validating probability inputs.
pub const INPUT_TOLERANCE: f64 = 1e-12;

/// Largest number of cylinders enumerated in exact arithmetic.
pub const EXACT_CYLINDER_LIMIT: u64 = 1 << 16;

/// Largest number of cylinders enumerated in floating point.
pub const FLOAT_CYLINDER_LIMIT: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq)]
pub enum ShiftMeasure {
    Bernoulli { p: Vec<BigRational> },
    /// Stationary Markov chain on ℤ.
    Markov { transition: Vec<Vec<BigRational>>, stationary: Vec<BigRational> },
}

/// Exact value of the shortest decimal text of `x`.
pub fn exact_decimal(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("probability {x} is not finite")));
    }
    parse_rational(&format!("{x}"))
}

/// Parses `"3"`, `"-0.25"` or `"1/3"` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()))
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Checks a probability vector; a sum off by at most the tolerance is
/// renormalized exactly.
fn validated_distribution(p: Vec<BigRational>, what: &str) -> Result<Vec<BigRational>> {
    if p.len() < 2 {
        return Err(Error::invalid(format!("{what} needs at least two symbols")));
    }
    if p.iter().any(|x| x.is_negative()) {
        return Err(Error::invalid(format!("{what} has a negative entry")));
    }
    let sum: BigRational = p.iter().sum();
    if (to_f64(&sum) - 1.0).abs() > INPUT_TOLERANCE {
        return Err(Error::invalid(format!("{what} sums to {}", to_f64(&sum))));
    }
    Ok(p.into_iter().map(|x| x / &sum).collect())
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let k = a.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

/// Solves `πP = π`, `Σπ = 1` by exact elimination.
fn stationary_of(p: &[Vec<BigRational>]) -> Result<Vec<BigRational>> {
    let k = p.len();
    // rows: (Pᵀ - I) with the last equation replaced by Σπ = 1
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k)
                .map(|j| {
                    let v = p[j][i].clone();
                    if i == j {
                        v - BigRational::one()
                    } else {
                        v
                    }
                })
                .collect();
            row.push(BigRational::zero());
            row
        })
        .collect();
    m[k - 1] = vec![BigRational::one(); k + 1];
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::invalid("transition matrix has no unique stationary vector"))?;
        m.swap(col, pivot);
        let lead = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &lead;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (cell, p) in m[r].iter_mut().zip(&pivot_row) {
                    *cell = &*cell - &f * p;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[k].clone()).collect())
}

impl ShiftMeasure {
    pub fn bernoulli(p: &[f64]) -> Result<Self> {
        Self::bernoulli_exact(p.iter().map(|&x| exact_decimal(x)).collect::<Result<_>>()?)
    }

    pub fn bernoulli_exact(p: Vec<BigRational>) -> Result<Self> {
        Ok(ShiftMeasure::Bernoulli { p: validated_distribution(p, "Bernoulli vector")? })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Self::bernoulli_exact(vec![BigRational::new(1.into(), (k as i64).into()); k])
    }

    /// Markov measure; `stationary` is solved exactly when omitted.
    pub fn markov(transition: &[Vec<f64>], stationary: Option<&[f64]>) -> Result<Self> {
        let p = transition
            .iter()
            .map(|row| row.iter().map(|&x| exact_decimal(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let pi = stationary
            .map(|s| s.iter().map(|&x| exact_decimal(x)).collect::<Result<Vec<_>>>())
            .transpose()?;
        Self::markov_exact(p, pi)
    }

    pub fn markov_exact(
        transition: Vec<Vec<BigRational>>,
        stationary: Option<Vec<BigRational>>,
    ) -> Result<Self> {
        let k = transition.len();
        if transition.iter().any(|row| row.len() != k) {
            return Err(Error::invalid("transition matrix must be square"));
        }
        let transition = transition
            .into_iter()
            .enumerate()
            .map(|(i, row)| validated_distribution(row, &format!("transition row {i}")))
            .collect::<Result<Vec<_>>>()?;
        let stationary = match stationary {
            Some(pi) => {
                if pi.len() != k {
                    return Err(Error::invalid("stationary vector has the wrong length"));
                }
                let pi = validated_distribution(pi, "stationary vector")?;
                for j in 0..k {
                    let image: BigRational =
                        (0..k).map(|i| &pi[i] * &transition[i][j]).sum();
                    if (to_f64(&image) - to_f64(&pi[j])).abs() > INPUT_TOLERANCE {
                        return Err(Error::invalid("πP ≠ π for the given stationary vector"));
                    }
                }
                pi
            }
            None => stationary_of(&transition)?,
        };
        if stationary.iter().any(|x| !x.is_positive()) {
            return Err(Error::invalid("stationary vector must be strictly positive"));
        }
        Ok(ShiftMeasure::Markov { transition, stationary })
    }

    /// Reads `{"kind":"bernoulli","p":[..]}` or
    /// `{"kind":"markov","P":[[..]],"pi":[..]}`. Entries may be JSON
    /// numbers or strings such as `"1/3"`; `pi` is optional.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("measure JSON: {e}")))?;
        let entry = |x: &Value| -> Result<BigRational> {
            match x {
                Value::Number(n) => match n.as_i64() {
                    Some(i) => Ok(BigRational::from_integer(i.into())),
                    None => exact_decimal(n.as_f64().unwrap_or(f64::NAN)),
                },
                Value::String(s) => parse_rational(s),
                other => Err(Error::Parse(format!("expected a probability, got {other}"))),
            }
        };
        let vector = |x: Option<&Value>, name: &str| -> Result<Vec<BigRational>> {
            x.and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array `{name}`")))?
                .iter()
                .map(entry)
                .collect()
        };
        match v.get("kind").and_then(Value::as_str) {
            Some("bernoulli") => Self::bernoulli_exact(vector(v.get("p"), "p")?),
            Some("markov") => {
                let rows = v
                    .get("P")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("missing matrix `P`".into()))?
                    .iter()
                    .map(|row| vector(Some(row), "P row"))
                    .collect::<Result<Vec<_>>>()?;
                let pi = match v.get("pi") {
                    Some(x) => Some(vector(Some(x), "pi")?),
                    None => None,
                };
                Self::markov_exact(rows, pi)
            }
            _ => Err(Error::Parse("`kind` must be \"bernoulli\" or \"markov\"".into())),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            ShiftMeasure::Bernoulli { p } => p.len(),
            ShiftMeasure::Markov { stationary, .. } => stationary.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ShiftMeasure::Bernoulli { .. } => "bernoulli",
            ShiftMeasure::Markov { .. } => "markov",
        }
    }

    pub fn is_markov(&self) -> bool {
        matches!(self, ShiftMeasure::Markov { .. })
    }

    /// Markov measures are only defined on ℤ.
    pub fn supports(&self, group: GroupId) -> Result<()> {
        if self.is_markov() && group != GroupId::IntegerLattice(1) {
            return Err(Error::unsupported(format!("Markov measures live on ℤ, not {group}")));
        }
        Ok(())
    }

    /// Exact probability of the cylinder `{x : x(g) = symbol}` over the
    /// given cells.
    pub fn cylinder_probability(&self, cells: &[(GroupElement, u8)]) -> Result<BigRational> {
        let Some(first) = cells.first() else {
            return Ok(BigRational::one());
        };
        let group = first.0.group();
        self.supports(group)?;
        let k = self.alphabet_size();
        let mut seen = BTreeSet::new();
        for (g, s) in cells {
            ensure_same_group(group, g.group())?;
            if (*s as usize) >= k {
                return Err(Error::invalid(format!("symbol {s} outside the alphabet")));
            }
            if !seen.insert(g.coords().to_vec()) {
                return Err(Error::invalid(format!("cell {g} listed twice")));
            }
        }
        Ok(match self {
            ShiftMeasure::Bernoulli { p } => {
                cells.iter().fold(BigRational::one(), |acc, (_, s)| acc * &p[*s as usize])
            }
            ShiftMeasure::Markov { transition, stationary } => {
                let mut sorted: Vec<(i64, u8)> =
                    cells.iter().map(|(g, s)| (g.coords()[0], *s)).collect();
                sorted.sort_unstable();
                let mut acc = stationary[sorted[0].1 as usize].clone();
                let mut powers = MatrixPowers::new(transition);
                for w in sorted.windows(2) {
                    let gap = (w[1].0 - w[0].0) as usize;
                    acc *= &powers.get(gap)[w[0].1 as usize][w[1].1 as usize];
                }
                acc
            }
        })
    }
}

impl Serialize for ShiftMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "lowercase")]
        enum Repr {
            Bernoulli {
                p: Vec<String>,
            },
            Markov {
                #[serde(rename = "P")]
                transition: Vec<Vec<String>>,
                pi: Vec<String>,
            },
        }
        let s = |v: &[BigRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        match self {
            ShiftMeasure::Bernoulli { p } => Repr::Bernoulli { p: s(p) },
            ShiftMeasure::Markov { transition, stationary } => Repr::Markov {
                transition: transition.iter().map(|r| s(r)).collect(),
                pi: s(stationary),
            },
        }
        .serialize(serializer)
    }
}

/// Cached exact powers `P^gap`.
struct MatrixPowers<'a> {
    base: &'a [Vec<BigRational>],
    powers: Vec<Vec<Vec<BigRational>>>,
}

impl<'a> MatrixPowers<'a> {
    fn new(base: &'a [Vec<BigRational>]) -> Self {
        let k = base.len();
        let identity = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        MatrixPowers { base, powers: vec![identity] }
    }

    fn get(&mut self, n: usize) -> &Vec<Vec<BigRational>> {
        while self.powers.len() <= n {
            let next = mat_mul(self.powers.last().expect("identity"), self.base);
            self.powers.push(next);
        }
        &self.powers[n]
    }
}

fn h_term(q: f64) -> f64 {
    if q > 0.0 {
        -q * q.ln()
    } else {
        0.0
    }
}

fn exact_distribution_entropy(p: &[BigRational]) -> f64 {
    p.iter().map(|x| h_term(to_f64(x))).sum()
}

/// `-Σ pᵢ log pᵢ` (natural log, `0·log 0 = 0`).
pub fn partition_entropy(p: &[f64]) -> Result<f64> {
    if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::invalid("probabilities must be finite and nonnegative"));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > INPUT_TOLERANCE {
        return Err(Error::invalid(format!("probabilities sum to {sum}")));
    }
    Ok(p.iter().map(|&x| h_term(x)).sum())
}

/// Entropy of the shift: `H(p)` for Bernoulli, the entropy rate
/// `-Σ πᵢ Σ Pᵢⱼ log Pᵢⱼ` for Markov.
pub fn measure_entropy(mu: &ShiftMeasure) -> f64 {
    match mu {
        ShiftMeasure::Bernoulli { p } => exact_distribution_entropy(p),
        ShiftMeasure::Markov { transition, stationary } => stationary
            .iter()
            .zip(transition)
            .map(|(pi, row)| to_f64(pi) * exact_distribution_entropy(row))
            .sum(),
    }
}

/// The partition by symbols at finitely many coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinitePartitionSpec {
    coordinates: FiniteWindow,
}

impl FinitePartitionSpec {
    pub fn new(coordinates: FiniteWindow) -> Result<Self> {
        if coordinates.is_empty() {
            return Err(Error::invalid("partition needs at least one coordinate"));
        }
        Ok(FinitePartitionSpec { coordinates })
    }

    /// Symbol at the identity.
    pub fn at_identity(group: GroupId) -> Self {
        FinitePartitionSpec { coordinates: FiniteWindow::singleton(GroupElement::identity(group)) }
    }

    pub fn at(g: GroupElement) -> Self {
        FinitePartitionSpec { coordinates: FiniteWindow::singleton(g) }
    }

    pub fn coordinates(&self) -> &FiniteWindow {
        &self.coordinates
    }

    pub fn group(&self) -> GroupId {
        self.coordinates.group()
    }
}

fn union(a: &FiniteWindow, b: &FiniteWindow) -> Result<FiniteWindow> {
    ensure_same_group(a.group(), b.group())?;
    let mut all: Vec<GroupElement> = a.elements().to_vec();
    all.extend(b.iter().filter(|g| !a.contains(g)).cloned());
    FiniteWindow::from_elements(a.group(), all)
}

/// `{t·c : t ∈ translators, c ∈ cells}`.
fn product_set(translators: &FiniteWindow, cells: &FiniteWindow) -> Result<FiniteWindow> {
    ensure_same_group(translators.group(), cells.group())?;
    let set: std::collections::HashSet<GroupElement> =
        translators.iter().flat_map(|t| cells.iter().map(move |c| t.mul(c))).collect();
    FiniteWindow::from_elements(cells.group(), set)
}

/// `H(symbols on cells)`, from the closed forms: independence for
/// Bernoulli, the chain rule along sorted positions for Markov.
pub fn joint_entropy(mu: &ShiftMeasure, cells: &FiniteWindow) -> Result<f64> {
    mu.supports(cells.group())?;
    if cells.is_empty() {
        return Ok(0.0);
    }
    Ok(match mu {
        ShiftMeasure::Bernoulli { p } => cells.len() as f64 * exact_distribution_entropy(p),
        ShiftMeasure::Markov { transition, stationary } => {
            let mut pos: Vec<i64> = cells.iter().map(|g| g.coords()[0]).collect();
            pos.sort_unstable();
            let pi: Vec<f64> = stationary.iter().map(to_f64).collect();
            let mut powers = MatrixPowers::new(transition);
            let mut total: f64 = pi.iter().map(|&x| h_term(x)).sum();
            for w in pos.windows(2) {
                let step = powers.get((w[1] - w[0]) as usize);
                total += pi
                    .iter()
                    .zip(step)
                    .map(|(&p_a, row)| p_a * exact_distribution_entropy(row))
                    .sum::<f64>();
            }
            total
        }
    })
}

/// `H(target | given) = H(target ∪ given) − H(given)`.
pub fn conditional_entropy(
    mu: &ShiftMeasure,
    target: &FiniteWindow,
    given: &FiniteWindow,
) -> Result<f64> {
    let joint = joint_entropy(mu, &union(target, given)?)?;
    Ok((joint - joint_entropy(mu, given)?).max(0.0))
}

/// Cylinder-probability arithmetic shared by the exact and float walkers.
trait Weight: Clone + Send + Sync {
    fn from_rational(r: &BigRational) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn entropy_term(&self) -> f64;
    fn is_null(&self) -> bool;
}

impl Weight for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn entropy_term(&self) -> f64 {
        h_term(to_f64(self))
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
}

impl Weight for f64 {
    fn from_rational(r: &BigRational) -> Self {
        to_f64(r)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn entropy_term(&self) -> f64 {
        h_term(*self)
    }
    fn is_null(&self) -> bool {
        *self == 0.0
    }
}

/// Per-step factors: `first[s]`, then `step[i][prev][s]` for the i-th
/// following cell.
struct CylinderChain<W> {
    first: Vec<W>,
    steps: Vec<Vec<Vec<W>>>,
}

impl<W: Weight> CylinderChain<W> {
    fn build(mu: &ShiftMeasure, cells: &FiniteWindow) -> Self {
        match mu {
            ShiftMeasure::Bernoulli { p } => {
                let row: Vec<W> = p.iter().map(W::from_rational).collect();
                CylinderChain {
                    first: row.clone(),
                    steps: vec![vec![row; p.len()]; cells.len().saturating_sub(1)],
                }
            }
            ShiftMeasure::Markov { transition, stationary } => {
                let mut pos: Vec<i64> = cells.iter().map(|g| g.coords()[0]).collect();
                pos.sort_unstable();
                let mut powers = MatrixPowers::new(transition);
                let steps = pos
                    .windows(2)
                    .map(|w| {
                        powers
                            .get((w[1] - w[0]) as usize)
                            .iter()
                            .map(|row| row.iter().map(W::from_rational).collect())
                            .collect()
                    })
                    .collect();
                CylinderChain { first: stationary.iter().map(W::from_rational).collect(), steps }
            }
        }
    }

    fn walk(&self, depth: usize, prev: usize, weight: &W) -> f64 {
        if depth == self.steps.len() {
            return weight.entropy_term();
        }
        self.steps[depth][prev]
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_null())
            .map(|(s, f)| {
                let w = weight.times(f);
                if w.is_null() {
                    0.0
                } else {
                    self.walk(depth + 1, s, &w)
                }
            })
            .sum()
    }

    fn entropy(&self, strategy: Strategy) -> f64 {
        let starts: Vec<usize> = (0..self.first.len()).collect();
        exec::map(strategy, &starts, |&s| {
            let w = &self.first[s];
            if w.is_null() {
                0.0
            } else {
                self.walk(0, s, w)
            }
        })
        .into_iter()
        .sum()
    }
}

fn cylinder_count(mu: &ShiftMeasure, cells: &FiniteWindow) -> u64 {
    (mu.alphabet_size() as u64).saturating_pow(cells.len() as u32)
}

/// `H(symbols on cells)` by summing `-μ(C) log μ(C)` over every cylinder,
/// each probability exact until the log.
pub fn cylinder_entropy(mu: &ShiftMeasure, cells: &FiniteWindow) -> Result<f64> {
    cylinder_entropy_with(mu, cells, Strategy::default())
}

pub fn cylinder_entropy_with(
    mu: &ShiftMeasure,
    cells: &FiniteWindow,
    strategy: Strategy,
) -> Result<f64> {
    mu.supports(cells.group())?;
    if cells.is_empty() {
        return Ok(0.0);
    }
    if cylinder_count(mu, cells) > EXACT_CYLINDER_LIMIT {
        return Err(Error::unsupported(format!(
            "exact enumeration is limited to {EXACT_CYLINDER_LIMIT} cylinders"
        )));
    }
    Ok(CylinderChain::<BigRational>::build(mu, cells).entropy(strategy))
}

/// `H(symbols on F_n) / |F_n|` by floating-point cylinder enumeration over
/// `F_n = [0, n]^d`.
pub fn block_entropy_rate(mu: &ShiftMeasure, group: GroupId, n: u64) -> Result<f64> {
    block_entropy_rate_with(mu, group, n, Strategy::default())
}

pub fn block_entropy_rate_with(
    mu: &ShiftMeasure,
    group: GroupId,
    n: u64,
    strategy: Strategy,
) -> Result<f64> {
    mu.supports(group)?;
    let window = crate::folner::folner_window(group, n);
    if cylinder_count(mu, &window) > FLOAT_CYLINDER_LIMIT {
        return Err(Error::unsupported(format!(
            "block enumeration is limited to {FLOAT_CYLINDER_LIMIT} cylinders"
        )));
    }
    let h = CylinderChain::<f64>::build(mu, &window).entropy(strategy);
    Ok(h / window.len() as f64)
}

/// `H(α | symbols on past)` for a past inside the algebraic past and
/// disjoint from α's coordinates.
pub fn conditional_entropy_finite_past(
    mu: &ShiftMeasure,
    alpha: &FinitePartitionSpec,
    past: &FiniteWindow,
) -> Result<f64> {
    let group = alpha.group();
    ensure_same_group(group, past.group())?;
    let ctx = OrderedGroupContext::standard(group)?;
    if let Some(g) = past.iter().find(|g| !ctx.past_raw(g)) {
        return Err(Error::invalid(format!("{g} is not in the algebraic past")));
    }
    if let Some(g) = past.iter().find(|g| alpha.coordinates.contains(g)) {
        return Err(Error::invalid(format!("{g} is both a past and a partition coordinate")));
    }
    conditional_entropy(mu, &alpha.coordinates, past)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PinskerCheckReport {
    pub measure: &'static str,
    pub alpha: FiniteWindow,
    pub beta: FiniteWindow,
    pub truncation_radius: u64,
    /// `H(α∨β | (α∨β) over the truncated past)`.
    pub lhs: f64,
    /// `H(β | β over the truncated past) + H(α | β over the box ∨ α over the truncated past)`.
    pub rhs: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub const PINSKER_TOLERANCE_EXACT: f64 = 1e-12;
pub const PINSKER_TOLERANCE_CHAINED: f64 = 1e-10;

/// Both sides of the Pinsker identity with every infinite join truncated
/// to `box(radius)`; translates of a coordinate `a` by `g` are the cells `g·a`.
pub fn pinsker_check(
    mu: &ShiftMeasure,
    alpha: &FinitePartitionSpec,
    beta: &FinitePartitionSpec,
    radius: u64,
) -> Result<PinskerCheckReport> {
    let group = alpha.group();
    ensure_same_group(group, beta.group())?;
    mu.supports(group)?;
    if radius < 1 {
        return Err(Error::invalid("truncation radius must be ≥ 1"));
    }
    let window = enumerate_box(group, radius);
    for g in alpha.coordinates.iter().chain(beta.coordinates.iter()) {
        if !window.contains(g) {
            return Err(Error::invalid(format!("partition coordinate {g} lies outside box({radius})")));
        }
    }
    let ctx = OrderedGroupContext::standard(group)?;
    let past = FiniteWindow::from_elements(
        group,
        window.iter().filter(|g| ctx.past_raw(g)).cloned().collect::<Vec<_>>(),
    )?;
    let a = &alpha.coordinates;
    let b = &beta.coordinates;
    let joint = union(a, b)?;

    let lhs = conditional_entropy(mu, &joint, &product_set(&past, &joint)?)?;
    let beta_part = conditional_entropy(mu, b, &product_set(&past, b)?)?;
    let alpha_given = union(&product_set(&window, b)?, &product_set(&past, a)?)?;
    let alpha_part = conditional_entropy(mu, a, &alpha_given)?;
    let rhs = beta_part + alpha_part;
    let gap = (lhs - rhs).abs();
    let tolerance =
        if mu.is_markov() { PINSKER_TOLERANCE_CHAINED } else { PINSKER_TOLERANCE_EXACT };
    Ok(PinskerCheckReport {
        measure: mu.kind(),
        alpha: a.clone(),
        beta: b.clone(),
        truncation_radius: radius,
        lhs,
        rhs,
        gap,
        tolerance,
        passed: gap < tolerance,
    })
}
