//! Shift systems over the supported groups: configurations on finite
//! windows, the translation action `(g·x)(h) = x(g⁻¹h)`, the
//! `2^{-index}` shift metric over the canonical enumeration, and pattern
//! counting for full shifts and subshifts of finite type on ℤ and ℤ².

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{ensure_same_group, Error, Result};
use crate::exec::{self, Strategy};
use crate::folner::folner_window;
use crate::group::{enumerate_box, FiniteWindow, GroupElement, GroupId};

pub type Symbol = u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=u8::MAX as usize).contains(&size) {
            return Err(Error::invalid(format!("alphabet size must be in 2..=255, got {size}")));
        }
        Ok(Alphabet(size as u8))
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, s: Symbol) -> bool {
        s < self.0
    }
}

/// A point of a shift space restricted to a finite window.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    window: Arc<FiniteWindow>,
    values: Vec<Symbol>,
}

impl Configuration {
    pub fn new(window: impl Into<Arc<FiniteWindow>>, values: Vec<Symbol>) -> Result<Self> {
        let window = window.into();
        if window.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} values for a window of {} cells",
                values.len(),
                window.len()
            )));
        }
        Ok(Configuration { window, values })
    }

    pub fn from_fn(
        window: impl Into<Arc<FiniteWindow>>,
        f: impl Fn(&GroupElement) -> Symbol,
    ) -> Self {
        let window = window.into();
        let values = window.iter().map(f).collect();
        Configuration { window, values }
    }

    pub fn constant(window: impl Into<Arc<FiniteWindow>>, symbol: Symbol) -> Self {
        Self::from_fn(window, |_| symbol)
    }

    pub fn random(
        window: impl Into<Arc<FiniteWindow>>,
        alphabet: Alphabet,
        rng: &mut impl Rng,
    ) -> Self {
        let window = window.into();
        let values = (0..window.len()).map(|_| rng.random_range(0..alphabet.0)).collect();
        Configuration { window, values }
    }

    pub fn group(&self) -> GroupId {
        self.window.group()
    }

    pub fn window(&self) -> &FiniteWindow {
        &self.window
    }

    pub fn shared_window(&self) -> Arc<FiniteWindow> {
        Arc::clone(&self.window)
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, g: &GroupElement) -> Option<Symbol> {
        self.window.position(g).map(|i| self.values[i])
    }

    pub fn fits(&self, alphabet: Alphabet) -> bool {
        self.values.iter().all(|&s| alphabet.contains(s))
    }

    /// Copy with the listed cells overwritten.
    pub fn with_changes(&self, changes: &[(GroupElement, Symbol)]) -> Result<Self> {
        let mut values = self.values.clone();
        for (g, s) in changes {
            let i = self
                .window
                .position(g)
                .ok_or_else(|| Error::invalid(format!("cell {g} is outside the window")))?;
            values[i] = *s;
        }
        Ok(Configuration { window: Arc::clone(&self.window), values })
    }

    /// Cells where `self` and `other` differ, in window order.
    pub fn difference_set(&self, other: &Configuration) -> Result<Vec<GroupElement>> {
        ensure_same_group(self.group(), other.group())?;
        let mut out = Vec::new();
        for (g, &a) in self.window.iter().zip(&self.values) {
            match other.get(g) {
                Some(b) if a != b => out.push(g.clone()),
                Some(_) => {}
                None => return Err(Error::invalid(format!("cell {g} missing from other window"))),
            }
        }
        Ok(out)
    }
}

impl Serialize for Configuration {
    /// `{group, window, symbols}` with cells in lexicographic (row-major)
    /// coordinate order.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            group: GroupId,
            window: Vec<&'a [i64]>,
            symbols: Vec<Symbol>,
        }
        let mut cells: Vec<(&[i64], Symbol)> =
            self.window.iter().map(|g| g.coords()).zip(self.values.iter().copied()).collect();
        cells.sort_by(|a, b| a.0.cmp(b.0));
        Repr {
            group: self.group(),
            window: cells.iter().map(|c| c.0).collect(),
            symbols: cells.iter().map(|c| c.1).collect(),
        }
        .serialize(serializer)
    }
}

/// `(g·x)(h) = x(g⁻¹h)`, or `None` when `g⁻¹h` is outside the window of `x`.
pub fn act_at(g: &GroupElement, x: &Configuration, h: &GroupElement) -> Option<Symbol> {
    x.get(&g.inverse().mul(h))
}

/// `g·x` restricted to the cells of `requested` where it is defined.
pub fn act(g: &GroupElement, x: &Configuration, requested: &FiniteWindow) -> Result<Configuration> {
    ensure_same_group(x.group(), g.group())?;
    ensure_same_group(x.group(), requested.group())?;
    let g_inv = g.inverse();
    let mut cells = Vec::new();
    let mut values = Vec::new();
    for h in requested {
        if let Some(s) = x.get(&g_inv.mul(h)) {
            cells.push(h.clone());
            values.push(s);
        }
    }
    let window = FiniteWindow::from_elements(x.group(), cells)?;
    // from_elements keeps canonical order, which `requested` already had
    Configuration::new(window, values)
}

/// `g·x` on its full natural window `g·window(x)`.
pub fn act_full(g: &GroupElement, x: &Configuration) -> Result<Configuration> {
    ensure_same_group(x.group(), g.group())?;
    let window = x.window.left_translate(g)?;
    act(g, x, &window)
}

/// Distance `2^{-k}`, `k` the enumeration index of the first disagreement
/// inside the horizon box; zero when there is none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShiftDistance {
    pub first_disagreement: Option<u64>,
}

impl ShiftDistance {
    pub const ZERO: ShiftDistance = ShiftDistance { first_disagreement: None };

    pub fn at_index(k: u64) -> Self {
        ShiftDistance { first_disagreement: Some(k) }
    }

    pub fn value(self) -> f64 {
        match self.first_disagreement {
            None => 0.0,
            Some(k) => 2f64.powi(-(k.min(i32::MAX as u64) as i32)),
        }
    }

    pub fn is_zero(self) -> bool {
        self.first_disagreement.is_none()
    }

    /// `self > 2^{-m}`.
    pub fn exceeds_power(self, m: u64) -> bool {
        matches!(self.first_disagreement, Some(k) if k < m)
    }
}

impl PartialOrd for ShiftDistance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ShiftDistance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self.first_disagreement, other.first_disagreement) {
            (None, None) => Equal,
            (None, Some(_)) => Less,
            (Some(_), None) => Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl fmt::Display for ShiftDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_disagreement {
            None => write!(f, "0"),
            Some(k) => write!(f, "2^-{k}"),
        }
    }
}

impl Serialize for ShiftDistance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            first_disagreement: Option<u64>,
            value: f64,
        }
        Repr { first_disagreement: self.first_disagreement, value: self.value() }
            .serialize(serializer)
    }
}

/// Shift metric truncated to `enumerate_box(group, horizon)`.
pub fn shift_metric(x: &Configuration, y: &Configuration, horizon: u64) -> Result<ShiftDistance> {
    ensure_same_group(x.group(), y.group())?;
    let horizon_box = enumerate_box(x.group(), horizon);
    metric_on(&horizon_box, |h| x.get(h), |h| y.get(h))
}

/// Distance between `s·x` and `s·y` over a precomputed horizon box,
/// evaluated without materializing the translates.
pub(crate) fn translated_distance(
    s: &GroupElement,
    x: &Configuration,
    y: &Configuration,
    horizon_box: &FiniteWindow,
) -> Result<ShiftDistance> {
    let s_inv = s.inverse();
    metric_on(
        horizon_box,
        |h| x.get(&s_inv.mul(h)),
        |h| y.get(&s_inv.mul(h)),
    )
    .map_err(|e| match e {
        Error::InsufficientWindow(msg) => {
            Error::InsufficientWindow(format!("translating by {s}: {msg}"))
        }
        other => other,
    })
}

fn metric_on(
    horizon_box: &FiniteWindow,
    x: impl Fn(&GroupElement) -> Option<Symbol>,
    y: impl Fn(&GroupElement) -> Option<Symbol>,
) -> Result<ShiftDistance> {
    let mut first = None;
    for (i, h) in horizon_box.iter().enumerate() {
        match (x(h), y(h)) {
            (Some(a), Some(b)) => {
                if a != b && first.is_none() {
                    first = Some(i as u64);
                }
            }
            _ => {
                return Err(Error::InsufficientWindow(format!(
                    "cell {h} of the metric horizon is undefined"
                )))
            }
        }
    }
    Ok(ShiftDistance { first_disagreement: first })
}

/// A finite pattern: symbols at offsets, normalized so that every
/// coordinate's minimum offset is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pattern {
    cells: Vec<(GroupElement, Symbol)>,
}

impl Pattern {
    pub fn new(cells: Vec<(GroupElement, Symbol)>) -> Result<Self> {
        let first = cells.first().ok_or_else(|| Error::invalid("empty pattern"))?;
        let group = first.0.group();
        let GroupId::IntegerLattice(d) = group else {
            return Err(Error::unsupported("patterns are supported on ℤ^d only"));
        };
        for (g, _) in &cells {
            ensure_same_group(group, g.group())?;
        }
        let mins: Vec<i64> =
            (0..d).map(|i| cells.iter().map(|(g, _)| g.coords()[i]).min().unwrap_or(0)).collect();
        let mut normalized: Vec<(GroupElement, Symbol)> = cells
            .iter()
            .map(|(g, s)| {
                let c: Vec<i64> = g.coords().iter().zip(&mins).map(|(a, m)| a - m).collect();
                (GroupElement::new(group, &c).expect("same rank"), *s)
            })
            .collect();
        normalized.sort_by(|a, b| a.0.coords().cmp(b.0.coords()));
        if normalized.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("pattern repeats an offset"));
        }
        Ok(Pattern { cells: normalized })
    }

    pub fn cells(&self) -> &[(GroupElement, Symbol)] {
        &self.cells
    }

    pub fn group(&self) -> GroupId {
        self.cells[0].0.group()
    }

    /// `max offset + 1` along each axis.
    pub fn extent(&self) -> Vec<i64> {
        let d = self.group().rank();
        (0..d)
            .map(|i| self.cells.iter().map(|(g, _)| g.coords()[i]).max().unwrap_or(0) + 1)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftSystem {
    group: GroupId,
    alphabet: Alphabet,
    forbidden: Vec<Pattern>,
}

impl ShiftSystem {
    pub fn full(group: GroupId, alphabet: Alphabet) -> Self {
        ShiftSystem { group, alphabet, forbidden: Vec::new() }
    }

    pub fn sft(group: GroupId, alphabet: Alphabet, forbidden: Vec<Pattern>) -> Result<Self> {
        for p in &forbidden {
            ensure_same_group(group, p.group())?;
            if p.cells.iter().any(|&(_, s)| !alphabet.contains(s)) {
                return Err(Error::invalid("forbidden pattern uses a symbol outside the alphabet"));
            }
        }
        Ok(ShiftSystem { group, alphabet, forbidden })
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }

    pub fn is_full(&self) -> bool {
        self.forbidden.is_empty()
    }

    pub fn with_forbidden(&self, pattern: Pattern) -> Result<Self> {
        let mut forbidden = self.forbidden.clone();
        forbidden.push(pattern);
        ShiftSystem::sft(self.group, self.alphabet, forbidden)
    }

    /// Reads the plain-text SFT format:
    ///
    /// ```text
    /// # golden mean shift
    /// alphabet 2
    /// 0:1 1:1
    /// ```
    ///
    /// One forbidden pattern per line as `offset:symbol` pairs, offsets
    /// written `x` on ℤ and `x,y` on ℤ². An optional `group zd:<d>` line
    /// fixes the group when no pattern is given.
    pub fn from_sft_text(text: &str) -> Result<Self> {
        let mut alphabet = None;
        let mut group: Option<GroupId> = None;
        let mut raw: Vec<Vec<(Vec<i64>, Symbol)>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("alphabet") {
                let k: usize = rest.trim().parse().map_err(|e| err(format!("bad alphabet: {e}")))?;
                alphabet = Some(Alphabet::new(k).map_err(|e| err(e.to_string()))?);
                continue;
            }
            if let Some(rest) = line.strip_prefix("group") {
                group = Some(rest.trim().parse().map_err(|e: Error| err(e.to_string()))?);
                continue;
            }
            let mut cells = Vec::new();
            for tok in line.split_whitespace() {
                let (off, sym) = tok
                    .split_once(':')
                    .ok_or_else(|| err(format!("expected offset:symbol, got {tok:?}")))?;
                let off: Vec<i64> = off
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| err(format!("bad offset {off:?}: {e}")))?;
                let sym: Symbol =
                    sym.trim().parse().map_err(|e| err(format!("bad symbol {sym:?}: {e}")))?;
                cells.push((off, sym));
            }
            raw.push(cells);
        }
        let alphabet = alphabet.ok_or_else(|| Error::Parse("missing `alphabet k` line".into()))?;
        let group = match group {
            Some(g) => g,
            None => match raw.first().and_then(|p| p.first()) {
                Some((off, _)) => GroupId::lattice(off.len())?,
                None => GroupId::IntegerLattice(1),
            },
        };
        let forbidden = raw
            .into_iter()
            .map(|cells| {
                let cells = cells
                    .into_iter()
                    .map(|(off, s)| Ok((GroupElement::new(group, &off)?, s)))
                    .collect::<Result<Vec<_>>>()?;
                Pattern::new(cells)
            })
            .collect::<Result<Vec<_>>>()?;
        ShiftSystem::sft(group, alphabet, forbidden)
    }
}

/// Number of locally admissible patterns on `window`: assignments in
/// which no forbidden pattern occurs at a translate lying fully inside
/// the window.
pub fn pattern_count(sys: &ShiftSystem, window: &FiniteWindow) -> Result<BigUint> {
    pattern_count_with(sys, window, Strategy::default())
}

/// Largest window handled by the generic backtracking counter.
pub const GENERIC_COUNT_LIMIT: usize = 28;

pub fn pattern_count_with(
    sys: &ShiftSystem,
    window: &FiniteWindow,
    strategy: Strategy,
) -> Result<BigUint> {
    ensure_same_group(sys.group, window.group())?;
    let k = sys.alphabet.size();
    if sys.is_full() {
        return Ok(BigUint::from(k).pow(window.len() as u32));
    }
    if window.is_empty() {
        return Ok(BigUint::one());
    }
    match sys.group {
        GroupId::IntegerLattice(1) if window.is_full_rectangle() => {
            let (lo, hi) = window.coordinate_bounds().expect("nonempty")[0];
            Ok(count_interval(sys, (hi - lo + 1) as usize))
        }
        GroupId::IntegerLattice(2) if window.is_full_rectangle() => {
            let b = window.coordinate_bounds().expect("nonempty");
            let width = (b[0].1 - b[0].0 + 1) as usize;
            let height = (b[1].1 - b[1].0 + 1) as usize;
            count_rectangle(sys, width, height, strategy)
        }
        GroupId::IntegerLattice(1) | GroupId::IntegerLattice(2) => {
            if window.len() > GENERIC_COUNT_LIMIT {
                return Err(Error::unsupported(format!(
                    "non-rectangular windows are counted by backtracking up to {GENERIC_COUNT_LIMIT} cells"
                )));
            }
            Ok(count_backtracking(sys, window))
        }
        g => Err(Error::unsupported(format!("SFT pattern counting on {g}"))),
    }
}

/// Transfer over the last `span - 1` symbols of an interval.
fn count_interval(sys: &ShiftSystem, len: usize) -> BigUint {
    let k = sys.alphabet.size() as Symbol;
    let patterns: Vec<(usize, Vec<(usize, Symbol)>)> = sys
        .forbidden
        .iter()
        .map(|p| {
            let span = p.extent()[0] as usize;
            (span, p.cells.iter().map(|(g, s)| (g.coords()[0] as usize, *s)).collect())
        })
        .collect();
    let memory = patterns.iter().map(|p| p.0).max().unwrap_or(1) - 1;

    let mut states: BTreeMap<Vec<Symbol>, BigUint> = BTreeMap::new();
    states.insert(Vec::new(), BigUint::one());
    for _ in 0..len {
        let mut next: BTreeMap<Vec<Symbol>, BigUint> = BTreeMap::new();
        for (tail, count) in &states {
            for s in 0..k {
                let mut seq = tail.clone();
                seq.push(s);
                let end = seq.len();
                let hit = patterns.iter().any(|(span, cells)| {
                    *span <= end && cells.iter().all(|&(o, v)| seq[end - span + o] == v)
                });
                if hit {
                    continue;
                }
                let keep = seq.len().saturating_sub(memory);
                let key = seq[keep..].to_vec();
                *next.entry(key).or_insert_with(BigUint::zero) += count;
            }
        }
        states = next;
    }
    states.values().sum()
}

/// Row-by-row transfer on a `width × height` rectangle of ℤ²; rows run
/// along the first coordinate.
fn count_rectangle(
    sys: &ShiftSystem,
    width: usize,
    height: usize,
    strategy: Strategy,
) -> Result<BigUint> {
    let k = sys.alphabet.size();
    let rows_total = (k as u128).checked_pow(width as u32).filter(|&r| r <= 1 << 22).ok_or_else(
        || Error::unsupported(format!("rectangle width {width} is too large for row transfer")),
    )? as usize;

    struct Shape {
        w: usize,
        h: usize,
        cells: Vec<(usize, usize, Symbol)>,
    }
    let shapes: Vec<Shape> = sys
        .forbidden
        .iter()
        .map(|p| {
            let e = p.extent();
            Shape {
                w: e[0] as usize,
                h: e[1] as usize,
                cells: p
                    .cells
                    .iter()
                    .map(|(g, s)| (g.coords()[0] as usize, g.coords()[1] as usize, *s))
                    .collect(),
            }
        })
        .filter(|s| s.w <= width && s.h <= height)
        .collect();
    let memory = shapes.iter().map(|s| s.h).max().unwrap_or(1) - 1;

    let decode = |mut r: usize| -> Vec<Symbol> {
        (0..width)
            .map(|_| {
                let s = (r % k) as Symbol;
                r /= k;
                s
            })
            .collect()
    };
    let rows: Vec<Vec<Symbol>> = (0..rows_total)
        .map(decode)
        .filter(|row| {
            shapes.iter().filter(|s| s.h == 1).all(|s| {
                (0..=width - s.w).all(|tx| !s.cells.iter().all(|&(ox, _, v)| row[tx + ox] == v))
            })
        })
        .collect();

    // stack[j] is the row j steps above the new one
    let fits = |stack: &[u32], new: u32| -> bool {
        let row_at = |back: usize| -> &Vec<Symbol> {
            if back == 0 {
                &rows[new as usize]
            } else {
                &rows[stack[stack.len() - back] as usize]
            }
        };
        shapes.iter().filter(|s| s.h >= 2 && s.h - 1 <= stack.len()).all(|s| {
            (0..=width - s.w).all(|tx| {
                !s.cells.iter().all(|&(ox, oy, v)| row_at(s.h - 1 - oy)[tx + ox] == v)
            })
        })
    };
    let memo: Mutex<HashMap<(Vec<u32>, u32), bool>> = Mutex::new(HashMap::new());
    let compatible = |stack: &[u32], new: u32| -> bool {
        let key = (stack.to_vec(), new);
        if let Some(&v) = memo.lock().expect("memo lock").get(&key) {
            return v;
        }
        let v = fits(stack, new);
        memo.lock().expect("memo lock").insert(key, v);
        v
    };

    let mut states: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
    states.insert(Vec::new(), BigUint::one());
    for _ in 0..height {
        let current: Vec<(Vec<u32>, BigUint)> = states.into_iter().collect();
        let pieces = exec::map(strategy, &current, |(stack, count)| {
            let mut out: Vec<(Vec<u32>, BigUint)> = Vec::new();
            for new in 0..rows.len() as u32 {
                if !compatible(stack, new) {
                    continue;
                }
                let mut next = stack.clone();
                next.push(new);
                let keep = next.len().saturating_sub(memory);
                out.push((next[keep..].to_vec(), count.clone()));
            }
            out
        });
        states = BTreeMap::new();
        for (key, c) in pieces.into_iter().flatten() {
            *states.entry(key).or_insert_with(BigUint::zero) += c;
        }
    }
    Ok(states.values().sum())
}

/// Exhaustive backtracking over the window in canonical order, checking
/// each occurrence once its last cell is assigned.
fn count_backtracking(sys: &ShiftSystem, window: &FiniteWindow) -> BigUint {
    let k = sys.alphabet.size() as Symbol;
    // checks[i]: occurrences whose highest window position is i
    let mut checks: Vec<Vec<Vec<(usize, Symbol)>>> = vec![Vec::new(); window.len()];
    let mut seen = std::collections::HashSet::new();
    for (pi, p) in sys.forbidden.iter().enumerate() {
        for c in window {
            for (o, _) in &p.cells {
                let t = c.mul(&o.inverse());
                if !seen.insert((pi, t.clone())) {
                    continue;
                }
                let placed: Option<Vec<(usize, Symbol)>> = p
                    .cells
                    .iter()
                    .map(|(o2, v)| window.position(&t.mul(o2)).map(|i| (i, *v)))
                    .collect();
                if let Some(placed) = placed {
                    let last = placed.iter().map(|x| x.0).max().expect("nonempty pattern");
                    checks[last].push(placed);
                }
            }
        }
    }

    fn go(i: usize, k: Symbol, assign: &mut Vec<Symbol>, checks: &[Vec<Vec<(usize, Symbol)>>]) -> BigUint {
        if i == assign.len() {
            return BigUint::one();
        }
        let mut total = BigUint::zero();
        for s in 0..k {
            assign[i] = s;
            let bad = checks[i].iter().any(|occ| occ.iter().all(|&(j, v)| assign[j] == v));
            if !bad {
                total += go(i + 1, k, assign, checks);
            }
        }
        total
    }
    let mut assign = vec![0; window.len()];
    go(0, k, &mut assign, &checks)
}

/// Natural logarithm of a big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64-bit mantissa").ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub n: u64,
    pub window_size: u64,
    pub pattern_count: BigUint,
    pub estimate: f64,
}

impl Serialize for EntropyEstimate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: u64,
            window_size: u64,
            count: String,
            estimate: f64,
        }
        Repr {
            n: self.n,
            window_size: self.window_size,
            count: self.pattern_count.to_str_radix(10),
            estimate: self.estimate,
        }
        .serialize(serializer)
    }
}

/// `log N(F_n) / |F_n|` over the Følner window `F_n` (natural log).
pub fn top_entropy_estimate(sys: &ShiftSystem, n: u64) -> Result<EntropyEstimate> {
    top_entropy_estimate_with(sys, n, Strategy::default())
}

pub fn top_entropy_estimate_with(
    sys: &ShiftSystem,
    n: u64,
    strategy: Strategy,
) -> Result<EntropyEstimate> {
    if n < 1 {
        return Err(Error::invalid("n must be ≥ 1"));
    }
    let window = folner_window(sys.group, n);
    let count = pattern_count_with(sys, &window, strategy)?;
    let size = window.len() as u64;
    let estimate = if sys.is_full() {
        // count = k^|F| exactly
        (sys.alphabet.size() as f64).ln()
    } else {
        ln_biguint(&count) / size as f64
    };
    Ok(EntropyEstimate { n, window_size: size, pattern_count: count, estimate })
}
