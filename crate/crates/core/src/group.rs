//! Exact arithmetic, canonical coordinates and box enumeration for ℤ^d,
//! the Heisenberg group H₃(ℤ) and U_{d+1}(ℤ).
//!
//! Canonical coordinates:
//!
//! * `IntegerLattice(d)`: `(n₁, …, n_d)`.
//! * `Heisenberg`: `(n₃, n₂, n₁)`, the exponents of the normal form
//!   `T₃^{n₃} T₂^{n₂} T₁^{n₁}`, whose matrix is `[[1, n₂, n₁], [0, 1, n₃], [0, 0, 1]]`.
//! * `Unipotent(d)`: the superdiagonal entries `a_i^k = M[i][i+k]`, listed
//!   level by level (`k = 1..=d`) and within a level by row (`i = 1..=d-k+1`).
//!
//! Coordinates are `i64` with checked arithmetic; an overflow aborts the
//! computation with a panic rather than wrapping. At the supported scale
//! (|coords| ≤ 10⁶) no product comes close to the limit.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{ensure_same_group, Error, Result};

pub type Coords = SmallVec<[i64; 8]>;

/// Square integer matrix stored row by row.
pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupId {
    IntegerLattice(usize),
    Heisenberg,
    /// `Unipotent(d)` is U_{d+1}(ℤ): (d+1)×(d+1) matrices.
    Unipotent(usize),
}

impl GroupId {
    pub fn lattice(d: usize) -> Result<Self> {
        GroupId::IntegerLattice(d).validated()
    }

    pub fn unipotent(d: usize) -> Result<Self> {
        GroupId::Unipotent(d).validated()
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            GroupId::IntegerLattice(0) => Err(Error::invalid("ℤ^d needs d ≥ 1")),
            GroupId::Unipotent(d) if d < 2 => {
                Err(Error::invalid("U_{d+1}(ℤ) needs d ≥ 2"))
            }
            g => Ok(g),
        }
    }

    /// Number of canonical coordinates.
    pub fn rank(self) -> usize {
        match self {
            GroupId::IntegerLattice(d) => d,
            GroupId::Heisenberg => 3,
            GroupId::Unipotent(d) => d * (d + 1) / 2,
        }
    }

    pub fn is_abelian(self) -> bool {
        matches!(self, GroupId::IntegerLattice(_))
    }

    /// Growth exponent of each coordinate: the box of radius `n` allows
    /// `|c| ≤ n^weight`.
    pub fn weights(self) -> Vec<u32> {
        match self {
            GroupId::IntegerLattice(d) => vec![1; d],
            GroupId::Heisenberg => vec![1, 1, 2],
            GroupId::Unipotent(d) => (1..=d)
                .flat_map(|k| std::iter::repeat_n(k as u32, d - k + 1))
                .collect(),
        }
    }

    /// Side length of the matrix representation, if any.
    pub fn matrix_size(self) -> Option<usize> {
        match self {
            GroupId::IntegerLattice(_) => None,
            GroupId::Heisenberg => Some(3),
            GroupId::Unipotent(d) => Some(d + 1),
        }
    }

    /// Number of elements of `enumerate_box(self, n)`.
    pub fn box_size(self, n: u64) -> u128 {
        self.weights()
            .iter()
            .map(|&w| 2 * (n as u128).pow(w) + 1)
            .product()
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::IntegerLattice(d) => write!(f, "zd:{d}"),
            GroupId::Heisenberg => write!(f, "heisenberg"),
            GroupId::Unipotent(d) => write!(f, "unipotent:{d}"),
        }
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, dim) = match s.split_once(':') {
            Some((k, d)) => (k, Some(d)),
            None => (s, None),
        };
        let dim = |what: &str| -> Result<usize> {
            dim.ok_or_else(|| Error::Parse(format!("{what} needs a dimension, e.g. {what}:2")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad dimension in {s:?}: {e}")))
        };
        match kind {
            "zd" => GroupId::lattice(dim("zd")?),
            "heisenberg" => Ok(GroupId::Heisenberg),
            "unipotent" => GroupId::unipotent(dim("unipotent")?),
            _ => Err(Error::Parse(format!("unknown group {s:?}"))),
        }
    }
}

impl Serialize for GroupId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Position of `a_i^k` (1-based `k`, `i`) in the canonical coordinate list
/// of `Unipotent(d)`.
pub(crate) fn unipotent_index(d: usize, k: usize, i: usize) -> usize {
    debug_assert!(k >= 1 && k <= d && i >= 1 && i <= d - k + 1);
    let offset: usize = (1..k).map(|l| d - l + 1).sum();
    offset + i - 1
}

#[inline]
fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("group coordinate overflow")
}

#[inline]
fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("group coordinate overflow")
}

#[inline]
fn neg(a: i64) -> i64 {
    a.checked_neg().expect("group coordinate overflow")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: GroupId,
    coords: Coords,
}

impl GroupElement {
    pub fn new(group: GroupId, coords: &[i64]) -> Result<Self> {
        let group = group.validated()?;
        if coords.len() != group.rank() {
            return Err(Error::invalid(format!(
                "{group} has {} coordinates, got {}",
                group.rank(),
                coords.len()
            )));
        }
        Ok(GroupElement { group, coords: Coords::from_slice(coords) })
    }

    pub(crate) fn from_coords(group: GroupId, coords: Coords) -> Self {
        debug_assert_eq!(coords.len(), group.rank());
        GroupElement { group, coords }
    }

    pub fn identity(group: GroupId) -> Self {
        GroupElement { group, coords: smallvec::smallvec![0; group.rank()] }
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Group product `self · other`.
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        ensure_same_group(self.group, other.group)?;
        Ok(self.mul(other))
    }

    /// Product for operands already known to share a group.
    pub(crate) fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.group, other.group, "group mismatch in product");
        let a = &self.coords;
        let b = &other.coords;
        let coords: Coords = match self.group {
            GroupId::IntegerLattice(_) => a.iter().zip(b).map(|(&x, &y)| add(x, y)).collect(),
            GroupId::Heisenberg => {
                // [[1,a2,a1],[0,1,a3]] · [[1,b2,b1],[0,1,b3]]
                smallvec::smallvec![
                    add(a[0], b[0]),
                    add(a[1], b[1]),
                    add(add(a[2], b[2]), mul(a[1], b[0])),
                ]
            }
            GroupId::Unipotent(d) => {
                let mut c: Coords = smallvec::smallvec![0; a.len()];
                for k in 1..=d {
                    for i in 1..=d - k + 1 {
                        let mut v = add(a[unipotent_index(d, k, i)], b[unipotent_index(d, k, i)]);
                        for j in 1..k {
                            let left = a[unipotent_index(d, k - j, i)];
                            let right = b[unipotent_index(d, j, i + k - j)];
                            v = add(v, mul(left, right));
                        }
                        c[unipotent_index(d, k, i)] = v;
                    }
                }
                c
            }
        };
        GroupElement { group: self.group, coords }
    }

    pub fn inverse(&self) -> GroupElement {
        let a = &self.coords;
        let coords: Coords = match self.group {
            GroupId::IntegerLattice(_) => a.iter().map(|&x| neg(x)).collect(),
            GroupId::Heisenberg => {
                smallvec::smallvec![neg(a[0]), neg(a[1]), add(neg(a[2]), mul(a[1], a[0]))]
            }
            GroupId::Unipotent(d) => {
                // Solve the product formula with c = 0, level by level.
                let mut b: Coords = smallvec::smallvec![0; a.len()];
                for k in 1..=d {
                    for i in 1..=d - k + 1 {
                        let mut v = neg(a[unipotent_index(d, k, i)]);
                        for j in 1..k {
                            let left = a[unipotent_index(d, k - j, i)];
                            let right = b[unipotent_index(d, j, i + k - j)];
                            v = add(v, neg(mul(left, right)));
                        }
                        b[unipotent_index(d, k, i)] = v;
                    }
                }
                b
            }
        };
        GroupElement { group: self.group, coords }
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> GroupElement {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = GroupElement::identity(self.group);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Conjugate `f · self · f⁻¹`.
    pub fn conjugate_by(&self, f: &GroupElement) -> GroupElement {
        f.mul(self).mul(&f.inverse())
    }

    pub fn to_matrix(&self) -> Result<IntMatrix> {
        let size = self
            .group
            .matrix_size()
            .ok_or_else(|| Error::invalid(format!("{} has no matrix form", self.group)))?;
        let mut m: IntMatrix = (0..size)
            .map(|r| (0..size).map(|c| i64::from(r == c)).collect())
            .collect();
        match self.group {
            GroupId::Heisenberg => {
                let [n3, n2, n1] = [self.coords[0], self.coords[1], self.coords[2]];
                m[0][1] = n2;
                m[0][2] = n1;
                m[1][2] = n3;
            }
            GroupId::Unipotent(d) => {
                for k in 1..=d {
                    for i in 1..=d - k + 1 {
                        m[i - 1][i - 1 + k] = self.coords[unipotent_index(d, k, i)];
                    }
                }
            }
            GroupId::IntegerLattice(_) => unreachable!(),
        }
        Ok(m)
    }

    pub fn from_matrix(group: GroupId, m: &[Vec<i64>]) -> Result<GroupElement> {
        let size = group
            .matrix_size()
            .ok_or_else(|| Error::invalid(format!("{group} has no matrix form")))?;
        if m.len() != size || m.iter().any(|row| row.len() != size) {
            return Err(Error::invalid(format!("expected a {size}×{size} matrix")));
        }
        for (r, row) in m.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let ok = match r.cmp(&c) {
                    std::cmp::Ordering::Equal => v == 1,
                    std::cmp::Ordering::Greater => v == 0,
                    std::cmp::Ordering::Less => true,
                };
                if !ok {
                    return Err(Error::invalid(format!(
                        "matrix is not unit upper triangular at ({r},{c})"
                    )));
                }
            }
        }
        let coords: Coords = match group {
            GroupId::Heisenberg => smallvec::smallvec![m[1][2], m[0][1], m[0][2]],
            GroupId::Unipotent(d) => {
                let mut c: Coords = smallvec::smallvec![0; group.rank()];
                for k in 1..=d {
                    for i in 1..=d - k + 1 {
                        c[unipotent_index(d, k, i)] = m[i - 1][i - 1 + k];
                    }
                }
                c
            }
            GroupId::IntegerLattice(_) => unreachable!(),
        };
        Ok(GroupElement { group, coords })
    }

    /// Index of the smallest box containing the element.
    pub fn box_level(&self) -> u64 {
        self.group
            .weights()
            .iter()
            .zip(&self.coords)
            .map(|(&w, &c)| ceil_root(c.unsigned_abs(), w))
            .max()
            .unwrap_or(0)
    }

    /// Position of the element in the canonical enumeration of the group:
    /// elements of `box(n)` come before those of `box(n+1) ∖ box(n)`, and
    /// ties are broken lexicographically on the coordinates.
    pub fn enumeration_index(&self) -> u128 {
        let level = self.box_level();
        if level == 0 {
            return 0;
        }
        let before = self.group.box_size(level - 1);
        let rank = count_lex_less(&box_ranges(self.group, level), &self.coords)
            - count_lex_less(&box_ranges(self.group, level - 1), &self.coords);
        before + rank
    }

    /// Standard generator by name: `e1..ed` for ℤ^d, `T1`, `T2`, `T3` for
    /// the Heisenberg group and `T<i>,<j>` (i < j) for U_{d+1}(ℤ).
    pub fn generator(group: GroupId, name: &str) -> Result<GroupElement> {
        let bad = || Error::Parse(format!("unknown generator {name:?} for {group}"));
        let mut g = GroupElement::identity(group);
        match group {
            GroupId::IntegerLattice(d) => {
                let i: usize = name.strip_prefix('e').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if i == 0 || i > d {
                    return Err(bad());
                }
                g.coords[i - 1] = 1;
            }
            GroupId::Heisenberg => {
                let slot = match name {
                    "T3" => 0,
                    "T2" => 1,
                    "T1" => 2,
                    _ => return Err(bad()),
                };
                g.coords[slot] = 1;
            }
            GroupId::Unipotent(d) => {
                let (i, j) = name
                    .strip_prefix('T')
                    .and_then(|rest| rest.split_once(','))
                    .ok_or_else(bad)?;
                let i: usize = i.trim().parse().map_err(|_| bad())?;
                let j: usize = j.trim().parse().map_err(|_| bad())?;
                if i == 0 || i >= j || j > d + 1 {
                    return Err(bad());
                }
                g.coords[unipotent_index(d, j - i, i)] = 1;
            }
        }
        Ok(g)
    }

    /// Parses either a generator name (see [`GroupElement::generator`]) or a
    /// comma-separated list of canonical coordinates.
    pub fn parse(group: GroupId, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        if text.starts_with('T') || text.starts_with('e') {
            return GroupElement::generator(group, text);
        }
        if text == "id" || text == "identity" {
            return Ok(GroupElement::identity(group));
        }
        let coords = text
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("bad coordinates {text:?}: {e}")))?;
        GroupElement::new(group, &coords)
    }
}

/// Named standard generating set of the group.
pub fn standard_generators(group: GroupId) -> Vec<(String, GroupElement)> {
    let names: Vec<String> = match group {
        GroupId::IntegerLattice(d) => (1..=d).map(|i| format!("e{i}")).collect(),
        GroupId::Heisenberg => vec!["T1".into(), "T2".into(), "T3".into()],
        GroupId::Unipotent(d) => (1..=d + 1)
            .flat_map(|i| (i + 1..=d + 1).map(move |j| format!("T{i},{j}")))
            .collect(),
    };
    names
        .into_iter()
        .map(|n| {
            let g = GroupElement::generator(group, &n).expect("standard generator name");
            (n, g)
        })
        .collect()
}

/// Coordinates of a Heisenberg element viewed in `Unipotent(2)`.
pub fn heisenberg_to_unipotent(g: &GroupElement) -> Result<GroupElement> {
    ensure_same_group(GroupId::Heisenberg, g.group)?;
    let [n3, n2, n1] = [g.coords[0], g.coords[1], g.coords[2]];
    GroupElement::new(GroupId::Unipotent(2), &[n2, n3, n1])
}

pub fn unipotent_to_heisenberg(g: &GroupElement) -> Result<GroupElement> {
    ensure_same_group(GroupId::Unipotent(2), g.group)?;
    let [a11, a21, a12] = [g.coords[0], g.coords[1], g.coords[2]];
    GroupElement::new(GroupId::Heisenberg, &[a21, a11, a12])
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    group: GroupId,
    coords: Vec<i64>,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr { group: self.group, coords: self.coords.to_vec() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        GroupElement::new(repr.group, &repr.coords).map_err(serde::de::Error::custom)
    }
}

/// Smallest `r ≥ 0` with `r^k ≥ x`.
pub(crate) fn ceil_root(x: u64, k: u32) -> u64 {
    if x == 0 {
        return 0;
    }
    if k == 1 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / k as f64).round() as u64;
    let pow_ge = |r: u64| r.checked_pow(k).is_none_or(|p| p >= x);
    while r > 0 && pow_ge(r - 1) {
        r -= 1;
    }
    while !pow_ge(r) {
        r += 1;
    }
    r
}

/// Number of points of `∏ ranges` lexicographically below `coords`.
fn count_lex_less(ranges: &[(i64, i64)], coords: &[i64]) -> u128 {
    let widths: Vec<u128> = ranges.iter().map(|(lo, hi)| (hi - lo + 1) as u128).collect();
    let mut total = 0u128;
    for (p, (&(lo, hi), &c)) in ranges.iter().zip(coords).enumerate() {
        let below = (c.clamp(lo, hi + 1) - lo) as u128;
        total += below * widths[p + 1..].iter().product::<u128>();
        if c < lo || c > hi {
            break;
        }
    }
    total
}

pub(crate) fn box_ranges(group: GroupId, n: u64) -> Vec<(i64, i64)> {
    group
        .weights()
        .iter()
        .map(|&w| {
            let r = i64::try_from(n)
                .ok()
                .and_then(|n| n.checked_pow(w))
                .expect("box radius overflow");
            (-r, r)
        })
        .collect()
}

/// Lexicographic odometer over a product of closed integer ranges.
pub(crate) struct RangeProduct<'a> {
    ranges: &'a [(i64, i64)],
    next: Option<Coords>,
}

impl<'a> RangeProduct<'a> {
    pub(crate) fn new(ranges: &'a [(i64, i64)]) -> Self {
        let next = if ranges.iter().all(|(lo, hi)| lo <= hi) {
            Some(ranges.iter().map(|&(lo, _)| lo).collect())
        } else {
            None
        };
        RangeProduct { ranges, next }
    }
}

impl Iterator for RangeProduct<'_> {
    type Item = Coords;

    fn next(&mut self) -> Option<Coords> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = self.ranges.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if succ[pos] < self.ranges[pos].1 {
                succ[pos] += 1;
                self.next = Some(succ);
                break;
            }
            succ[pos] = self.ranges[pos].0;
        }
        Some(current)
    }
}

/// All group elements whose coordinates lie in the given ranges, in
/// lexicographic order.
pub(crate) fn elements_in_ranges(group: GroupId, ranges: &[(i64, i64)]) -> Vec<GroupElement> {
    RangeProduct::new(ranges)
        .map(|c| GroupElement::from_coords(group, c))
        .collect()
}

fn canonical_key(g: &GroupElement) -> (u64, &[i64]) {
    (g.box_level(), g.coords())
}

/// A finite subset of a group, kept in canonical enumeration order.
#[derive(Clone, Debug)]
pub struct FiniteWindow {
    group: GroupId,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
}

impl PartialEq for FiniteWindow {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.elements == other.elements
    }
}

impl Eq for FiniteWindow {}

impl FiniteWindow {
    /// Builds a window from arbitrary elements; they are sorted into
    /// canonical order. Duplicates and foreign elements are rejected.
    pub fn from_elements(
        group: GroupId,
        elements: impl IntoIterator<Item = GroupElement>,
    ) -> Result<Self> {
        let mut elements: Vec<GroupElement> = elements.into_iter().collect();
        for g in &elements {
            ensure_same_group(group, g.group)?;
        }
        elements.sort_by(|a, b| canonical_key(a).cmp(&canonical_key(b)));
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate window element {}", w[0])));
        }
        Ok(Self::from_sorted(group, elements))
    }

    fn from_sorted(group: GroupId, elements: Vec<GroupElement>) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        FiniteWindow { group, elements, index }
    }

    pub fn empty(group: GroupId) -> Self {
        Self::from_sorted(group, Vec::new())
    }

    pub fn singleton(g: GroupElement) -> Self {
        Self::from_sorted(g.group, vec![g])
    }

    /// Axis-parallel box `∏ [lo_i, hi_i]` in ℤ^d.
    pub fn lattice_rectangle(group: GroupId, lo: &[i64], hi: &[i64]) -> Result<Self> {
        let GroupId::IntegerLattice(d) = group else {
            return Err(Error::invalid("rectangles are defined for ℤ^d only"));
        };
        if lo.len() != d || hi.len() != d {
            return Err(Error::invalid("rectangle bounds have the wrong dimension"));
        }
        let ranges: Vec<(i64, i64)> = lo.iter().copied().zip(hi.iter().copied()).collect();
        Self::from_elements(group, elements_in_ranges(group, &ranges))
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elements.iter()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn is_subset_of(&self, other: &FiniteWindow) -> bool {
        self.group == other.group && self.elements.iter().all(|g| other.contains(g))
    }

    /// Left translate `gF`.
    pub fn left_translate(&self, g: &GroupElement) -> Result<FiniteWindow> {
        ensure_same_group(self.group, g.group)?;
        FiniteWindow::from_elements(self.group, self.elements.iter().map(|f| g.mul(f)))
    }

    /// Bounding box of each coordinate, `None` for an empty window.
    pub fn coordinate_bounds(&self) -> Option<Vec<(i64, i64)>> {
        let first = self.elements.first()?;
        let mut bounds: Vec<(i64, i64)> = first.coords().iter().map(|&c| (c, c)).collect();
        for g in &self.elements[1..] {
            for (b, &c) in bounds.iter_mut().zip(g.coords()) {
                b.0 = b.0.min(c);
                b.1 = b.1.max(c);
            }
        }
        Some(bounds)
    }

    /// Whether the window is exactly the product of its coordinate ranges.
    pub fn is_full_rectangle(&self) -> bool {
        match self.coordinate_bounds() {
            None => false,
            Some(b) => {
                let volume: u128 = b.iter().map(|(lo, hi)| (hi - lo + 1) as u128).product();
                volume == self.len() as u128
            }
        }
    }
}

impl<'a> IntoIterator for &'a FiniteWindow {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl Serialize for FiniteWindow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            group: GroupId,
            elements: Vec<&'a [i64]>,
        }
        Repr { group: self.group, elements: self.elements.iter().map(|g| g.coords()).collect() }
            .serialize(serializer)
    }
}

/// The canonical box of radius `n`: `|n_i| ≤ n` on ℤ^d, `|n₃|,|n₂| ≤ n`
/// and `|n₁| ≤ n²` on the Heisenberg group, `|a_i^k| ≤ n^k` on U_{d+1}(ℤ).
/// Listed by smallest containing box, then lexicographically.
pub fn enumerate_box(group: GroupId, n: u64) -> FiniteWindow {
    let ranges = box_ranges(group, n);
    let mut elements = elements_in_ranges(group, &ranges);
    elements.sort_by_cached_key(|g| g.box_level());
    FiniteWindow::from_sorted(group, elements)
}
