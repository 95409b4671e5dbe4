//! Følner diagnostics: exact translation defects `|gF Δ F| / |F|` and
//! interior ratios `|{g ∈ F : Kg ⊆ F}| / |F|` over box sequences.

use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{ensure_same_group, Error, Result};
use crate::exec::{self, Strategy};
use crate::group::{enumerate_box, FiniteWindow, GroupElement, GroupId};

pub const DEFAULT_THRESHOLD: f64 = 0.2;

/// The window used as `F_n`: the cube `[0, n]^d` on ℤ^d, the canonical
/// (anisotropic) box of radius `n` on the matrix groups.
pub fn folner_window(group: GroupId, n: u64) -> FiniteWindow {
    match group {
        GroupId::IntegerLattice(d) => {
            FiniteWindow::lattice_rectangle(group, &vec![0; d], &vec![n as i64; d])
                .expect("valid cube")
        }
        _ => enumerate_box(group, n),
    }
}

/// `|gF Δ F| / |F|` as an exact fraction.
pub fn defect(g: &GroupElement, window: &FiniteWindow) -> Result<Ratio<u64>> {
    defect_with(g, window, Strategy::default())
}

pub fn defect_with(g: &GroupElement, window: &FiniteWindow, strategy: Strategy) -> Result<Ratio<u64>> {
    ensure_same_group(window.group(), g.group())?;
    if window.is_empty() {
        return Err(Error::invalid("defect of an empty window"));
    }
    let g_inv = g.inverse();
    let elements = window.elements();
    // gF ∖ F and F ∖ gF
    let leaving = exec::count(strategy, elements, |f| !window.contains(&g.mul(f)));
    let missing = exec::count(strategy, elements, |f| !window.contains(&g_inv.mul(f)));
    Ok(Ratio::new((leaving + missing) as u64, window.len() as u64))
}

/// `|{g ∈ F : Kg ⊆ F}| / |F|` as an exact fraction.
pub fn interior_ratio(k: &FiniteWindow, window: &FiniteWindow) -> Result<Ratio<u64>> {
    interior_ratio_with(k, window, Strategy::default())
}

pub fn interior_ratio_with(
    k: &FiniteWindow,
    window: &FiniteWindow,
    strategy: Strategy,
) -> Result<Ratio<u64>> {
    ensure_same_group(window.group(), k.group())?;
    if window.is_empty() {
        return Err(Error::invalid("interior ratio of an empty window"));
    }
    let inside = exec::count(strategy, window.elements(), |g| {
        k.iter().all(|kk| window.contains(&kk.mul(g)))
    });
    Ok(Ratio::new(inside as u64, window.len() as u64))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectPoint {
    pub n: u64,
    pub window_size: u64,
    pub numerator: u64,
    pub denominator: u64,
    pub value: f64,
}

impl DefectPoint {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FolnerDefectSeries {
    pub group: GroupId,
    pub translator: GroupElement,
    pub threshold: f64,
    pub values: Vec<DefectPoint>,
    /// Every step strictly decreases the defect.
    pub strictly_decreasing: bool,
    /// Final defect is below both the first one and the threshold, or the
    /// whole series is zero.
    pub passed: bool,
}

impl FolnerDefectSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,numerator,denominator,float_value\n");
        for p in &self.values {
            let _ = writeln!(out, "{},{},{},{}", p.n, p.numerator, p.denominator, p.value);
        }
        out
    }
}

/// Defects of `g` over `F_n` for `n_lo ≤ n ≤ n_hi`.
pub fn defect_trend(
    group: GroupId,
    g: &GroupElement,
    n_lo: u64,
    n_hi: u64,
    threshold: f64,
) -> Result<FolnerDefectSeries> {
    defect_trend_with(group, g, n_lo, n_hi, threshold, Strategy::default())
}

pub fn defect_trend_with(
    group: GroupId,
    g: &GroupElement,
    n_lo: u64,
    n_hi: u64,
    threshold: f64,
    strategy: Strategy,
) -> Result<FolnerDefectSeries> {
    ensure_same_group(group, g.group())?;
    if n_lo < 1 || n_lo >= n_hi {
        return Err(Error::invalid("need 1 ≤ n_lo < n_hi"));
    }
    let ns: Vec<u64> = (n_lo..=n_hi).collect();
    let values = exec::map(strategy, &ns, |&n| {
        let window = folner_window(group, n);
        let r = defect_with(g, &window, strategy).expect("nonempty window of the right group");
        DefectPoint {
            n,
            window_size: window.len() as u64,
            numerator: *r.numer(),
            denominator: *r.denom(),
            value: r.to_f64().unwrap_or(f64::NAN),
        }
    });
    let strictly_decreasing = values.windows(2).all(|w| w[1].ratio() < w[0].ratio());
    let first = values.first().expect("nonempty range");
    let last = values.last().expect("nonempty range");
    let all_zero = values.iter().all(|p| p.numerator == 0);
    let passed = all_zero || (last.ratio() < first.ratio() && last.value < threshold);
    Ok(FolnerDefectSeries {
        group,
        translator: g.clone(),
        threshold,
        values,
        strictly_decreasing,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(d: usize) -> GroupId {
        GroupId::IntegerLattice(d)
    }

    #[test]
    fn lattice_defect_closed_form() {
        let g = GroupElement::new(z(2), &[1, 0]).unwrap();
        assert_eq!(defect(&g, &folner_window(z(2), 9)).unwrap(), Ratio::new(1, 5));
        let g = GroupElement::new(z(1), &[1]).unwrap();
        for n in 1..15 {
            assert_eq!(defect(&g, &folner_window(z(1), n)).unwrap(), Ratio::new(2, n + 1));
        }
    }

    #[test]
    fn identity_has_zero_defect() {
        for g in [z(2), GroupId::Heisenberg, GroupId::Unipotent(3)] {
            let e = GroupElement::identity(g);
            assert_eq!(defect(&e, &folner_window(g, 2)).unwrap(), Ratio::new(0, 1));
        }
    }

    #[test]
    fn empty_window_rejected() {
        let e = GroupElement::identity(z(1));
        assert!(defect(&e, &FiniteWindow::empty(z(1))).is_err());
        assert!(interior_ratio(&FiniteWindow::singleton(e), &FiniteWindow::empty(z(1))).is_err());
    }

    #[test]
    fn interior_examples() {
        let k = FiniteWindow::from_elements(
            z(1),
            [0, 1].map(|c| GroupElement::new(z(1), &[c]).unwrap()),
        )
        .unwrap();
        assert_eq!(interior_ratio(&k, &folner_window(z(1), 9)).unwrap(), Ratio::new(9, 10));
        let e = FiniteWindow::singleton(GroupElement::identity(GroupId::Heisenberg));
        assert_eq!(
            interior_ratio(&e, &folner_window(GroupId::Heisenberg, 2)).unwrap(),
            Ratio::new(1, 1)
        );
    }

    #[test]
    fn csv_has_header() {
        let g = GroupElement::new(z(1), &[1]).unwrap();
        let s = defect_trend(z(1), &g, 1, 3, DEFAULT_THRESHOLD).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("n,numerator,denominator,float_value\n1,1,1,1\n"));
        assert!(defect_trend(z(1), &g, 3, 3, 0.2).is_err());
    }

    #[test]
    fn identity_series_passes() {
        let e = GroupElement::identity(GroupId::Heisenberg);
        let s = defect_trend(GroupId::Heisenberg, &e, 1, 3, DEFAULT_THRESHOLD).unwrap();
        assert!(s.passed && !s.strictly_decreasing);
        assert!(s.values.iter().all(|p| p.value == 0.0));
    }
}
