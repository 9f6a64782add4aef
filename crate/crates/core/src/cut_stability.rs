//! Cut ratios: how far the smallest `f`/`g` distance along one cut can sit
//! below the largest along another, on a finite window.
//!
//! A finite `L` only yields witness values. The infimum over an infinite
//! `[L]^k` can be smaller and the supremum larger, so a ratio computed here
//! illustrates a stability constant but never certifies one.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{Combinations, Cut, OrderPreservingPermutation, Window};
use crate::concentration::Ratio;
use crate::error::{Error, Result};
use crate::spaces::PointMap;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutRatioReport {
    /// `min` over `[L]^k` of `d(f(n_P), g(n_{P^c}))`.
    pub inf_value: f64,
    /// `max` over `[L]^k` of `d(f(n_Q), g(n_{Q^c}))`.
    pub sup_value: f64,
    /// `inf_value / sup_value`; 1 when both vanish.
    pub ratio: Ratio,
    #[serde(rename = "P")]
    pub p: Cut,
    #[serde(rename = "Q")]
    pub q: Cut,
    #[serde(rename = "L")]
    pub l: Window,
}

impl CutRatioReport {
    fn new(inf_value: f64, sup_value: f64, p: Cut, q: Cut, l: Window) -> Self {
        let ratio = if sup_value > 0.0 {
            Ratio::Finite(inf_value / sup_value)
        } else if inf_value > 0.0 {
            Ratio::Infinite
        } else {
            Ratio::Finite(1.0)
        };
        CutRatioReport {
            inf_value,
            sup_value,
            ratio,
            p,
            q,
            l,
        }
    }
}

fn check_pair(f: &PointMap, g: &PointMap, k: usize, l_win: &Window) -> Result<()> {
    if f.target() != g.target() {
        return Err(Error::contract("f and g map into different spaces"));
    }
    if f.k() + g.k() != k {
        return Err(Error::contract(format!(
            "f on [W]^{} and g on [W]^{} do not fit k = {k}",
            f.k(),
            g.k()
        )));
    }
    if f.k() == 0 || g.k() == 0 {
        return Err(Error::contract("stability needs 0 < l < k"));
    }
    if !l_win.is_subset_of(f.window()) || !l_win.is_subset_of(g.window()) {
        return Err(Error::contract(format!(
            "{l_win} is not inside the domains of f and g"
        )));
    }
    if l_win.len() < k {
        return Err(Error::EmptyDomain(format!("[{l_win}]^{k} is empty")));
    }
    Ok(())
}

/// `(min, max)` over `[L]^k` of `d(f(n_{i_1..i_l}), g(n_{rest}))` for the two
/// position selectors.
fn extremes(
    f: &PointMap,
    g: &PointMap,
    l_win: &Window,
    k: usize,
    inf_split: &[usize],
    sup_split: &[usize],
) -> (f64, f64) {
    let entries = l_win.as_slice();
    let combos: Vec<Vec<usize>> = Combinations::new(entries.len(), k).collect();
    let l = f.k();
    let eval = |n: &[u32], order: &[usize]| {
        let left: Vec<u32> = order[..l].iter().map(|&i| n[i - 1]).collect();
        let right: Vec<u32> = order[l..].iter().map(|&i| n[i - 1]).collect();
        let a = f.rank_of(&left).expect("sub-tuple of L lies in f's domain");
        let b = g
            .rank_of(&right)
            .expect("sub-tuple of L lies in g's domain");
        f.target().metric(f.image_at(a), g.image_at(b))
    };
    combos
        .par_iter()
        .map(|c| {
            let n: Vec<u32> = c.iter().map(|&i| entries[i]).collect();
            (eval(&n, inf_split), eval(&n, sup_split))
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| (a.0.min(b.0), a.1.max(b.1)))
}

/// Position order `P` followed by `P^c`.
fn cut_order(cut: &Cut) -> Vec<usize> {
    let mut order = cut.members().to_vec();
    order.extend(cut.complement());
    order
}

pub fn cut_ratio(
    f: &PointMap,
    g: &PointMap,
    p: &Cut,
    q: &Cut,
    l_win: &Window,
) -> Result<CutRatioReport> {
    if p.k() != q.k() || p.l() != q.l() {
        return Err(Error::contract("cuts P and Q differ in shape"));
    }
    if !p.is_proper() {
        return Err(Error::contract("stability needs 0 < l < k"));
    }
    if f.k() != p.l() {
        return Err(Error::contract(format!(
            "f is defined on {}-subsets but the cut has size {}",
            f.k(),
            p.l()
        )));
    }
    check_pair(f, g, p.k(), l_win)?;
    let (inf_value, sup_value) = extremes(f, g, l_win, p.k(), &cut_order(p), &cut_order(q));
    Ok(CutRatioReport::new(
        inf_value,
        sup_value,
        p.clone(),
        q.clone(),
        l_win.clone(),
    ))
}

/// Permutation form: inf over `(n_1..n_l | n_{l+1}..n_k)` against sup over
/// `(n_{pi(1)}..n_{pi(l)} | n_{pi(l+1)}..n_{pi(k)})`.
pub fn upper_stability_ratio(
    f: &PointMap,
    g: &PointMap,
    pi: &OrderPreservingPermutation,
    l_win: &Window,
) -> Result<CutRatioReport> {
    if pi.l() == 0 || pi.l() == pi.k() {
        return Err(Error::contract("stability needs 0 < l < k"));
    }
    if f.k() != pi.l() {
        return Err(Error::contract(format!(
            "f is defined on {}-subsets but the permutation splits at {}",
            f.k(),
            pi.l()
        )));
    }
    check_pair(f, g, pi.k(), l_win)?;
    let identity: Vec<usize> = (1..=pi.k()).collect();
    let (inf_value, sup_value) = extremes(f, g, l_win, pi.k(), &identity, pi.images());
    let p = Cut::trivial(pi.k(), pi.l())?;
    let q = Cut::new(pi.k(), pi.images()[..pi.l()].to_vec())?;
    Ok(CutRatioReport::new(
        inf_value,
        sup_value,
        p,
        q,
        l_win.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::permutation_to_cut;
    use crate::spaces::{Point, Space};

    fn w(lo: u32, hi: u32) -> Window {
        Window::range(lo, hi).unwrap()
    }

    fn summing(k: usize, hi: u32) -> PointMap {
        PointMap::summing(w(1, hi), k, Space::sup(hi as usize).unwrap()).unwrap()
    }

    #[test]
    fn summing_instance() {
        let (f, g) = (summing(2, 12), summing(2, 12));
        let p = Cut::new(4, vec![1, 2]).unwrap();
        let q = Cut::new(4, vec![1, 3]).unwrap();
        let r = cut_ratio(&f, &g, &p, &q, &w(1, 12)).unwrap();
        assert_eq!(
            (r.inf_value, r.sup_value, r.ratio),
            (2.0, 1.0, Ratio::Finite(2.0))
        );

        let pi = OrderPreservingPermutation::new(2, vec![1, 3, 2, 4]).unwrap();
        let r = upper_stability_ratio(&f, &g, &pi, &w(1, 12)).unwrap();
        assert_eq!(r.ratio, Ratio::Finite(2.0));
        assert_eq!(r.q, permutation_to_cut(&pi));
    }

    #[test]
    fn disjoint_maps_have_ratio_one() {
        let space = Space::lp(2.0, 8).unwrap();
        let f = PointMap::disjoint(w(1, 8), 2, space.clone()).unwrap();
        let g = PointMap::disjoint(w(1, 8), 2, space).unwrap();
        for p in Cut::all(4, 2) {
            for q in Cut::all(4, 2) {
                let r = cut_ratio(&f, &g, &p, &q, &w(1, 8)).unwrap();
                assert_eq!(r.inf_value, 2.0);
                assert_eq!(r.ratio, Ratio::Finite(1.0));
            }
        }
    }

    #[test]
    fn equal_cuts_never_exceed_one() {
        let f = summing(1, 9);
        let g = summing(2, 9);
        for p in Cut::all(3, 1) {
            let r = cut_ratio(&f, &g, &p, &p, &w(1, 9)).unwrap();
            assert!(r.ratio.value() <= 1.0);
        }
    }

    #[test]
    fn degenerate_zero_over_zero_is_one() {
        let c = Point::Vector(vec![1.0]);
        let f = PointMap::constant(w(1, 6), 1, Space::sup(1).unwrap(), c.clone()).unwrap();
        let g = PointMap::constant(w(1, 6), 2, Space::sup(1).unwrap(), c).unwrap();
        let pi = OrderPreservingPermutation::new(1, vec![2, 1, 3]).unwrap();
        let r = upper_stability_ratio(&f, &g, &pi, &w(1, 6)).unwrap();
        assert_eq!(
            (r.inf_value, r.sup_value, r.ratio),
            (0.0, 0.0, Ratio::Finite(1.0))
        );
    }

    #[test]
    fn infinite_ratio_is_flagged() {
        let p = Cut::new(2, vec![1]).unwrap();
        let r = CutRatioReport::new(2.0, 0.0, p.clone(), p, w(1, 6));
        assert!(r.ratio.is_infinite());
    }

    #[test]
    fn contract_errors() {
        let f = summing(2, 8);
        let g = summing(2, 8);
        let p = Cut::new(4, vec![1, 2]).unwrap();
        let q3 = Cut::new(4, vec![1, 2, 3]).unwrap();
        assert!(cut_ratio(&f, &g, &p, &q3, &w(1, 8)).is_err());
        assert!(cut_ratio(&f, &g, &p, &p, &w(1, 9)).is_err());
        assert!(cut_ratio(&f, &g, &p, &p, &w(1, 3)).is_err());
        let other = PointMap::summing(w(1, 8), 2, Space::sup(9).unwrap()).unwrap();
        assert!(cut_ratio(&f, &other, &p, &p, &w(1, 8)).is_err());
        let g3 = summing(3, 8);
        assert!(cut_ratio(&f, &g3, &p, &p, &w(1, 8)).is_err());
    }
}
