//! The interlacing graph on `[W]^k`.
//!
//! Two vertices interlace when one chain `m_1 <= n_1 <= m_2 <= ... <= m_k <= n_k`
//! (or the mirrored one) holds and they differ. The graph distance has a closed
//! form through the discrepancy function `x -> m(x) - n(x)`, where `m(x)`
//! counts the entries of `m` that are at most `x`; [`bfs_distance`] is the
//! independent search that the closed form is checked against.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{ComboIndex, KSubset, Window};
use crate::error::{Error, Result};

fn same_size(m: &KSubset, n: &KSubset) -> Result<()> {
    if m.k() != n.k() {
        return Err(Error::contract(format!(
            "vertices of different sizes: {} vs {}",
            m.k(),
            n.k()
        )));
    }
    Ok(())
}

/// Weak chain `a_1 <= b_1 <= a_2 <= ... <= a_k <= b_k`.
fn weak_chain(a: &[u32], b: &[u32]) -> bool {
    (0..a.len()).all(|i| a[i] <= b[i] && (i + 1 == a.len() || b[i] <= a[i + 1]))
}

/// Strong chain `a_1 <= b_1 < a_2 <= b_2 < ... < a_k <= b_k`.
fn strong_chain(a: &[u32], b: &[u32]) -> bool {
    (0..a.len()).all(|i| a[i] <= b[i] && (i + 1 == a.len() || b[i] < a[i + 1]))
}

pub(crate) fn interlaces_raw(m: &[u32], n: &[u32]) -> bool {
    m != n && (weak_chain(m, n) || weak_chain(n, m))
}

pub fn interlaces(m: &KSubset, n: &KSubset) -> Result<bool> {
    same_size(m, n)?;
    Ok(interlaces_raw(m.as_slice(), n.as_slice()))
}

/// The strong chains only; equal vertices satisfy them.
pub fn strongly_interlaces(m: &KSubset, n: &KSubset) -> Result<bool> {
    same_size(m, n)?;
    let (a, b) = (m.as_slice(), n.as_slice());
    Ok(strong_chain(a, b) || strong_chain(b, a))
}

/// Breakpoints of `x -> m(x) - n(x)` together with its extremes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyProfile {
    /// `(x, m(x) - n(x))` at every entry `x` of `m` or `n`, increasing in `x`.
    /// The function is constant between breakpoints and 0 outside them.
    pub values: Vec<(u32, i32)>,
    pub max: i32,
    pub min: i32,
}

impl DiscrepancyProfile {
    pub fn range(&self) -> u32 {
        (self.max - self.min) as u32
    }

    /// `max |m(x) - n(x)|`.
    pub fn abs_max(&self) -> u32 {
        self.max.max(-self.min) as u32
    }
}

/// (max, min) of the discrepancy, both including the value 0 taken below
/// and above the supports.
pub(crate) fn discrepancy_extremes(m: &[u32], n: &[u32]) -> (i32, i32) {
    let (mut i, mut j) = (0, 0);
    let (mut cur, mut hi, mut lo) = (0i32, 0i32, 0i32);
    while i < m.len() || j < n.len() {
        let x = match (m.get(i), n.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < m.len() && m[i] == x {
            cur += 1;
            i += 1;
        }
        while j < n.len() && n[j] == x {
            cur -= 1;
            j += 1;
        }
        hi = hi.max(cur);
        lo = lo.min(cur);
    }
    (hi, lo)
}

pub fn discrepancy_profile(m: &KSubset, n: &KSubset) -> Result<DiscrepancyProfile> {
    same_size(m, n)?;
    let mut xs: Vec<u32> = m.as_slice().iter().chain(n.as_slice()).copied().collect();
    xs.sort_unstable();
    xs.dedup();
    let count = |s: &[u32], x: u32| s.partition_point(|&e| e <= x) as i32;
    let values: Vec<(u32, i32)> = xs
        .iter()
        .map(|&x| (x, count(m.as_slice(), x) - count(n.as_slice(), x)))
        .collect();
    let max = values.iter().map(|v| v.1).max().unwrap_or(0).max(0);
    let min = values.iter().map(|v| v.1).min().unwrap_or(0).min(0);
    Ok(DiscrepancyProfile { values, max, min })
}

pub(crate) fn discrepancy_distance_raw(m: &[u32], n: &[u32]) -> u32 {
    let (hi, lo) = discrepancy_extremes(m, n);
    (hi - lo) as u32
}

/// Closed-form interlacing distance: range of the discrepancy function.
pub fn discrepancy_distance(m: &KSubset, n: &KSubset) -> Result<u32> {
    same_size(m, n)?;
    Ok(discrepancy_distance_raw(m.as_slice(), n.as_slice()))
}

/// Distance `k` characterization: one vertex sits strictly inside a gap of the
/// other (the outer gaps included).
pub fn is_diametral(m: &KSubset, n: &KSubset) -> Result<bool> {
    same_size(m, n)?;
    Ok(inside_gap(m.as_slice(), n.as_slice()) || inside_gap(n.as_slice(), m.as_slice()))
}

fn inside_gap(m: &[u32], n: &[u32]) -> bool {
    let k = n.len();
    let (first, last) = (m[0], m[k - 1]);
    // gap j lies between n_j and n_{j+1}, with n_0 = 0 and n_{k+1} = infinity
    (0..=k).any(|j| {
        let below = if j == 0 { 0 } else { n[j - 1] };
        let above_ok = j == k || last < n[j];
        below < first && above_ok
    })
}

/// Calls `visit` with the position tuple of every interlacing neighbour of
/// `m` (itself a position tuple) inside a window of `window_len` positions.
pub(crate) fn for_each_neighbor(window_len: usize, m: &[usize], mut visit: impl FnMut(&[usize])) {
    let k = m.len();
    let mut buf = vec![0usize; k];
    // n above m: n_i in [m_i, m_{i+1}]
    fill(
        &mut buf,
        0,
        None,
        &|i| (m[i], if i + 1 < k { m[i + 1] } else { window_len - 1 }),
        m,
        &mut visit,
    );
    // n below m: n_i in [m_{i-1}, m_i]
    fill(
        &mut buf,
        0,
        None,
        &|i| (if i == 0 { 0 } else { m[i - 1] }, m[i]),
        m,
        &mut visit,
    );
}

fn fill(
    buf: &mut [usize],
    i: usize,
    prev: Option<usize>,
    bounds: &dyn Fn(usize) -> (usize, usize),
    m: &[usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    if i == buf.len() {
        if buf != m {
            visit(buf);
        }
        return;
    }
    let (lo, hi) = bounds(i);
    let lo = match prev {
        Some(p) => lo.max(p + 1),
        None => lo,
    };
    for v in lo..=hi {
        buf[i] = v;
        fill(buf, i + 1, Some(v), bounds, m, visit);
    }
}

/// All interlacing neighbours of `m` inside `window`.
pub fn neighbors(window: &Window, m: &KSubset) -> Result<Vec<KSubset>> {
    let pos = window
        .positions_of(m.as_slice())
        .ok_or_else(|| Error::contract(format!("{m} is not inside the window")))?;
    let mut out = Vec::new();
    for_each_neighbor(window.len(), &pos, |p| out.push(window.subset_at(p)));
    out.sort();
    Ok(out)
}

/// Breadth-first distances from one vertex of `[window]^k`, indexed by lex
/// rank. `None` marks vertices that were not reached.
pub fn bfs_distances_from(window: &Window, k: usize, source: &KSubset) -> Result<Vec<Option<u32>>> {
    let index = ComboIndex::new(window.len(), k)?;
    let src = window
        .positions_of(source.as_slice())
        .ok_or_else(|| Error::contract(format!("{source} is not inside the window")))?;
    if src.len() != k {
        return Err(Error::contract(format!("{source} is not a {k}-subset")));
    }
    Ok(bfs_from_rank(&index, index.rank(&src), None))
}

fn bfs_from_rank(index: &ComboIndex, source: usize, stop_at: Option<usize>) -> Vec<Option<u32>> {
    let mut dist = vec![None; index.count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(r) = queue.pop_front() {
        if Some(r) == stop_at {
            break;
        }
        let d = dist[r].unwrap();
        let pos = index.unrank(r);
        for_each_neighbor(index.n(), &pos, |nb| {
            let q = index.rank(nb);
            if dist[q].is_none() {
                dist[q] = Some(d + 1);
                queue.push_back(q);
            }
        });
    }
    dist
}

/// Result of a shortest-path search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphDistance {
    Finite(u32),
    Disconnected,
}

/// Shortest path in the interlacing graph restricted to `[window]^k`.
pub fn bfs_distance(window: &Window, k: usize, m: &KSubset, n: &KSubset) -> Result<GraphDistance> {
    if m.k() != k || n.k() != k {
        return Err(Error::contract(format!("vertices must have size {k}")));
    }
    let index = ComboIndex::new(window.len(), k)?;
    let locate = |s: &KSubset| {
        window
            .positions_of(s.as_slice())
            .ok_or_else(|| Error::contract(format!("{s} is not inside the window")))
    };
    let (src, dst) = (index.rank(&locate(m)?), index.rank(&locate(n)?));
    let dist = bfs_from_rank(&index, src, Some(dst));
    Ok(match dist[dst] {
        Some(d) => GraphDistance::Finite(d),
        None => GraphDistance::Disconnected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaCounterexample {
    pub m: KSubset,
    pub n: KSubset,
    pub formula: u32,
    pub bfs: GraphDistance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaCheck {
    pub window: Window,
    pub k: usize,
    pub vertices: usize,
    /// Unordered pairs of distinct vertices compared.
    pub pairs_checked: u64,
    /// First mismatch in lexicographic (source, target) order.
    pub counterexample: Option<FormulaCounterexample>,
}

/// Compares the closed form against BFS for every pair of distinct vertices.
pub fn verify_formula(window: &Window, k: usize) -> Result<FormulaCheck> {
    verify_formula_with(window, k, discrepancy_distance_raw)
}

/// Same as [`verify_formula`] with a caller-supplied candidate formula.
pub fn verify_formula_with<F>(window: &Window, k: usize, formula: F) -> Result<FormulaCheck>
where
    F: Fn(&[u32], &[u32]) -> u32 + Sync,
{
    if k == 0 || k > window.len() {
        return Err(Error::EmptyDomain(format!(
            "no {k}-subsets of a window of size {}",
            window.len()
        )));
    }
    let index = ComboIndex::new(window.len(), k)?;
    let count = index.count();
    let first_bad = (0..count)
        .into_par_iter()
        .map(|s| {
            let dist = bfs_from_rank(&index, s, None);
            let m = window.subset_at(&index.unrank(s));
            (s + 1..count).find_map(|t| {
                let n = window.subset_at(&index.unrank(t));
                let expected = formula(m.as_slice(), n.as_slice());
                let bfs = match dist[t] {
                    Some(d) => GraphDistance::Finite(d),
                    None => GraphDistance::Disconnected,
                };
                (bfs != GraphDistance::Finite(expected)).then(|| FormulaCounterexample {
                    m: m.clone(),
                    n,
                    formula: expected,
                    bfs,
                })
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    Ok(FormulaCheck {
        window: window.clone(),
        k,
        vertices: count,
        pairs_checked: (count as u64) * (count as u64 - 1) / 2,
        counterexample: first_bad,
    })
}

/// Completion `p` making both `(m, p)` and `(n, p)` strongly interlacing, for
/// an interlacing pair with even entries.
pub fn strongly_interlacing_completion(m: &KSubset, n: &KSubset) -> Result<KSubset> {
    same_size(m, n)?;
    if !interlaces_raw(m.as_slice(), n.as_slice()) {
        return Err(Error::contract(format!("{m} and {n} do not interlace")));
    }
    if m.as_slice().iter().chain(n.as_slice()).any(|x| x % 2 != 0) {
        return Err(Error::contract("completion needs even entries"));
    }
    // orient so that the chain starts with `lower`
    let (lower, upper) = if weak_chain(m.as_slice(), n.as_slice()) {
        (m.as_slice(), n.as_slice())
    } else {
        (n.as_slice(), m.as_slice())
    };
    let k = lower.len();
    let p: Vec<u32> = (0..k)
        .map(|i| {
            if i + 1 < k && upper[i] == lower[i + 1] {
                upper[i] - 1
            } else {
                upper[i]
            }
        })
        .collect();
    KSubset::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_ksubsets;

    fn ks(v: &[u32]) -> KSubset {
        KSubset::new(v.to_vec()).unwrap()
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlaces(&ks(&[1, 3]), &ks(&[2, 4])).unwrap());
        assert!(!interlaces(&ks(&[1, 2]), &ks(&[1, 2])).unwrap());
        assert!(!interlaces(&ks(&[1, 4]), &ks(&[2, 3])).unwrap());
        assert!(interlaces(&ks(&[1]), &ks(&[2])).is_ok());
        assert!(interlaces(&ks(&[1]), &ks(&[2, 3])).is_err());
    }

    #[test]
    fn strong_interlacing_examples() {
        assert!(strongly_interlaces(&ks(&[2, 6]), &ks(&[3, 7])).unwrap());
        assert!(!strongly_interlaces(&ks(&[1, 2]), &ks(&[2, 3])).unwrap());
        assert!(strongly_interlaces(&ks(&[4, 8]), &ks(&[4, 8])).unwrap());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(discrepancy_distance(&ks(&[1, 2]), &ks(&[3, 4])).unwrap(), 2);
        assert_eq!(discrepancy_distance(&ks(&[1, 2]), &ks(&[1, 2])).unwrap(), 0);
        assert_eq!(discrepancy_distance(&ks(&[1, 4]), &ks(&[2, 3])).unwrap(), 2);
        assert!(discrepancy_distance(&ks(&[1, 4]), &ks(&[2])).is_err());
    }

    #[test]
    fn profile_matches_extremes() {
        let p = discrepancy_profile(&ks(&[4, 5]), &ks(&[1, 10])).unwrap();
        assert_eq!(p.values, vec![(1, -1), (4, 0), (5, 1), (10, 0)]);
        assert_eq!((p.max, p.min, p.range(), p.abs_max()), (1, -1, 2, 1));
    }

    #[test]
    fn bfs_examples() {
        let d = |w: u32, k, m: &[u32], n: &[u32]| {
            bfs_distance(&Window::range(1, w).unwrap(), k, &ks(m), &ks(n)).unwrap()
        };
        assert_eq!(d(6, 2, &[1, 3], &[2, 4]), GraphDistance::Finite(1));
        assert_eq!(d(8, 2, &[1, 2], &[3, 4]), GraphDistance::Finite(2));
        assert_eq!(d(10, 3, &[1, 2, 3], &[4, 5, 6]), GraphDistance::Finite(3));
        assert_eq!(d(6, 2, &[1, 4], &[2, 3]), GraphDistance::Finite(2));
    }

    #[test]
    fn bfs_rejects_outside_vertices() {
        let w = Window::range(1, 5).unwrap();
        assert!(bfs_distance(&w, 2, &ks(&[1, 9]), &ks(&[1, 2])).is_err());
    }

    #[test]
    fn neighbors_are_exactly_the_interlacing_vertices() {
        let w = Window::range(1, 7).unwrap();
        for k in 1..=3 {
            let all = enumerate_ksubsets(&w, k).unwrap();
            for m in &all {
                let brute: Vec<KSubset> = all
                    .iter()
                    .filter(|n| interlaces(m, n).unwrap())
                    .cloned()
                    .collect();
                assert_eq!(neighbors(&w, m).unwrap(), brute, "neighbours of {m}");
            }
        }
    }

    #[test]
    fn diametral_examples() {
        assert!(is_diametral(&ks(&[4, 5]), &ks(&[1, 10])).unwrap());
        assert!(!is_diametral(&ks(&[1, 3]), &ks(&[2, 4])).unwrap());
        let w = Window::range(1, 8).unwrap();
        let all = enumerate_ksubsets(&w, 3).unwrap();
        for m in &all {
            for n in &all {
                assert_eq!(
                    is_diametral(m, n).unwrap(),
                    discrepancy_distance(m, n).unwrap() == 3,
                    "{m} {n}"
                );
            }
        }
    }

    #[test]
    fn completion_examples() {
        let p = strongly_interlacing_completion(&ks(&[2, 6]), &ks(&[6, 8])).unwrap();
        assert_eq!(p, ks(&[5, 8]));
        let p = strongly_interlacing_completion(&ks(&[2, 6]), &ks(&[4, 8])).unwrap();
        assert_eq!(p, ks(&[4, 8]));
        let p = strongly_interlacing_completion(&ks(&[2]), &ks(&[4])).unwrap();
        assert_eq!(p, ks(&[4]));
        // argument order does not matter
        let p = strongly_interlacing_completion(&ks(&[6, 8]), &ks(&[2, 6])).unwrap();
        assert_eq!(p, ks(&[5, 8]));
        for p in [&ks(&[2, 6]), &ks(&[6, 8])] {
            assert!(strongly_interlaces(p, &ks(&[5, 8])).unwrap());
        }
    }

    #[test]
    fn completion_rejects_bad_input() {
        assert!(strongly_interlacing_completion(&ks(&[2, 8]), &ks(&[4, 6])).is_err());
        assert!(strongly_interlacing_completion(&ks(&[1, 3]), &ks(&[2, 4])).is_err());
        assert!(strongly_interlacing_completion(&ks(&[2, 4]), &ks(&[2, 4])).is_err());
    }

    #[test]
    fn verify_reports_injected_formula_bug() {
        let w = Window::range(1, 6).unwrap();
        let check =
            verify_formula_with(&w, 2, |m, n| discrepancy_distance_raw(m, n).min(1)).unwrap();
        let bad = check.counterexample.expect("a counterexample");
        assert_eq!(bad.m, ks(&[1, 2]));
        assert_eq!(bad.n, ks(&[3, 4]));
        assert_eq!(bad.bfs, GraphDistance::Finite(2));
        assert_eq!(bad.formula, 1);
    }
}
