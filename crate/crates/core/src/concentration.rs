//! Concentration of maps on interlacing graphs.
//!
//! The quantities here are finite stand-ins for the property Q constant:
//! the Lipschitz constant on interlacing pairs, the oscillation of a map over
//! `[L]^k` for a subwindow `L`, and the best such oscillation over all
//! subwindows of a given size. Also the continuity and compression moduli,
//! the bound they give on the concentration modulus of a domain, and the
//! rescaling that moves a map into the unit ball.

use std::fmt;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::combinatorics::{binomial, Combinations, KSubset, Window};
use crate::error::{Error, Result};
use crate::interlacing::{discrepancy_distance_raw, for_each_neighbor};
use crate::spaces::{MapRule, Point, PointMap, Space};
use crate::DEFAULT_STATE_CAP;

/// Which pairs of `[L]^k` an oscillation ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    /// Every pair of vertices.
    #[default]
    AllPairs,
    /// Only block-separated pairs `m < n` (`max m < min n`).
    SeparatedPairs,
}

impl fmt::Display for PairMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairMode::AllPairs => "all_pairs",
            PairMode::SeparatedPairs => "separated_pairs",
        })
    }
}

/// Subwindow search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Strategy {
    Exhaustive,
    Greedy,
    Anneal { seed: u64 },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Exhaustive => f.write_str("exhaustive"),
            Strategy::Greedy => f.write_str("greedy"),
            Strategy::Anneal { seed } => write!(f, "anneal({seed})"),
        }
    }
}

/// Non-negative ratio that may be infinite. Serializes as a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub enum Ratio {
    Finite(f64),
    Infinite,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        match self {
            Ratio::Finite(v) => *v,
            Ratio::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Ratio::Infinite)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(v) => s.serialize_f64(*v),
            Ratio::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(v) => write!(f, "{v}"),
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub lip: f64,
    pub best_window: Window,
    pub oscillation: f64,
    pub ratio: Ratio,
    pub strategy: Strategy,
    pub pair_mode: PairMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubwindowResult {
    pub window: Window,
    pub oscillation: f64,
}

/// Largest image distance over interlacing pairs.
pub fn lipschitz_constant(f: &PointMap) -> Result<f64> {
    let n = f.window().len();
    if n < f.k() + 1 {
        return Err(Error::contract(format!(
            "[{}]^{} has no interlacing pair",
            f.window(),
            f.k()
        )));
    }
    let index = f.index();
    Ok((0..f.len())
        .into_par_iter()
        .map(|r| {
            let mut best = 0.0f64;
            for_each_neighbor(n, &index.unrank(r), |nb| {
                let q = index.rank(nb);
                if q > r {
                    best = best.max(f.distance_ranks(r, q));
                }
            });
            best
        })
        .reduce(|| 0.0, f64::max))
}

/// Vertex data needed by pair scans: rank in `f` plus first/last entries.
struct Vertices {
    ranks: Vec<usize>,
    first: Vec<u32>,
    last: Vec<u32>,
}

impl Vertices {
    /// Vertices of `[L]^k` where `L` is given by window positions.
    fn of(f: &PointMap, positions: &[usize]) -> Vertices {
        let k = f.k();
        let entries = f.window().as_slice();
        let mut v = Vertices {
            ranks: Vec::new(),
            first: Vec::new(),
            last: Vec::new(),
        };
        for c in Combinations::new(positions.len(), k) {
            let pos: Vec<usize> = c.iter().map(|&i| positions[i]).collect();
            v.ranks.push(f.index().rank(&pos));
            v.first.push(entries[pos[0]]);
            v.last.push(entries[pos[k - 1]]);
        }
        v
    }

    fn len(&self) -> usize {
        self.ranks.len()
    }

    fn admissible(&self, mode: PairMode, i: usize, j: usize) -> bool {
        match mode {
            PairMode::AllPairs => true,
            PairMode::SeparatedPairs => {
                self.last[i] < self.first[j] || self.last[j] < self.first[i]
            }
        }
    }

    /// Max distance over admissible pairs, or `None` once the scan can no
    /// longer beat the incumbent `(value, index)` held by `leader`.
    fn max_distance(
        &self,
        f: &PointMap,
        mode: PairMode,
        leader: Option<(&Leader, usize)>,
    ) -> Option<f64> {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if !self.admissible(mode, i, j) {
                    continue;
                }
                let d = f.distance_ranks(self.ranks[i], self.ranks[j]);
                if d > best {
                    best = d;
                    if let Some((l, me)) = leader {
                        if l.beats(d, me) {
                            return None;
                        }
                    }
                }
            }
        }
        Some(best)
    }

    fn max_distance_par(&self, f: &PointMap, mode: PairMode) -> f64 {
        (0..self.len())
            .into_par_iter()
            .map(|i| {
                (i + 1..self.len())
                    .filter(|&j| self.admissible(mode, i, j))
                    .map(|j| f.distance_ranks(self.ranks[i], self.ranks[j]))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }
}

fn positions_in(f: &PointMap, l: &Window) -> Result<Vec<usize>> {
    f.window()
        .positions_of(l.as_slice())
        .ok_or_else(|| Error::contract(format!("{l} is not inside {}", f.window())))
}

/// Largest image distance over the selected pairs of `[L]^k`.
pub fn oscillation(f: &PointMap, l: &Window, mode: PairMode) -> Result<f64> {
    let positions = positions_in(f, l)?;
    if positions.len() < f.k() {
        return Err(Error::contract(format!(
            "subwindow {l} is smaller than k = {}",
            f.k()
        )));
    }
    Ok(Vertices::of(f, &positions).max_distance_par(f, mode))
}

fn oscillation_at(f: &PointMap, positions: &[usize], mode: PairMode) -> f64 {
    Vertices::of(f, positions).max_distance_par(f, mode)
}

/// Subwindow of the given size with the smallest oscillation found by `strategy`,
/// under the default state cap.
pub fn best_subwindow(
    f: &PointMap,
    size: usize,
    mode: PairMode,
    strategy: Strategy,
) -> Result<SubwindowResult> {
    best_subwindow_capped(f, size, mode, strategy, Some(DEFAULT_STATE_CAP))
}

/// As [`best_subwindow`]; `cap = None` lifts the limit on exhaustive search.
pub fn best_subwindow_capped(
    f: &PointMap,
    size: usize,
    mode: PairMode,
    strategy: Strategy,
    cap: Option<u128>,
) -> Result<SubwindowResult> {
    let n = f.window().len();
    if size < f.k() || size > n {
        return Err(Error::contract(format!(
            "subwindow size {size} outside {}..={n}",
            f.k()
        )));
    }
    if size == n {
        let all: Vec<usize> = (0..n).collect();
        return Ok(SubwindowResult {
            window: f.window().clone(),
            oscillation: oscillation_at(f, &all, mode),
        });
    }
    let (positions, oscillation) = match strategy {
        Strategy::Exhaustive => {
            let count = binomial(n as u64, size as u64);
            if let Some(cap) = cap {
                if count > cap {
                    return Err(Error::ResourceLimit {
                        what: format!("exhaustive search over C({n},{size}) subwindows"),
                        estimate: count,
                        cap,
                    });
                }
            }
            exhaustive(f, size, mode)
        }
        Strategy::Greedy => {
            let p = greedy(f, size, mode);
            let v = oscillation_at(f, &p, mode);
            (p, v)
        }
        Strategy::Anneal { seed } => anneal(f, size, mode, seed, ANNEAL_STEPS),
    };
    Ok(SubwindowResult {
        window: f.window().select(&positions),
        oscillation,
    })
}

/// Best completed `(oscillation, candidate index)` so far.
struct Leader(Mutex<(f64, usize)>);

impl Leader {
    /// Whether a candidate whose running max is `value` already loses to the leader.
    fn beats(&self, value: f64, index: usize) -> bool {
        let (v, i) = *self.0.lock().unwrap();
        value > v || (value == v && i < index)
    }

    fn offer(&self, value: f64, index: usize) {
        let mut cur = self.0.lock().unwrap();
        if value < cur.0 || (value == cur.0 && index < cur.1) {
            *cur = (value, index);
        }
    }
}

fn exhaustive(f: &PointMap, size: usize, mode: PairMode) -> (Vec<usize>, f64) {
    let n = f.window().len();
    let candidates: Vec<Vec<usize>> = Combinations::new(n, size).collect();
    // a pruned candidate is strictly worse in (value, index) order than a
    // completed one, so the minimum does not depend on scheduling
    let leader = Leader(Mutex::new((f64::INFINITY, usize::MAX)));
    let (value, winner) = candidates
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let v = Vertices::of(f, c).max_distance(f, mode, Some((&leader, i)))?;
            leader.offer(v, i);
            Some((v, i))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("the true minimum is never pruned");
    (candidates[winner].clone(), value)
}

/// Drops, one at a time, the window entry that takes part in the most
/// maximal-distance pairs (ties: smallest entry).
fn greedy(f: &PointMap, size: usize, mode: PairMode) -> Vec<usize> {
    let n = f.window().len();
    let mut current: Vec<usize> = (0..n).collect();
    while current.len() > size {
        let verts = Vertices::of(f, &current);
        let top = verts.max_distance_par(f, mode);
        let k = f.k();
        let len = current.len();
        let combos: Vec<Vec<usize>> = Combinations::new(len, k).collect();
        // participation counts indexed by slot in `current`
        let counts = (0..verts.len())
            .into_par_iter()
            .map(|i| {
                let mut local = vec![0u64; len];
                for j in i + 1..verts.len() {
                    if verts.admissible(mode, i, j)
                        && f.distance_ranks(verts.ranks[i], verts.ranks[j]) == top
                    {
                        let mut touched = vec![false; len];
                        for &s in combos[i].iter().chain(&combos[j]) {
                            touched[s] = true;
                        }
                        for (slot, t) in touched.into_iter().enumerate() {
                            local[slot] += t as u64;
                        }
                    }
                }
                local
            })
            .reduce(
                || vec![0u64; len],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        let drop = (0..len)
            .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
            .unwrap();
        current.remove(drop);
    }
    current
}

const ANNEAL_STEPS: usize = 400;

/// Swap-move annealing started from the greedy subwindow; returns the best
/// subwindow visited.
fn anneal(f: &PointMap, size: usize, mode: PairMode, seed: u64, steps: usize) -> (Vec<usize>, f64) {
    let n = f.window().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = greedy(f, size, mode);
    let mut value = oscillation_at(f, &current, mode);
    let (mut best, mut best_value) = (current.clone(), value);
    let t0 = (value * 0.1).max(1e-9);
    for step in 0..steps {
        if best_value == 0.0 {
            break;
        }
        let temperature = t0 * (1.0 - step as f64 / steps as f64).max(1e-3);
        let outside: Vec<usize> = (0..n)
            .filter(|p| current.binary_search(p).is_err())
            .collect();
        let out_slot = rng.gen_range(0..current.len());
        let incoming = outside[rng.gen_range(0..outside.len())];
        let mut next = current.clone();
        next.remove(out_slot);
        let at = next.binary_search(&incoming).unwrap_err();
        next.insert(at, incoming);
        let next_value = oscillation_at(f, &next, mode);
        let accept =
            next_value <= value || rng.gen::<f64>() < (-(next_value - value) / temperature).exp();
        if accept {
            current = next;
            value = next_value;
            if value < best_value || (value == best_value && current < best) {
                best = current.clone();
                best_value = value;
            }
        }
    }
    (best, best_value)
}

/// Best subwindow oscillation divided by the Lipschitz constant.
pub fn empirical_q_ratio(
    f: &PointMap,
    size: usize,
    mode: PairMode,
    strategy: Strategy,
) -> Result<ConcentrationReport> {
    empirical_q_ratio_capped(f, size, mode, strategy, Some(DEFAULT_STATE_CAP))
}

pub fn empirical_q_ratio_capped(
    f: &PointMap,
    size: usize,
    mode: PairMode,
    strategy: Strategy,
    cap: Option<u128>,
) -> Result<ConcentrationReport> {
    let lip = lipschitz_constant(f)?;
    let best = best_subwindow_capped(f, size, mode, strategy, cap)?;
    let ratio = if lip > 0.0 {
        Ratio::Finite(best.oscillation / lip)
    } else if best.oscillation > 0.0 {
        Ratio::Infinite
    } else {
        Ratio::Finite(0.0)
    };
    Ok(ConcentrationReport {
        lip,
        best_window: best.window,
        oscillation: best.oscillation,
        ratio,
        strategy,
        pair_mode: mode,
    })
}

/// A map between finite metric spaces, seen through its two distance functions.
pub trait MetricMap: Sync {
    fn len(&self) -> usize;
    fn domain_distance(&self, i: usize, j: usize) -> f64;
    fn image_distance(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A [`PointMap`] with the interlacing distance on its domain.
pub struct GraphMetricMap<'a> {
    map: &'a PointMap,
    vertices: Vec<KSubset>,
}

impl<'a> GraphMetricMap<'a> {
    pub fn new(map: &'a PointMap) -> Self {
        let vertices = (0..map.len()).map(|r| map.vertex(r)).collect();
        GraphMetricMap { map, vertices }
    }
}

impl MetricMap for GraphMetricMap<'_> {
    fn len(&self) -> usize {
        self.vertices.len()
    }

    fn domain_distance(&self, i: usize, j: usize) -> f64 {
        discrepancy_distance_raw(self.vertices[i].as_slice(), self.vertices[j].as_slice()) as f64
    }

    fn image_distance(&self, i: usize, j: usize) -> f64 {
        self.map.distance_ranks(i, j)
    }
}

/// Finite map between two spaces given by matched point lists.
#[derive(Debug, Clone)]
pub struct FiniteMetricMap {
    domain: Space,
    points: Vec<Point>,
    target: Space,
    images: Vec<Point>,
}

impl FiniteMetricMap {
    pub fn new(
        domain: Space,
        points: Vec<Point>,
        target: Space,
        images: Vec<Point>,
    ) -> Result<Self> {
        if points.len() != images.len() {
            return Err(Error::contract("domain and image lists differ in length"));
        }
        for p in &points {
            domain.check_point(p)?;
        }
        for q in &images {
            target.check_point(q)?;
        }
        Ok(FiniteMetricMap {
            domain,
            points,
            target,
            images,
        })
    }

    /// Identity on all points of an explicit metric space.
    pub fn identity(space: Space) -> Result<Self> {
        if space.is_normed() {
            return Err(Error::contract(
                "identity map needs a finite explicit metric",
            ));
        }
        let points: Vec<Point> = (0..space.dim()).map(Point::Index).collect();
        FiniteMetricMap::new(space.clone(), points.clone(), space, points)
    }
}

impl MetricMap for FiniteMetricMap {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn domain_distance(&self, i: usize, j: usize) -> f64 {
        self.domain.metric(&self.points[i], &self.points[j])
    }

    fn image_distance(&self, i: usize, j: usize) -> f64 {
        self.target.metric(&self.images[i], &self.images[j])
    }
}

/// `sup { d(hx, hy) : d(x, y) <= t }`, over ordered pairs including `x = y`.
pub fn continuity_modulus(h: &dyn MetricMap, t: f64) -> f64 {
    (0..h.len())
        .into_par_iter()
        .map(|i| {
            (i..h.len())
                .filter(|&j| h.domain_distance(i, j) <= t)
                .map(|j| h.image_distance(i, j))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// `inf { d(hx, hy) : d(x, y) >= t }`; `f64::INFINITY` when no pair qualifies.
pub fn compression_modulus(h: &dyn MetricMap, t: f64) -> f64 {
    (0..h.len())
        .into_par_iter()
        .map(|i| {
            (i..h.len())
                .filter(|&j| h.domain_distance(i, j) >= t)
                .map(|j| h.image_distance(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

fn domain_distances(h: &dyn MetricMap) -> Vec<f64> {
    let mut ds: Vec<f64> = (0..h.len())
        .flat_map(|i| (i..h.len()).map(move |j| (i, j)))
        .map(|(i, j)| h.domain_distance(i, j))
        .collect();
    ds.sort_by(f64::total_cmp);
    ds.dedup();
    ds
}

/// ω_h sampled at every realized domain distance; exact under step interpolation.
pub fn continuity_table(h: &dyn MetricMap) -> Result<ModulusTable> {
    let samples = domain_distances(h)
        .into_iter()
        .map(|t| (t, continuity_modulus(h, t)))
        .collect();
    ModulusTable::new(samples)
}

/// ρ_h sampled at every realized domain distance (where it is finite).
pub fn compression_table(h: &dyn MetricMap) -> Result<ModulusTable> {
    let samples = domain_distances(h)
        .into_iter()
        .map(|t| (t, compression_modulus(h, t)))
        .filter(|(_, v)| v.is_finite())
        .collect();
    ModulusTable::new(samples)
}

/// Non-decreasing step function on `[0, infinity)` given by samples `(t, value)`.
///
/// Each sampled value holds from its `t` up to the next sample; before the
/// first sample the first value applies, after the last the last one does.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusTable {
    samples: Vec<(f64, f64)>,
}

impl ModulusTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDomain("modulus table has no samples".into()));
        }
        for &(t, v) in &samples {
            if !(t >= 0.0 && t.is_finite() && v >= 0.0 && v.is_finite()) {
                return Err(Error::contract(format!("bad modulus sample ({t}, {v})")));
            }
        }
        for w in samples.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::contract("modulus sample points must increase"));
            }
            if w[0].1 > w[1].1 {
                return Err(Error::contract("modulus values must be non-decreasing"));
            }
        }
        Ok(ModulusTable { samples })
    }

    /// Samples a function on a grid.
    pub fn from_fn(grid: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        ModulusTable::new(grid.iter().map(|&t| (t, f(t))).collect())
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.samples.partition_point(|&(s, _)| s <= t);
        self.samples[idx.saturating_sub(1)].1
    }
}

/// `sup { δ >= 0 : q_N · ρ_h(ε) > ω_h(δ) }` over the step function `omega`,
/// clipped to the last grid point of `omega`; 0 when the set is empty.
pub fn inherited_q_bound(q_n: f64, rho: &ModulusTable, omega: &ModulusTable, epsilon: f64) -> f64 {
    if q_n <= 0.0 {
        return 0.0;
    }
    let threshold = q_n * rho.eval(epsilon);
    let s = omega.samples();
    // ω is v_j on [t_j, t_{j+1}); the admissible set is [0, t_{j+1}) for the last j with v_j < threshold
    match s.iter().rposition(|&(_, v)| v < threshold) {
        None => 0.0,
        Some(j) if j + 1 < s.len() => s[j + 1].0,
        Some(j) => s[j].0,
    }
}

/// `g(n) = a · (f(l_{shift+n_1}, ..., l_{shift+n_k}) - f(base))`, where `l_j` is
/// the `j`-th window entry. The domain of `g` is `{1, ..., |W| - shift}`.
pub fn rescale_into_ball(f: &PointMap, base: &KSubset, shift: usize, a: f64) -> Result<PointMap> {
    f.target().require_normed("rescaling")?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::contract(format!("scale {a} must be positive")));
    }
    let n = f.window().len();
    if shift + f.k() > n {
        return Err(Error::contract(format!(
            "shift {shift} leaves fewer than k = {} window entries",
            f.k()
        )));
    }
    let origin = f.image(base)?.coords().unwrap().to_vec();
    let entries = f.window().as_slice();
    let domain = Window::range(1, (n - shift) as u32)?;
    PointMap::from_fn(domain, f.k(), f.target().clone(), MapRule::Custom, |m| {
        let shifted: Vec<u32> = m
            .as_slice()
            .iter()
            .map(|&x| entries[shift + x as usize - 1])
            .collect();
        let r = f
            .rank_of(&shifted)
            .expect("shifted tuple lies in the window");
        let v = f.image_at(r).coords().unwrap();
        Ok(Point::Vector(
            v.iter().zip(&origin).map(|(x, o)| a * (x - o)).collect(),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lo: u32, hi: u32) -> Window {
        Window::range(lo, hi).unwrap()
    }

    fn summing(k: usize, hi: u32) -> PointMap {
        PointMap::summing(w(1, hi), k, Space::sup(hi as usize).unwrap()).unwrap()
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_constant(&summing(3, 9)).unwrap(), 1.0);
        let c = PointMap::constant(
            w(1, 6),
            2,
            Space::sup(2).unwrap(),
            Point::Vector(vec![1.0, 2.0]),
        )
        .unwrap();
        assert_eq!(lipschitz_constant(&c).unwrap(), 0.0);
        let d = PointMap::disjoint(w(1, 6), 2, Space::lp(1.0, 6).unwrap()).unwrap();
        assert_eq!(lipschitz_constant(&d).unwrap(), 4.0);
        let tiny = PointMap::summing(w(1, 3), 3, Space::sup(3).unwrap()).unwrap();
        assert!(lipschitz_constant(&tiny).is_err());
    }

    #[test]
    fn oscillation_examples() {
        let f = summing(3, 9);
        assert_eq!(
            oscillation(&f, &w(1, 9), PairMode::SeparatedPairs).unwrap(),
            3.0
        );
        let p = PointMap::parity(w(1, 8), 2).unwrap();
        let evens = Window::new(vec![2, 4, 6, 8]).unwrap();
        assert_eq!(oscillation(&p, &evens, PairMode::AllPairs).unwrap(), 0.0);
        assert_eq!(
            oscillation(&f, &w(2, 4), PairMode::SeparatedPairs).unwrap(),
            0.0
        );
        assert!(oscillation(&f, &w(5, 12), PairMode::AllPairs).is_err());
    }

    #[test]
    fn subwindow_examples() {
        let p = PointMap::parity(w(1, 8), 2).unwrap();
        let r = best_subwindow(&p, 4, PairMode::AllPairs, Strategy::Exhaustive).unwrap();
        // several windows reach 0; ties go to the lexicographically first
        assert_eq!(r.window.as_slice(), &[1, 3, 5, 6]);
        assert_eq!(r.oscillation, 0.0);
        let evens = Window::new(vec![2, 4, 6, 8]).unwrap();
        assert_eq!(oscillation(&p, &evens, PairMode::AllPairs).unwrap(), 0.0);

        let f = summing(2, 8);
        let r = best_subwindow(&f, 4, PairMode::AllPairs, Strategy::Exhaustive).unwrap();
        assert_eq!(r.oscillation, 2.0);

        let r = best_subwindow(&f, 8, PairMode::AllPairs, Strategy::Greedy).unwrap();
        assert_eq!(r.window, w(1, 8));
        assert_eq!(
            r.oscillation,
            oscillation(&f, &w(1, 8), PairMode::AllPairs).unwrap()
        );

        assert!(best_subwindow(&f, 1, PairMode::AllPairs, Strategy::Greedy).is_err());
        assert!(best_subwindow(&f, 9, PairMode::AllPairs, Strategy::Greedy).is_err());
    }

    #[test]
    fn greedy_and_anneal_find_parity_window() {
        let p = PointMap::parity(w(1, 8), 2).unwrap();
        for s in [Strategy::Greedy, Strategy::Anneal { seed: 7 }] {
            let r = best_subwindow(&p, 4, PairMode::AllPairs, s).unwrap();
            assert_eq!(r.oscillation, 0.0, "{s}");
        }
    }

    #[test]
    fn exhaustive_respects_cap() {
        let f = summing(2, 8);
        let err = best_subwindow_capped(&f, 4, PairMode::AllPairs, Strategy::Exhaustive, Some(10));
        assert!(matches!(
            err,
            Err(Error::ResourceLimit { estimate: 70, .. })
        ));
    }

    #[test]
    fn ratio_examples() {
        for k in 2..=4 {
            let f = summing(k, 2 * k as u32 + 2);
            let r =
                empirical_q_ratio(&f, 2 * k + 2, PairMode::AllPairs, Strategy::Exhaustive).unwrap();
            assert_eq!(r.ratio, Ratio::Finite(k as f64));
        }
        let d = PointMap::disjoint(w(1, 8), 3, Space::lp(f64::INFINITY, 8).unwrap()).unwrap();
        let r = empirical_q_ratio(&d, 7, PairMode::AllPairs, Strategy::Exhaustive).unwrap();
        assert_eq!(r.ratio, Ratio::Finite(1.0));
        let c = PointMap::constant(w(1, 6), 2, Space::sup(1).unwrap(), Point::Vector(vec![3.0]))
            .unwrap();
        let r = empirical_q_ratio(&c, 4, PairMode::AllPairs, Strategy::Greedy).unwrap();
        assert_eq!(r.ratio, Ratio::Finite(0.0));
    }

    #[test]
    fn moduli_of_summing_map() {
        let f = summing(2, 10);
        let h = GraphMetricMap::new(&f);
        assert_eq!(continuity_modulus(&h, 1.0), 1.0);
        assert_eq!(compression_modulus(&h, 2.0), 1.0);
        assert_eq!(compression_modulus(&h, 3.0), f64::INFINITY);
        let table = continuity_table(&h).unwrap();
        assert_eq!(table.eval(1.5), 1.0);
        assert_eq!(table.eval(2.0), 2.0);
    }

    #[test]
    fn identity_moduli_bracket_t() {
        use crate::spaces::DistanceMatrix;
        let rows = vec![
            vec![0.0, 1.0, 2.0, 2.5],
            vec![1.0, 0.0, 1.5, 2.0],
            vec![2.0, 1.5, 0.0, 1.0],
            vec![2.5, 2.0, 1.0, 0.0],
        ];
        let h =
            FiniteMetricMap::identity(Space::ExplicitMetric(DistanceMatrix::new(rows).unwrap()))
                .unwrap();
        for t in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
            assert!(continuity_modulus(&h, t) <= t);
            assert!(compression_modulus(&h, t) >= t);
        }
    }

    #[test]
    fn inherited_bound_examples() {
        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let id = ModulusTable::from_fn(&grid, |t| t).unwrap();
        assert_eq!(inherited_q_bound(1.0, &id, &id, 3.0), 3.0);

        let fine: Vec<f64> = (0..=80).map(|i| i as f64 / 8.0).collect();
        let rho = ModulusTable::from_fn(&fine, |t| t / 2.0).unwrap();
        let omega = ModulusTable::from_fn(&fine, |t| 2.0 * t).unwrap();
        assert_eq!(inherited_q_bound(1.0, &rho, &omega, 1.0), 0.25);

        for eps in [0.5, 1.0, 7.0] {
            assert_eq!(inherited_q_bound(0.0, &id, &id, eps), 0.0);
        }
    }

    #[test]
    fn modulus_table_validation() {
        assert!(ModulusTable::new(vec![(0.0, 2.0), (1.0, 1.0)]).is_err());
        assert!(ModulusTable::new(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(ModulusTable::new(vec![]).is_err());
    }

    #[test]
    fn rescale_examples() {
        let c = PointMap::constant(
            w(1, 8),
            2,
            Space::sup(2).unwrap(),
            Point::Vector(vec![1.0, -1.0]),
        )
        .unwrap();
        let g = rescale_into_ball(&c, &KSubset::new(vec![1, 2]).unwrap(), 2, 5.0).unwrap();
        assert!(g.images().iter().all(|p| p == &Point::zeros(2)));

        // vanishes at its base
        let f = PointMap::from_fn(w(1, 6), 2, Space::sup(1).unwrap(), MapRule::Custom, |n| {
            Ok(Point::Vector(vec![(n.first() - 1) as f64]))
        })
        .unwrap();
        let g = rescale_into_ball(&f, &KSubset::new(vec![1, 2]).unwrap(), 0, 1.0).unwrap();
        assert_eq!(g.window(), f.window());
        assert_eq!(g.images(), f.images());

        let f = summing(2, 12);
        let base = KSubset::new(vec![1, 2]).unwrap();
        let g = rescale_into_ball(&f, &base, 2, 0.25).unwrap();
        assert_eq!(g.window(), &w(1, 10));
        let sup = f.target();
        assert!(g.images().iter().all(|p| sup.norm(p).unwrap() <= 1.0));
        assert!(rescale_into_ball(&f, &base, 11, 1.0).is_err());
    }
}
