//! Target spaces and maps from `[W]^k` into them.
//!
//! Normed spaces (`lp` and `sup`) carry coordinate vectors; an explicit metric
//! carries point indices into a validated distance matrix. The summing and
//! disjoint codings produce small-integer coordinates, so `p = 1` and
//! `p = infinity` distances between them are exact and `p = 2` distances are
//! correctly rounded square roots of exact integers.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{Combinations, ComboIndex, KSubset, Window};
use crate::error::{Error, Result};

/// Tolerance used for floating-point comparisons with general `p`.
pub const LP_TOLERANCE: f64 = 1e-12;

/// Symmetric, zero-diagonal, triangle-respecting distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    source: Option<String>,
}

impl DistanceMatrix {
    #[allow(clippy::needless_range_loop)]
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyDomain("distance matrix has no points".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::contract("distance matrix must be square"));
        }
        for i in 0..n {
            if rows[i][i] != 0.0 {
                return Err(Error::contract(format!(
                    "d({i},{i}) = {} is not 0",
                    rows[i][i]
                )));
            }
            for j in 0..n {
                let d = rows[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::contract(format!(
                        "d({i},{j}) = {d} is not a distance"
                    )));
                }
                if d != rows[j][i] {
                    return Err(Error::contract(format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    let detour = rows[i][j] + rows[j][l];
                    if rows[i][l] > detour * (1.0 + LP_TOLERANCE) + LP_TOLERANCE {
                        return Err(Error::TriangleViolation {
                            i,
                            j,
                            l,
                            direct: rows[i][l],
                            detour,
                        });
                    }
                }
            }
        }
        Ok(DistanceMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
            source: None,
        })
    }

    /// Reads a headerless CSV square matrix.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)?;
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {f:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let mut m = DistanceMatrix::new(rows)?;
        m.source = Some(path.display().to_string());
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    /// `p` may be `f64::INFINITY`.
    Lp {
        p: f64,
        dim: usize,
    },
    SupNorm {
        dim: usize,
    },
    ExplicitMetric(DistanceMatrix),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Vector(Vec<f64>),
    Index(usize),
}

impl Point {
    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Vector(v) => Some(v),
            Point::Index(_) => None,
        }
    }

    pub fn zeros(dim: usize) -> Point {
        Point::Vector(vec![0.0; dim])
    }

    /// `e_i` with 1-based `i`.
    pub fn basis(dim: usize, i: usize) -> Point {
        let mut v = vec![0.0; dim];
        v[i - 1] = 1.0;
        Point::Vector(v)
    }
}

fn lp_norm(p: f64, diffs: impl Iterator<Item = f64>) -> f64 {
    if p == 1.0 {
        diffs.map(f64::abs).sum()
    } else if p == 2.0 {
        diffs.map(|d| d * d).sum::<f64>().sqrt()
    } else if p.is_infinite() {
        diffs.map(f64::abs).fold(0.0, f64::max)
    } else {
        diffs.map(|d| d.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

impl Space {
    pub fn lp(p: f64, dim: usize) -> Result<Space> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::contract(format!("p = {p} is below 1")));
        }
        if dim == 0 {
            return Err(Error::contract("dimension must be positive"));
        }
        Ok(Space::Lp { p, dim })
    }

    pub fn sup(dim: usize) -> Result<Space> {
        if dim == 0 {
            return Err(Error::contract("dimension must be positive"));
        }
        Ok(Space::SupNorm { dim })
    }

    /// One-dimensional real line.
    pub fn real_line() -> Space {
        Space::Lp { p: 1.0, dim: 1 }
    }

    pub fn is_normed(&self) -> bool {
        !matches!(self, Space::ExplicitMetric(_))
    }

    /// Coordinate dimension, or number of points for an explicit metric.
    pub fn dim(&self) -> usize {
        match self {
            Space::Lp { dim, .. } | Space::SupNorm { dim } => *dim,
            Space::ExplicitMetric(m) => m.len(),
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        match (self, x) {
            (Space::ExplicitMetric(m), Point::Index(i)) if *i < m.len() => Ok(()),
            (Space::ExplicitMetric(m), _) => Err(Error::contract(format!(
                "point {x:?} is not an index below {}",
                m.len()
            ))),
            (_, Point::Vector(v)) if v.len() == self.dim() => {
                if v.iter().all(|c| c.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::contract("non-finite coordinate"))
                }
            }
            _ => Err(Error::contract(format!(
                "point {x:?} does not have dimension {}",
                self.dim()
            ))),
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.metric(x, y))
    }

    /// Distance between points already known to belong to the space.
    pub(crate) fn metric(&self, x: &Point, y: &Point) -> f64 {
        match (self, x, y) {
            (Space::ExplicitMetric(m), Point::Index(i), Point::Index(j)) => m.get(*i, *j),
            (Space::Lp { p, .. }, Point::Vector(a), Point::Vector(b)) => {
                lp_norm(*p, a.iter().zip(b).map(|(s, t)| s - t))
            }
            (Space::SupNorm { .. }, Point::Vector(a), Point::Vector(b)) => {
                lp_norm(f64::INFINITY, a.iter().zip(b).map(|(s, t)| s - t))
            }
            _ => unreachable!("point kind does not match the space"),
        }
    }

    pub fn norm(&self, x: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.norm_of(
            x.coords()
                .ok_or_else(|| Error::contract("norm needs a vector"))?,
        )
    }

    pub(crate) fn norm_of(&self, v: &[f64]) -> Result<f64> {
        match self {
            Space::Lp { p, .. } => Ok(lp_norm(*p, v.iter().copied())),
            Space::SupNorm { .. } => Ok(lp_norm(f64::INFINITY, v.iter().copied())),
            Space::ExplicitMetric(_) => Err(Error::contract("explicit metrics carry no norm")),
        }
    }

    pub(crate) fn require_normed(&self, what: &str) -> Result<()> {
        if self.is_normed() {
            Ok(())
        } else {
            Err(Error::contract(format!("{what} needs a normed space")))
        }
    }
}

/// Grammar: `lp:<p>:<dim>` (with `p` a number or `inf`), `sup:<dim>`, `matrix:<path>`.
impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Space> {
        let bad = || Error::Parse(format!("bad space spec {s:?}"));
        let mut parts = s.splitn(3, ':');
        match parts.next() {
            Some("lp") => {
                let p = parts.next().ok_or_else(bad)?;
                let p = if p == "inf" {
                    f64::INFINITY
                } else {
                    p.parse().map_err(|_| bad())?
                };
                let dim = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                Space::lp(p, dim)
            }
            Some("sup") => {
                let rest = s.strip_prefix("sup:").ok_or_else(bad)?;
                Space::sup(rest.parse().map_err(|_| bad())?)
            }
            Some("matrix") => {
                let path = s.strip_prefix("matrix:").ok_or_else(bad)?;
                Ok(Space::ExplicitMetric(DistanceMatrix::from_csv(Path::new(
                    path,
                ))?))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Lp { p, dim } if p.is_infinite() => write!(f, "lp:inf:{dim}"),
            Space::Lp { p, dim } => write!(f, "lp:{p}:{dim}"),
            Space::SupNorm { dim } => write!(f, "sup:{dim}"),
            Space::ExplicitMetric(m) => match &m.source {
                Some(path) => write!(f, "matrix:{path}"),
                None => write!(f, "matrix:<{}x{}>", m.len(), m.len()),
            },
        }
    }
}

fn check_fits(n: &KSubset, dim: usize) -> Result<()> {
    if n.last() as usize > dim {
        return Err(Error::contract(format!(
            "{n} does not fit in dimension {dim}"
        )));
    }
    Ok(())
}

/// `s_{n_1} + ... + s_{n_k}` where `s_n = e_1 + ... + e_n`; coordinate `x`
/// counts the entries `n_i >= x`.
pub fn summing_image(n: &KSubset, dim: usize) -> Result<Point> {
    check_fits(n, dim)?;
    Ok(Point::Vector(summing_coords(n.as_slice(), dim)))
}

fn summing_coords(n: &[u32], dim: usize) -> Vec<f64> {
    (1..=dim as u32)
        .map(|x| n.iter().filter(|&&e| e >= x).count() as f64)
        .collect()
}

/// Indicator vector `e_{n_1} + ... + e_{n_k}`.
pub fn disjoint_image(n: &KSubset, dim: usize) -> Result<Point> {
    check_fits(n, dim)?;
    Ok(Point::Vector(disjoint_coords(n.as_slice(), dim)))
}

fn disjoint_coords(n: &[u32], dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for &e in n {
        v[e as usize - 1] = 1.0;
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapRule {
    Summing,
    Disjoint,
    /// 1 when the first entry is even, else 0, on the real line.
    Parity,
    Constant,
    Custom,
}

/// A total map `[window]^k -> target`, stored by lexicographic rank.
#[derive(Debug, Clone)]
pub struct PointMap {
    window: Window,
    k: usize,
    rule: MapRule,
    target: Space,
    index: ComboIndex,
    images: Vec<Point>,
}

impl PointMap {
    /// Builds from a rule evaluated on every vertex.
    pub fn from_fn(
        window: Window,
        k: usize,
        target: Space,
        rule: MapRule,
        mut f: impl FnMut(&KSubset) -> Result<Point>,
    ) -> Result<PointMap> {
        if k == 0 || k > window.len() {
            return Err(Error::EmptyDomain(format!(
                "no {k}-subsets of a window of size {}",
                window.len()
            )));
        }
        let index = ComboIndex::new(window.len(), k)?;
        let images = Combinations::new(window.len(), k)
            .map(|p| {
                let x = f(&window.subset_at(&p))?;
                target.check_point(&x)?;
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointMap {
            window,
            k,
            rule,
            target,
            index,
            images,
        })
    }

    fn vector_target(target: &Space, window: &Window, what: &str) -> Result<usize> {
        target.require_normed(what)?;
        if (window.max() as usize) > target.dim() {
            return Err(Error::contract(format!(
                "{what} over {window} needs dimension >= {}",
                window.max()
            )));
        }
        Ok(target.dim())
    }

    pub fn summing(window: Window, k: usize, target: Space) -> Result<PointMap> {
        let dim = Self::vector_target(&target, &window, "summing map")?;
        Self::from_fn(window, k, target, MapRule::Summing, |n| {
            Ok(Point::Vector(summing_coords(n.as_slice(), dim)))
        })
    }

    pub fn disjoint(window: Window, k: usize, target: Space) -> Result<PointMap> {
        let dim = Self::vector_target(&target, &window, "disjoint map")?;
        Self::from_fn(window, k, target, MapRule::Disjoint, |n| {
            Ok(Point::Vector(disjoint_coords(n.as_slice(), dim)))
        })
    }

    pub fn parity(window: Window, k: usize) -> Result<PointMap> {
        Self::from_fn(window, k, Space::real_line(), MapRule::Parity, |n| {
            Ok(Point::Vector(vec![if n.first() % 2 == 0 {
                1.0
            } else {
                0.0
            }]))
        })
    }

    pub fn constant(window: Window, k: usize, target: Space, value: Point) -> Result<PointMap> {
        target.check_point(&value)?;
        Self::from_fn(window, k, target, MapRule::Constant, |_| Ok(value.clone()))
    }

    /// Loads a custom table: one row per domain tuple, `k` tuple entries then
    /// the coordinates (or a single point index for an explicit metric).
    /// Without a window the domain window is the union of the tuple entries.
    pub fn from_csv(
        path: &Path,
        k: usize,
        window: Option<Window>,
        target: Space,
    ) -> Result<PointMap> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)?;
        let width = if target.is_normed() {
            k + target.dim()
        } else {
            k + 1
        };
        let mut table = std::collections::HashMap::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != width {
                return Err(Error::Parse(format!(
                    "row {} has {} columns, expected {width}",
                    line + 1,
                    record.len()
                )));
            }
            let num = |f: &str| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: bad number {f:?}", line + 1)))
            };
            let tuple = record
                .iter()
                .take(k)
                .map(|f| {
                    f.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("row {}: bad entry {f:?}", line + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            let tuple = KSubset::new(tuple)?;
            let point = if target.is_normed() {
                Point::Vector(record.iter().skip(k).map(num).collect::<Result<Vec<_>>>()?)
            } else {
                let f = &record[k];
                Point::Index(
                    f.parse()
                        .map_err(|_| Error::Parse(format!("bad index {f:?}")))?,
                )
            };
            if table.insert(tuple.clone(), point).is_some() {
                return Err(Error::Parse(format!("duplicate row for {tuple}")));
            }
        }
        let window = match window {
            Some(w) => w,
            None => {
                let mut all: Vec<u32> = table.keys().flat_map(|t| t.as_slice().to_vec()).collect();
                all.sort_unstable();
                all.dedup();
                Window::new(all)?
            }
        };
        Self::from_fn(window, k, target, MapRule::Custom, |n| {
            table
                .get(n)
                .cloned()
                .ok_or_else(|| Error::contract(format!("table has no row for {n}")))
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rule(&self) -> &MapRule {
        &self.rule
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn index(&self) -> &ComboIndex {
        &self.index
    }

    pub fn image(&self, n: &KSubset) -> Result<&Point> {
        let r = self
            .rank_of(n.as_slice())
            .ok_or_else(|| Error::contract(format!("{n} is not in the domain")))?;
        Ok(&self.images[r])
    }

    pub fn image_at(&self, rank: usize) -> &Point {
        &self.images[rank]
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn vertex(&self, rank: usize) -> KSubset {
        self.window.subset_at(&self.index.unrank(rank))
    }

    /// Lex rank of a tuple of window entries.
    pub fn rank_of(&self, n: &[u32]) -> Option<usize> {
        if n.len() != self.k {
            return None;
        }
        let pos = self.window.positions_of(n)?;
        Some(self.index.rank(&pos))
    }

    pub(crate) fn distance_ranks(&self, a: usize, b: usize) -> f64 {
        self.target.metric(&self.images[a], &self.images[b])
    }

    /// Same domain and rule with every image multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<PointMap> {
        self.target.require_normed("scaling")?;
        let mut out = self.clone();
        out.rule = MapRule::Custom;
        for p in &mut out.images {
            if let Point::Vector(v) = p {
                v.iter_mut().for_each(|c| *c *= factor);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_ksubsets;
    use crate::interlacing::{discrepancy_distance, discrepancy_profile};

    fn ks(v: &[u32]) -> KSubset {
        KSubset::new(v.to_vec()).unwrap()
    }

    fn v(c: &[f64]) -> Point {
        Point::Vector(c.to_vec())
    }

    #[test]
    fn distance_examples() {
        let l2 = Space::lp(2.0, 3).unwrap();
        assert_eq!(
            l2.distance(&v(&[3.0, 4.0, 0.0]), &v(&[0.0; 3])).unwrap(),
            5.0
        );
        let sup = Space::sup(4).unwrap();
        let d = sup
            .distance(&v(&[2.0, 1.0, 1.0, 0.0]), &v(&[2.0, 2.0, 1.0, 1.0]))
            .unwrap();
        assert_eq!(d, 1.0);
        let m = Space::ExplicitMetric(
            DistanceMatrix::new(vec![vec![0.0, 7.0], vec![7.0, 0.0]]).unwrap(),
        );
        assert_eq!(m.distance(&Point::Index(0), &Point::Index(1)).unwrap(), 7.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let l2 = Space::lp(2.0, 3).unwrap();
        assert!(l2.distance(&v(&[1.0]), &v(&[0.0; 3])).is_err());
        assert!(l2.distance(&Point::Index(0), &v(&[0.0; 3])).is_err());
        assert!(Space::lp(0.5, 3).is_err());
    }

    #[test]
    fn general_p_matches_closed_forms() {
        let x = v(&[1.0, -2.0, 2.0]);
        let zero = Point::zeros(3);
        let d = |p| Space::lp(p, 3).unwrap().distance(&x, &zero).unwrap();
        assert_eq!(d(1.0), 5.0);
        assert_eq!(d(2.0), 3.0);
        assert_eq!(d(f64::INFINITY), 2.0);
        assert!((d(3.0) - 17f64.cbrt()).abs() < LP_TOLERANCE);
    }

    #[test]
    fn summing_and_disjoint_images() {
        assert_eq!(
            summing_image(&ks(&[1, 3]), 4).unwrap(),
            v(&[2.0, 1.0, 1.0, 0.0])
        );
        assert_eq!(
            summing_image(&ks(&[2, 4]), 4).unwrap(),
            v(&[2.0, 2.0, 1.0, 1.0])
        );
        assert!(summing_image(&ks(&[2, 5]), 4).is_err());
        let sup = Space::sup(6).unwrap();
        let d = sup
            .distance(
                &summing_image(&ks(&[1, 2, 3]), 6).unwrap(),
                &summing_image(&ks(&[4, 5, 6]), 6).unwrap(),
            )
            .unwrap();
        assert_eq!(d, 3.0);

        assert_eq!(
            disjoint_image(&ks(&[1, 3]), 4).unwrap(),
            v(&[1.0, 0.0, 1.0, 0.0])
        );
        let l2 = Space::lp(2.0, 4).unwrap();
        let a = disjoint_image(&ks(&[1, 2]), 4).unwrap();
        let b = disjoint_image(&ks(&[3, 4]), 4).unwrap();
        assert_eq!(l2.distance(&a, &b).unwrap(), 2.0);
        let linf = Space::lp(f64::INFINITY, 6).unwrap();
        let all = enumerate_ksubsets(&Window::range(1, 6).unwrap(), 2).unwrap();
        for m in &all {
            for n in all.iter().filter(|n| *n != m) {
                let d = linf
                    .distance(
                        &disjoint_image(m, 6).unwrap(),
                        &disjoint_image(n, 6).unwrap(),
                    )
                    .unwrap();
                assert_eq!(d, 1.0);
            }
        }
    }

    #[test]
    fn summing_distance_is_absolute_discrepancy_and_bilipschitz() {
        let w = Window::range(1, 10).unwrap();
        for k in 1..=4 {
            let sup = Space::sup(10).unwrap();
            let all = enumerate_ksubsets(&w, k).unwrap();
            let imgs: Vec<Point> = all.iter().map(|n| summing_image(n, 10).unwrap()).collect();
            for (i, m) in all.iter().enumerate() {
                for (j, n) in all.iter().enumerate() {
                    let s = sup.distance(&imgs[i], &imgs[j]).unwrap() as u32;
                    let d = discrepancy_distance(m, n).unwrap();
                    assert_eq!(s, discrepancy_profile(m, n).unwrap().abs_max());
                    assert!(s <= d && d <= 2 * s, "{m} {n}");
                }
            }
        }
    }

    #[test]
    fn matrix_rejects_triangle_violation() {
        let rows = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        match DistanceMatrix::new(rows) {
            Err(Error::TriangleViolation { i, j, l, .. }) => assert_eq!((i, j, l), (0, 1, 2)),
            other => panic!("expected a triangle violation, got {other:?}"),
        }
        assert!(DistanceMatrix::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(DistanceMatrix::new(vec![vec![1.0]]).is_err());
    }

    #[test]
    fn space_grammar_round_trips() {
        for s in ["lp:2:3", "lp:inf:5", "lp:1.5:2", "sup:8"] {
            assert_eq!(s.parse::<Space>().unwrap().to_string(), s);
        }
        assert!("lp:0.5:3".parse::<Space>().is_err());
        assert!("lp:2".parse::<Space>().is_err());
        assert!("l2:3".parse::<Space>().is_err());
    }

    #[test]
    fn csv_tables_load() {
        let dir = std::env::temp_dir().join(format!("ilab-spaces-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("map.csv");
        std::fs::write(&path, "1,2,0.5,1\n1,3,1,1\n2,3,0,2\n").unwrap();
        let f = PointMap::from_csv(&path, 2, None, Space::lp(2.0, 2).unwrap()).unwrap();
        assert_eq!(f.window().as_slice(), &[1, 2, 3]);
        assert_eq!(f.image(&ks(&[1, 3])).unwrap(), &v(&[1.0, 1.0]));

        std::fs::write(&path, "1,2,0.5,1\n2,3,0,2\n").unwrap();
        assert!(PointMap::from_csv(&path, 2, None, Space::lp(2.0, 2).unwrap()).is_err());

        let mpath = dir.join("m.csv");
        std::fs::write(&mpath, "0,1\n1,0\n").unwrap();
        let space: Space = format!("matrix:{}", mpath.display()).parse().unwrap();
        assert_eq!(space.dim(), 2);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn point_maps_are_total_and_ranked() {
        let w = Window::range(1, 6).unwrap();
        let f = PointMap::summing(w.clone(), 3, Space::sup(6).unwrap()).unwrap();
        assert_eq!(f.len(), 20);
        for (r, n) in enumerate_ksubsets(&w, 3).unwrap().iter().enumerate() {
            assert_eq!(f.vertex(r), *n);
            assert_eq!(f.image(n).unwrap(), &summing_image(n, 6).unwrap());
        }
        assert!(PointMap::summing(w, 3, Space::sup(4).unwrap()).is_err());
    }
}
