//! Trees indexed by increasing tuples, intertwining, branch-norm surrogates and
//! the telescoping tree decomposition of a bounded map.
//!
//! A tree of height `h` over a window `W` assigns a point to every increasing
//! tuple `(n_1, ..., n_j)`, `1 <= j <= h`, that extends to some `h`-subset of
//! `W` (plus the empty tuple when rooted). Limits along ultrafilters have no
//! finite counterpart: branch norms are reported as the min and max over all
//! branches, and the derivatives in [`tree_decomposition`] are iterated
//! arithmetic means over the admissible larger indices.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{Combinations, Cut, KSubset, Window};
use crate::error::{Error, Result};
use crate::spaces::{Point, PointMap, Space};

/// Norm tolerance for the `normalized` check.
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    height: usize,
    window: Window,
    rooted: bool,
    space: Space,
    nodes: BTreeMap<Vec<u32>, Point>,
}

/// Increasing tuples of length `1..=height` over `window` that extend to a
/// `height`-subset, grouped by length (index 0 holds the empty tuple).
fn prefixes(window: &Window, height: usize) -> Vec<Vec<Vec<u32>>> {
    let entries = window.as_slice();
    let n = entries.len();
    let mut levels: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
    for j in 1..=height {
        let next = levels[j - 1]
            .iter()
            .flat_map(|p| {
                let start = p.last().map_or(0, |&x| x + 1);
                // leave room for the remaining height - j entries
                let end = n.saturating_sub(height - j);
                (start..end).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
        levels.push(next);
    }
    levels
        .into_iter()
        .map(|lvl| {
            lvl.into_iter()
                .map(|p| p.into_iter().map(|i| entries[i]).collect())
                .collect()
        })
        .collect()
}

impl Tree {
    pub fn from_fn(
        window: Window,
        height: usize,
        space: Space,
        rooted: bool,
        mut f: impl FnMut(&[u32]) -> Result<Point>,
    ) -> Result<Tree> {
        if height == 0 || height > window.len() {
            return Err(Error::EmptyDomain(format!(
                "no height-{height} tree over a window of size {}",
                window.len()
            )));
        }
        let mut nodes = BTreeMap::new();
        for (j, level) in prefixes(&window, height).into_iter().enumerate() {
            if j == 0 && !rooted {
                continue;
            }
            for tuple in level {
                let p = f(&tuple)?;
                space.check_point(&p)?;
                nodes.insert(tuple, p);
            }
        }
        Ok(Tree {
            height,
            window,
            rooted,
            space,
            nodes,
        })
    }

    fn coded(
        window: Window,
        height: usize,
        space: Space,
        code: fn(u32, usize) -> Vec<f64>,
    ) -> Result<Tree> {
        space.require_normed("a coded tree")?;
        let dim = space.dim();
        if window.max() as usize > dim {
            return Err(Error::contract(format!(
                "coding {window} needs dimension >= {}",
                window.max()
            )));
        }
        Tree::from_fn(window, height, space, false, |t| {
            Ok(Point::Vector(code(t[t.len() - 1], dim)))
        })
    }

    /// `u(n_1, ..., n_j) = e_{n_j}`.
    pub fn disjoint_coded(window: Window, height: usize, space: Space) -> Result<Tree> {
        Tree::coded(window, height, space, |n, dim| {
            let mut v = vec![0.0; dim];
            v[n as usize - 1] = 1.0;
            v
        })
    }

    /// `u(n_1, ..., n_j) = s_{n_j} = e_1 + ... + e_{n_j}`.
    pub fn summing_coded(window: Window, height: usize, space: Space) -> Result<Tree> {
        Tree::coded(window, height, space, |n, dim| {
            (1..=dim as u32)
                .map(|x| if x <= n { 1.0 } else { 0.0 })
                .collect()
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn is_rooted(&self) -> bool {
        self.rooted
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&[u32], &Point)> {
        self.nodes.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn get(&self, tuple: &[u32]) -> Result<&Point> {
        self.nodes
            .get(tuple)
            .ok_or_else(|| Error::contract(format!("{tuple:?} is not a node of the tree")))
    }

    pub fn root(&self) -> Option<&Point> {
        self.nodes.get(&Vec::new())
    }

    /// Every node has norm 1 within [`UNIT_TOLERANCE`].
    pub fn is_normalized(&self) -> bool {
        self.space.is_normed()
            && self
                .nodes
                .values()
                .all(|p| (self.space.norm(p).unwrap_or(f64::NAN) - 1.0).abs() <= UNIT_TOLERANCE)
    }

    fn same_frame(&self, other: &Tree) -> Result<()> {
        if self.window != other.window {
            return Err(Error::contract("trees live over different windows"));
        }
        if self.space != other.space {
            return Err(Error::contract("trees live in different spaces"));
        }
        Ok(())
    }
}

/// The `P`-intertwining of `s` (height `|P|`) and `t` (height `k - |P|`).
pub fn intertwine(s: &Tree, t: &Tree, p: &Cut) -> Result<Tree> {
    s.same_frame(t)?;
    if s.height != p.l() || t.height != p.k() - p.l() {
        return Err(Error::contract(format!(
            "heights {} and {} do not match a cut of size {} in {{1..{}}}",
            s.height,
            t.height,
            p.l(),
            p.k()
        )));
    }
    Tree::from_fn(s.window.clone(), p.k(), s.space.clone(), false, |n| {
        let j = n.len();
        let picked = |inside: bool| -> Vec<u32> {
            (1..=j)
                .filter(|&i| p.contains(i) == inside)
                .map(|i| n[i - 1])
                .collect()
        };
        if p.contains(j) {
            s.get(&picked(true)).cloned()
        } else {
            t.get(&picked(false)).cloned()
        }
    })
}

/// `[u(n_1), u(n_1, n_2), ..., u(n_1, ..., n_h)]`.
pub fn branch(u: &Tree, n: &KSubset) -> Result<Vec<Point>> {
    if n.k() != u.height {
        return Err(Error::contract(format!(
            "branch index {n} does not have length {}",
            u.height
        )));
    }
    if !u.window.contains_subset(n) {
        return Err(Error::contract(format!("{n} is not inside {}", u.window)));
    }
    let s = n.as_slice();
    (1..=s.len()).map(|j| u.get(&s[..j]).cloned()).collect()
}

fn check_coeffs(u: &Tree, coeffs: &[f64]) -> Result<()> {
    u.space.require_normed("branch norms")?;
    if coeffs.len() != u.height {
        return Err(Error::contract(format!(
            "{} coefficients for a tree of height {}",
            coeffs.len(),
            u.height
        )));
    }
    Ok(())
}

/// Min and max over all branches of `||base + sum_i coeffs_i u(n_1..n_i)||`.
pub fn branch_norm_range(u: &Tree, coeffs: &[f64], base: Option<&Point>) -> Result<(f64, f64)> {
    check_coeffs(u, coeffs)?;
    let dim = u.space.dim();
    let base: Vec<f64> = match base {
        Some(b) => {
            u.space.check_point(b)?;
            b.coords().unwrap().to_vec()
        }
        None => vec![0.0; dim],
    };
    let entries = u.window.as_slice();
    let combos: Vec<Vec<usize>> = Combinations::new(entries.len(), u.height).collect();
    let range = combos
        .par_iter()
        .map(|c| {
            let n: Vec<u32> = c.iter().map(|&i| entries[i]).collect();
            let mut acc = base.clone();
            for (j, &a) in coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let node = u.nodes[&n[..=j]].coords().unwrap();
                acc.iter_mut().zip(node).for_each(|(x, y)| *x += a * y);
            }
            let v = u.space.norm_of(&acc).unwrap();
            (v, v)
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    Ok(range)
}

/// `max(0, max_branch ||sum_{i in P} a_i u|| - max_branch ||sum_i a_i u||)`.
pub fn projection_defect(u: &Tree, coeffs: &[f64], p: &Cut) -> Result<f64> {
    check_coeffs(u, coeffs)?;
    if p.k() != u.height {
        return Err(Error::contract(format!(
            "cut of {{1..{}}} for a tree of height {}",
            p.k(),
            u.height
        )));
    }
    let projected: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &a)| if p.contains(i + 1) { a } else { 0.0 })
        .collect();
    let (_, full) = branch_norm_range(u, coeffs, None)?;
    let (_, proj) = branch_norm_range(u, &projected, None)?;
    Ok((proj - full).max(0.0))
}

/// Surrogate derivatives: `levels[i]` maps each admissible `i`-tuple to
/// `∂^{k-i} f`, the iterated mean of `f` over admissible tails. `levels[k]` is `f`.
pub type Derivatives = Vec<BTreeMap<Vec<u32>, Vec<f64>>>;

pub fn derivatives(f: &PointMap) -> Result<Derivatives> {
    f.target().require_normed("tree decomposition")?;
    let k = f.k();
    let mut levels: Derivatives = vec![BTreeMap::new(); k + 1];
    for r in 0..f.len() {
        let n = f.vertex(r);
        levels[k].insert(
            n.as_slice().to_vec(),
            f.image_at(r).coords().unwrap().to_vec(),
        );
    }
    for i in (0..k).rev() {
        let (lower, upper) = levels.split_at_mut(i + 1);
        // group children by their length-i prefix, in increasing order
        let mut sums: BTreeMap<Vec<u32>, (Vec<f64>, usize)> = BTreeMap::new();
        for (tuple, v) in upper[0].iter() {
            let entry = sums
                .entry(tuple[..i].to_vec())
                .or_insert_with(|| (vec![0.0; v.len()], 0));
            entry.0.iter_mut().zip(v).for_each(|(a, b)| *a += b);
            entry.1 += 1;
        }
        if sums.is_empty() {
            return Err(Error::EmptyDomain("empty averaging set".into()));
        }
        for (prefix, (sum, count)) in sums {
            lower[i].insert(prefix, sum.into_iter().map(|x| x / count as f64).collect());
        }
    }
    Ok(levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub a0: f64,
    /// `a_1, ..., a_k`.
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    pub tree: Tree,
    /// `a(n_1, ..., n_i)` for every admissible non-empty prefix.
    #[serde(skip)]
    pub node_coefficients: BTreeMap<Vec<u32>, f64>,
    /// `||f(n) - a_0 t() - sum_i a_i t(n_1..n_i)||` per domain tuple.
    pub residuals: Vec<(KSubset, f64)>,
    pub residual_stats: ResidualStats,
    /// Largest reconstruction error using the node coefficients `a(.)`.
    pub node_residual_max: f64,
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Telescoping decomposition `f(n) ~ sum_i a_i t(n_1..n_i)` with averaged
/// coefficients, plus the exact reconstruction with node coefficients.
pub fn tree_decomposition(f: &PointMap) -> Result<DecompositionResult> {
    let levels = derivatives(f)?;
    let space = f.target().clone();
    let dim = space.dim();
    let k = f.k();
    let norm = |v: &[f64]| space.norm_of(v).unwrap();
    let fallback = Point::basis(dim, 1);

    let root = &levels[0][&Vec::new()];
    let a0 = norm(root);
    let mut node_coefficients = BTreeMap::new();
    let mut nodes: BTreeMap<Vec<u32>, Point> = BTreeMap::new();
    nodes.insert(
        vec![],
        if a0 > 0.0 {
            Point::Vector(root.iter().map(|x| x / a0).collect())
        } else {
            fallback.clone()
        },
    );
    for i in 1..=k {
        for (tuple, v) in &levels[i] {
            let diff = sub(v, &levels[i - 1][&tuple[..i - 1]]);
            let a = norm(&diff);
            node_coefficients.insert(tuple.clone(), a);
            let t = if a > 0.0 {
                Point::Vector(diff.into_iter().map(|x| x / a).collect())
            } else {
                fallback.clone()
            };
            nodes.insert(tuple.clone(), t);
        }
    }

    // a_i: iterated mean of a(n_1..n_i) over n_i, then n_{i-1}, ..., then n_1
    let coefficients: Vec<f64> = (1..=k)
        .map(|i| {
            let mut current: BTreeMap<Vec<u32>, f64> = node_coefficients
                .iter()
                .filter(|(t, _)| t.len() == i)
                .map(|(t, a)| (t.clone(), *a))
                .collect();
            for j in (0..i).rev() {
                let mut sums: BTreeMap<Vec<u32>, (f64, usize)> = BTreeMap::new();
                for (t, a) in &current {
                    let e = sums.entry(t[..j].to_vec()).or_insert((0.0, 0));
                    e.0 += a;
                    e.1 += 1;
                }
                current = sums
                    .into_iter()
                    .map(|(t, (s, c))| (t, s / c as f64))
                    .collect();
            }
            current[&Vec::new()]
        })
        .collect();

    let tree = Tree {
        height: k,
        window: f.window().clone(),
        rooted: true,
        space: space.clone(),
        nodes,
    };

    let mut residuals = Vec::with_capacity(f.len());
    let mut node_residual_max = 0.0f64;
    for r in 0..f.len() {
        let n = f.vertex(r);
        let s = n.as_slice();
        let value = f.image_at(r).coords().unwrap();
        let root_t = tree.nodes[&Vec::new()].coords().unwrap();
        let mut exact: Vec<f64> = value.iter().zip(root_t).map(|(x, t)| x - a0 * t).collect();
        let mut averaged = exact.clone();
        for i in 1..=k {
            let t = tree.nodes[&s[..i]].coords().unwrap();
            let a_node = node_coefficients[&s[..i]];
            let a_avg = coefficients[i - 1];
            for c in 0..dim {
                exact[c] -= a_node * t[c];
                averaged[c] -= a_avg * t[c];
            }
        }
        node_residual_max = node_residual_max.max(norm(&exact));
        residuals.push((n, norm(&averaged)));
    }
    let values = residuals.iter().map(|r| r.1);
    let residual_stats = ResidualStats {
        max: values.clone().fold(0.0, f64::max),
        mean: values.clone().sum::<f64>() / residuals.len() as f64,
        min: values.fold(f64::INFINITY, f64::min),
    };
    Ok(DecompositionResult {
        a0,
        coefficients,
        tree,
        node_coefficients,
        residuals,
        residual_stats,
        node_residual_max,
    })
}

/// Largest `||f(n) - ∂^k f - sum_i (∂^{k-i} f(n_1..n_i) - ∂^{k-i+1} f(n_1..n_{i-1}))||`.
pub fn telescoping_defect(f: &PointMap, levels: &Derivatives) -> Result<f64> {
    let k = f.k();
    if levels.len() != k + 1 {
        return Err(Error::contract("derivative family has the wrong depth"));
    }
    let space = f.target();
    let mut worst = 0.0f64;
    for r in 0..f.len() {
        let n = f.vertex(r);
        let s = n.as_slice();
        let mut acc = sub(f.image_at(r).coords().unwrap(), &levels[0][&Vec::new()]);
        for i in 1..=k {
            let step = sub(&levels[i][&s[..i]], &levels[i - 1][&s[..i - 1]]);
            acc.iter_mut().zip(step).for_each(|(a, d)| *a -= d);
        }
        worst = worst.max(space.norm_of(&acc)?);
    }
    Ok(worst)
}
