//! k-subsets of finite windows, cuts, and order-preserving permutations.
//!
//! Subsets are stored as their (1-based) integer entries. Positions inside a
//! window are 0-based internally; the lexicographic rank of a subset is the
//! rank of its position tuple among all `C(|window|, k)` position tuples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Strictly increasing tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct KSubset(Vec<u32>);

impl KSubset {
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::contract("a k-subset needs at least one element"));
        }
        if elements[0] == 0 {
            return Err(Error::contract("k-subset entries must be positive"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::contract(format!(
                "k-subset entries must be strictly increasing: {elements:?}"
            )));
        }
        Ok(KSubset(elements))
    }

    /// Builds from entries already known to be valid.
    pub(crate) fn from_sorted(elements: Vec<u32>) -> Self {
        debug_assert!(KSubset::new(elements.clone()).is_ok());
        KSubset(elements)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn first(&self) -> u32 {
        self.0[0]
    }

    pub fn last(&self) -> u32 {
        self.0[self.0.len() - 1]
    }

    /// `self < other` in the block order: every entry of `self` is below every entry of `other`.
    pub fn is_below(&self, other: &KSubset) -> bool {
        self.last() < other.first()
    }
}

impl TryFrom<Vec<u32>> for KSubset {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        KSubset::new(v)
    }
}

impl From<KSubset> for Vec<u32> {
    fn from(s: KSubset) -> Self {
        s.0
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Finite, non-empty, strictly increasing set of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Window(Vec<u32>);

impl Window {
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyDomain("window is empty".into()));
        }
        if elements[0] == 0 {
            return Err(Error::contract("window entries must be positive"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::contract(format!(
                "window entries must be strictly increasing: {elements:?}"
            )));
        }
        Ok(Window(elements))
    }

    /// The window `{lo, lo+1, ..., hi}`.
    pub fn range(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyDomain(format!("range {lo}..{hi} is empty")));
        }
        Window::new((lo..=hi).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn max(&self) -> u32 {
        self.0[self.0.len() - 1]
    }

    /// 0-based position of `x` in the window.
    pub fn position(&self, x: u32) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.position(x).is_some()
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn contains_subset(&self, s: &KSubset) -> bool {
        s.as_slice().iter().all(|&x| self.contains(x))
    }

    /// Positions of the entries of `s`, or `None` if some entry is outside.
    pub fn positions_of(&self, s: &[u32]) -> Option<Vec<usize>> {
        s.iter().map(|&x| self.position(x)).collect()
    }

    /// The subwindow picked out by increasing positions.
    pub fn select(&self, positions: &[usize]) -> Window {
        Window(positions.iter().map(|&p| self.0[p]).collect())
    }

    pub fn subset_at(&self, positions: &[usize]) -> KSubset {
        KSubset(positions.iter().map(|&p| self.0[p]).collect())
    }
}

impl TryFrom<Vec<u32>> for Window {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Window::new(v)
    }
}

impl From<Window> for Vec<u32> {
    fn from(w: Window) -> Self {
        w.0
    }
}

/// Accepts `a..b` (inclusive) or a comma list `2,4,6`.
impl FromStr for Window {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: u32 = lo
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad window start in {s:?}")))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad window end in {s:?}")))?;
            return Window::range(lo, hi);
        }
        let elements = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad window entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Window::new(elements)
    }
}

/// Canonical form: `a..b` for contiguous windows, otherwise a comma list.
impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let contiguous = self.0.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous && self.0.len() > 1 {
            write!(f, "{}..{}", self.0[0], self.max())
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Lexicographic iterator over increasing `k`-tuples of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        // rightmost slot that can still move
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Lexicographic ranking of increasing `k`-tuples of `0..n`.
#[derive(Debug, Clone)]
pub struct ComboIndex {
    n: usize,
    k: usize,
    count: usize,
    // choose[a][b] = C(a, b) for a <= n, b <= k
    choose: Vec<Vec<usize>>,
}

impl ComboIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let count = binomial(n as u64, k as u64);
        if count > usize::MAX as u128 / 2 {
            return Err(Error::ResourceLimit {
                what: format!("ranking [{n}]^{k}"),
                estimate: count,
                cap: usize::MAX as u128 / 2,
            });
        }
        let choose = (0..=n)
            .map(|a| {
                (0..=k)
                    .map(|b| binomial(a as u64, b as u64) as usize)
                    .collect()
            })
            .collect();
        Ok(ComboIndex {
            n,
            k,
            count: count as usize,
            choose,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Rank of an increasing position tuple (caller guarantees validity).
    pub fn rank(&self, positions: &[usize]) -> usize {
        debug_assert_eq!(positions.len(), self.k);
        let mut r = 0;
        let mut prev = 0;
        for (i, &c) in positions.iter().enumerate() {
            let rem = self.k - 1 - i;
            for j in prev..c {
                r += self.choose[self.n - 1 - j][rem];
            }
            prev = c + 1;
        }
        r
    }

    pub fn unrank(&self, mut rank: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k);
        let mut x = 0;
        for i in 0..self.k {
            let rem = self.k - 1 - i;
            loop {
                let block = self.choose[self.n - 1 - x][rem];
                if rank < block {
                    break;
                }
                rank -= block;
                x += 1;
            }
            out.push(x);
            x += 1;
        }
        out
    }
}

/// All `k`-subsets of `window` in lexicographic order.
pub fn enumerate_ksubsets(window: &Window, k: usize) -> Result<Vec<KSubset>> {
    if k == 0 {
        return Err(Error::contract("k must be positive"));
    }
    if k > window.len() {
        return Err(Error::EmptyDomain(format!(
            "no {k}-subsets of a window of size {}",
            window.len()
        )));
    }
    Ok(Combinations::new(window.len(), k)
        .map(|p| window.subset_at(&p))
        .collect())
}

/// A subset `P` of positions `{1, ..., k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CutRepr", into = "CutRepr")]
pub struct Cut {
    k: usize,
    members: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CutRepr {
    k: usize,
    members: Vec<usize>,
}

impl TryFrom<CutRepr> for Cut {
    type Error = Error;
    fn try_from(r: CutRepr) -> Result<Self> {
        Cut::new(r.k, r.members)
    }
}

impl From<Cut> for CutRepr {
    fn from(c: Cut) -> Self {
        CutRepr {
            k: c.k,
            members: c.members,
        }
    }
}

impl Cut {
    /// Members may be given in any order but must be distinct and lie in `1..=k`.
    pub fn new(k: usize, mut members: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::contract("cut ambient size must be positive"));
        }
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::contract(format!(
                "repeated cut member in {members:?}"
            )));
        }
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > k) {
            return Err(Error::contract(format!("cut member {bad} outside 1..={k}")));
        }
        Ok(Cut { k, members })
    }

    /// `{1, ..., l}`.
    pub fn trivial(k: usize, l: usize) -> Result<Self> {
        Cut::new(k, (1..=l).collect())
    }

    /// `{1, 3, 5, ...}` of size `l` inside `{1, ..., k}`.
    pub fn alternating(k: usize, l: usize) -> Result<Self> {
        Cut::new(k, (0..l).map(|i| 2 * i + 1).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.k).filter(|i| !self.contains(*i)).collect()
    }

    /// `0 < l < k`, as required by the stability conditions.
    pub fn is_proper(&self) -> bool {
        self.l() > 0 && self.l() < self.k
    }

    /// All cuts of size `l` in `{1, ..., k}`, lexicographic.
    pub fn all(k: usize, l: usize) -> Vec<Cut> {
        Combinations::new(k, l)
            .map(|c| Cut {
                k,
                members: c.into_iter().map(|i| i + 1).collect(),
            })
            .collect()
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `((n_i : i in P), (n_i : i in P^c))`.
pub fn split_by_cut(n: &KSubset, cut: &Cut) -> Result<(KSubset, KSubset)> {
    if n.k() != cut.k() {
        return Err(Error::contract(format!(
            "subset of size {} split by a cut of {{1..{}}}",
            n.k(),
            cut.k()
        )));
    }
    if !cut.is_proper() {
        return Err(Error::contract("split needs 0 < l < k"));
    }
    let (inside, outside) = split_slice(n.as_slice(), cut);
    Ok((KSubset::from_sorted(inside), KSubset::from_sorted(outside)))
}

pub(crate) fn split_slice(n: &[u32], cut: &Cut) -> (Vec<u32>, Vec<u32>) {
    let mut inside = Vec::with_capacity(cut.l());
    let mut outside = Vec::with_capacity(cut.k() - cut.l());
    for (i, &x) in n.iter().enumerate() {
        if cut.contains(i + 1) {
            inside.push(x);
        } else {
            outside.push(x);
        }
    }
    (inside, outside)
}

/// Inverse of [`split_by_cut`]: interleave the two parts back by position.
pub fn merge_by_cut(inside: &KSubset, outside: &KSubset, cut: &Cut) -> Result<KSubset> {
    if inside.k() != cut.l() || outside.k() != cut.k() - cut.l() {
        return Err(Error::contract("part sizes do not match the cut"));
    }
    let mut a = inside.as_slice().iter();
    let mut b = outside.as_slice().iter();
    let merged: Vec<u32> = (1..=cut.k())
        .map(|i| {
            if cut.contains(i) {
                *a.next().unwrap()
            } else {
                *b.next().unwrap()
            }
        })
        .collect();
    KSubset::new(merged)
}

/// `pi` in `S_k` increasing on `{1..l}` and on `{l+1..k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderPreservingPermutation {
    k: usize,
    l: usize,
    images: Vec<usize>,
}

impl OrderPreservingPermutation {
    pub fn new(l: usize, images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        if k == 0 || l > k {
            return Err(Error::contract(format!(
                "need 0 <= l <= k, got l={l}, k={k}"
            )));
        }
        let mut seen = vec![false; k + 1];
        for &x in &images {
            if x == 0 || x > k || seen[x] {
                return Err(Error::contract(format!(
                    "{images:?} is not a permutation of 1..={k}"
                )));
            }
            seen[x] = true;
        }
        let increasing = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&images[..l]) || !increasing(&images[l..]) {
            return Err(Error::contract(format!(
                "{images:?} does not preserve order on 1..={l} and {}..={k}",
                l + 1
            )));
        }
        Ok(OrderPreservingPermutation { k, l, images })
    }

    pub fn identity(k: usize, l: usize) -> Result<Self> {
        OrderPreservingPermutation::new(l, (1..=k).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `(pi(1), ..., pi(k))`.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// All order-preserving permutations for the given sizes.
    pub fn all(k: usize, l: usize) -> Vec<OrderPreservingPermutation> {
        Cut::all(k, l).iter().map(cut_to_permutation).collect()
    }
}

/// `{pi(1), ..., pi(l)}`.
pub fn permutation_to_cut(pi: &OrderPreservingPermutation) -> Cut {
    Cut {
        k: pi.k,
        members: pi.images[..pi.l].to_vec(),
    }
}

/// The unique order-preserving permutation whose first `l` images form `cut`.
pub fn cut_to_permutation(cut: &Cut) -> OrderPreservingPermutation {
    let mut images = cut.members.clone();
    images.extend(cut.complement());
    OrderPreservingPermutation {
        k: cut.k,
        l: cut.l(),
        images,
    }
}
