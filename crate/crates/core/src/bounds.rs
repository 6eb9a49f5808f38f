//! Structural statistics of directed trees and symbolic bound profiles.
//!
//! A bound profile is a list of factors `base^{O(scale)}` with the constants
//! in the exponents left unspecified. Profiles are compared factor by factor
//! and never evaluated numerically.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graphs::{classify_tree, count_non_lollipops, DiGraph, TreeKind, VertexId};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("graph has no directed s-t path")]
    NoStPath,
    #[error("graph is not a directed tree")]
    NotATree,
    #[error("graph is not a flow-out tree rooted at s")]
    NotFlowOut,
    #[error("unknown theorem tag `{0}`")]
    UnknownTheorem(String),
    #[error("theorem {theorem} cannot be evaluated from {input} inputs")]
    Mismatch { theorem: Theorem, input: &'static str },
}

/// `⌈lg lg ℓ⌉`, the number of entries in the `c` arrays. Zero when `ℓ ≤ 2`.
pub fn lglg_ceil(ell: usize) -> usize {
    let mut j = 0;
    while j < 6 && (1u128 << (1u32 << j)) < ell as u128 {
        j += 1;
    }
    j
}

/// `2^{2^i}`, saturating at `u64::MAX`.
pub fn double_exp(i: usize) -> u64 {
    if i >= 6 {
        u64::MAX
    } else {
        let e = 1u32 << i;
        if e >= 64 {
            u64::MAX
        } else {
            1u64 << e
        }
    }
}

/// Per-vertex distances and descendant maxima of a tree with an s-t path.
#[derive(Clone, Debug)]
pub(crate) struct TreeLayout {
    pub ell: usize,
    pub dist_s: Vec<Option<usize>>,
    pub dist_t: Vec<Option<usize>>,
    pub on_path: Vec<bool>,
    pub in_hs: Vec<bool>,
    pub in_ht: Vec<bool>,
    /// Reflexive maximum distance from `s` over descendants (H_s only).
    pub max_desc: Vec<usize>,
    /// Reflexive maximum distance to `t` over ancestors (H_t only).
    pub max_anc: Vec<usize>,
    /// The s-t path, from `s` to `t`.
    pub path: Vec<VertexId>,
}

fn bfs_dist(adj: &[Vec<VertexId>], from: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[from.index()] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u.index()].unwrap_or(0);
        for &w in &adj[u.index()] {
            if dist[w.index()].is_none() {
                dist[w.index()] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

impl TreeLayout {
    pub fn new(g: &DiGraph) -> Result<Self, BoundsError> {
        if !classify_tree(g).is_tree() {
            return Err(BoundsError::NotATree);
        }
        let (out, inn) = g.adjacency();
        let dist_s = bfs_dist(&out, VertexId::S);
        let dist_t = bfs_dist(&inn, VertexId::T);
        let ell = dist_s[VertexId::T.index()].ok_or(BoundsError::NoStPath)?;
        let n = g.vertex_count();
        let on_path: Vec<bool> = (0..n).map(|i| dist_s[i].is_some() && dist_t[i].is_some()).collect();
        let in_hs: Vec<bool> = (0..n).map(|i| dist_s[i].is_some() && !on_path[i]).collect();
        let in_ht: Vec<bool> = (0..n).map(|i| dist_t[i].is_some() && !on_path[i]).collect();

        let mut path: Vec<VertexId> = g.vertices().filter(|v| on_path[v.index()]).collect();
        path.sort_by_key(|v| dist_s[v.index()]);

        let mut max_desc = vec![0; n];
        let mut hs: Vec<usize> = (0..n).filter(|&i| in_hs[i]).collect();
        hs.sort_by_key(|&i| std::cmp::Reverse(dist_s[i]));
        for &v in &hs {
            let mut m = dist_s[v].unwrap_or(0);
            for &w in &out[v] {
                m = m.max(max_desc[w.index()]);
            }
            max_desc[v] = m;
        }
        let mut max_anc = vec![0; n];
        let mut ht: Vec<usize> = (0..n).filter(|&i| in_ht[i]).collect();
        ht.sort_by_key(|&i| std::cmp::Reverse(dist_t[i]));
        for &v in &ht {
            let mut m = dist_t[v].unwrap_or(0);
            for &w in &inn[v] {
                m = m.max(max_anc[w.index()]);
            }
            max_anc[v] = m;
        }
        Ok(TreeLayout { ell, dist_s, dist_t, on_path, in_hs, in_ht, max_desc, max_anc, path })
    }
}

/// Histogram of a value over a vertex subset, indexed by value.
fn histogram(values: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut d = Vec::new();
    for x in values {
        if d.len() <= x {
            d.resize(x + 1, 0);
        }
        d[x] += 1;
    }
    d
}

/// `c_1 = first`, `c_i = Σ_{j ≥ 2^{2^i}} d_j` for `2 ≤ i ≤ len`.
fn c_array(d: &[usize], first: usize, len: usize) -> Vec<usize> {
    (1..=len)
        .map(|i| {
            if i == 1 {
                first
            } else {
                let lo = double_exp(i);
                d.iter().enumerate().filter(|&(j, _)| j as u64 >= lo).map(|(_, &x)| x).sum()
            }
        })
        .collect()
}

/// Statistics of a directed tree with an s-t path.
///
/// `d_s[i]` counts off-path vertices reachable from `s` whose descendants
/// (the vertex itself included) reach at most distance `i` from `s`, with
/// equality attained. `d_t` is the mirror image towards `t`. The `c`
/// arrays are 1-indexed in the usual notation: `c_s[0]` is `c_1^s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureStats {
    pub n: usize,
    pub ell: usize,
    pub d_s: Vec<usize>,
    pub d_t: Vec<usize>,
    pub c_s: Vec<usize>,
    pub c_t: Vec<usize>,
    pub d_bar: usize,
    pub c_bar: usize,
    pub non_lollipops: usize,
    /// Off-path vertices reachable from `s`.
    pub h_s: Vec<String>,
    /// Off-path vertices that reach `t`.
    pub h_t: Vec<String>,
    /// The s-t path.
    pub path: Vec<String>,
}

impl StructureStats {
    /// `c_i^s + c_i^t` for `1 ≤ i ≤ ⌈lg lg ℓ⌉`.
    pub fn c_sum(&self, i: usize) -> usize {
        self.c_s[i - 1] + self.c_t[i - 1]
    }

    /// Number of defined `c` indices.
    pub fn c_len(&self) -> usize {
        self.c_s.len()
    }

    /// Whether `c̄ ≤ c_i^s + c_i^t` holds at index `i`. This is guaranteed
    /// only when `2^{2^i} ≤ ℓ + 1`; a far vertex may otherwise be counted
    /// by `c̄` but not by `c_i`.
    pub fn c_bar_within(&self, i: usize) -> bool {
        self.c_bar <= self.c_sum(i)
    }
}

pub fn compute_stats(g: &DiGraph) -> Result<StructureStats, BoundsError> {
    let lay = TreeLayout::new(g)?;
    let n = g.vertex_count();
    let hs: Vec<usize> = (0..n).filter(|&i| lay.in_hs[i]).collect();
    let ht: Vec<usize> = (0..n).filter(|&i| lay.in_ht[i]).collect();
    let d_s = histogram(hs.iter().map(|&v| lay.max_desc[v]));
    let d_t = histogram(ht.iter().map(|&v| lay.max_anc[v]));
    let len = lglg_ceil(lay.ell);
    let c_s = c_array(&d_s, hs.len(), len);
    let c_t = c_array(&d_t, ht.len(), len);
    let c_bar = hs.iter().filter(|&&v| lay.dist_s[v].unwrap_or(0) > lay.ell).count()
        + ht.iter().filter(|&&v| lay.dist_t[v].unwrap_or(0) > lay.ell).count();
    let name = |i: usize| g.name(VertexId(i as u32)).to_string();
    Ok(StructureStats {
        n,
        ell: lay.ell,
        d_bar: n - (lay.ell + 1) - hs.len() - ht.len(),
        c_bar,
        non_lollipops: count_non_lollipops(g),
        h_s: hs.iter().map(|&v| name(v)).collect(),
        h_t: ht.iter().map(|&v| name(v)).collect(),
        path: lay.path.iter().map(|v| g.name(*v).to_string()).collect(),
        d_s,
        d_t,
        c_s,
        c_t,
    })
}

/// Statistics of a flow-out tree rooted at `s`. Every vertex counts,
/// including `s`, `t` and the path, so `c[0] = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowOutStats {
    pub n: usize,
    pub ell: usize,
    /// `d[i]`: vertices whose descendants reach at most distance `i`.
    pub d: Vec<usize>,
    /// `c[i - 1]` is `c_i`.
    pub c: Vec<usize>,
    /// Reflexive descendant maximum per vertex, by vertex id.
    pub max_desc: Vec<usize>,
}

impl FlowOutStats {
    /// `c_i` minus `c_i^s` from the general statistics, index by index. The
    /// two differ by the path vertices, which only the flow-out count sees.
    pub fn difference(&self, general: &StructureStats) -> Vec<i64> {
        self.c.iter().zip(&general.c_s).map(|(&a, &b)| a as i64 - b as i64).collect()
    }
}

pub fn flowout_c(g: &DiGraph) -> Result<FlowOutStats, BoundsError> {
    if classify_tree(g) != TreeKind::FlowOut(VertexId::S) {
        return Err(BoundsError::NotFlowOut);
    }
    let (out, _) = g.adjacency();
    let dist = bfs_dist(&out, VertexId::S);
    let ell = dist[VertexId::T.index()].ok_or(BoundsError::NoStPath)?;
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(dist[i]));
    let mut max_desc = vec![0; n];
    for &v in &order {
        let mut m = dist[v].unwrap_or(0);
        for &w in &out[v] {
            m = m.max(max_desc[w.index()]);
        }
        max_desc[v] = m;
    }
    let d = histogram(max_desc.iter().copied());
    let c = c_array(&d, n, lglg_ceil(ell));
    Ok(FlowOutStats { n, ell, d, c, max_desc })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Exponent scale of a factor.
///
/// Order: `One` is below everything. `LgLgEll < LgEll < LgN` (since
/// `ℓ < n`). `TwoPow(i) ≤ TwoPow(j)` iff `i ≤ j`. The `2^i` scales are
/// otherwise incomparable with the logarithmic ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "scale", content = "i", rename_all = "snake_case")]
pub enum Scale {
    One,
    LgLgEll,
    LgEll,
    LgN,
    TwoPow(u32),
}

impl Scale {
    fn log_rank(self) -> Option<u8> {
        match self {
            Scale::LgLgEll => Some(1),
            Scale::LgEll => Some(2),
            Scale::LgN => Some(3),
            _ => None,
        }
    }

    /// `self ≤ other` in the scale order.
    pub fn le(self, other: Scale) -> bool {
        match (self, other) {
            (Scale::One, _) => true,
            (Scale::TwoPow(i), Scale::TwoPow(j)) => i <= j,
            (a, b) => match (a.log_rank(), b.log_rank()) {
                (Some(x), Some(y)) => x <= y,
                _ => false,
            },
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::One => f.write_str("1"),
            Scale::LgLgEll => f.write_str("lg lg ell"),
            Scale::LgEll => f.write_str("lg ell"),
            Scale::LgN => f.write_str("lg n"),
            Scale::TwoPow(i) => write!(f, "2^{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub base: u64,
    pub scale: Scale,
}

impl Factor {
    pub fn new(label: impl Into<String>, base: usize, scale: Scale) -> Self {
        Factor { label: label.into(), base: base as u64, scale }
    }

    /// Symbolic form such as `(ell+dbar)^{lg ell}`.
    pub fn symbolic(&self) -> String {
        format!("({})^{{{}}}", self.label, self.scale)
    }

    fn le(&self, other: &Factor) -> bool {
        self.base <= other.base && self.scale.le(other.scale)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "T3.1")]
    T3_1,
    #[serde(rename = "T3.2")]
    T3_2,
    #[serde(rename = "T3.3")]
    T3_3,
    #[serde(rename = "T3.4")]
    T3_4,
    #[serde(rename = "T5.1")]
    T5_1,
    #[serde(rename = "T5.4")]
    T5_4,
}

impl Theorem {
    pub const ALL: [Theorem; 6] =
        [Theorem::T3_1, Theorem::T3_2, Theorem::T3_3, Theorem::T3_4, Theorem::T5_1, Theorem::T5_4];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::T3_1 => "T3.1",
            Theorem::T3_2 => "T3.2",
            Theorem::T3_3 => "T3.3",
            Theorem::T3_4 => "T3.4",
            Theorem::T5_1 => "T5.1",
            Theorem::T5_4 => "T5.4",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = BoundsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| BoundsError::UnknownTheorem(s.to_string()))
    }
}

/// A symbolic bound: the product of `base^{Θ(scale)}` over its factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundProfile {
    pub theorem: Theorem,
    pub side: Side,
    pub factors: Vec<Factor>,
}

impl BoundProfile {
    /// Factors that matter for comparison: bases above 1, deduplicated,
    /// and only those not majorized by another factor of the same profile.
    /// Dropping a majorized factor changes the product by at most a
    /// constant in the exponent.
    pub fn normalized(&self) -> Vec<Factor> {
        let mut fs: Vec<Factor> = Vec::new();
        for f in self.factors.iter().filter(|f| f.base > 1) {
            if !fs.iter().any(|g| g.base == f.base && g.scale == f.scale) {
                fs.push(f.clone());
            }
        }
        let keep: Vec<bool> = fs
            .iter()
            .enumerate()
            .map(|(i, f)| !fs.iter().enumerate().any(|(j, g)| j != i && f.le(g)))
            .collect();
        fs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(f, _)| f).collect()
    }

    /// The factor list in symbolic form, joined by ` * `.
    pub fn symbolic(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors.iter().map(Factor::symbolic).collect::<Vec<_>>().join(" * ")
    }
}

impl fmt::Display for BoundProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        write!(f, "{} {side}: ", self.theorem)?;
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("({} = {})^{{{}}}", x.label, x.base, x.scale))
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSet {
    pub theorem: Theorem,
    pub lower: Option<BoundProfile>,
    pub upper: Option<BoundProfile>,
}

/// What a profile is computed from.
#[derive(Clone, Copy, Debug)]
pub enum ProfileInput<'a> {
    Stats(&'a StructureStats),
    FlowOut(&'a FlowOutStats),
    Params { n: usize, k: usize, ell: usize },
}

impl ProfileInput<'_> {
    fn kind(&self) -> &'static str {
        match self {
            ProfileInput::Stats(_) => "tree statistics",
            ProfileInput::FlowOut(_) => "flow-out statistics",
            ProfileInput::Params { .. } => "(n, k, ell)",
        }
    }

    fn n_ell(&self) -> (usize, usize) {
        match *self {
            ProfileInput::Stats(s) => (s.n, s.ell),
            ProfileInput::FlowOut(f) => (f.n, f.ell),
            ProfileInput::Params { n, ell, .. } => (n, ell),
        }
    }
}

/// Index `i` maximizing `c_i^{2^i}`, i.e. `2^i · lg c_i`; ties go to the
/// smallest `i`. `None` when every `c_i ≤ 1`.
fn argmax_pow(c: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (k, &x) in c.iter().enumerate() {
        if x <= 1 {
            continue;
        }
        let i = k + 1;
        let score = (x as f64).log2() * (1u64 << i.min(62)) as f64;
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((i, score));
        }
    }
    best.map(|(i, _)| i)
}

pub fn profile(theorem: Theorem, input: ProfileInput<'_>) -> Result<ProfileSet, BoundsError> {
    let mismatch = || BoundsError::Mismatch { theorem, input: input.kind() };
    let both = |factors: Vec<Factor>| ProfileSet {
        theorem,
        lower: Some(BoundProfile { theorem, side: Side::Lower, factors: factors.clone() }),
        upper: Some(BoundProfile { theorem, side: Side::Upper, factors }),
    };
    let (n, _) = input.n_ell();
    match theorem {
        Theorem::T3_1 => Ok(both(vec![Factor::new("n", n, Scale::LgN)])),
        Theorem::T3_2 | Theorem::T3_3 => Ok(both(vec![Factor::new("n", n, Scale::LgEll)])),
        Theorem::T3_4 => {
            let k = match input {
                ProfileInput::Stats(s) => s.non_lollipops,
                ProfileInput::Params { k, .. } => k,
                ProfileInput::FlowOut(_) => return Err(mismatch()),
            };
            let factors = vec![Factor::new("n", n, Scale::One), Factor::new("k", k, Scale::LgEll)];
            Ok(ProfileSet {
                theorem,
                lower: None,
                upper: Some(BoundProfile { theorem, side: Side::Upper, factors }),
            })
        }
        Theorem::T5_1 => {
            let ProfileInput::Stats(s) = input else { return Err(mismatch()) };
            let main = Factor::new("ell+dbar", s.ell + s.d_bar, Scale::LgEll);
            let sums: Vec<usize> = (1..=s.c_len()).map(|i| s.c_sum(i)).collect();
            let mut lower = vec![main.clone()];
            if let Some(i) = argmax_pow(&sums) {
                lower.push(Factor::new(format!("c_{i}^s+c_{i}^t"), sums[i - 1], Scale::TwoPow(i as u32)));
            }
            let mut upper = vec![Factor::new("n", s.n, Scale::LgLgEll), main];
            for (k, &x) in sums.iter().enumerate() {
                let i = k + 1;
                upper.push(Factor::new(format!("c_{i}^s+c_{i}^t"), x, Scale::TwoPow(i as u32)));
            }
            Ok(ProfileSet {
                theorem,
                lower: Some(BoundProfile { theorem, side: Side::Lower, factors: lower }),
                upper: Some(BoundProfile { theorem, side: Side::Upper, factors: upper }),
            })
        }
        Theorem::T5_4 => {
            let ProfileInput::FlowOut(f) = input else { return Err(mismatch()) };
            let mut lower = vec![Factor::new("ell", f.ell, Scale::LgEll)];
            if let Some(i) = argmax_pow(&f.c) {
                lower.push(Factor::new(format!("c_{i}"), f.c[i - 1], Scale::TwoPow(i as u32)));
            }
            Ok(ProfileSet {
                theorem,
                lower: Some(BoundProfile { theorem, side: Side::Lower, factors: lower }),
                upper: None,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    Dominates,
    Dominated,
    Incomparable,
}

fn majorizes(a: &[Factor], b: &[Factor]) -> bool {
    b.iter().all(|f| a.iter().any(|g| f.le(g)))
}

/// Factor-wise dominance: `p1` dominates `p2` when every factor of `p2` is
/// majorized by some factor of `p1` (base and scale both at least as
/// large). Mutual dominance means equal normal forms and reports
/// `Dominates`.
pub fn compare_profiles(p1: &BoundProfile, p2: &BoundProfile) -> Dominance {
    let a = p1.normalized();
    let b = p2.normalized();
    if majorizes(&a, &b) {
        Dominance::Dominates
    } else if majorizes(&b, &a) {
        Dominance::Dominated
    } else {
        Dominance::Incomparable
    }
}
