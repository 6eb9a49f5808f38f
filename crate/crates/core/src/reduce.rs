//! Reduction moves between input graphs and replayable certificates.
//!
//! Every move can only lower `m(σ(·))` or keep it equal:
//!
//! * merging a vertex set into `s` (or `t`) never increases `m`;
//! * removing useless edges (into `s`, out of `t`) leaves `m` unchanged;
//! * adding an edge can only decrease `m`, so `AddEdge` is legal in a
//!   certificate claiming `m(σ(start)) ≥ m(σ(end))`. The direction is easy
//!   to get backwards: a certificate never removes a non-useless edge;
//! * replacing `a -> b` with `s -> b` (or with `a -> t`) never increases `m`.
//!
//! A certificate is a start graph, a move list, the digest of the graph
//! after each move and the end graph. [`check_certificate`] replays it and
//! is the only trusted component; the generators below merely propose
//! move lists.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{double_exp, flowout_c, lglg_ceil, BoundsError, TreeLayout};
use crate::dplen::general_p_dp;
use crate::graphs::{classify_tree, DiGraph, DirectedTree, GraphError, TreeKind, VertexId};

/// One step of a reduction. Vertices are referred to by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    MergeIntoS { set: Vec<String> },
    MergeIntoT { set: Vec<String> },
    RemoveUselessEdges,
    AddEdge { from: String, to: String },
    ReplaceEdgeWithSourceS { from: String, to: String },
    ReplaceEdgeWithSinkT { from: String, to: String },
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("merge set is empty")]
    EmptySet,
    #[error("t cannot be merged into s")]
    ContainsT,
    #[error("s cannot be merged into t")]
    ContainsS,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge {from} -> {to} is not present")]
    MissingEdge { from: String, to: String },
    #[error("edge {from} -> {to} is already present")]
    EdgePresent { from: String, to: String },
    #[error("edge {from} -> {to} would be a self-loop")]
    SelfLoop { from: String, to: String },
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("move {index} violates its precondition: {source}")]
    Move { index: usize, source: MoveError },
    #[error("not a directed tree: {0}")]
    NotATree(String),
    #[error("tree shares vertex `{0}` with the host graph")]
    NotDisjoint(String),
    #[error("tree must not touch s or t")]
    TouchesSt,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("index i = {i} outside 1..={max}")]
    IndexOutOfRange { i: usize, max: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl From<GraphError> for ReduceError {
    fn from(e: GraphError) -> Self {
        ReduceError::NotATree(e.to_string())
    }
}

fn vid(g: &DiGraph, name: &str) -> Result<VertexId, MoveError> {
    g.id(name).ok_or_else(|| MoveError::UnknownVertex(name.to_string()))
}

/// Collapses `set` into `target`. Edges inside `set ∪ {target}` are
/// dropped, boundary edges are re-pointed at `target`, the rest is kept.
fn merge(g: &DiGraph, set: &[String], target: VertexId) -> Result<DiGraph, MoveError> {
    if set.is_empty() {
        return Err(MoveError::EmptySet);
    }
    let forbidden = if target == VertexId::S { VertexId::T } else { VertexId::S };
    let mut drop = BTreeSet::new();
    for name in set {
        let v = vid(g, name)?;
        if v == forbidden {
            return Err(if target == VertexId::S { MoveError::ContainsT } else { MoveError::ContainsS });
        }
        if v != target {
            drop.insert(v);
        }
    }
    let mut out = g.without_vertices(&drop);
    let map = |v: VertexId| if drop.contains(&v) { target } else { v };
    for (u, v) in g.edges() {
        if !drop.contains(&u) && !drop.contains(&v) {
            continue;
        }
        let (a, b) = (map(u), map(v));
        if a == b {
            continue;
        }
        let a = out.require(g.name(a)).expect("kept vertex");
        let b = out.require(g.name(b)).expect("kept vertex");
        out.insert_edge(a, b).expect("distinct endpoints");
    }
    Ok(out)
}

fn edge_ids(g: &DiGraph, from: &str, to: &str) -> Result<(VertexId, VertexId), MoveError> {
    Ok((vid(g, from)?, vid(g, to)?))
}

/// Applies one move, checking its precondition.
pub fn apply_move(g: &DiGraph, m: &Move) -> Result<DiGraph, MoveError> {
    match m {
        Move::MergeIntoS { set } => merge(g, set, VertexId::S),
        Move::MergeIntoT { set } => merge(g, set, VertexId::T),
        Move::RemoveUselessEdges => {
            let mut out = g.clone();
            for (u, v) in g.useless_edges() {
                out.remove_edge(u, v);
            }
            Ok(out)
        }
        Move::AddEdge { from, to } => {
            let (u, v) = edge_ids(g, from, to)?;
            if u == v {
                return Err(MoveError::SelfLoop { from: from.clone(), to: to.clone() });
            }
            if g.has_edge(u, v) {
                return Err(MoveError::EdgePresent { from: from.clone(), to: to.clone() });
            }
            let mut out = g.clone();
            out.insert_edge(u, v).expect("checked");
            Ok(out)
        }
        Move::ReplaceEdgeWithSourceS { from, to } | Move::ReplaceEdgeWithSinkT { from, to } => {
            let (u, v) = edge_ids(g, from, to)?;
            if !g.has_edge(u, v) {
                return Err(MoveError::MissingEdge { from: from.clone(), to: to.clone() });
            }
            let (a, b) = if matches!(m, Move::ReplaceEdgeWithSourceS { .. }) { (VertexId::S, v) } else { (u, VertexId::T) };
            if a == b {
                return Err(MoveError::SelfLoop { from: g.name(a).to_string(), to: g.name(b).to_string() });
            }
            let mut out = g.clone();
            out.remove_edge(u, v);
            out.insert_edge(a, b).expect("checked");
            Ok(out)
        }
    }
}

/// Replayable evidence that `m(σ(start)) ≥ m(σ(end))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub start: DiGraph,
    pub moves: Vec<Move>,
    /// Digest of the graph after each move.
    pub fingerprints: Vec<String>,
    pub end: DiGraph,
    #[serde(default)]
    pub metadata: BTreeMap<String, Value>,
}

impl ReductionCertificate {
    pub fn meta_usize(&self, key: &str) -> Option<usize> {
        self.metadata.get(key).and_then(Value::as_u64).map(|x| x as usize)
    }

    pub fn meta_str(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).and_then(Value::as_str)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Precondition,
    Fingerprint,
    FingerprintCount,
    EndMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFailure {
    pub reason: FailureReason,
    pub step: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub failure: Option<CertificateFailure>,
}

impl CertificateCheck {
    fn fail(reason: FailureReason, step: Option<usize>, message: String) -> Self {
        CertificateCheck { valid: false, failure: Some(CertificateFailure { reason, step, message }) }
    }
}

/// Replays the moves and compares every digest and the end graph.
pub fn check_certificate(c: &ReductionCertificate) -> CertificateCheck {
    if c.fingerprints.len() != c.moves.len() {
        return CertificateCheck::fail(
            FailureReason::FingerprintCount,
            None,
            format!("{} moves but {} fingerprints", c.moves.len(), c.fingerprints.len()),
        );
    }
    let mut g = c.start.clone();
    for (i, (m, fp)) in c.moves.iter().zip(&c.fingerprints).enumerate() {
        g = match apply_move(&g, m) {
            Ok(next) => next,
            Err(e) => return CertificateCheck::fail(FailureReason::Precondition, Some(i), e.to_string()),
        };
        if g.digest() != *fp {
            return CertificateCheck::fail(FailureReason::Fingerprint, Some(i), "digest differs after replay".into());
        }
    }
    if g != c.end {
        return CertificateCheck::fail(FailureReason::EndMismatch, None, "replayed graph differs from end".into());
    }
    CertificateCheck { valid: true, failure: None }
}

/// Checks many certificates in parallel.
pub fn check_certificates(cs: &[ReductionCertificate]) -> Vec<CertificateCheck> {
    cs.par_iter().map(check_certificate).collect()
}

/// Records moves against a running graph and emits a certificate.
#[derive(Clone, Debug)]
pub struct Reducer {
    start: DiGraph,
    current: DiGraph,
    moves: Vec<Move>,
    fingerprints: Vec<String>,
    metadata: BTreeMap<String, Value>,
}

impl Reducer {
    pub fn new(start: DiGraph) -> Self {
        Reducer {
            current: start.clone(),
            start,
            moves: Vec::new(),
            fingerprints: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn graph(&self) -> &DiGraph {
        &self.current
    }

    pub fn apply(&mut self, m: Move) -> Result<(), ReduceError> {
        let next = apply_move(&self.current, &m).map_err(|source| ReduceError::Move { index: self.moves.len(), source })?;
        self.fingerprints.push(next.digest());
        self.moves.push(m);
        self.current = next;
        Ok(())
    }

    /// Merges into `s`; an empty set is skipped rather than rejected.
    pub fn merge_into_s(&mut self, set: impl IntoIterator<Item = String>) -> Result<(), ReduceError> {
        let set: Vec<String> = set.into_iter().collect();
        if set.is_empty() {
            return Ok(());
        }
        self.apply(Move::MergeIntoS { set })
    }

    pub fn merge_into_t(&mut self, set: impl IntoIterator<Item = String>) -> Result<(), ReduceError> {
        let set: Vec<String> = set.into_iter().collect();
        if set.is_empty() {
            return Ok(());
        }
        self.apply(Move::MergeIntoT { set })
    }

    pub fn remove_useless(&mut self) -> Result<(), ReduceError> {
        self.apply(Move::RemoveUselessEdges)
    }

    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<(), ReduceError> {
        self.apply(Move::AddEdge { from: from.into(), to: to.into() })
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.metadata.insert(key.to_string(), v);
    }

    pub fn finish(self) -> ReductionCertificate {
        ReductionCertificate {
            start: self.start,
            moves: self.moves,
            fingerprints: self.fingerprints,
            end: self.current,
            metadata: self.metadata,
        }
    }
}

/// Depth labeling of a tree: `d(v) - d(u) = 1` for every edge `u -> v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthLabeling {
    pub depth: BTreeMap<String, i64>,
    pub d_min: i64,
    pub d_max: i64,
}

impl DepthLabeling {
    /// Labels `h` starting from its first vertex at depth 0.
    pub fn of(h: &DirectedTree) -> Self {
        let n = h.len();
        let mut d = vec![i64::MIN; n];
        if n > 0 {
            d[0] = 0;
            let mut queue = VecDeque::from([0u32]);
            while let Some(u) = queue.pop_front() {
                for arc in h.arcs(u) {
                    if d[arc.to as usize] == i64::MIN {
                        d[arc.to as usize] = d[u as usize] + if arc.out { 1 } else { -1 };
                        queue.push_back(arc.to);
                    }
                }
            }
        }
        DepthLabeling {
            depth: (0..n).map(|v| (h.name(v as u32).into_owned(), d[v])).collect(),
            d_min: d.iter().copied().min().unwrap_or(0),
            d_max: d.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn is_consistent(&self, h: &DirectedTree) -> bool {
        h.edges().iter().all(|&(u, v)| self.depth[h.name(v).as_ref()] - self.depth[h.name(u).as_ref()] == 1)
    }
}

/// The tree induced on `names` inside `g`, with names preserved.
fn induced_tree(g: &DiGraph, names: &[String]) -> Result<DirectedTree, ReduceError> {
    let set: BTreeSet<&str> = names.iter().map(String::as_str).collect();
    let mut sub = DiGraph::new();
    for name in names {
        sub.add_vertex(name)?;
    }
    for (u, v) in g.edges() {
        if set.contains(g.name(u)) && set.contains(g.name(v)) {
            let a = sub.require(g.name(u))?;
            let b = sub.require(g.name(v))?;
            sub.add_edge(a, b)?;
        }
    }
    let (tree, _) = DirectedTree::from_digraph(&sub)?;
    if tree.len() != names.len() {
        return Err(ReduceError::NotATree("component lost vertices".into()));
    }
    Ok(tree)
}

/// `⌈√n⌉` exactly.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Result of turning one floating tree into a path.
#[derive(Clone, Debug, Default, Serialize)]
struct PathOutcome {
    path: Vec<String>,
    case: &'static str,
    /// `(c⁺, c⁻)` before and after each straightening step.
    history: Vec<(usize, usize)>,
}

/// Reduces the floating tree on `names` to a directed path of at least
/// `⌈√n_H⌉` vertices. The tree must have no edges to the rest of the graph.
fn sqrt_path_in(red: &mut Reducer, names: &[String]) -> Result<PathOutcome, ReduceError> {
    let h = induced_tree(red.graph(), names)?;
    let n = h.len();
    let need = ceil_sqrt(n);
    let lab = DepthLabeling::of(&h);
    let depth = |v: u32| lab.depth[h.name(v).as_ref()];
    let span = (lab.d_max - lab.d_min + 1) as usize;

    if span < need {
        // Some depth holds at least ⌈√n⌉ vertices; no directed path joins two of them.
        let mut count: BTreeMap<i64, usize> = BTreeMap::new();
        for v in 0..n as u32 {
            *count.entry(depth(v)).or_default() += 1;
        }
        let (&level, _) = count.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).expect("nonempty");
        let pick = |f: &dyn Fn(i64) -> bool| -> Vec<String> {
            (0..n as u32).filter(|&v| f(depth(v))).map(|v| h.name(v).into_owned()).collect()
        };
        red.merge_into_t(pick(&|d| d < level))?;
        red.merge_into_s(pick(&|d| d > level))?;
        red.remove_useless()?;
        let path = pick(&|d| d == level);
        for w in path.windows(2) {
            red.add_edge(&w[0], &w[1])?;
        }
        return Ok(PathOutcome { path, case: "depth_pigeonhole", history: Vec::new() });
    }

    // Undirected path between a min-depth and a max-depth vertex.
    let first_at = |d: i64| -> u32 {
        (0..n as u32).filter(|&v| depth(v) == d).min_by_key(|&v| h.name(v).into_owned()).expect("depth attained")
    };
    let (w_min, w_max) = (first_at(lab.d_min), first_at(lab.d_max));
    let (_, parent) = h.undirected_order(w_min);
    let mut path = vec![w_max];
    while *path.last().unwrap() != w_min {
        path.push(parent[*path.last().unwrap() as usize]);
    }
    path.reverse();
    let on_path: BTreeSet<u32> = path.iter().copied().collect();

    // Hanging parts: attached by x -> p go to t, by p -> x go to s.
    let (order, par) = h.undirected_order(w_min);
    let mut attach = vec![None::<bool>; n];
    for &v in &order {
        if on_path.contains(&v) {
            continue;
        }
        let p = par[v as usize];
        attach[v as usize] = if on_path.contains(&p) {
            let into_path = h.out_neighbors(v).any(|x| x == p);
            Some(!into_path)
        } else {
            attach[p as usize]
        };
    }
    let part = |to_s: bool| -> Vec<String> {
        (0..n as u32).filter(|&v| attach[v as usize] == Some(to_s)).map(|v| h.name(v).into_owned()).collect()
    };
    red.merge_into_t(part(false))?;
    red.merge_into_s(part(true))?;
    red.remove_useless()?;

    let mut pv: Vec<String> = path.iter().map(|&v| h.name(v).into_owned()).collect();
    let mut fwd: Vec<bool> = path.windows(2).map(|w| h.out_neighbors(w[0]).any(|x| x == w[1])).collect();
    let counts = |f: &[bool]| (f.iter().filter(|&&x| x).count(), f.iter().filter(|&&x| !x).count());
    let mut history = vec![counts(&fwd)];
    while let Some(j) = (0..fwd.len().saturating_sub(1)).find(|&j| fwd[j] && !fwd[j + 1]) {
        // w1 -> w2 <- w3: merge w2 into s, drop the now useless edges, add w1 -> w3.
        red.merge_into_s([pv[j + 1].clone()])?;
        red.remove_useless()?;
        red.add_edge(&pv[j], &pv[j + 2])?;
        pv.remove(j + 1);
        fwd.splice(j..j + 2, [true]);
        history.push(counts(&fwd));
    }
    if fwd.iter().any(|&f| !f) {
        return Err(ReduceError::Internal("backward edge survived straightening".into()));
    }
    Ok(PathOutcome { path: pv, case: "straighten", history })
}

/// Reduces the floating tree on `names` to a path with `p(H)` vertices.
fn dplen_path_in(red: &mut Reducer, names: &[String]) -> Result<Vec<String>, ReduceError> {
    let h = induced_tree(red.graph(), names)?;
    let n = h.len();
    let (_, tables) = general_p_dp(&h, None).map_err(|e| ReduceError::Internal(e.to_string()))?;
    let fam = tables.witness(&h);
    let mut in_fam = vec![false; n];
    for p in &fam.paths {
        for &v in p {
            in_fam[v as usize] = true;
        }
    }
    let sweep = |forward: bool| -> Vec<bool> {
        let mut seen = in_fam.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&v| in_fam[v as usize]).collect();
        while let Some(u) = stack.pop() {
            let next: Vec<u32> = if forward { h.out_neighbors(u).collect() } else { h.in_neighbors(u).collect() };
            for w in next {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let outbound = sweep(true);
    let inbound = sweep(false);
    let mut to_s = Vec::new();
    let mut to_t = Vec::new();
    for v in 0..n {
        if in_fam[v] {
            continue;
        }
        let name = h.name(v as u32).into_owned();
        match (inbound[v], outbound[v]) {
            (true, true) => return Err(ReduceError::Internal("vertex both inbound and outbound".into())),
            (true, false) => to_t.push(name),
            _ => to_s.push(name),
        }
    }
    red.merge_into_t(to_t)?;
    red.merge_into_s(to_s)?;
    red.remove_useless()?;
    let mut path: Vec<String> = Vec::new();
    for p in fam.named(&h) {
        if let Some(last) = path.last() {
            red.add_edge(last, &p[0])?;
        }
        path.extend(p);
    }
    Ok(path)
}

/// `G ∪ H` for a tree `H` disjoint from `G` that does not touch `s`, `t`.
fn disjoint_union(g: &DiGraph, h: &DiGraph) -> Result<(DiGraph, Vec<String>), ReduceError> {
    if h.edges().any(|(u, v)| u.index() < 2 || v.index() < 2) {
        return Err(ReduceError::TouchesSt);
    }
    if !classify_tree(h).is_tree() {
        return Err(ReduceError::NotATree("H is not a directed tree".into()));
    }
    let mut out = g.clone();
    let mut names = Vec::new();
    for v in h.inner_vertices() {
        let name = h.name(v);
        if g.id(name).is_some() {
            return Err(ReduceError::NotDisjoint(name.to_string()));
        }
        out.add_vertex(name)?;
        names.push(name.to_string());
    }
    for (u, v) in h.edges() {
        let a = out.require(h.name(u))?;
        let b = out.require(h.name(v))?;
        out.add_edge(a, b)?;
    }
    Ok((out, names))
}

fn named_edges(g: &DiGraph, es: &[(VertexId, VertexId)]) -> Vec<(String, String)> {
    es.iter().map(|&(u, v)| (g.name(u).to_string(), g.name(v).to_string())).collect()
}

fn restore_edges(red: &mut Reducer, es: &[(String, String)]) -> Result<(), ReduceError> {
    for (u, v) in es {
        if !red.graph().has_named_edge(u, v) {
            red.add_edge(u, v)?;
        }
    }
    Ok(())
}

/// Certificate that `m(σ(G ∪ H)) ≥ m(σ(G ∪ P))` where `P` is a directed
/// path with at least `⌈√n_H⌉` vertices.
///
/// When the depth labeling spans fewer than `⌈√n_H⌉` levels, the fullest
/// level becomes the path. Otherwise an undirected path from a minimum- to
/// a maximum-depth vertex is straightened one backward edge at a time.
/// Useless edges of `G` removed along the way are added back at the end.
pub fn sqrt_path_certificate(g: &DiGraph, h: &DiGraph) -> Result<ReductionCertificate, ReduceError> {
    let (start, names) = disjoint_union(g, h)?;
    let keep = named_edges(g, &g.useless_edges());
    let mut red = Reducer::new(start);
    let out = if names.is_empty() { PathOutcome::default() } else { sqrt_path_in(&mut red, &names)? };
    restore_edges(&mut red, &keep)?;
    red.note("n_h", names.len());
    red.note("sqrt_n_h", ceil_sqrt(names.len()));
    red.note("case", out.case);
    red.note("path", &out.path);
    red.note("path_vertices", out.path.len());
    red.note("c_plus_c_minus", &out.history);
    Ok(red.finish())
}

/// Certificate that `m(σ(G ∪ H)) ≥ m(σ(G ∪ P))` where `P` is a directed
/// path with `p(H)` vertices, built from a maximum disconnected-path family.
pub fn dplen_path_certificate(g: &DiGraph, h: &DiGraph) -> Result<ReductionCertificate, ReduceError> {
    let (start, names) = disjoint_union(g, h)?;
    let keep = named_edges(g, &g.useless_edges());
    let mut red = Reducer::new(start);
    let path = if names.is_empty() { Vec::new() } else { dplen_path_in(&mut red, &names)? };
    restore_edges(&mut red, &keep)?;
    red.note("n_h", names.len());
    red.note("path", &path);
    red.note("path_vertices", path.len());
    Ok(red.finish())
}

/// Inner vertices not on any s-t path, grouped into undirected components.
fn floating_components(g: &DiGraph) -> Result<Vec<Vec<String>>, ReduceError> {
    let from_s = g.reachable_from(VertexId::S);
    let to_t = g.reaching(VertexId::T);
    let (out, inn) = g.adjacency();
    let n = g.vertex_count();
    let floating: Vec<bool> = (0..n).map(|i| i >= 2 && !(from_s[i] && to_t[i])).collect();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if !floating[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in out[u].iter().chain(&inn[u]) {
                let w = w.index();
                if w < 2 {
                    return Err(ReduceError::Internal("floating component touches s or t".into()));
                }
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp.into_iter().map(|i| g.name(VertexId(i as u32)).to_string()).collect());
    }
    Ok(comps)
}

#[derive(Clone, Debug, Default, Serialize)]
struct FoldOutcome {
    segments: usize,
    kept: usize,
    discarded: usize,
}

/// Cuts floating directed paths into s-t paths with `q` inner vertices.
/// Consecutive paths are joined with `AddEdge`; a path is cut by merging
/// the vertex after a full segment into `t`. A short remainder is merged
/// into `s`.
fn fold_paths(red: &mut Reducer, paths: &[Vec<String>], q: usize) -> Result<FoldOutcome, ReduceError> {
    let mut out = FoldOutcome::default();
    if q == 0 {
        let all: Vec<String> = paths.iter().flatten().cloned().collect();
        out.discarded = all.len();
        red.merge_into_s(all)?;
        red.remove_useless()?;
        return Ok(out);
    }
    let mut seg: Vec<String> = Vec::new();
    for p in paths {
        let mut j = 0;
        while j < p.len() {
            let v = &p[j];
            match seg.last() {
                None => red.add_edge("s", v)?,
                Some(prev) if j == 0 => red.add_edge(prev, v)?,
                Some(_) => {}
            }
            seg.push(v.clone());
            if seg.len() == q {
                if j + 1 < p.len() {
                    red.merge_into_t([p[j + 1].clone()])?;
                    out.discarded += 1;
                    j += 1;
                } else {
                    red.add_edge(v, "t")?;
                }
                out.segments += 1;
                out.kept += q;
                seg.clear();
            }
            j += 1;
        }
    }
    out.discarded += seg.len();
    red.merge_into_s(seg)?;
    red.remove_useless()?;
    Ok(out)
}

/// If the non-isolated part of `g` is a set of internally disjoint s-t
/// paths of one common length, returns `(length, path count)`.
pub fn parallel_paths_shape(g: &DiGraph) -> Option<(usize, usize)> {
    let (out, inn) = g.adjacency();
    if !inn[0].is_empty() || !out[1].is_empty() {
        return None;
    }
    let mut covered = vec![false; g.vertex_count()];
    covered[0] = true;
    covered[1] = true;
    let mut len = None;
    for &first in &out[0] {
        let mut v = first;
        let mut steps = 1;
        while v != VertexId::T {
            if covered[v.index()] || inn[v.index()].len() != 1 || out[v.index()].len() != 1 {
                return None;
            }
            covered[v.index()] = true;
            v = out[v.index()][0];
            steps += 1;
        }
        if *len.get_or_insert(steps) != steps {
            return None;
        }
    }
    let all_covered = (2..g.vertex_count()).all(|i| covered[i] || (out[i].is_empty() && inn[i].is_empty()));
    if all_covered {
        len.map(|l| (l, out[0].len()))
    } else {
        None
    }
}

/// Every vertex reaches `t` (a flow-in tree or a path).
pub fn is_flow_in_to_t(g: &DiGraph) -> bool {
    classify_tree(g).is_tree() && g.reaching(VertexId::T).iter().all(|&b| b)
}

fn names_where(g: &DiGraph, f: impl Fn(usize) -> bool) -> Vec<String> {
    g.inner_vertices().filter(|v| f(v.index())).map(|v| g.name(v).to_string()).collect()
}

/// The three certificates behind the tree lower bound.
///
/// 1. Merge `H_s` into `s` and `H_t` into `t`, reduce every floating tree
///    to a path, link the paths and fold them into s-t paths of length `ℓ`.
/// 2. Merge everything outside `H_s` and the s-t path into `t`, leaving a
///    flow-out tree. Edges `t -> x` are first redirected to `s -> x` so the
///    part of `H_s` hanging below `t` stays attached.
/// 3. The mirror image of 2, ending in a flow-in tree.
pub fn thm51_lower_certificates(g: &DiGraph) -> Result<Vec<ReductionCertificate>, ReduceError> {
    let lay = TreeLayout::new(g)?;
    let stats = crate::bounds::compute_stats(g)?;
    let hs = names_where(g, |i| lay.in_hs[i]);
    let ht = names_where(g, |i| lay.in_ht[i]);

    let mut red = Reducer::new(g.clone());
    red.merge_into_s(hs.clone())?;
    red.merge_into_t(ht.clone())?;
    red.remove_useless()?;
    let comps = floating_components(red.graph())?;
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    let mut paths = Vec::new();
    for comp in &comps {
        paths.push(sqrt_path_in(&mut red, comp)?.path);
    }
    let long: usize = paths.iter().map(Vec::len).sum();
    let fold = fold_paths(&mut red, &paths, lay.ell.saturating_sub(1))?;
    red.note("part", "paths");
    red.note("n", stats.n);
    red.note("ell", lay.ell);
    red.note("d_bar", stats.d_bar);
    red.note("sqrt_d_bar", ceil_sqrt(stats.d_bar));
    red.note("component_sizes", &sizes);
    red.note("long_path_vertices", long);
    red.note("segments", fold.segments);
    red.note("kept_vertices", fold.kept);
    red.note("discarded_vertices", fold.discarded);
    let part1 = red.finish();

    let mut red = Reducer::new(g.clone());
    for (u, v) in g.edges().filter(|&(u, _)| u == VertexId::T) {
        red.apply(Move::ReplaceEdgeWithSourceS { from: g.name(u).into(), to: g.name(v).into() })?;
    }
    red.merge_into_t(names_where(g, |i| !lay.in_hs[i] && !lay.on_path[i]))?;
    red.remove_useless()?;
    red.note("part", "flow_out");
    red.note("h_s", hs.len());
    let part2 = red.finish();

    let mut red = Reducer::new(g.clone());
    for (u, v) in g.edges().filter(|&(_, v)| v == VertexId::S) {
        red.apply(Move::ReplaceEdgeWithSinkT { from: g.name(u).into(), to: g.name(v).into() })?;
    }
    red.merge_into_s(names_where(g, |i| !lay.in_ht[i] && !lay.on_path[i]))?;
    red.remove_useless()?;
    red.note("part", "flow_in");
    red.note("h_t", ht.len());
    let part3 = red.finish();

    Ok(vec![part1, part2, part3])
}

/// Certificate for the flow-out lower bound at index `i`.
///
/// * `i = 1`: every off-path edge `a -> b` becomes `s -> b`.
/// * `i ≥ 2`, `k = 2^{2^i}`, `h = k/2`: vertices off the s-t path whose
///   descendants all lie closer than `k` to `s` are merged into `s`
///   (the set `S_1`). With `d̄_k` the number of remaining vertices at depth
///   `1..=h`:
///   - Case 1, `d̄_k² ≥ c_i`: every remaining depth-`h` vertex starts a
///     downward path; the rest is merged away so each becomes an s-t path
///     with `h` edges.
///   - Case 2: the depth-`h` vertex with the largest subtree is merged
///     into `t`. If it lies on the s-t path (subcase 1) the path below it
///     goes to `t` as well; otherwise (subcase 2) the path vertex at
///     distance `h` from `t` is merged into `s`. Everything else off the
///     resulting s-t paths and outside the subtree goes to `s`, and the
///     floating pieces of the subtree become paths folded to length `h`.
/// * When `ℓ < k` the path is too short for either case and every off-path
///   vertex is merged into `s` (`case = "short_path"`).
pub fn flowout_lower_certificate(g: &DiGraph, i: usize) -> Result<ReductionCertificate, ReduceError> {
    let fo = flowout_c(g)?;
    let max = lglg_ceil(fo.ell);
    if i < 1 || i > max {
        return Err(ReduceError::IndexOutOfRange { i, max });
    }
    let lay = TreeLayout::new(g)?;
    let (out, _) = g.adjacency();
    let depth = |v: VertexId| lay.dist_s[v.index()].unwrap_or(0);
    let name = |v: VertexId| g.name(v).to_string();
    let mut red = Reducer::new(g.clone());
    red.note("i", i);
    red.note("ell", fo.ell);
    red.note("c_i", fo.c[i - 1]);

    if i == 1 {
        for (a, b) in g.edges() {
            if a != VertexId::S && !(lay.on_path[a.index()] && lay.on_path[b.index()]) {
                red.apply(Move::ReplaceEdgeWithSourceS { from: name(a), to: name(b) })?;
            }
        }
        red.note("case", "i1");
        return Ok(red.finish());
    }

    let k = double_exp(i) as usize;
    let h = k / 2;
    red.note("k", k);
    red.note("h", h);
    if fo.ell < k {
        red.merge_into_s(names_where(g, |v| !lay.on_path[v]))?;
        red.remove_useless()?;
        red.note("case", "short_path");
        return Ok(red.finish());
    }

    let s1: BTreeSet<VertexId> = g.inner_vertices().filter(|v| !lay.on_path[v.index()] && fo.max_desc[v.index()] < k).collect();
    let alive = |v: VertexId| v == VertexId::S || v == VertexId::T || !s1.contains(&v);
    let d_bar_k = g.inner_vertices().chain([VertexId::T]).filter(|&v| alive(v) && (1..=h).contains(&depth(v))).count();
    let d_h: Vec<VertexId> = g.vertices().filter(|&v| alive(v) && depth(v) == h).collect();
    red.note("s1", s1.len());
    red.note("d_bar_k", d_bar_k);
    red.note("d_h", d_h.len());
    red.merge_into_s(s1.iter().map(|&v| name(v)))?;

    let descendants = |v: VertexId| -> Vec<VertexId> {
        let mut acc = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in &out[u.index()] {
                if alive(w) {
                    acc.push(w);
                    stack.push(w);
                }
            }
        }
        acc
    };

    if d_bar_k * d_bar_k >= fo.c[i - 1] {
        // Case 1.
        let mut on_pv: BTreeSet<VertexId> = BTreeSet::new();
        let mut to_t: BTreeSet<VertexId> = BTreeSet::new();
        let mut leaf_ends = Vec::new();
        for &v in &d_h {
            let mut cur = v;
            on_pv.insert(cur);
            while depth(cur) < k - 2 {
                cur = *out[cur.index()]
                    .iter()
                    .filter(|&&w| alive(w) && (fo.max_desc[w.index()] >= k || lay.on_path[w.index()]))
                    .min_by_key(|w| (!lay.on_path[w.index()], w.0))
                    .ok_or_else(|| ReduceError::Internal("no deep child".into()))?;
                on_pv.insert(cur);
            }
            let below = descendants(cur);
            if below.is_empty() {
                leaf_ends.push(cur);
            }
            to_t.extend(below);
        }
        let to_s: Vec<String> = g
            .inner_vertices()
            .filter(|&v| alive(v) && !on_pv.contains(&v) && !to_t.contains(&v))
            .map(name)
            .collect();
        red.merge_into_s(to_s)?;
        red.merge_into_t(to_t.iter().filter(|&&v| v != VertexId::T).map(|&v| name(v)))?;
        for w in leaf_ends {
            red.add_edge(&name(w), "t")?;
        }
        red.remove_useless()?;
        red.note("case", "case1");
        return Ok(red.finish());
    }

    // Case 2.
    let subtree = |v: VertexId| descendants(v).len() + 1;
    let v_star = *d_h
        .iter()
        .max_by(|&&a, &&b| subtree(a).cmp(&subtree(b)).then(b.0.cmp(&a.0)))
        .ok_or_else(|| ReduceError::Internal("no vertex at depth h".into()))?;
    red.note("v_star", name(v_star));
    red.note("v_star_subtree", subtree(v_star));
    let hset: BTreeSet<VertexId>;
    if lay.on_path[v_star.index()] {
        let tail: Vec<String> = lay.path.iter().filter(|&&q| depth(q) >= h && q != VertexId::T).map(|&q| name(q)).collect();
        red.merge_into_t(tail)?;
        hset = descendants(v_star).into_iter().filter(|q| !lay.on_path[q.index()]).collect();
        red.note("case", "case2_subcase1");
    } else {
        red.merge_into_t([name(v_star)])?;
        let w = lay.path[fo.ell - h];
        red.merge_into_s([name(w)])?;
        red.note("w", name(w));
        hset = descendants(v_star).into_iter().collect();
        red.note("case", "case2_subcase2");
    }
    // Edges into s left by the merges would make stranded path vertices
    // look like they reach t.
    red.remove_useless()?;
    let cur = red.graph().clone();
    let from_s = cur.reachable_from(VertexId::S);
    let to_t = cur.reaching(VertexId::T);
    let hnames: BTreeSet<String> = hset.iter().map(|&v| name(v)).collect();
    let rest: Vec<String> = cur
        .inner_vertices()
        .filter(|v| !(from_s[v.index()] && to_t[v.index()]) && !hnames.contains(cur.name(*v)))
        .map(|v| cur.name(v).to_string())
        .collect();
    red.merge_into_s(rest)?;
    red.remove_useless()?;
    let comps = floating_components(red.graph())?;
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    let mut paths = Vec::new();
    for comp in &comps {
        paths.push(sqrt_path_in(&mut red, comp)?.path);
    }
    let fold = fold_paths(&mut red, &paths, h - 1)?;
    red.note("h_size", hset.len());
    red.note("component_sizes", &sizes);
    red.note("segments", fold.segments);
    red.note("kept_vertices", fold.kept);
    Ok(red.finish())
}

/// The graph side of the tree upper bound: `G_1` strips far and floating
/// vertices; each later `G_i` rewires the vertices whose subtree stays
/// within `2^{2^i}` of `s` (resp. `t`) into lollipops.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSequence {
    pub graphs: Vec<DiGraph>,
    /// `p_s[j]` is the set rewired to `s` when building `graphs[j]`.
    pub p_s: Vec<Vec<String>>,
    pub p_t: Vec<Vec<String>>,
    /// Threshold used for `graphs[j]`; `None` for `G_1` and for a final
    /// step that rewires everything left.
    pub thresholds: Vec<Option<u64>>,
    pub c_bar: usize,
    /// The s-t path of the input.
    pub path: Vec<String>,
}

impl GraphSequence {
    pub fn last(&self) -> &DiGraph {
        self.graphs.last().expect("at least G_1")
    }

    /// Accessible vertices off the s-t path that are not lollipops.
    pub fn open_vertices(&self, j: usize) -> usize {
        let g = &self.graphs[j];
        let on_path: BTreeSet<&str> = self.path.iter().map(String::as_str).collect();
        let from_s = g.reachable_from(VertexId::S);
        let to_t = g.reaching(VertexId::T);
        g.inner_vertices()
            .filter(|&v| !on_path.contains(g.name(v)))
            .filter(|&v| from_s[v.index()] || to_t[v.index()])
            .filter(|&v| !g.has_edge(VertexId::S, v) && !g.has_edge(v, VertexId::T))
            .count()
    }

    /// Every vertex lies on the s-t path, is isolated, or has exactly one
    /// edge, which is `s -> v` or `v -> t`.
    pub fn final_invariant_holds(&self) -> bool {
        let g = self.last();
        let on_path: BTreeSet<&str> = self.path.iter().map(String::as_str).collect();
        let (out, inn) = g.adjacency();
        g.inner_vertices().all(|v| {
            let (o, i) = (&out[v.index()], &inn[v.index()]);
            if on_path.contains(g.name(v)) {
                return o.len() == 1 && i.len() == 1;
            }
            match (o.as_slice(), i.as_slice()) {
                ([], []) => true,
                ([], [u]) => *u == VertexId::S,
                ([w], []) => *w == VertexId::T,
                _ => false,
            }
        })
    }
}

pub fn upper_graph_sequence(g: &DiGraph) -> Result<GraphSequence, ReduceError> {
    let lay = TreeLayout::new(g)?;
    let n = g.vertex_count();
    let ell = lay.ell;
    let far: Vec<bool> = (0..n)
        .map(|v| {
            (lay.in_hs[v] && lay.dist_s[v].unwrap_or(0) > ell) || (lay.in_ht[v] && lay.dist_t[v].unwrap_or(0) > ell)
        })
        .collect();
    let c_bar = far.iter().filter(|&&b| b).count();
    let gone: Vec<bool> = (2..n).map(|v| far[v] || !(lay.in_hs[v] || lay.in_ht[v] || lay.on_path[v])).collect();
    let gone = |v: VertexId| v.index() >= 2 && gone[v.index() - 2];
    let g1 = g.with_edge_set(g.edges().filter(|&(u, v)| !gone(u) && !gone(v)).collect());

    // Descendant maxima recomputed without the stripped vertices.
    let (out, inn) = g1.adjacency();
    let mut md = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).filter(|&v| lay.in_hs[v] && !far[v]).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(lay.dist_s[v]));
    for &v in &order {
        md[v] = out[v].iter().fold(lay.dist_s[v].unwrap_or(0), |m, w| m.max(md[w.index()]));
    }
    let mut ma = vec![0usize; n];
    let mut order_t: Vec<usize> = (0..n).filter(|&v| lay.in_ht[v] && !far[v]).collect();
    order_t.sort_by_key(|&v| std::cmp::Reverse(lay.dist_t[v]));
    for &v in &order_t {
        ma[v] = inn[v].iter().fold(lay.dist_t[v].unwrap_or(0), |m, w| m.max(ma[w.index()]));
    }

    let steps = lglg_ceil(ell).max(1);
    let mut seq = GraphSequence {
        graphs: vec![g1.clone()],
        p_s: vec![Vec::new()],
        p_t: vec![Vec::new()],
        thresholds: vec![None],
        c_bar,
        path: lay.path.iter().map(|&v| g.name(v).to_string()).collect(),
    };
    let mut done = vec![false; n];
    let mut cur = g1;
    for step in 2..=steps + 1 {
        let threshold = if step == steps + 1 { None } else { Some(double_exp(step)) };
        let within = |x: usize| threshold.is_none_or(|th| (x as u64) < th);
        let ps: Vec<usize> = order.iter().copied().filter(|&v| !done[v] && within(md[v])).collect();
        let pt: Vec<usize> = order_t.iter().copied().filter(|&v| !done[v] && within(ma[v])).collect();
        let mut edges = cur.edge_set().clone();
        for &v in ps.iter().chain(&pt) {
            done[v] = true;
            edges.retain(|&(a, b)| a.index() != v && b.index() != v);
        }
        for &v in &ps {
            edges.insert((VertexId::S, VertexId(v as u32)));
        }
        for &v in &pt {
            edges.insert((VertexId(v as u32), VertexId::T));
        }
        cur = cur.with_edge_set(edges);
        let names = |vs: &[usize]| -> Vec<String> {
            let mut out: Vec<usize> = vs.to_vec();
            out.sort_unstable();
            out.into_iter().map(|v| g.name(VertexId(v as u32)).to_string()).collect()
        };
        seq.p_s.push(names(&ps));
        seq.p_t.push(names(&pt));
        seq.thresholds.push(threshold);
        seq.graphs.push(cur.clone());
    }
    Ok(seq)
}

/// Whether `g`'s vertex set is a `TreeKind::FlowOut` rooted at `s`.
pub fn is_flow_out_from_s(g: &DiGraph) -> bool {
    classify_tree(g) == TreeKind::FlowOut(VertexId::S)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(&str, &str)]) -> DiGraph {
        DiGraph::from_edges(edges.iter().copied()).unwrap()
    }

    fn tree(edges: &[(&str, &str)]) -> DiGraph {
        g(edges)
    }

    fn end_path(c: &ReductionCertificate) -> usize {
        c.meta_usize("path_vertices").unwrap()
    }

    #[test]
    fn useless_edges_removed() {
        let out = apply_move(&g(&[("s", "a"), ("t", "b")]), &Move::RemoveUselessEdges).unwrap();
        let mut expect = g(&[("s", "a")]);
        expect.ensure_vertex("b").unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn merge_creates_useless_edge() {
        // s -> a -> b -> t, c -> a; merging {a} into s and {b, c} into t
        // turns c -> a into t̄ -> s̄.
        let base = g(&[("s", "a"), ("a", "b"), ("b", "t"), ("c", "a")]);
        let x = apply_move(&base, &Move::MergeIntoS { set: vec!["a".into()] }).unwrap();
        let y = apply_move(&x, &Move::MergeIntoT { set: vec!["b".into(), "c".into()] }).unwrap();
        assert!(y.has_named_edge("t", "s"));
        assert!(y.has_named_edge("s", "t"));
        assert_eq!(y.vertex_count(), 2);
    }

    #[test]
    fn move_preconditions() {
        let base = g(&[("s", "a"), ("a", "t")]);
        assert_eq!(apply_move(&base, &Move::MergeIntoS { set: vec![] }), Err(MoveError::EmptySet));
        assert_eq!(apply_move(&base, &Move::MergeIntoS { set: vec!["t".into()] }), Err(MoveError::ContainsT));
        assert_eq!(apply_move(&base, &Move::MergeIntoT { set: vec!["s".into()] }), Err(MoveError::ContainsS));
        assert!(matches!(
            apply_move(&base, &Move::AddEdge { from: "s".into(), to: "a".into() }),
            Err(MoveError::EdgePresent { .. })
        ));
        let added = apply_move(&base, &Move::AddEdge { from: "s".into(), to: "t".into() }).unwrap();
        assert!(added.has_named_edge("s", "t"));
        let r = apply_move(&base, &Move::ReplaceEdgeWithSinkT { from: "s".into(), to: "a".into() }).unwrap();
        assert!(r.has_named_edge("s", "t") && !r.has_named_edge("s", "a"));
    }

    #[test]
    fn certificate_checks() {
        let base = g(&[("s", "a"), ("a", "t")]);
        let empty = ReductionCertificate {
            start: base.clone(),
            moves: vec![],
            fingerprints: vec![],
            end: base.clone(),
            metadata: BTreeMap::new(),
        };
        assert!(check_certificate(&empty).valid);
        let bad = ReductionCertificate {
            moves: vec![Move::ReplaceEdgeWithSourceS { from: "a".into(), to: "b".into() }],
            fingerprints: vec![String::new()],
            ..empty.clone()
        };
        let chk = check_certificate(&bad);
        assert!(!chk.valid);
        assert_eq!(chk.failure.unwrap().reason, FailureReason::Precondition);
        let wrong_end = ReductionCertificate { end: g(&[("s", "t")]), ..empty };
        assert_eq!(check_certificate(&wrong_end).failure.unwrap().reason, FailureReason::EndMismatch);
    }

    #[test]
    fn sqrt_path_examples() {
        let host = g(&[("s", "t")]);
        let path9 = tree(&[("a1", "a2"), ("a2", "a3"), ("a3", "a4"), ("a4", "a5"), ("a5", "a6"), ("a6", "a7"), ("a7", "a8"), ("a8", "a9")]);
        let c = sqrt_path_certificate(&host, &path9).unwrap();
        assert!(check_certificate(&c).valid);
        assert_eq!(end_path(&c), 9);

        let star: Vec<(String, String)> = (0..9).map(|i| ("r".to_string(), format!("l{i}"))).collect();
        let star = DiGraph::from_edges(star.iter().map(|(a, b)| (a.as_str(), b.as_str()))).unwrap();
        let c = sqrt_path_certificate(&host, &star).unwrap();
        assert!(check_certificate(&c).valid);
        assert_eq!(c.meta_str("case"), Some("depth_pigeonhole"));
        assert!(end_path(&c) >= 4);

        let single = DiGraph::with_vertices(["z"]).unwrap();
        let c = sqrt_path_certificate(&host, &single).unwrap();
        assert!(check_certificate(&c).valid);
        assert_eq!(end_path(&c), 1);
    }

    #[test]
    fn straightening_history() {
        // a -> b <- c -> d <- e: two backward edges to straighten.
        let zig = tree(&[("a", "b"), ("c", "b"), ("c", "d"), ("e", "d"), ("e", "f"), ("f", "x"), ("x", "y")]);
        let c = sqrt_path_certificate(&g(&[("s", "t")]), &zig).unwrap();
        assert!(check_certificate(&c).valid);
        let hist: Vec<(usize, usize)> = serde_json::from_value(c.metadata["c_plus_c_minus"].clone()).unwrap();
        for w in hist.windows(2) {
            assert_eq!(w[1].0, w[0].0);
            assert_eq!(w[1].1 + 1, w[0].1);
        }
        assert_eq!(hist.last().unwrap().1, 0);
    }

    #[test]
    fn dplen_star() {
        let star = tree(&[("r", "a"), ("r", "b"), ("r", "c")]);
        let c = dplen_path_certificate(&g(&[("s", "t")]), &star).unwrap();
        assert!(check_certificate(&c).valid);
        assert_eq!(end_path(&c), 3);
        let mut expect = g(&[("s", "t")]);
        for v in ["a", "b", "c"] {
            expect.ensure_vertex(v).unwrap();
        }
        let p: Vec<String> = serde_json::from_value(c.metadata["path"].clone()).unwrap();
        for w in p.windows(2) {
            let (a, b) = (expect.require(&w[0]).unwrap(), expect.require(&w[1]).unwrap());
            expect.add_edge(a, b).unwrap();
        }
        assert_eq!(c.end, expect);
    }

    #[test]
    fn thm51_bare_path() {
        let p = g(&[("s", "a"), ("a", "b"), ("b", "t")]);
        let cs = thm51_lower_certificates(&p).unwrap();
        for c in &cs {
            assert!(check_certificate(c).valid);
        }
        assert_eq!(cs[0].end, p);
        assert!(is_flow_out_from_s(&cs[1].end));
        assert!(is_flow_in_to_t(&cs[2].end));
    }

    #[test]
    fn thm51_with_floating_and_hanging() {
        // Path s -> a -> t; x hangs below t (H_s), y feeds s (H_t), b hangs
        // below s and the chain c, d, e attached through c -> b floats.
        let t = g(&[("s", "a"), ("a", "t"), ("t", "x"), ("y", "s"), ("s", "b"), ("c", "b"), ("c", "d"), ("e", "d")]);
        let cs = thm51_lower_certificates(&t).unwrap();
        for c in &cs {
            let chk = check_certificate(c);
            assert!(chk.valid, "{chk:?}");
        }
        assert_eq!(cs[0].meta_usize("d_bar"), Some(3));
        assert!(parallel_paths_shape(&cs[0].end).is_some());
        assert!(is_flow_out_from_s(&cs[1].end), "{}", cs[1].end);
        assert!(is_flow_in_to_t(&cs[2].end), "{}", cs[2].end);
    }

    #[test]
    fn flowout_i1_and_short_path() {
        let t = g(&[("s", "a"), ("a", "b"), ("b", "c"), ("c", "d"), ("d", "t"), ("a", "x"), ("x", "y")]);
        let c = flowout_lower_certificate(&t, 1).unwrap();
        assert!(check_certificate(&c).valid);
        assert!(c.end.has_named_edge("s", "x") && c.end.has_named_edge("s", "y"));
        assert!(c.end.has_named_edge("a", "b"));
        assert!(matches!(flowout_lower_certificate(&t, 3), Err(ReduceError::IndexOutOfRange { .. })));
    }

    #[test]
    fn sequence_on_bare_path_is_constant() {
        let p = g(&[("s", "a"), ("a", "b"), ("b", "t")]);
        let seq = upper_graph_sequence(&p).unwrap();
        assert!(seq.graphs.iter().all(|x| *x == p));
        assert!(seq.final_invariant_holds());
    }

    #[test]
    fn sequence_rewires_shallow_vertices() {
        let t = g(&[("s", "a"), ("a", "b"), ("b", "c"), ("c", "t"), ("a", "x"), ("x", "y"), ("z", "c"), ("w", "z")]);
        let seq = upper_graph_sequence(&t).unwrap();
        assert_eq!(seq.graphs.len(), 2);
        assert_eq!(seq.p_s[1], vec!["x", "y"]);
        assert_eq!(seq.p_t[1], vec!["z", "w"]);
        assert!(seq.final_invariant_holds());
        assert!(seq.last().has_named_edge("s", "y"));
    }

    #[test]
    fn parallel_shape() {
        assert_eq!(parallel_paths_shape(&g(&[("s", "a"), ("a", "t"), ("s", "b"), ("b", "t")])), Some((2, 2)));
        assert_eq!(parallel_paths_shape(&g(&[("s", "a"), ("a", "t"), ("s", "t")])), None);
        assert_eq!(ceil_sqrt(10), 4);
        assert_eq!(ceil_sqrt(9), 3);
    }
}
