//! Directed input graphs over named vertices with distinguished `s` and `t`.
//!
//! A [`DiGraph`] always contains the two reserved vertices `s` (index 0) and
//! `t` (index 1). Every other vertex is an ordinary member of the vertex
//! universe, and permutation sets act on those labels only.

mod tree;

pub use tree::{
    classify_tree, directed_trees_of_order, enumerate_directed_trees, free_trees_of_order,
    DirectedTree,
    TreeArc, TreeCorpus, TreeKind, DEFAULT_TREE_LIMIT,
};

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Dense index of a vertex inside one [`DiGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub const S: VertexId = VertexId(0);
    pub const T: VertexId = VertexId(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate edge {from} -> {to}")]
    DuplicateEdge { line: usize, from: String, to: String },
    #[error("line {line}: self-loop on {vertex}")]
    SelfLoop { line: usize, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` already exists")]
    DuplicateVertex(String),
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("permutation budget exceeded: {needed} permutations requested, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("tree enumeration limit exceeded: requested {requested}, limit is {limit}")]
    TreeLimit { requested: usize, limit: usize },
}

/// Returns true when `name` is a legal vertex token.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A directed graph on `V ∪ {s, t}`. Edges are ordered pairs without
/// self-loops or duplicates; antiparallel pairs are allowed.
#[derive(Clone, Debug)]
pub struct DiGraph {
    names: Vec<String>,
    index: BTreeMap<String, VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl Default for DiGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl DiGraph {
    /// The graph on `{s, t}` with no edges.
    pub fn new() -> Self {
        let mut g = DiGraph {
            names: Vec::new(),
            index: BTreeMap::new(),
            edges: BTreeSet::new(),
        };
        g.push_name("s");
        g.push_name("t");
        g
    }

    /// Builds a graph from named edges, declaring vertices on first mention.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut g = DiGraph::new();
        for (u, v) in edges {
            let a = g.ensure_vertex(u)?;
            let b = g.ensure_vertex(v)?;
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Graph on `s`, `t` and the given extra vertices, with no edges.
    pub fn with_vertices<'a, I>(names: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut g = DiGraph::new();
        for name in names {
            g.add_vertex(name)?;
        }
        Ok(g)
    }

    fn push_name(&mut self, name: &str) -> VertexId {
        let id = VertexId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, GraphError> {
        if !is_valid_name(name) {
            return Err(GraphError::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        Ok(self.push_name(name))
    }

    /// Returns the id of `name`, declaring it if needed.
    pub fn ensure_vertex(&mut self, name: &str) -> Result<VertexId, GraphError> {
        match self.index.get(name) {
            Some(&id) => Ok(id),
            None => self.add_vertex(name),
        }
    }

    /// Adds `u -> v`, rejecting self-loops and duplicates.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check_id(u)?;
        self.check_id(v)?;
        if u == v {
            return Err(GraphError::SelfLoop { line: 0, vertex: self.name(u).to_string() });
        }
        if !self.edges.insert((u, v)) {
            return Err(GraphError::DuplicateEdge {
                line: 0,
                from: self.name(u).to_string(),
                to: self.name(v).to_string(),
            });
        }
        Ok(())
    }

    /// Adds `u -> v` unless present. Returns whether the edge was new.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_id(u)?;
        self.check_id(v)?;
        if u == v {
            return Err(GraphError::SelfLoop { line: 0, vertex: self.name(u).to_string() });
        }
        Ok(self.edges.insert((u, v)))
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        self.edges.remove(&(u, v))
    }

    fn check_id(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() < self.names.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(format!("#{}", v.0)))
        }
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn has_named_edge(&self, u: &str, v: &str) -> bool {
        match (self.id(u), self.id(v)) {
            (Some(a), Some(b)) => self.has_edge(a, b),
            _ => false,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    /// Vertices other than `s` and `t`.
    pub fn inner_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (2..self.names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<VertexId, GraphError> {
        self.id(name).ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn out_neighbors(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.edges
            .range((u, VertexId(0))..=(u, VertexId(u32::MAX)))
            .map(|&(_, v)| v)
    }

    /// Out- and in-adjacency lists indexed by vertex.
    pub fn adjacency(&self) -> (Vec<Vec<VertexId>>, Vec<Vec<VertexId>>) {
        let n = self.vertex_count();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            out[u.index()].push(v);
            inn[v.index()].push(u);
        }
        (out, inn)
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out_neighbors(u).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(_, b)| b == v).count()
    }

    /// Same vertex universe with a different edge set.
    pub fn with_edge_set(&self, edges: BTreeSet<(VertexId, VertexId)>) -> Self {
        DiGraph {
            names: self.names.clone(),
            index: self.index.clone(),
            edges,
        }
    }

    pub fn edge_set(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }

    /// True when every edge of `self` is an edge of `other` (matched by name).
    pub fn is_edge_subgraph_of(&self, other: &DiGraph) -> bool {
        self.edges.iter().all(|&(u, v)| other.has_named_edge(self.name(u), self.name(v)))
    }

    /// Removes the given vertices (never `s` or `t`), reindexing the rest
    /// while preserving their relative order.
    pub fn without_vertices(&self, drop: &BTreeSet<VertexId>) -> Self {
        let mut g = DiGraph::new();
        let mut remap = vec![None; self.vertex_count()];
        remap[0] = Some(VertexId::S);
        remap[1] = Some(VertexId::T);
        for v in self.inner_vertices() {
            if !drop.contains(&v) {
                remap[v.index()] = Some(g.push_name(self.name(v)));
            }
        }
        for &(u, v) in &self.edges {
            if let (Some(a), Some(b)) = (remap[u.index()], remap[v.index()]) {
                g.edges.insert((a, b));
            }
        }
        g
    }

    /// Names and edges in a label-independent canonical text form.
    fn named_form(&self) -> (BTreeSet<&str>, BTreeSet<(&str, &str)>) {
        let vs = self.names.iter().map(String::as_str).collect();
        let es = self.edges.iter().map(|&(u, v)| (self.name(u), self.name(v))).collect();
        (vs, es)
    }

    /// SHA-256 over the sorted named vertex and edge lists. Equal graphs
    /// (by name) always share a digest.
    pub fn digest(&self) -> String {
        let (vs, es) = self.named_form();
        let mut h = Sha256::new();
        for v in vs {
            h.update(b"v:");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        for (u, v) in es {
            h.update(b"e:");
            h.update(u.as_bytes());
            h.update(b"->");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    /// Vertices reachable from `from` (inclusive).
    pub fn reachable_from(&self, from: VertexId) -> Vec<bool> {
        let (out, _) = self.adjacency();
        bfs(&out, from)
    }

    /// Vertices that reach `to` (inclusive).
    pub fn reaching(&self, to: VertexId) -> Vec<bool> {
        let (_, inn) = self.adjacency();
        bfs(&inn, to)
    }

    /// Edges into `s` or out of `t`.
    pub fn useless_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(u, v)| v == VertexId::S || u == VertexId::T)
            .collect()
    }
}

fn bfs(adj: &[Vec<VertexId>], from: VertexId) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    seen[from.index()] = true;
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u.index()] {
            if !seen[v.index()] {
                seen[v.index()] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        if self.names == other.names {
            return self.edges == other.edges;
        }
        self.named_form() == other.named_form()
    }
}

impl Eq for DiGraph {}

impl fmt::Display for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.inner_vertices() {
            writeln!(f, "vertex {}", self.name(v))?;
        }
        for &(u, v) in &self.edges {
            writeln!(f, "{} -> {}", self.name(u), self.name(v))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DiGraphWire {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Serialize for DiGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DiGraphWire {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| (self.name(u).to_string(), self.name(v).to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DiGraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = DiGraphWire::deserialize(deserializer)?;
        let mut g = DiGraph::new();
        for name in &wire.vertices {
            g.ensure_vertex(name).map_err(serde::de::Error::custom)?;
        }
        for (u, v) in &wire.edges {
            let a = g.require(u).map_err(serde::de::Error::custom)?;
            let b = g.require(v).map_err(serde::de::Error::custom)?;
            g.add_edge(a, b).map_err(serde::de::Error::custom)?;
        }
        Ok(g)
    }
}

/// Parses the edge-list format: `u -> v` lines, `vertex u` declarations,
/// blank lines and `#` comments.
pub fn parse_edge_list(text: &str) -> Result<DiGraph, GraphError> {
    let mut g = DiGraph::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |message: &str| GraphError::Parse { line: line_no, message: message.to_string() };
        if let Some((lhs, rhs)) = line.split_once("->") {
            let (u, v) = (lhs.trim(), rhs.trim());
            if !is_valid_name(u) || !is_valid_name(v) {
                return Err(malformed(&format!("expected `u -> v` with alphanumeric tokens, got `{line}`")));
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: line_no, vertex: u.to_string() });
            }
            let a = g.ensure_vertex(u).map_err(|e| malformed(&e.to_string()))?;
            let b = g.ensure_vertex(v).map_err(|e| malformed(&e.to_string()))?;
            if !g.edges.insert((a, b)) {
                return Err(GraphError::DuplicateEdge { line: line_no, from: u.to_string(), to: v.to_string() });
            }
            continue;
        }
        let mut words = line.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("vertex"), Some(name), None) if is_valid_name(name) => {
                g.ensure_vertex(name).map_err(|e| malformed(&e.to_string()))?;
            }
            _ => return Err(malformed(&format!("unrecognised line `{line}`"))),
        }
    }
    Ok(g)
}

/// Is there a directed path from `s` to `t`?
pub fn has_st_path(g: &DiGraph) -> bool {
    g.reachable_from(VertexId::S)[VertexId::T.index()]
}

/// Number of vertices other than `s`, `t` that are not lollipops, i.e. have
/// neither `s -> v` nor `v -> t`.
pub fn count_non_lollipops(g: &DiGraph) -> usize {
    g.inner_vertices()
        .filter(|&v| !g.has_edge(VertexId::S, v) && !g.has_edge(v, VertexId::T))
        .count()
}

/// Default cap on the number of permutations `sigma` will materialize (10!).
pub const DEFAULT_SIGMA_BUDGET: u128 = 3_628_800;

fn factorial(k: usize) -> u128 {
    (1..=k as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

fn movable_vertices(g: &DiGraph, fixed: &[VertexId]) -> Vec<VertexId> {
    let fixed: HashSet<VertexId> = fixed.iter().copied().collect();
    g.vertices().filter(|v| !fixed.contains(v)).collect()
}

/// Relabels `g` by sending `movable[i]` to `movable[perm[i]]`.
fn permuted_edges(
    g: &DiGraph,
    movable: &[VertexId],
    perm: &[usize],
    image: &mut [VertexId],
) -> BTreeSet<(VertexId, VertexId)> {
    for (i, &v) in movable.iter().enumerate() {
        image[v.index()] = movable[perm[i]];
    }
    g.edges().map(|(u, v)| (image[u.index()], image[v.index()])).collect()
}

/// `σ_W(G)`: all distinct graphs obtained by permuting the labels of
/// vertices outside `fixed`. The identity image (G itself) comes first.
pub fn sigma(g: &DiGraph, fixed: &[VertexId], budget: u128) -> Result<Vec<DiGraph>, GraphError> {
    let movable = movable_vertices(g, fixed);
    let needed = factorial(movable.len());
    if needed > budget {
        return Err(GraphError::Budget { needed, budget });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for edges in PermutationEdges::new(g, movable) {
        if seen.insert(edges.clone()) {
            out.push(g.with_edge_set(edges));
        }
    }
    Ok(out)
}

/// `σ(G) = σ_{s,t}(G)` with the default budget.
pub fn sigma_st(g: &DiGraph) -> Result<Vec<DiGraph>, GraphError> {
    sigma(g, &[VertexId::S, VertexId::T], DEFAULT_SIGMA_BUDGET)
}

/// Streams the image of `g` under every permutation of the non-fixed labels
/// (with repetitions when `g` has automorphisms). No budget applies.
pub fn sigma_stream<'a>(g: &'a DiGraph, fixed: &[VertexId]) -> impl Iterator<Item = DiGraph> + 'a {
    let movable = movable_vertices(g, fixed);
    PermutationEdges::new(g, movable).map(move |edges| g.with_edge_set(edges))
}

/// Heap's algorithm over the movable labels, yielding permuted edge sets.
struct PermutationEdges<'a> {
    g: &'a DiGraph,
    movable: Vec<VertexId>,
    perm: Vec<usize>,
    counters: Vec<usize>,
    image: Vec<VertexId>,
    depth: usize,
    started: bool,
}

impl<'a> PermutationEdges<'a> {
    fn new(g: &'a DiGraph, movable: Vec<VertexId>) -> Self {
        let k = movable.len();
        PermutationEdges {
            g,
            perm: (0..k).collect(),
            counters: vec![0; k],
            image: g.vertices().collect(),
            movable,
            depth: 1,
            started: false,
        }
    }
}

impl Iterator for PermutationEdges<'_> {
    type Item = BTreeSet<(VertexId, VertexId)>;

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            return Some(permuted_edges(self.g, &self.movable, &self.perm, &mut self.image));
        }
        let k = self.perm.len();
        while self.depth < k {
            let i = self.depth;
            if self.counters[i] < i {
                if i.is_multiple_of(2) {
                    self.perm.swap(0, i);
                } else {
                    self.perm.swap(self.counters[i], i);
                }
                self.counters[i] += 1;
                self.depth = 1;
                return Some(permuted_edges(self.g, &self.movable, &self.perm, &mut self.image));
            }
            self.counters[i] = 0;
            self.depth += 1;
        }
        None
    }
}

/// Canonical isomorphism fingerprint: the lexicographically minimal
/// adjacency-matrix encoding over all relabelings of the non-fixed vertices.
/// Fixed vertices keep their positions (in the order given). Exact, and
/// intended for graphs with at most ten vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint(pub Vec<u8>);

impl Fingerprint {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(&self.0))
    }
}

pub fn canonical_fingerprint(g: &DiGraph, fixed: &[VertexId]) -> Fingerprint {
    let movable = movable_vertices(g, fixed);
    let n = g.vertex_count();
    let mut order: Vec<VertexId> = fixed.to_vec();
    let base = order.len();
    order.extend(movable.iter().copied());
    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<usize> = (0..movable.len()).collect();
    let mut position = vec![0usize; n];
    let mut encode = |perm: &[usize], best: &mut Option<Vec<u8>>| {
        for (i, &v) in fixed.iter().enumerate() {
            position[v.index()] = i;
        }
        for (i, &p) in perm.iter().enumerate() {
            position[movable[p].index()] = base + i;
        }
        let mut bits = vec![0u8; 1 + (n * n).div_ceil(8)];
        bits[0] = n as u8;
        for (u, v) in g.edges() {
            let k = position[u.index()] * n + position[v.index()];
            // Set bits sort "edge present" first so denser prefixes win.
            bits[1 + k / 8] |= 0x80 >> (k % 8);
        }
        for b in bits.iter_mut().skip(1) {
            *b = !*b;
        }
        if best.as_ref().is_none_or(|cur| bits < *cur) {
            *best = Some(bits);
        }
    };
    encode(&perm, &mut best);
    let k = perm.len();
    let mut c = vec![0usize; k];
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            encode(&perm, &mut best);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Fingerprint(best.unwrap_or_default())
}

/// Fingerprint for σ-classes: fixes `s` and `t`.
pub fn sigma_fingerprint(g: &DiGraph) -> Fingerprint {
    canonical_fingerprint(g, &[VertexId::S, VertexId::T])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(&str, &str)]) -> DiGraph {
        DiGraph::from_edges(edges.iter().copied()).unwrap()
    }

    #[test]
    fn parse_basic_forms() {
        let a = parse_edge_list("s -> a\na -> t").unwrap();
        assert_eq!(a.vertex_count(), 3);
        assert_eq!(a.edge_count(), 2);

        let empty = parse_edge_list("").unwrap();
        assert_eq!(empty.vertex_count(), 2);
        assert_eq!(empty.edge_count(), 0);

        let iso = parse_edge_list("s -> a\n# note\nvertex b").unwrap();
        assert_eq!(iso.vertex_count(), 4);
        assert_eq!(iso.edge_count(), 1);
        let b = iso.id("b").unwrap();
        assert_eq!(iso.out_degree(b) + iso.in_degree(b), 0);
    }

    #[test]
    fn parse_errors_carry_location() {
        match parse_edge_list("s -> a\nwat\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("s -> a\n\ns -> a") {
            Err(GraphError::DuplicateEdge { line, from, to }) => {
                assert_eq!((line, from.as_str(), to.as_str()), (3, "s", "a"))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_edge_list("a -> a"), Err(GraphError::SelfLoop { line: 1, .. })));
        assert!(matches!(parse_edge_list("a- > b"), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_edge_list("a -> b c"), Err(GraphError::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        let text = "vertex z\ns -> a\na -> b\nb -> t\nt -> s\n";
        let g = parse_edge_list(text).unwrap();
        let again = parse_edge_list(&g.to_string()).unwrap();
        assert_eq!(g, again);
        assert_eq!(g.names(), again.names());
        let json = serde_json::to_string(&g).unwrap();
        let back: DiGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn st_path_examples() {
        assert!(has_st_path(&g(&[("s", "a"), ("a", "t")])));
        assert!(!has_st_path(&g(&[("s", "a"), ("b", "t")])));
        assert!(!has_st_path(&g(&[("t", "s")])));
    }

    #[test]
    fn lollipops() {
        assert_eq!(count_non_lollipops(&g(&[("s", "a"), ("a", "t")])), 0);
        let path = g(&[("s", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "t")]);
        assert_eq!(count_non_lollipops(&path), 1);
        // A single s-t path whose off-path vertices are all lollipops.
        let fig = g(&[
            ("s", "p1"),
            ("p1", "p2"),
            ("p2", "p3"),
            ("p3", "p4"),
            ("p4", "t"),
            ("s", "x1"),
            ("s", "x2"),
            ("x3", "t"),
        ]);
        assert_eq!(count_non_lollipops(&fig), 2);
    }

    #[test]
    fn sigma_examples() {
        let single = g(&[("s", "t")]);
        assert_eq!(sigma_st(&single).unwrap(), vec![single.clone()]);

        let mut path = g(&[("s", "a"), ("a", "t")]);
        path.add_vertex("b").unwrap();
        let set = sigma_st(&path).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set[0], path);
        assert!(set[1].has_named_edge("s", "b") && set[1].has_named_edge("b", "t"));
    }

    #[test]
    fn sigma_budget_is_enforced_but_stream_is_not() {
        let mut big = DiGraph::new();
        for i in 0..6 {
            big.add_vertex(&format!("v{i}")).unwrap();
        }
        let err = sigma(&big, &[VertexId::S, VertexId::T], 100).unwrap_err();
        assert_eq!(err, GraphError::Budget { needed: 720, budget: 100 });
        assert_eq!(sigma_stream(&big, &[VertexId::S, VertexId::T]).count(), 720);
    }

    #[test]
    fn sigma_with_extra_fixed_vertices() {
        let mut h = g(&[("s", "a"), ("a", "b"), ("b", "t")]);
        h.add_vertex("c").unwrap();
        let a = h.id("a").unwrap();
        let all = sigma_st(&h).unwrap();
        let fixed_a = sigma(&h, &[VertexId::S, VertexId::T, a], 100).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(fixed_a.len(), 2);
        assert!(fixed_a.iter().all(|m| m.has_edge(VertexId::S, a)));
    }

    #[test]
    fn fingerprint_identifies_relabelings() {
        let a = g(&[("s", "a"), ("a", "b"), ("b", "t")]);
        let b = g(&[("s", "b"), ("b", "a"), ("a", "t")]);
        let c = g(&[("s", "a"), ("b", "a"), ("b", "t")]);
        assert_eq!(sigma_fingerprint(&a), sigma_fingerprint(&b));
        assert_ne!(sigma_fingerprint(&a), sigma_fingerprint(&c));
    }

    #[test]
    fn without_vertices_reindexes() {
        let h = g(&[("s", "a"), ("a", "b"), ("b", "t")]);
        let a = h.id("a").unwrap();
        let smaller = h.without_vertices(&[a].into_iter().collect());
        assert_eq!(smaller.vertex_count(), 3);
        assert!(smaller.has_named_edge("b", "t"));
        assert_eq!(smaller.edge_count(), 1);
    }
}
