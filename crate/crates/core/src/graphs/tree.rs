//! Directed trees: classification, a compact adjacency form, canonical
//! codes, and exhaustive enumeration up to isomorphism.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::Rng;

use super::{DiGraph, GraphError, VertexId};

/// Shape of a graph whose underlying undirected graph may be a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", content = "vertex")]
pub enum TreeKind {
    FlowOut(VertexId),
    FlowIn(VertexId),
    GeneralTree,
    NotATree,
}

impl TreeKind {
    pub fn is_tree(self) -> bool {
        !matches!(self, TreeKind::NotATree)
    }
}

/// Classifies `g`. Isolated `s` and `t` are ignored, so a plain tree file
/// (which never mentions them) classifies as a tree. A bare directed path is
/// both flow-out and flow-in; flow-out wins.
pub fn classify_tree(g: &DiGraph) -> TreeKind {
    match DirectedTree::from_digraph(g) {
        Ok((tree, ids)) => match tree.kind() {
            TreeKind::FlowOut(r) => TreeKind::FlowOut(ids[r.index()]),
            TreeKind::FlowIn(r) => TreeKind::FlowIn(ids[r.index()]),
            other => other,
        },
        Err(_) => TreeKind::NotATree,
    }
}

/// One incident edge seen from a vertex: `out` is true for `v -> to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeArc {
    pub to: u32,
    pub out: bool,
}

/// A directed tree on dense indices `0..n` with compressed adjacency.
/// Vertex names are optional; unnamed vertices print as `v{i}`.
#[derive(Clone, Debug)]
pub struct DirectedTree {
    names: Option<Vec<String>>,
    edges: Vec<(u32, u32)>,
    offsets: Vec<u32>,
    arcs: Vec<TreeArc>,
}

impl PartialEq for DirectedTree {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|v| self.name(v as u32) == other.name(v as u32))
            && self.edge_set() == other.edge_set()
    }
}

impl DirectedTree {
    /// Validates that `edges` form a tree on `n >= 1` vertices.
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        Self::build(None, n, edges)
    }

    pub fn with_names(names: Vec<String>, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        let n = names.len();
        let distinct: HashSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(GraphError::NotATree("duplicate vertex names".into()));
        }
        Self::build(Some(names), n, edges)
    }

    fn build(names: Option<Vec<String>>, n: usize, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NotATree("no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(GraphError::NotATree(format!("{} vertices but {} edges", n, edges.len())));
        }
        let mut degree = vec![0u32; n + 1];
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::NotATree(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(GraphError::NotATree(format!("self-loop on {u}")));
            }
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut arcs = vec![TreeArc { to: 0, out: false }; 2 * (n - 1)];
        for &(u, v) in &edges {
            arcs[fill[u as usize] as usize] = TreeArc { to: v, out: true };
            fill[u as usize] += 1;
            arcs[fill[v as usize] as usize] = TreeArc { to: u, out: false };
            fill[v as usize] += 1;
        }
        let tree = DirectedTree { names, edges, offsets, arcs };
        // n - 1 edges plus connectivity rules out cycles and parallel edges.
        let (order, _) = tree.undirected_order(0);
        if order.len() != n {
            return Err(GraphError::NotATree("underlying graph is disconnected".into()));
        }
        Ok(tree)
    }

    /// Extracts the tree spanned by `g`, skipping `s` and `t` when they are
    /// isolated. Returns the tree and the graph id of each tree vertex.
    pub fn from_digraph(g: &DiGraph) -> Result<(Self, Vec<VertexId>), GraphError> {
        let touched: HashSet<VertexId> = g.edges().flat_map(|(u, v)| [u, v]).collect();
        let ids: Vec<VertexId> = g
            .vertices()
            .filter(|&v| (v != VertexId::S && v != VertexId::T) || touched.contains(&v))
            .collect();
        let mut local = vec![u32::MAX; g.vertex_count()];
        for (i, v) in ids.iter().enumerate() {
            local[v.index()] = i as u32;
        }
        let names = ids.iter().map(|&v| g.name(v).to_string()).collect();
        let edges = g.edges().map(|(u, v)| (local[u.index()], local[v.index()])).collect();
        for (u, v) in g.edges() {
            if g.has_edge(v, u) && u < v {
                return Err(GraphError::NotATree(format!(
                    "antiparallel pair {} <-> {}",
                    g.name(u),
                    g.name(v)
                )));
            }
        }
        Ok((Self::with_names(names, edges)?, ids))
    }

    /// The tree as a [`DiGraph`]. Vertices named `s` or `t` become the
    /// distinguished vertices.
    pub fn to_digraph(&self) -> DiGraph {
        let mut g = DiGraph::new();
        let ids: Vec<VertexId> = (0..self.len() as u32)
            .map(|v| g.ensure_vertex(&self.name(v)).expect("valid tree names"))
            .collect();
        for &(u, v) in &self.edges {
            g.add_edge(ids[u as usize], ids[v as usize]).expect("tree edges are simple");
        }
        g
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_set(&self) -> BTreeSet<(u32, u32)> {
        self.edges.iter().copied().collect()
    }

    #[inline]
    pub fn arcs(&self, v: u32) -> &[TreeArc] {
        &self.arcs[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    pub fn out_neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.arcs(v).iter().filter(|a| a.out).map(|a| a.to)
    }

    pub fn in_neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.arcs(v).iter().filter(|a| !a.out).map(|a| a.to)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.arcs(v).len()
    }

    pub fn in_degree(&self, v: u32) -> usize {
        self.in_neighbors(v).count()
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.out_neighbors(v).count()
    }

    pub fn name(&self, v: u32) -> Cow<'_, str> {
        match &self.names {
            Some(names) => Cow::Borrowed(names[v as usize].as_str()),
            None => Cow::Owned(format!("v{v}")),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len() as u32).map(|v| self.name(v).into_owned()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        (0..self.len() as u32).find(|&v| self.name(v) == name)
    }

    /// Same tree with fresh names produced by `f`.
    pub fn renamed(&self, f: impl Fn(u32) -> String) -> Self {
        let names = (0..self.len() as u32).map(f).collect();
        DirectedTree { names: Some(names), ..self.clone() }
    }

    /// Every edge reversed.
    pub fn reversed(&self) -> Self {
        let edges = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        Self::build(self.names.clone(), self.len(), edges).expect("reversal keeps a tree")
    }

    /// Flow-out if exactly one vertex has indegree 0, else flow-in if
    /// exactly one has outdegree 0, else a general tree.
    pub fn kind(&self) -> TreeKind {
        let n = self.len() as u32;
        let sources: Vec<u32> = (0..n).filter(|&v| self.in_degree(v) == 0).collect();
        if sources.len() == 1 {
            return TreeKind::FlowOut(VertexId(sources[0]));
        }
        let sinks: Vec<u32> = (0..n).filter(|&v| self.out_degree(v) == 0).collect();
        if sinks.len() == 1 {
            return TreeKind::FlowIn(VertexId(sinks[0]));
        }
        TreeKind::GeneralTree
    }

    pub fn flow_out_root(&self) -> Option<u32> {
        match self.kind() {
            TreeKind::FlowOut(r) => Some(r.0),
            _ => None,
        }
    }

    /// Breadth-first order ignoring directions, and each vertex's parent in
    /// that search (`u32::MAX` for the root).
    pub fn undirected_order(&self, root: u32) -> (Vec<u32>, Vec<u32>) {
        let n = self.len();
        let mut parent = vec![u32::MAX; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[root as usize] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for a in self.arcs(u) {
                if !seen[a.to as usize] {
                    seen[a.to as usize] = true;
                    parent[a.to as usize] = u;
                    order.push(a.to);
                }
            }
        }
        (order, parent)
    }

    /// Vertices reachable from `v` along directed edges, including `v`.
    pub fn descendants(&self, v: u32) -> Vec<u32> {
        self.directed_closure(v, true)
    }

    /// Vertices that reach `v`, including `v`.
    pub fn ancestors(&self, v: u32) -> Vec<u32> {
        self.directed_closure(v, false)
    }

    fn directed_closure(&self, v: u32, forward: bool) -> Vec<u32> {
        let mut seen = vec![false; self.len()];
        let mut out = vec![v];
        seen[v as usize] = true;
        let mut head = 0;
        while head < out.len() {
            let u = out[head];
            head += 1;
            for a in self.arcs(u) {
                if a.out == forward && !seen[a.to as usize] {
                    seen[a.to as usize] = true;
                    out.push(a.to);
                }
            }
        }
        out
    }

    /// Exact canonical code: equal iff the trees are isomorphic as directed
    /// trees (names ignored).
    pub fn canonical_code(&self) -> String {
        canonical_code(self.len(), &self.edges, true)
    }

    /// A random recursive tree: vertex `i` attaches to a uniform earlier
    /// vertex, each edge oriented by a fair coin.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "a tree needs at least one vertex");
        let edges = (1..n as u32)
            .map(|i| {
                let p = rng.gen_range(0..i);
                if rng.gen_bool(0.5) {
                    (p, i)
                } else {
                    (i, p)
                }
            })
            .collect();
        Self::new(n, edges).expect("random recursive trees are trees")
    }

    /// A random flow-out tree rooted at vertex 0.
    pub fn random_flow_out<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "a tree needs at least one vertex");
        let edges = (1..n as u32).map(|i| (rng.gen_range(0..i), i)).collect();
        Self::new(n, edges).expect("random recursive trees are trees")
    }

    /// `v0 -> v1 -> ... -> v{n-1}`.
    pub fn directed_path(n: usize) -> Self {
        Self::new(n, (1..n as u32).map(|i| (i - 1, i)).collect()).expect("path")
    }

    /// Root `v0` with `leaves` out-neighbours.
    pub fn out_star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves as u32).map(|i| (0, i)).collect()).expect("star")
    }
}

fn undirected_adjacency(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<(u32, bool)>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push((v, true));
        adj[v as usize].push((u, false));
    }
    adj
}

fn centers(adj: &[Vec<(u32, bool)>]) -> Vec<u32> {
    let n = adj.len();
    if n <= 2 {
        return (0..n as u32).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<u32> = (0..n as u32).filter(|&v| degree[v as usize] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf as usize] = 0;
            for &(w, _) in &adj[leaf as usize] {
                if degree[w as usize] > 0 {
                    degree[w as usize] -= 1;
                    if degree[w as usize] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn rooted_code(adj: &[Vec<(u32, bool)>], root: u32, directed: bool) -> String {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![u32::MAX; n];
    let mut marker = vec![' '; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root as usize] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &(w, out) in &adj[u as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = u;
                marker[w as usize] = if out { '>' } else { '<' };
                queue.push_back(w);
            }
        }
    }
    let mut codes: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut finished = vec![String::new(); n];
    for &u in order.iter().rev() {
        let mut kids = std::mem::take(&mut codes[u as usize]);
        kids.sort_unstable();
        let mut code = String::from("(");
        for k in kids {
            code.push_str(&k);
        }
        code.push(')');
        if parent[u as usize] == u32::MAX {
            finished[u as usize] = code;
        } else {
            let mut tagged = String::new();
            if directed {
                tagged.push(marker[u as usize]);
            }
            tagged.push_str(&code);
            codes[parent[u as usize] as usize].push(tagged);
        }
    }
    std::mem::take(&mut finished[root as usize])
}

/// AHU code rooted at the center(s); for two centers the smaller code wins.
fn canonical_code(n: usize, edges: &[(u32, u32)], directed: bool) -> String {
    let adj = undirected_adjacency(n, edges);
    centers(&adj)
        .into_iter()
        .map(|c| rooted_code(&adj, c, directed))
        .min()
        .unwrap_or_default()
}

/// Default ceiling for [`enumerate_directed_trees`].
pub const DEFAULT_TREE_LIMIT: usize = 10;

/// Free (unoriented) trees of exactly `n` vertices up to isomorphism, each as
/// an edge list on `0..n`.
pub fn free_trees_of_order(n: usize) -> Vec<Vec<(u32, u32)>> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
    for size in 1..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for tree in &level {
            for attach in 0..size as u32 {
                let mut grown = tree.clone();
                grown.push((attach, size as u32));
                if seen.insert(canonical_code(size + 1, &grown, false)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}

/// Directed trees of exactly `n` vertices up to isomorphism: every
/// orientation of every free tree, deduplicated by canonical code.
pub fn directed_trees_of_order(n: usize) -> Vec<DirectedTree> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for free in free_trees_of_order(n) {
        let m = free.len();
        for mask in 0u32..(1u32 << m) {
            let edges: Vec<(u32, u32)> = free
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| if mask >> i & 1 == 1 { (v, u) } else { (u, v) })
                .collect();
            if seen.insert(canonical_code(n, &edges, true)) {
                out.push(DirectedTree::new(n, edges).expect("orientations of trees are trees"));
            }
        }
    }
    out
}

/// Lazily yields every directed tree with `1..=n_max` vertices up to
/// isomorphism, one order at a time.
pub struct TreeCorpus {
    next_order: usize,
    n_max: usize,
    buffer: std::vec::IntoIter<DirectedTree>,
}

impl Iterator for TreeCorpus {
    type Item = DirectedTree;

    fn next(&mut self) -> Option<DirectedTree> {
        loop {
            if let Some(t) = self.buffer.next() {
                return Some(t);
            }
            if self.next_order > self.n_max {
                return None;
            }
            self.buffer = directed_trees_of_order(self.next_order).into_iter();
            self.next_order += 1;
        }
    }
}

/// Every directed tree on at most `n_max` vertices, refusing orders above
/// `limit`.
pub fn enumerate_directed_trees(n_max: usize, limit: usize) -> Result<TreeCorpus, GraphError> {
    if n_max > limit {
        return Err(GraphError::TreeLimit { requested: n_max, limit });
    }
    Ok(TreeCorpus { next_order: 1, n_max, buffer: Vec::new().into_iter() })
}
