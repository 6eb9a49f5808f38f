//! Monotone switching networks: an undirected multigraph between `s'` and
//! `t'` whose edges carry directed-edge labels over an input universe.
//!
//! A network accepts an input graph when `s'` and `t'` are connected using
//! only edges whose label is an edge of the input (or that are unlabeled).
//! It is sound when it accepts no graph lacking an `s -> t` path.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{has_st_path, is_valid_name, DiGraph, VertexId};

/// Index of `s'` among network nodes.
pub const SOURCE: u32 = 0;
/// Index of `t'` among network nodes.
pub const SINK: u32 = 1;

/// Default cap on states visited by the soundness walk search.
pub const DEFAULT_SOUND_BUDGET: usize = 2_000_000;
/// Default cap on simple paths checked by [`SwitchingNetwork::is_complete`].
pub const DEFAULT_COMPLETE_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MsnError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown network node `{0}`")]
    UnknownNode(String),
    #[error("unknown universe vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: String, limit: usize },
    #[error("invalid transform: {0}")]
    Transform(String),
}

/// Edge label: a directed edge `u -> v` of the universe (by index), or none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    Directed(u32, u32),
    Unlabeled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NetEdge {
    pub a: u32,
    pub b: u32,
    pub label: EdgeLabel,
}

/// Undirected multigraph on `nodes` (index 0 is `s'`, 1 is `t'`) with
/// labels over `universe` (index 0 is `s`, 1 is `t`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchingNetwork {
    universe: Vec<String>,
    nodes: Vec<String>,
    edges: Vec<NetEdge>,
}

impl Default for SwitchingNetwork {
    fn default() -> Self {
        Self::new()
    }
}

fn is_node_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl SwitchingNetwork {
    /// Network with nodes `s'`, `t'`, universe `{s, t}` and no edges.
    pub fn new() -> Self {
        SwitchingNetwork {
            universe: vec!["s".into(), "t".into()],
            nodes: vec!["s'".into(), "t'".into()],
            edges: Vec::new(),
        }
    }

    /// Empty network whose universe matches the vertices of `g`.
    pub fn over_graph(g: &DiGraph) -> Self {
        let mut n = Self::new();
        for v in g.inner_vertices() {
            n.ensure_universe_vertex(g.name(v)).expect("graph names are valid");
        }
        n
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[NetEdge] {
        &self.edges
    }

    /// Number of network vertices.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn ensure_universe_vertex(&mut self, name: &str) -> Result<u32, MsnError> {
        if let Some(i) = self.universe.iter().position(|u| u == name) {
            return Ok(i as u32);
        }
        if !is_valid_name(name) {
            return Err(MsnError::InvalidLabel(name.to_string()));
        }
        self.universe.push(name.to_string());
        Ok(self.universe.len() as u32 - 1)
    }

    /// Pads the universe with fresh vertices until it has `size` members.
    pub fn pad_universe(&mut self, size: usize) {
        let mut k = 1;
        while self.universe.len() < size {
            let name = format!("x{k}");
            k += 1;
            if !self.universe.contains(&name) {
                self.universe.push(name);
            }
        }
    }

    pub fn add_node(&mut self, name: &str) -> Result<u32, MsnError> {
        if !is_node_name(name) || self.nodes.iter().any(|n| n == name) {
            return Err(MsnError::Parse { line: 0, message: format!("bad or duplicate node `{name}`") });
        }
        self.nodes.push(name.to_string());
        Ok(self.nodes.len() as u32 - 1)
    }

    /// Appends a node whose name the caller knows to be fresh and valid.
    pub(crate) fn push_fresh_node(&mut self, name: String) -> u32 {
        debug_assert!(is_node_name(&name));
        self.nodes.push(name);
        self.nodes.len() as u32 - 1
    }

    pub fn ensure_node(&mut self, name: &str) -> Result<u32, MsnError> {
        match self.node_index(name) {
            Some(i) => Ok(i),
            None => self.add_node(name),
        }
    }

    pub fn node_index(&self, name: &str) -> Option<u32> {
        self.nodes.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn node_name(&self, i: u32) -> &str {
        &self.nodes[i as usize]
    }

    /// Label `u -> v` over universe names, extending the universe if needed.
    pub fn label(&mut self, u: &str, v: &str) -> Result<EdgeLabel, MsnError> {
        if u == v {
            return Err(MsnError::InvalidLabel(format!("{u}->{v}")));
        }
        let a = self.ensure_universe_vertex(u)?;
        let b = self.ensure_universe_vertex(v)?;
        Ok(EdgeLabel::Directed(a, b))
    }

    pub fn add_edge(&mut self, a: u32, b: u32, label: EdgeLabel) -> Result<(), MsnError> {
        for x in [a, b] {
            if x as usize >= self.nodes.len() {
                return Err(MsnError::UnknownNode(format!("#{x}")));
            }
        }
        if let EdgeLabel::Directed(u, v) = label {
            if u == v || u as usize >= self.universe.len() || v as usize >= self.universe.len() {
                return Err(MsnError::InvalidLabel(format!("{u}->{v}")));
            }
        }
        self.edges.push(NetEdge { a, b, label });
        Ok(())
    }

    /// Removes the `i`-th edge.
    pub fn remove_edge(&mut self, i: usize) -> NetEdge {
        self.edges.remove(i)
    }

    /// Adds an edge between named nodes (created on demand) with a named
    /// label; `None` means unlabeled.
    pub fn connect(&mut self, a: &str, b: &str, label: Option<(&str, &str)>) -> Result<(), MsnError> {
        let x = self.ensure_node(a)?;
        let y = self.ensure_node(b)?;
        let l = match label {
            Some((u, v)) => self.label(u, v)?,
            None => EdgeLabel::Unlabeled,
        };
        self.add_edge(x, y, l)
    }

    pub fn label_text(&self, label: EdgeLabel) -> String {
        match label {
            EdgeLabel::Directed(u, v) => format!("{}->{}", self.universe[u as usize], self.universe[v as usize]),
            EdgeLabel::Unlabeled => "*".into(),
        }
    }

    /// Distinct directed labels, in first-use order.
    pub fn distinct_labels(&self) -> Vec<(u32, u32)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for e in &self.edges {
            if let EdgeLabel::Directed(u, v) = e.label {
                if seen.insert((u, v)) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Whether each universe label `u -> v` is an edge of `g`, matched by name.
    fn label_presence<'a>(&'a self, g: &'a DiGraph) -> impl Fn(EdgeLabel) -> bool + 'a {
        let ids: Vec<Option<VertexId>> = self.universe.iter().map(|n| g.id(n)).collect();
        move |label| match label {
            EdgeLabel::Unlabeled => true,
            EdgeLabel::Directed(u, v) => match (ids[u as usize], ids[v as usize]) {
                (Some(a), Some(b)) => g.has_edge(a, b),
                _ => false,
            },
        }
    }

    /// Does `s'` reach `t'` using edges whose labels are edges of `g`?
    pub fn accepts(&self, g: &DiGraph) -> bool {
        let present = self.label_presence(g);
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            if present(e.label) {
                uf.union(e.a, e.b);
            }
        }
        uf.find(SOURCE) == uf.find(SINK)
    }

    /// Input graph over the universe with exactly the given labels as edges.
    pub fn label_graph(&self, labels: impl IntoIterator<Item = (u32, u32)>) -> DiGraph {
        let mut g = DiGraph::new();
        for name in self.universe.iter().skip(2) {
            g.add_vertex(name).expect("universe names are valid and distinct");
        }
        for (u, v) in labels {
            let a = g.require(&self.universe[u as usize]).expect("universe vertex");
            let b = g.require(&self.universe[v as usize]).expect("universe vertex");
            g.insert_edge(a, b).expect("labels are not self-loops");
        }
        g
    }

    /// Decides soundness by searching for an accepting walk whose label set
    /// has no `s -> t` path. States are accumulated label sets; a branch dies
    /// once its labels contain an `s -> t` path. `budget` caps visited states.
    pub fn is_sound(&self, budget: usize) -> Result<SoundnessReport, MsnError> {
        let labels = self.distinct_labels();
        if labels.len() > 128 {
            return Err(MsnError::Budget { what: "more than 128 distinct labels".into(), limit: 128 });
        }
        if self.universe.len() > 64 {
            return Err(MsnError::Budget { what: "universe larger than 64".into(), limit: 64 });
        }
        let label_id: HashMap<(u32, u32), usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let edge_label: Vec<Option<usize>> = self
            .edges
            .iter()
            .map(|e| match e.label {
                EdgeLabel::Directed(u, v) => Some(label_id[&(u, v)]),
                EdgeLabel::Unlabeled => None,
            })
            .collect();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.a as usize].push(i);
            incident[e.b as usize].push(i);
        }
        let usable = |set: u128, i: usize| edge_label[i].is_none_or(|l| set >> l & 1 == 1);
        let closure = |set: u128| -> Vec<bool> {
            let mut seen = vec![false; self.nodes.len()];
            seen[SOURCE as usize] = true;
            let mut stack = vec![SOURCE];
            while let Some(x) = stack.pop() {
                for &i in &incident[x as usize] {
                    if usable(set, i) {
                        let e = &self.edges[i];
                        let y = if e.a == x { e.b } else { e.a };
                        if !seen[y as usize] {
                            seen[y as usize] = true;
                            stack.push(y);
                        }
                    }
                }
            }
            seen
        };
        let has_path = |set: u128| -> bool {
            let mut adj = vec![0u64; self.universe.len()];
            for (i, &(u, v)) in labels.iter().enumerate() {
                if set >> i & 1 == 1 {
                    adj[u as usize] |= 1 << v;
                }
            }
            let mut reach = 1u64;
            let mut frontier = 1u64;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let x = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= adj[x];
                }
                frontier = next & !reach;
                reach |= next;
            }
            reach >> 1 & 1 == 1
        };

        let mut visited: HashSet<u128> = HashSet::new();
        let mut stack = vec![0u128];
        visited.insert(0);
        while let Some(set) = stack.pop() {
            let comp = closure(set);
            if comp[SINK as usize] {
                let witness_labels: Vec<(u32, u32)> =
                    labels.iter().enumerate().filter(|(i, _)| set >> i & 1 == 1).map(|(_, &l)| l).collect();
                let walk = self.walk_under(|i| usable(set, i));
                return Ok(SoundnessReport {
                    sound: false,
                    witness: Some(SoundnessWitness { walk, graph: self.label_graph(witness_labels) }),
                    explored: visited.len(),
                });
            }
            for (i, e) in self.edges.iter().enumerate() {
                let Some(l) = edge_label[i] else { continue };
                if set >> l & 1 == 1 || comp[e.a as usize] == comp[e.b as usize] {
                    continue;
                }
                let next = set | 1u128 << l;
                if visited.contains(&next) || has_path(next) {
                    continue;
                }
                if visited.len() >= budget {
                    return Err(MsnError::Budget { what: "soundness search states".into(), limit: budget });
                }
                visited.insert(next);
                stack.push(next);
            }
        }
        Ok(SoundnessReport { sound: true, witness: None, explored: visited.len() })
    }

    /// Exact soundness oracle by cuts: every graph without an `s -> t` path
    /// is contained in the graph of all labels not leaving some cut
    /// `C ∋ s` with `t ∉ C`, so the network is sound iff it rejects each of
    /// those cut graphs. Exponential only in the label vertices.
    pub fn is_sound_by_cuts(&self) -> Result<SoundnessReport, MsnError> {
        let labels = self.distinct_labels();
        let mut mentioned: Vec<u32> = labels.iter().flat_map(|&(u, v)| [u, v]).filter(|&x| x >= 2).collect();
        mentioned.sort_unstable();
        mentioned.dedup();
        if mentioned.len() > 24 {
            return Err(MsnError::Budget { what: "cut enumeration over label vertices".into(), limit: 24 });
        }
        let mut position = vec![usize::MAX; self.universe.len()];
        for (i, &x) in mentioned.iter().enumerate() {
            position[x as usize] = i;
        }
        let side = |cut: u32, x: u32| -> bool {
            match x {
                0 => true,
                1 => false,
                _ => cut >> position[x as usize] & 1 == 1,
            }
        };
        for cut in 0u32..(1u32 << mentioned.len()) {
            let keep = |label: EdgeLabel| match label {
                EdgeLabel::Unlabeled => true,
                EdgeLabel::Directed(u, v) => !(side(cut, u) && !side(cut, v)),
            };
            let mut uf = UnionFind::new(self.nodes.len());
            for e in &self.edges {
                if keep(e.label) {
                    uf.union(e.a, e.b);
                }
            }
            if uf.find(SOURCE) == uf.find(SINK) {
                let graph_labels: Vec<(u32, u32)> =
                    labels.iter().copied().filter(|&(u, v)| keep(EdgeLabel::Directed(u, v))).collect();
                let walk = self.walk_under(|i| keep(self.edges[i].label));
                return Ok(SoundnessReport {
                    sound: false,
                    witness: Some(SoundnessWitness { walk, graph: self.label_graph(graph_labels) }),
                    explored: cut as usize + 1,
                });
            }
        }
        Ok(SoundnessReport { sound: true, witness: None, explored: 1 << mentioned.len() })
    }

    /// Shortest `s' .. t'` node walk over the usable edges.
    fn walk_under(&self, usable: impl Fn(usize) -> bool) -> Vec<String> {
        let n = self.nodes.len();
        let mut prev = vec![u32::MAX; n];
        let mut seen = vec![false; n];
        seen[SOURCE as usize] = true;
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(x) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if !usable(i) || (e.a != x && e.b != x) {
                    continue;
                }
                let y = if e.a == x { e.b } else { e.a };
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    prev[y as usize] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut walk = vec![SINK];
        let mut cur = SINK;
        while cur != SOURCE && prev[cur as usize] != u32::MAX {
            cur = prev[cur as usize];
            walk.push(cur);
        }
        walk.reverse();
        walk.into_iter().map(|x| self.nodes[x as usize].clone()).collect()
    }

    /// Checks acceptance of every simple `s -> t` path over the universe,
    /// which by monotonicity decides completeness.
    pub fn is_complete(&self, budget: usize) -> Result<CompletenessReport, MsnError> {
        let inner: Vec<u32> = (2..self.universe.len() as u32).collect();
        let mut checked = 0usize;
        let mut path: Vec<u32> = Vec::new();
        let mut used = vec![false; self.universe.len()];
        let mut counterexample = None;
        self.complete_dfs(&inner, &mut path, &mut used, &mut checked, budget, &mut counterexample)?;
        Ok(CompletenessReport { complete: counterexample.is_none(), counterexample, checked })
    }

    fn complete_dfs(
        &self,
        inner: &[u32],
        path: &mut Vec<u32>,
        used: &mut [bool],
        checked: &mut usize,
        budget: usize,
        found: &mut Option<DiGraph>,
    ) -> Result<(), MsnError> {
        if found.is_some() {
            return Ok(());
        }
        if *checked >= budget {
            return Err(MsnError::Budget { what: "simple s-t paths".into(), limit: budget });
        }
        *checked += 1;
        let mut seq = vec![0u32];
        seq.extend(path.iter().copied());
        seq.push(1);
        let g = self.label_graph(seq.windows(2).map(|w| (w[0], w[1])));
        if !self.accepts(&g) {
            *found = Some(g);
            return Ok(());
        }
        for &x in inner {
            if !used[x as usize] {
                used[x as usize] = true;
                path.push(x);
                self.complete_dfs(inner, path, used, checked, budget, found)?;
                path.pop();
                used[x as usize] = false;
            }
        }
        Ok(())
    }

    /// Applies one of the network-side transforms used in the reduction
    /// arguments. The node set never changes.
    pub fn apply_transform(&self, t: &NetworkTransform) -> Result<SwitchingNetwork, MsnError> {
        let mut out = self.clone();
        let lookup = |name: &str| -> Result<u32, MsnError> {
            self.universe
                .iter()
                .position(|u| u == name)
                .map(|i| i as u32)
                .ok_or_else(|| MsnError::UnknownVertex(name.to_string()))
        };
        let filter = |label: &Option<(String, String)>| -> Result<Option<(u32, u32)>, MsnError> {
            match label {
                Some((u, v)) => Ok(Some((lookup(u)?, lookup(v)?))),
                None => Ok(None),
            }
        };
        match t {
            NetworkTransform::ParallelSTo { label } => {
                let want = filter(label)?;
                for e in &self.edges {
                    if let EdgeLabel::Directed(u, v) = e.label {
                        if want.is_some_and(|w| w != (u, v)) || u == 0 || v == 0 {
                            continue;
                        }
                        out.edges.push(NetEdge { a: e.a, b: e.b, label: EdgeLabel::Directed(0, v) });
                    }
                }
            }
            NetworkTransform::ParallelToT { label } => {
                let want = filter(label)?;
                for e in &self.edges {
                    if let EdgeLabel::Directed(u, v) = e.label {
                        if want.is_some_and(|w| w != (u, v)) || u == 1 || v == 1 {
                            continue;
                        }
                        out.edges.push(NetEdge { a: e.a, b: e.b, label: EdgeLabel::Directed(u, 1) });
                    }
                }
            }
            NetworkTransform::UnlabelIntoS => {
                for e in &mut out.edges {
                    if matches!(e.label, EdgeLabel::Directed(_, 0)) {
                        e.label = EdgeLabel::Unlabeled;
                    }
                }
            }
            NetworkTransform::UnlabelFromT => {
                for e in &mut out.edges {
                    if matches!(e.label, EdgeLabel::Directed(1, _)) {
                        e.label = EdgeLabel::Unlabeled;
                    }
                }
            }
            NetworkTransform::RelabelMerge { s_set, t_set } => {
                let mut role = vec![None; self.universe.len()];
                for name in s_set {
                    let x = lookup(name)?;
                    if x == 1 {
                        return Err(MsnError::Transform("t cannot merge into s".into()));
                    }
                    role[x as usize] = Some(0u32);
                }
                for name in t_set {
                    let x = lookup(name)?;
                    if x == 0 || role[x as usize].is_some() {
                        return Err(MsnError::Transform(format!("`{name}` cannot merge into t")));
                    }
                    role[x as usize] = Some(1u32);
                }
                role[0] = Some(0);
                role[1] = Some(1);
                for e in &mut out.edges {
                    if let EdgeLabel::Directed(u, v) = e.label {
                        let a = role[u as usize].unwrap_or(u);
                        let b = role[v as usize].unwrap_or(v);
                        // A label inside one merged class is always present in
                        // the lifted input, so it becomes free.
                        e.label = if a == b { EdgeLabel::Unlabeled } else { EdgeLabel::Directed(a, b) };
                    }
                }
            }
        }
        Ok(out)
    }

    /// Parses the network text format.
    pub fn parse(text: &str) -> Result<Self, MsnError> {
        let mut net = SwitchingNetwork::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| MsnError::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((lhs, rhs)) = line.split_once(':') {
                let Some((a, b)) = lhs.split_once("--") else {
                    return Err(err(format!("expected `u -- v : label`, got `{line}`")));
                };
                let (a, b) = (a.trim(), b.trim());
                if !is_node_name(a) || !is_node_name(b) {
                    return Err(err(format!("bad node names in `{line}`")));
                }
                let label = rhs.trim();
                let parsed = if label == "*" {
                    None
                } else {
                    match label.split_once("->") {
                        Some((u, v)) if is_valid_name(u.trim()) && is_valid_name(v.trim()) && u.trim() != v.trim() => {
                            Some((u.trim(), v.trim()))
                        }
                        _ => return Err(err(format!("bad label `{label}`"))),
                    }
                };
                net.connect(a, b, parsed).map_err(|e| err(e.to_string()))?;
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("universe") => {
                    for w in words {
                        net.ensure_universe_vertex(w).map_err(|e| err(e.to_string()))?;
                    }
                }
                Some("node") => {
                    let name = words.next().ok_or_else(|| err("missing node name".into()))?;
                    if words.next().is_some() {
                        return Err(err(format!("unrecognised line `{line}`")));
                    }
                    net.ensure_node(name).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("unrecognised line `{line}`"))),
            }
        }
        Ok(net)
    }
}

impl fmt::Display for SwitchingNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.universe.len() > 2 {
            writeln!(f, "universe {}", self.universe.join(" "))?;
        }
        for name in self.nodes.iter().skip(2) {
            writeln!(f, "node {name}")?;
        }
        for e in &self.edges {
            writeln!(f, "{} -- {} : {}", self.nodes[e.a as usize], self.nodes[e.b as usize], self.label_text(e.label))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkWire {
    universe: Vec<String>,
    nodes: Vec<String>,
    edges: Vec<EdgeWire>,
}

#[derive(Serialize, Deserialize)]
struct EdgeWire {
    a: String,
    b: String,
    label: String,
}

impl Serialize for SwitchingNetwork {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NetworkWire {
            universe: self.universe.clone(),
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeWire {
                    a: self.nodes[e.a as usize].clone(),
                    b: self.nodes[e.b as usize].clone(),
                    label: self.label_text(e.label),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SwitchingNetwork {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = NetworkWire::deserialize(deserializer)?;
        let mut net = SwitchingNetwork::new();
        for u in &wire.universe {
            net.ensure_universe_vertex(u).map_err(D::Error::custom)?;
        }
        for n in &wire.nodes {
            net.ensure_node(n).map_err(D::Error::custom)?;
        }
        for e in &wire.edges {
            let label = if e.label == "*" {
                None
            } else {
                Some(e.label.split_once("->").ok_or_else(|| D::Error::custom(format!("bad label {}", e.label)))?)
            };
            net.connect(&e.a, &e.b, label).map_err(D::Error::custom)?;
        }
        Ok(net)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessWitness {
    /// Node names from `s'` to `t'`.
    pub walk: Vec<String>,
    /// An accepted input graph with no `s -> t` path.
    pub graph: DiGraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub sound: bool,
    pub witness: Option<SoundnessWitness>,
    /// States (walk search) or cuts (cut oracle) examined.
    pub explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub complete: bool,
    /// A rejected simple `s -> t` path, when incomplete.
    pub counterexample: Option<DiGraph>,
    pub checked: usize,
}

/// Network-side transforms. Labels and vertex sets are given by universe name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "transform", rename_all = "snake_case")]
pub enum NetworkTransform {
    /// For each edge labeled `v1 -> v2` (all, or only the given label) add a
    /// parallel edge labeled `s -> v2`.
    ParallelSTo { label: Option<(String, String)> },
    /// Mirror image: add a parallel edge labeled `v1 -> t`.
    ParallelToT { label: Option<(String, String)> },
    /// Labels `v -> s` become unlabeled.
    UnlabelIntoS,
    /// Labels `t -> v` become unlabeled.
    UnlabelFromT,
    /// Label endpoints in `s_set` become `s`, those in `t_set` become `t`.
    RelabelMerge { s_set: Vec<String>, t_set: Vec<String> },
}

/// Disjoint-set forest over network nodes.
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }
}

/// The reachable-set network over `{s, t, a, b}`: each inner node records
/// which of `a`, `b` are known reachable from `s`. Sound and complete.
pub fn figure1_network() -> SwitchingNetwork {
    SwitchingNetwork::parse(
        "universe s t a b\n\
         s' -- t' : s->t\n\
         s' -- A : s->a\n\
         s' -- B : s->b\n\
         A -- t' : a->t\n\
         B -- t' : b->t\n\
         A -- AB : a->b\n\
         B -- AB : b->a\n\
         AB -- t' : a->t\n\
         AB -- t' : b->t\n",
    )
    .expect("static network parses")
}

/// A uniformly random network: `size` nodes, `edges` edges with random
/// endpoints and random labels over a universe of `universe` vertices
/// (named `s`, `t`, `a`, `b`, ...). Unlabeled edges appear with the given
/// probability.
pub fn random_network<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    universe: usize,
    edges: usize,
    unlabeled: f64,
) -> SwitchingNetwork {
    assert!(size >= 2 && universe >= 2);
    let mut net = SwitchingNetwork::new();
    for i in 0..universe.saturating_sub(2) {
        net.ensure_universe_vertex(&universe_name(i)).expect("generated names are valid");
    }
    for i in 2..size {
        net.add_node(&format!("n{i}")).expect("fresh node");
    }
    for _ in 0..edges {
        let a = rng.gen_range(0..size as u32);
        let mut b = rng.gen_range(0..size as u32 - 1);
        if b >= a {
            b += 1;
        }
        let label = if rng.gen_bool(unlabeled) {
            EdgeLabel::Unlabeled
        } else {
            let pair: Vec<u32> = (0..universe as u32).collect::<Vec<_>>().choose_multiple(rng, 2).copied().collect();
            EdgeLabel::Directed(pair[0], pair[1])
        };
        net.add_edge(a, b, label).expect("in range");
    }
    net
}

/// Names `a`, `b`, ... for the inner universe vertices of generated instances.
pub fn universe_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("u{i}")
    }
}

/// Rejection-samples random networks until one is sound by the cut oracle.
pub fn random_sound_network<R: Rng + ?Sized>(
    rng: &mut R,
    max_size: usize,
    universe: usize,
) -> SwitchingNetwork {
    loop {
        let size = rng.gen_range(2..=max_size);
        let edges = rng.gen_range(1..=2 * size);
        let net = random_network(rng, size, universe, edges, 0.1);
        if net.is_sound_by_cuts().map(|r| r.sound).unwrap_or(false) {
            return net;
        }
    }
}

/// Does `g` have an `s -> t` path? Re-exported for witness checks.
pub fn witness_is_disconnected(w: &SoundnessWitness) -> bool {
    !has_st_path(&w.graph)
}
