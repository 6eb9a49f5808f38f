//! Exact minimal sound network size `m(I)` on tiny universes.
//!
//! The search rests on a normal form. Fix the cuts `C` of the universe with
//! `s ∈ C`, `t ∉ C`, and give each node of a sound network the bit vector
//! whose `C`-bit says whether the node is cut off from `s'` when only labels
//! that do not leave `C` are present. Then `s'` gets all zeros, `t'` gets all
//! ones, and every edge label leaves each cut on which its endpoints differ.
//! Nodes sharing a vector can be merged, and conversely any set of vectors
//! with all labels obeying that rule forms a sound network. So `m(I)` is the
//! fewest vectors (including both extremes) whose most permissive network
//! accepts all of `I`, which is what [`min_sound_msn`] searches for.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graphs::{has_st_path, sigma_st, DiGraph, GraphError, VertexId};
use crate::msn::{EdgeLabel, SwitchingNetwork, UnionFind, SINK, SOURCE};

/// Largest universe the search accepts (`s`, `t` and three more).
pub const MAX_UNIVERSE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Largest network size tried.
    pub max_size: usize,
    /// Cap on candidate vector sets examined.
    pub max_candidates: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_size: 10, max_candidates: 20_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub m: usize,
    /// A sound network of size `m` accepting every member of the instance.
    pub witness: SwitchingNetwork,
    /// Candidate vector sets examined.
    pub explored: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("empty instance")]
    Empty,
    #[error("instance member {0} has no s-t path, so no sound network accepts it")]
    NoStPath(usize),
    #[error("instance members do not share a vertex universe")]
    UniverseMismatch,
    #[error("universe of {0} vertices exceeds the search limit of {MAX_UNIVERSE}")]
    UniverseTooLarge(usize),
    #[error("search budget exceeded: m lies in [{lower}, {upper}]")]
    Budget { lower: usize, upper: usize, upper_witness: Box<SwitchingNetwork>, explored: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Precomputed cut geometry for one universe.
struct CutSpace {
    names: Vec<String>,
    /// Number of cuts, one per subset of inner vertices.
    cuts: usize,
    /// Bit `c` set when label `u -> v` leaves cut `c`, indexed by `u * k + v`.
    crossing: Vec<u64>,
}

impl CutSpace {
    fn new(names: Vec<String>) -> Self {
        let k = names.len();
        let cuts = 1usize << (k - 2);
        let inside = |c: usize, x: usize| match x {
            0 => true,
            1 => false,
            _ => c >> (x - 2) & 1 == 1,
        };
        let mut crossing = vec![0u64; k * k];
        for u in 0..k {
            for v in 0..k {
                if u != v {
                    for c in 0..cuts {
                        if inside(c, u) && !inside(c, v) {
                            crossing[u * k + v] |= 1 << c;
                        }
                    }
                }
            }
        }
        CutSpace { names, cuts, crossing }
    }

    fn k(&self) -> usize {
        self.names.len()
    }

    fn full(&self) -> u64 {
        if self.cuts == 64 {
            u64::MAX
        } else {
            (1u64 << self.cuts) - 1
        }
    }

    /// Label bitmask (bit `u * k + v`) of `g`, matched by vertex name.
    fn graph_mask(&self, g: &DiGraph) -> u64 {
        let k = self.k();
        let idx = |name: &str| self.names.iter().position(|n| n == name).expect("shared universe");
        g.edges().fold(0u64, |m, (u, v)| m | 1 << (idx(g.name(u)) * k + idx(g.name(v))))
    }

    /// Labels within `alphabet` allowed between two vectors.
    fn allowed(&self, x: u64, y: u64, alphabet: u64) -> u64 {
        let differ = x ^ y;
        let mut out = 0;
        let mut rest = alphabet;
        while rest != 0 {
            let l = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if differ & !self.crossing[l] == 0 {
                out |= 1 << l;
            }
        }
        out
    }
}

fn shared_universe(instance: &[DiGraph]) -> Result<Vec<String>, SearchError> {
    let first = instance.first().ok_or(SearchError::Empty)?;
    let names: BTreeSet<&str> = first.names().iter().map(String::as_str).collect();
    for g in instance {
        let other: BTreeSet<&str> = g.names().iter().map(String::as_str).collect();
        if other != names {
            return Err(SearchError::UniverseMismatch);
        }
    }
    Ok(first.names().to_vec())
}

/// Sound network made of one dedicated `s' .. t'` path per member, following
/// a shortest `s -> t` path of that member. Size `2 + Σ (len - 1)`.
pub fn dedicated_path_network(instance: &[DiGraph]) -> Result<SwitchingNetwork, SearchError> {
    let names = shared_universe(instance)?;
    let mut net = SwitchingNetwork::new();
    for name in names.iter().skip(2) {
        net.ensure_universe_vertex(name).expect("valid names");
    }
    let mut fresh = 0;
    for (i, g) in instance.iter().enumerate() {
        let path = shortest_st_path(g).ok_or(SearchError::NoStPath(i))?;
        let mut prev = SOURCE;
        for (j, w) in path.windows(2).enumerate() {
            let next = if j + 2 == path.len() {
                SINK
            } else {
                fresh += 1;
                net.add_node(&format!("p{fresh}")).expect("fresh")
            };
            let label = net.label(g.name(w[0]), g.name(w[1])).expect("valid label");
            net.add_edge(prev, next, label).expect("in range");
            prev = next;
        }
    }
    Ok(net)
}

fn shortest_st_path(g: &DiGraph) -> Option<Vec<VertexId>> {
    let (out, _) = g.adjacency();
    let mut prev = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([VertexId::S]);
    while let Some(u) = queue.pop_front() {
        for &v in &out[u.index()] {
            if !seen[v.index()] {
                seen[v.index()] = true;
                prev[v.index()] = Some(u);
                queue.push_back(v);
            }
        }
    }
    if !seen[VertexId::T.index()] {
        return None;
    }
    let mut path = vec![VertexId::T];
    while let Some(p) = prev[path.last().unwrap().index()] {
        path.push(p);
    }
    path.reverse();
    Some(path)
}

/// Whether the most permissive network on `types` accepts every mask.
fn accepts_all(space: &CutSpace, types: &[u64], masks: &[u64], alphabet: u64) -> bool {
    let m = types.len();
    let mut pair_labels = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            pair_labels.push(if i < j { space.allowed(types[i], types[j], alphabet) } else { 0 });
        }
    }
    masks.iter().all(|&g| {
        let mut uf = UnionFind::new(m);
        for i in 0..m {
            for j in i + 1..m {
                if pair_labels[i * m + j] & g != 0 {
                    uf.union(i as u32, j as u32);
                }
            }
        }
        uf.find(0) == uf.find(1)
    })
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Exact `m(I)` with a witness, or an interval when the budget runs out.
pub fn min_sound_msn(instance: &[DiGraph], budget: SearchBudget) -> Result<SearchResult, SearchError> {
    let names = shared_universe(instance)?;
    if let Some(i) = instance.iter().position(|g| !has_st_path(g)) {
        return Err(SearchError::NoStPath(i));
    }
    if names.len() > MAX_UNIVERSE {
        return Err(SearchError::UniverseTooLarge(names.len()));
    }
    let space = CutSpace::new(names);
    let masks: Vec<u64> = instance.iter().map(|g| space.graph_mask(g)).collect();
    // Labels outside every member can never help acceptance.
    let alphabet = masks.iter().fold(0, |a, &m| a | m);
    let full = space.full();
    let pool: Vec<u64> = (1..full).collect();
    let mut explored = 0u64;

    for size in 2..=budget.max_size {
        let extra = size - 2;
        let needed = binomial(pool.len() as u64, extra as u64);
        if explored.saturating_add(needed) > budget.max_candidates || extra > pool.len() {
            return over_budget(instance, size, explored);
        }
        let mut combo: Vec<usize> = (0..extra).collect();
        loop {
            explored += 1;
            let mut types = vec![0, full];
            types.extend(combo.iter().map(|&i| pool[i]));
            if accepts_all(&space, &types, &masks, alphabet) {
                let witness = build_witness(&space, &types, instance, alphabet);
                return Ok(SearchResult { m: size, witness, explored });
            }
            if !next_combination(&mut combo, pool.len()) {
                break;
            }
        }
    }
    over_budget(instance, budget.max_size + 1, explored)
}

fn over_budget(instance: &[DiGraph], lower: usize, explored: u64) -> Result<SearchResult, SearchError> {
    let net = dedicated_path_network(instance)?;
    Err(SearchError::Budget { lower, upper: net.size().max(lower), upper_witness: Box::new(net), explored })
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let r = combo.len();
    for i in (0..r).rev() {
        if combo[i] < n - r + i {
            combo[i] += 1;
            for j in i + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Materializes the network on `types`, then drops edges greedily while
/// every member stays accepted. Removing edges never breaks soundness.
fn build_witness(space: &CutSpace, types: &[u64], instance: &[DiGraph], alphabet: u64) -> SwitchingNetwork {
    let mut net = SwitchingNetwork::new();
    for name in space.names.iter().skip(2) {
        net.ensure_universe_vertex(name).expect("valid names");
    }
    let index: Vec<u32> = space.names.iter().map(|n| net.ensure_universe_vertex(n).unwrap()).collect();
    for i in 2..types.len() {
        net.add_node(&format!("q{}", i - 1)).expect("fresh");
    }
    let k = space.k();
    for i in 0..types.len() {
        for j in i + 1..types.len() {
            let mut labels = space.allowed(types[i], types[j], alphabet);
            while labels != 0 {
                let l = labels.trailing_zeros() as usize;
                labels &= labels - 1;
                let label = EdgeLabel::Directed(index[l / k], index[l % k]);
                net.add_edge(i as u32, j as u32, label).expect("in range");
            }
        }
    }
    let mut i = 0;
    while i < net.edges().len() {
        let mut trial = net.clone();
        trial.remove_edge(i);
        if instance.iter().all(|g| trial.accepts(g)) {
            net = trial;
        } else {
            i += 1;
        }
    }
    net
}

/// `m(σ(G))`.
pub fn min_sound_msn_sigma(g: &DiGraph, budget: SearchBudget) -> Result<SearchResult, SearchError> {
    let set = sigma_st(g)?;
    min_sound_msn(&set, budget)
}

/// Does the exact search return exactly `claimed`?
pub fn verify_m(instance: &[DiGraph], claimed: usize, budget: SearchBudget) -> Result<bool, SearchError> {
    Ok(min_sound_msn(instance, budget)?.m == claimed)
}

/// The graph from the permutation-set figure: `s -> a -> t` with `b`
/// isolated, so its permutation set has two members.
pub fn figure2_graph() -> DiGraph {
    crate::graphs::parse_edge_list("s -> a\na -> t\nvertex b").expect("static graph")
}
