//! The layered graph whose merge raises `m`, and the random path network
//! that accepts its whole permutation set.
//!
//! The layered graph has `ℓ - 1` layers of `⌊(n-2)/(2(ℓ-1))⌋` vertices with
//! complete edges between consecutive layers, `s` into the first layer and
//! the last layer into `t`. The network is `C` internally disjoint
//! `s'`-`t'` paths of length `ℓ`, each labeled `s -> w_1, w_1 -> w_2, …,
//! w_{ℓ-1} -> t` for random `w_i`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graphs::{DiGraph, VertexId};
use crate::msn::{EdgeLabel, MsnError, SwitchingNetwork, SINK, SOURCE};

/// Largest permutation set swept exhaustively.
pub const EXHAUSTIVE_CAP: u128 = 100_000;
/// Members drawn when the permutation set is too large to sweep.
pub const DEFAULT_SAMPLES: usize = 20_000;
/// Largest `n` for which soundness is also checked by cut enumeration.
pub const CUT_CHECK_MAX_N: usize = 12;
/// Seeds tried before giving up on full acceptance.
pub const MAX_SEED_RETRIES: usize = 5;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("need n > 20, n > 4ℓ and ℓ ≥ 2 (got n = {n}, ℓ = {ell})")]
    Hypothesis { n: usize, ell: usize },
    #[error("layers would be empty (n = {n}, ℓ = {ell})")]
    EmptyLayers { n: usize, ell: usize },
    #[error("network and graph disagree")]
    Mismatch,
    #[error("C = {0} paths does not fit in memory")]
    TooManyPaths(String),
    #[error(transparent)]
    Msn(#[from] MsnError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredGraph {
    pub n: usize,
    pub ell: usize,
    /// `layers[i]` is `C_{i+1}`.
    pub layers: Vec<Vec<String>>,
    pub isolated: Vec<String>,
    pub graph: DiGraph,
}

/// `⌊(n-2)/(2(ℓ-1))⌋`.
pub fn layer_width(n: usize, ell: usize) -> usize {
    n.saturating_sub(2) / (2 * (ell - 1))
}

/// The layered graph under the hypotheses `n > 20`, `n > 4ℓ`, `ℓ ≥ 2`.
pub fn build_layered(n: usize, ell: usize) -> Result<LayeredGraph, ConstructError> {
    if n <= 20 || n <= 4 * ell || ell < 2 {
        return Err(ConstructError::Hypothesis { n, ell });
    }
    build_layered_relaxed(n, ell)
}

/// Same construction without the size hypotheses; only nonempty layers
/// are required. Used for instances small enough to sweep exhaustively.
pub fn build_layered_relaxed(n: usize, ell: usize) -> Result<LayeredGraph, ConstructError> {
    if ell < 2 || layer_width(n, ell) == 0 {
        return Err(ConstructError::EmptyLayers { n, ell });
    }
    let w = layer_width(n, ell);
    let layers: Vec<Vec<String>> = (1..ell).map(|i| (1..=w).map(|j| format!("c{i}_{j}")).collect()).collect();
    let iso = n - 2 - (ell - 1) * w;
    let isolated: Vec<String> = (1..=iso).map(|j| format!("z{j}")).collect();
    let mut g = DiGraph::new();
    for name in layers.iter().flatten().chain(&isolated) {
        g.add_vertex(name).expect("fresh names");
    }
    let id = |g: &DiGraph, x: &str| g.require(x).expect("declared");
    for v in &layers[0] {
        let b = id(&g, v);
        g.add_edge(VertexId::S, b).expect("simple");
    }
    for pair in layers.windows(2) {
        for u in &pair[0] {
            for v in &pair[1] {
                let (a, b) = (id(&g, u), id(&g, v));
                g.add_edge(a, b).expect("simple");
            }
        }
    }
    for u in &layers[ell - 2] {
        let a = id(&g, u);
        g.add_edge(a, VertexId::T).expect("simple");
    }
    Ok(LayeredGraph { n, ell, layers, isolated, graph: g })
}

impl LayeredGraph {
    pub fn width(&self) -> usize {
        self.layers[0].len()
    }

    /// Each layer merged to one vertex `v_i`: the path `s -> v_1 -> … -> t`
    /// plus the isolated vertices.
    pub fn merged(&self) -> DiGraph {
        let mut names: Vec<String> = vec!["s".into()];
        names.extend((1..self.ell).map(|i| format!("v{i}")));
        names.push("t".into());
        let mut g = DiGraph::from_edges(names.windows(2).map(|w| (w[0].as_str(), w[1].as_str()))).expect("path");
        for z in &self.isolated {
            g.add_vertex(z).expect("fresh");
        }
        g
    }

    /// `|σ(G)| = (n-2)! / (w!^{ℓ-1} · iso!)`.
    pub fn sigma_size(&self) -> BigUint {
        let fact = |k: usize| (1..=k).fold(BigUint::one(), |acc, x| acc * BigUint::from(x));
        let w = fact(self.width());
        let mut denom = fact(self.isolated.len());
        for _ in 0..self.ell - 1 {
            denom *= &w;
        }
        fact(self.n - 2) / denom
    }

    /// Inner vertex names in graph order.
    fn inner(&self) -> Vec<String> {
        self.graph.inner_vertices().map(|v| self.graph.name(v).to_string()).collect()
    }

    /// The member of `σ(G)` whose layer `i` is `assign[i]` (vertex indices
    /// into the inner-vertex list).
    fn member(&self, inner: &[String], assign: &[Vec<usize>]) -> DiGraph {
        let mut g = self.graph.with_edge_set(Default::default());
        let id = |g: &DiGraph, k: usize| g.require(&inner[k]).expect("inner");
        for &v in &assign[0] {
            let b = id(&g, v);
            g.insert_edge(VertexId::S, b).expect("simple");
        }
        for pair in assign.windows(2) {
            for &u in &pair[0] {
                for &v in &pair[1] {
                    let (a, b) = (id(&g, u), id(&g, v));
                    g.insert_edge(a, b).expect("simple");
                }
            }
        }
        for &u in &assign[assign.len() - 1] {
            let a = id(&g, u);
            g.insert_edge(a, VertexId::T).expect("simple");
        }
        g
    }

    /// Every member of `σ(G)` as a layer assignment, lexicographically.
    pub fn members(&self) -> Vec<Vec<Vec<usize>>> {
        fn rec(pool: &[usize], sizes: &[usize], cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
            let Some((&w, rest)) = sizes.split_first() else {
                out.push(cur.clone());
                return;
            };
            let mut pick = Vec::with_capacity(w);
            choose(pool, w, 0, &mut pick, &mut |chosen| {
                let left: Vec<usize> = pool.iter().copied().filter(|x| !chosen.contains(x)).collect();
                cur.push(chosen.to_vec());
                rec(&left, rest, cur, out);
                cur.pop();
            });
        }
        fn choose(pool: &[usize], k: usize, from: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if pick.len() == k {
                f(pick);
                return;
            }
            for i in from..pool.len() {
                if pool.len() - i < k - pick.len() {
                    break;
                }
                pick.push(pool[i]);
                choose(pool, k, i + 1, pick, f);
                pick.pop();
            }
        }
        let pool: Vec<usize> = (0..self.n - 2).collect();
        let sizes = vec![self.width(); self.ell - 1];
        let mut out = Vec::new();
        rec(&pool, &sizes, &mut Vec::new(), &mut out);
        out
    }

    fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<usize>> {
        let mut pool: Vec<usize> = (0..self.n - 2).collect();
        pool.shuffle(rng);
        pool.chunks(self.width()).take(self.ell - 1).map(<[usize]>::to_vec).collect()
    }
}

/// `p = (1/(4(ℓ-1)))^{ℓ-1}` and `C = ⌈n²/p⌉ = n²·(4(ℓ-1))^{ℓ-1}`.
pub fn required_c(n: usize, ell: usize) -> (BigRational, BigUint) {
    assert!(ell >= 2, "ℓ ≥ 2");
    let base = BigUint::from(4 * (ell - 1));
    let mut inv = BigUint::one();
    for _ in 0..ell - 1 {
        inv *= &base;
    }
    let p = BigRational::new(1.into(), inv.clone().into());
    (p, BigUint::from(n * n) * inv)
}

/// Whether the layer width is at least `n/(4(ℓ-1))`, the step that makes
/// each path accept with probability at least `p`.
pub fn width_fraction_ok(n: usize, ell: usize) -> bool {
    4 * (ell - 1) * layer_width(n, ell) >= n
}

/// Exact probability that one random path accepts a fixed member of
/// `σ(G)`: `w_1` lands in `C_1` and each later `w_{i+1}` (drawn from the
/// vertices other than `w_i`) lands in `C_{i+1}`.
pub fn per_path_probability(n: usize, ell: usize) -> BigRational {
    let w = layer_width(n, ell) as i64;
    let inner = (n - 2) as i64;
    let mut p = BigRational::new(w.into(), inner.into());
    for _ in 1..ell - 1 {
        p *= BigRational::new(w.into(), (inner - 1).into());
    }
    p
}

/// `C` random label paths over the inner vertices of the layered graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RandomPathNetwork {
    pub n: usize,
    pub ell: usize,
    pub seed: u64,
    /// Vertex names; `s` and `t` first.
    pub universe: Vec<String>,
    /// `paths[j]` holds `w_1..w_{ℓ-1}` as universe indices.
    pub paths: Vec<Vec<u32>>,
}

/// Draws the network. `w_1` is uniform over the inner vertices; each
/// `w_{i+1}` is uniform over the inner vertices other than `w_i`, so no
/// label is a self-loop.
pub fn build_random_network(g: &LayeredGraph, c: usize, seed: u64) -> RandomPathNetwork {
    let universe: Vec<String> = g.graph.names().to_vec();
    let inner = (g.n - 2) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let paths = (0..c)
        .map(|_| {
            let mut ws = Vec::with_capacity(g.ell - 1);
            let mut prev = u32::MAX;
            for _ in 0..g.ell - 1 {
                let w = loop {
                    let x = 2 + rng.gen_range(0..inner);
                    if x != prev {
                        break x;
                    }
                };
                ws.push(w);
                prev = w;
            }
            ws
        })
        .collect();
    RandomPathNetwork { n: g.n, ell: g.ell, seed, universe, paths }
}

impl RandomPathNetwork {
    /// `2 + C(ℓ-1)`.
    pub fn size(&self) -> usize {
        2 + self.paths.len() * (self.ell - 1)
    }

    /// The label sequence of path `j` as universe-index pairs.
    pub fn labels(&self, j: usize) -> Vec<(u32, u32)> {
        let mut seq = vec![SOURCE];
        seq.extend(&self.paths[j]);
        seq.push(SINK);
        seq.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Does path `j` accept `g`? All of its labels must be edges of `g`.
    pub fn path_accepts(&self, j: usize, g: &DiGraph) -> bool {
        self.labels(j).into_iter().all(|(u, v)| g.has_named_edge(&self.universe[u as usize], &self.universe[v as usize]))
    }

    /// Structural soundness: each path's labels form an `s -> t` walk, so
    /// any graph containing them all has an `s -> t` path.
    pub fn structurally_sound(&self) -> bool {
        (0..self.paths.len()).all(|j| {
            let ls = self.labels(j);
            ls.first().is_some_and(|l| l.0 == SOURCE)
                && ls.last().is_some_and(|l| l.1 == SINK)
                && ls.windows(2).all(|w| w[0].1 == w[1].0)
                && ls.iter().all(|l| l.0 != l.1)
        })
    }

    pub fn to_network(&self) -> Result<SwitchingNetwork, ConstructError> {
        let mut net = SwitchingNetwork::new();
        for name in self.universe.iter().skip(2) {
            net.ensure_universe_vertex(name)?;
        }
        for j in 0..self.paths.len() {
            let mut prev = SOURCE;
            let labels = self.labels(j);
            for (i, &(u, v)) in labels.iter().enumerate() {
                let next = if i + 1 == labels.len() { SINK } else { net.push_fresh_node(format!("p{j}_{}", i + 1)) };
                net.add_edge(prev, next, EdgeLabel::Directed(u, v))?;
                prev = next;
            }
        }
        Ok(net)
    }
}

/// Verification of one random draw against `σ(G)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub n: usize,
    pub ell: usize,
    /// `p` as an exact fraction, e.g. `1/64`.
    pub p: String,
    #[serde(rename = "C")]
    pub c: usize,
    pub seed: u64,
    /// Members of `σ(G)` checked.
    pub swept: usize,
    pub sigma_size: String,
    pub exhaustive: bool,
    pub rejected: usize,
    pub sound: bool,
    /// Exact cut-based soundness check, when the universe is small enough.
    pub sound_by_cuts: Option<bool>,
    pub network_size: usize,
    /// Accepting (member, path) pairs over all pairs checked.
    pub per_path_rate: f64,
    pub per_path_probability: f64,
}

/// Sweeps `σ(G)` (exhaustively up to [`EXHAUSTIVE_CAP`] members, otherwise
/// `samples` uniform members) and checks soundness.
pub fn verify_construction(
    net: &RandomPathNetwork,
    g: &LayeredGraph,
    samples: usize,
) -> Result<ConstructionReport, ConstructError> {
    if net.n != g.n || net.ell != g.ell {
        return Err(ConstructError::Mismatch);
    }
    let inner = g.inner();
    let total = g.sigma_size();
    let exhaustive = total.to_u128().is_some_and(|x| x <= EXHAUSTIVE_CAP);
    let members: Vec<Vec<Vec<usize>>> = if exhaustive {
        g.members()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(net.seed ^ 0x5eed);
        (0..samples).map(|_| g.random_member(&mut rng)).collect()
    };
    // Path j accepts a member iff every w_i sits in layer i.
    let layer_of = |assign: &[Vec<usize>]| {
        let mut of = vec![usize::MAX; g.n];
        for (i, layer) in assign.iter().enumerate() {
            for &k in layer {
                of[k + 2] = i;
            }
        }
        of
    };
    let counts: Vec<usize> = members
        .par_iter()
        .map(|assign| {
            let of = layer_of(assign);
            net.paths.iter().filter(|ws| ws.iter().enumerate().all(|(i, &w)| of[w as usize] == i)).count()
        })
        .collect();
    let rejected = counts.iter().filter(|&&c| c == 0).count();
    let hits: usize = counts.iter().sum();

    // Cross-check the fast rule against the generic acceptance test on a
    // prefix of the sweep.
    let network = net.to_network()?;
    for (assign, &count) in members.iter().zip(&counts).take(16) {
        let member = g.member(&inner, assign);
        if network.accepts(&member) != (count > 0) {
            return Err(ConstructError::Mismatch);
        }
    }

    let sound_by_cuts = if g.n <= CUT_CHECK_MAX_N { Some(network.is_sound_by_cuts()?.sound) } else { None };
    let structural = net.structurally_sound();
    let (p, _) = required_c(g.n, g.ell);
    Ok(ConstructionReport {
        n: g.n,
        ell: g.ell,
        p: p.to_string(),
        c: net.paths.len(),
        seed: net.seed,
        swept: members.len(),
        sigma_size: total.to_string(),
        exhaustive,
        rejected,
        sound: structural && sound_by_cuts.unwrap_or(true),
        sound_by_cuts,
        network_size: net.size(),
        per_path_rate: hits as f64 / (members.len().max(1) * net.paths.len().max(1)) as f64,
        per_path_probability: per_path_probability(g.n, g.ell).to_f64().unwrap_or(0.0),
    })
}

/// Draws networks with seeds `seed, seed+1, …` until one accepts every
/// member, trying at most [`MAX_SEED_RETRIES`] seeds. Returns every report.
pub fn construct_with_retries(
    g: &LayeredGraph,
    c: usize,
    seed: u64,
    samples: usize,
) -> Result<Vec<ConstructionReport>, ConstructError> {
    let mut reports = Vec::new();
    for k in 0..MAX_SEED_RETRIES as u64 {
        let net = build_random_network(g, c, seed.wrapping_add(k));
        let r = verify_construction(&net, g, samples)?;
        let done = r.rejected == 0;
        reports.push(r);
        if done {
            break;
        }
    }
    Ok(reports)
}

/// `C` as a machine integer, refusing absurd sizes.
pub fn c_as_usize(c: &BigUint) -> Result<usize, ConstructError> {
    c.to_usize().filter(|&x| x <= 50_000_000).ok_or_else(|| ConstructError::TooManyPaths(c.to_string()))
}
