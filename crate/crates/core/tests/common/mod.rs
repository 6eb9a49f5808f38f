//! Fixture trees shared by the certificate tests and the acceptance run.
#![allow(dead_code)]

use msnlab::graphs::{DiGraph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Edge-list builder with generated vertex names.
#[derive(Default)]
pub struct Builder {
    g: DiGraph,
}

impl Builder {
    pub fn new() -> Self {
        Builder { g: DiGraph::new() }
    }

    pub fn edge(&mut self, u: &str, v: &str) -> &mut Self {
        let a = self.g.ensure_vertex(u).unwrap();
        let b = self.g.ensure_vertex(v).unwrap();
        self.g.add_edge(a, b).unwrap();
        self
    }

    /// `from -> p1 -> … -> p_len`, returning the last name.
    pub fn chain_out(&mut self, from: &str, prefix: &str, len: usize) -> String {
        let mut at = from.to_string();
        for i in 1..=len {
            let v = format!("{prefix}{i}");
            self.edge(&at, &v);
            at = v;
        }
        at
    }

    /// `p_len -> … -> p1 -> to`.
    pub fn chain_in(&mut self, to: &str, prefix: &str, len: usize) -> String {
        let mut at = to.to_string();
        for i in 1..=len {
            let v = format!("{prefix}{i}");
            self.edge(&v, &at);
            at = v;
        }
        at
    }

    /// The s-t path `s -> q1 -> … -> q_{ell-1} -> t`.
    pub fn spine(&mut self, ell: usize) -> &mut Self {
        let last = self.chain_out("s", "q", ell - 1);
        self.edge(&last, "t")
    }

    pub fn build(&self) -> DiGraph {
        self.g.clone()
    }
}

/// Path vertex at distance `d` from `s`.
pub fn q(d: usize) -> String {
    if d == 0 {
        "s".into()
    } else {
        format!("q{d}")
    }
}

/// One flow-out fixture: the tree, the index `i` and the branch it must hit.
pub struct FlowOutFixture {
    pub name: &'static str,
    pub graph: DiGraph,
    pub i: usize,
    pub case: &'static str,
}

pub fn flowout_fixtures() -> Vec<FlowOutFixture> {
    let mut v = Vec::new();
    let mut push = |name, graph, i, case| v.push(FlowOutFixture { name, graph, i, case });

    // i = 1 on a path with a side branch and on a broom.
    let mut b = Builder::new();
    b.spine(5);
    b.chain_out("q1", "x", 2);
    push("path5_branch", b.build(), 1, "i1");
    let mut b = Builder::new();
    b.spine(3);
    for k in 1..=4 {
        b.edge("q2", &format!("l{k}"));
    }
    push("broom", b.build(), 1, "i1");

    // ℓ below 16 at i = 2.
    let mut b = Builder::new();
    b.spine(10);
    push("path10", b.build(), 2, "short_path");
    let mut b = Builder::new();
    b.spine(12);
    b.chain_out("q3", "x", 20);
    b.chain_out("s", "y", 4);
    push("path12_branches", b.build(), 2, "short_path");

    // Case 1: many shallow vertices, few deep ones.
    let mut b = Builder::new();
    b.spine(16);
    push("path16", b.build(), 2, "case1");
    let mut b = Builder::new();
    b.spine(20);
    for (d, name) in [(1, "a"), (2, "b"), (3, "c")] {
        b.chain_out(&q(d), name, 16);
    }
    b.chain_out("q2", "z", 3);
    push("caterpillar", b.build(), 2, "case1");

    // Case 2, subcase 1: a long chain below the path past depth h.
    let mut b = Builder::new();
    b.spine(16);
    b.chain_out(&q(9), "c", 70);
    push("deep_chain_on_path", b.build(), 2, "case2_subcase1");
    let mut b = Builder::new();
    b.spine(24);
    b.chain_out(&q(10), "c", 120);
    b.chain_out(&q(3), "y", 4);
    push("deep_chain_on_path_24", b.build(), 2, "case2_subcase1");

    // Case 2, subcase 2: the heavy subtree starts off the path at depth h.
    let mut b = Builder::new();
    b.spine(16);
    let b8 = b.chain_out("s", "b", 8);
    b.chain_out(&b8, "c", 260);
    push("heavy_branch", b.build(), 2, "case2_subcase2");
    let mut b = Builder::new();
    b.spine(18);
    let b8 = b.chain_out("q1", "b", 7);
    let end = b.chain_out(&b8, "c", 200);
    b.chain_out(&b8, "e", 150);
    let _ = end;
    push("heavy_fork", b.build(), 2, "case2_subcase2");

    // i = 3 on a long path.
    let mut b = Builder::new();
    b.spine(256);
    push("path256", b.build(), 3, "case1");
    v
}

/// General trees for the three lower-bound certificates.
pub fn tree_fixtures() -> Vec<(&'static str, DiGraph)> {
    let mut v = Vec::new();
    let mut b = Builder::new();
    b.spine(3);
    v.push(("path3", b.build()));

    // Floating pieces of several shapes.
    let mut b = Builder::new();
    b.spine(2);
    b.edge("t", "x").edge("y", "s").edge("s", "b").edge("c", "b").edge("c", "d").edge("e", "d");
    v.push(("mixed", b.build()));

    let mut b = Builder::new();
    b.spine(6);
    b.chain_out(&q(2), "h", 3); // H_s
    b.chain_in(&q(4), "g", 3); // H_t
    b.edge("h2", "f0"); // f0 is reachable from s; f-chain hangs below it
    for k in 1..=9 {
        b.edge(&format!("f{k}"), "f0");
    }
    b.edge("x1", "g2").edge("x1", "x2").edge("x3", "x2").edge("x3", "x4");
    v.push(("floating_star_and_zigzag", b.build()));

    let mut b = Builder::new();
    b.spine(4);
    b.edge("t", "u1").edge("u1", "u2").edge("w2", "w1").edge("w1", "s");
    b.edge("u2", "r").edge("r2", "r");
    b.chain_out("r2", "m", 12);
    v.push(("long_floating_chain", b.build()));

    // A flow-out tree and a flow-in tree.
    let mut b = Builder::new();
    b.spine(5);
    b.chain_out(&q(1), "a", 4);
    b.chain_out(&q(3), "c", 2);
    v.push(("flow_out", b.build()));
    let mut b = Builder::new();
    b.spine(5);
    b.chain_in(&q(2), "a", 4);
    b.chain_in("t", "c", 2);
    v.push(("flow_in", b.build()));

    // Random spined trees.
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for name in ["spiny_1", "spiny_2", "spiny_3", "spiny_4"] {
        let ell = rng.gen_range(2..=12);
        let chains = rng.gen_range(2..=6);
        v.push((name, spiny(&mut rng, ell, chains, 12)));
    }
    v
}

/// A spine of length `ell` with `chains` chains hung off random earlier
/// vertices. Chain edges point mostly one way, with occasional flips.
pub fn spiny(rng: &mut ChaCha8Rng, ell: usize, chains: usize, max_len: usize) -> DiGraph {
    let mut b = Builder::new();
    b.spine(ell);
    let mut names: Vec<String> = b.build().names().to_vec();
    for c in 0..chains {
        let mut at = names[rng.gen_range(0..names.len())].clone();
        let down = rng.gen_bool(0.5);
        for k in 0..rng.gen_range(1..=max_len) {
            let v = format!("k{c}_{k}");
            if down != rng.gen_bool(0.15) {
                b.edge(&at, &v);
            } else {
                b.edge(&v, &at);
            }
            names.push(v.clone());
            at = v;
        }
    }
    b.build()
}

/// Disjoint copy of a tree with every name prefixed, so it can be united
/// with a host graph.
pub fn prefixed(h: &msnlab::graphs::DirectedTree, prefix: &str) -> DiGraph {
    let mut g = DiGraph::new();
    let ids: Vec<VertexId> = (0..h.len() as u32).map(|v| g.ensure_vertex(&format!("{prefix}{}", h.name(v))).unwrap()).collect();
    for &(u, v) in h.edges() {
        g.add_edge(ids[u as usize], ids[v as usize]).unwrap();
    }
    g
}
