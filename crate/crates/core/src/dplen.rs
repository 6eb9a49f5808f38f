//! Disconnected-path length `p(H)` of a directed tree.
//!
//! A disconnected-path family is a set of vertex-disjoint directed paths
//! such that no directed path of `H` leads from a vertex of one family path
//! to a vertex of another. `p(H)` is the largest total vertex count of such
//! a family. Single vertices count as paths.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::{DirectedTree, TreeKind};

/// Largest tree accepted by [`brute_force_p`] unless overridden.
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DplenError {
    #[error("not a flow-out tree")]
    NotFlowOut,
    #[error("tree has {n} vertices, brute force is limited to {limit}")]
    Budget { n: usize, limit: usize },
    #[error("root {0} is not a vertex")]
    BadRoot(u32),
}

/// Vertex-disjoint directed paths, each listed from tail to head.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    pub paths: Vec<Vec<u32>>,
}

impl PathFamily {
    /// Total number of vertices.
    pub fn size(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }

    pub fn named(&self, h: &DirectedTree) -> Vec<Vec<String>> {
        self.paths.iter().map(|p| p.iter().map(|&v| h.name(v).into_owned()).collect()).collect()
    }
}

/// Checks that `fam` is a disconnected-path family of `h`.
pub fn is_family(h: &DirectedTree, fam: &PathFamily) -> bool {
    let n = h.len();
    let mut owner = vec![usize::MAX; n];
    for (i, path) in fam.paths.iter().enumerate() {
        if path.is_empty() {
            return false;
        }
        for &v in path {
            if v as usize >= n || owner[v as usize] != usize::MAX {
                return false;
            }
            owner[v as usize] = i;
        }
        if !path.windows(2).all(|w| h.out_neighbors(w[0]).any(|x| x == w[1])) {
            return false;
        }
    }
    // Forward search from each path must not touch another path.
    let mut mark = vec![usize::MAX; n];
    for (i, path) in fam.paths.iter().enumerate() {
        let mut stack: Vec<u32> = path.clone();
        for &v in path {
            mark[v as usize] = i;
        }
        while let Some(u) = stack.pop() {
            for w in h.out_neighbors(u) {
                if mark[w as usize] == i {
                    continue;
                }
                if owner[w as usize] != usize::MAX && owner[w as usize] != i {
                    return false;
                }
                mark[w as usize] = i;
                stack.push(w);
            }
        }
    }
    true
}

/// Exact `p(H)` by branch and bound over all directed paths.
pub fn brute_force_p(h: &DirectedTree, limit: usize) -> Result<(usize, PathFamily), DplenError> {
    let n = h.len();
    if n > limit || n > 64 {
        return Err(DplenError::Budget { n, limit: limit.min(64) });
    }
    let desc: Vec<u64> = (0..n as u32)
        .map(|v| h.descendants(v).into_iter().fold(0u64, |m, x| m | 1 << x))
        .collect();
    struct Cand {
        verts: u64,
        reach: u64,
        path: Vec<u32>,
    }
    let mut cands = Vec::new();
    for start in 0..n as u32 {
        let mut stack = vec![vec![start]];
        while let Some(path) = stack.pop() {
            let verts = path.iter().fold(0u64, |m, &x| m | 1 << x);
            let reach = path.iter().fold(0u64, |m, &x| m | desc[x as usize]);
            let last = *path.last().unwrap();
            for w in h.out_neighbors(last) {
                let mut longer = path.clone();
                longer.push(w);
                stack.push(longer);
            }
            cands.push(Cand { verts, reach, path });
        }
    }
    // Larger paths first tightens the bound early.
    cands.sort_by_key(|c| std::cmp::Reverse(c.verts.count_ones()));

    fn search(
        cands: &[Cand],
        live: &[usize],
        taken: &mut Vec<usize>,
        weight: usize,
        best: &mut (usize, Vec<usize>),
    ) {
        if weight > best.0 {
            *best = (weight, taken.clone());
        }
        let cover = live.iter().fold(0u64, |m, &i| m | cands[i].verts).count_ones() as usize;
        if weight + cover <= best.0 {
            return;
        }
        let Some((&first, rest)) = live.split_first() else { return };
        let c = &cands[first];
        let compatible: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&j| cands[j].reach & c.verts == 0 && c.reach & cands[j].verts == 0)
            .collect();
        taken.push(first);
        search(cands, &compatible, taken, weight + c.verts.count_ones() as usize, best);
        taken.pop();
        search(cands, rest, taken, weight, best);
    }

    let live: Vec<usize> = (0..cands.len()).collect();
    let mut best = (0, Vec::new());
    search(&cands, &live, &mut Vec::new(), 0, &mut best);
    let paths = best.1.iter().map(|&i| cands[i].path.clone()).collect();
    Ok((best.0, PathFamily { paths }))
}

/// Per-vertex `b` and `d` for a flow-out tree, plus a family of size `b(r)`.
#[derive(Clone, Debug, Serialize)]
pub struct BTable {
    pub root: u32,
    pub b: Vec<u64>,
    /// Vertices on a longest path starting at each vertex.
    pub d: Vec<u64>,
    pub witness: PathFamily,
}

impl BTable {
    pub fn p(&self) -> u64 {
        self.b[self.root as usize]
    }
}

fn out_order(h: &DirectedTree, root: u32) -> Vec<u32> {
    let mut order = vec![root];
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        order.extend(h.out_neighbors(u));
    }
    order
}

/// The `b`/`d` recursion on a flow-out tree with its greedy witness: scan in
/// topological order, skip vertices below a chosen path or whose `b` is the
/// sum over children, otherwise take a longest path from the vertex.
pub fn flowout_b(h: &DirectedTree) -> Result<BTable, DplenError> {
    let TreeKind::FlowOut(r) = h.kind() else { return Err(DplenError::NotFlowOut) };
    let root = r.0;
    let n = h.len();
    let order = out_order(h, root);
    let mut b = vec![0u64; n];
    let mut d = vec![0u64; n];
    let mut sum_children = vec![0u64; n];
    for &v in order.iter().rev() {
        let (mut sum, mut deepest) = (0u64, 0u64);
        for w in h.out_neighbors(v) {
            sum += b[w as usize];
            deepest = deepest.max(d[w as usize]);
        }
        d[v as usize] = 1 + deepest;
        sum_children[v as usize] = sum;
        b[v as usize] = if sum == 0 { 1 } else { sum.max(d[v as usize]) };
    }
    let mut blocked = vec![false; n];
    let mut paths = Vec::new();
    for &v in &order {
        let vi = v as usize;
        let skip = blocked[vi] || (sum_children[vi] > 0 && b[vi] == sum_children[vi]);
        if !skip {
            let mut path = vec![v];
            let mut cur = v;
            while let Some(next) = h.out_neighbors(cur).max_by_key(|&w| (d[w as usize], std::cmp::Reverse(w))) {
                path.push(next);
                cur = next;
            }
            for &x in &path {
                blocked[x as usize] = true;
            }
            paths.push(path);
        }
        if blocked[vi] {
            for w in h.out_neighbors(v) {
                blocked[w as usize] = true;
            }
        }
    }
    Ok(BTable { root, b, d, witness: PathFamily { paths } })
}

/// The six DP values of one vertex over its later-indexed subtree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SixValues {
    /// `v` unused and nothing reachable from `v` used.
    pub a1: u64,
    /// `v` unused and nothing reaching `v` used.
    pub a2: u64,
    /// `v` on a path that continues only through out-edges.
    pub a3: u64,
    /// `v` on a path that continues only through in-edges.
    pub a4: u64,
    /// `v` on some path.
    pub a5: u64,
    /// Best overall.
    pub a6: u64,
}

/// Tables of the linear-time recursion, plus the branch choices needed to
/// rebuild a witness.
#[derive(Clone, Debug, Serialize)]
pub struct DpTables {
    pub root: u32,
    /// Level order ignoring directions; `order[0] == root`.
    pub order: Vec<u32>,
    /// Earlier neighbor of each vertex in `order` (`u32::MAX` for the root).
    pub parent: Vec<u32>,
    pub values: Vec<SixValues>,
    /// Out-child continuing the path in the `a3`/`a5` branch.
    pub out_pick: Vec<u32>,
    /// In-child continuing the path in the `a4`/`a5` branch.
    pub in_pick: Vec<u32>,
}

impl DpTables {
    pub fn p(&self) -> u64 {
        self.values[self.root as usize].a6
    }

    /// Rebuilds a family of size `p(H)` from the recorded choices.
    pub fn witness(&self, h: &DirectedTree) -> PathFamily {
        const NONE: u32 = u32::MAX;
        let children = |v: u32| h.arcs(v).iter().filter(move |a| a.to != self.parent[v as usize]);
        let mut paths = Vec::new();
        // Modes: 1, 2 and 6 as in the recursion; 5 opens a new path at v.
        let mut stack: Vec<(u32, u8)> = vec![(self.root, 6)];
        while let Some((v, mut mode)) = stack.pop() {
            if mode == 6 {
                let x = self.values[v as usize];
                mode = if x.a6 == x.a5 {
                    5
                } else if x.a6 == x.a1 {
                    1
                } else {
                    2
                };
            }
            match mode {
                1 => {
                    for a in children(v) {
                        stack.push((a.to, if a.out { 1 } else { 6 }));
                    }
                }
                2 => {
                    for a in children(v) {
                        stack.push((a.to, if a.out { 6 } else { 2 }));
                    }
                }
                _ => {
                    let mut back = Vec::new();
                    let mut x = self.in_pick[v as usize];
                    while x != NONE {
                        back.push(x);
                        x = self.in_pick[x as usize];
                    }
                    let mut fwd = Vec::new();
                    let mut y = self.out_pick[v as usize];
                    while y != NONE {
                        fwd.push(y);
                        y = self.out_pick[y as usize];
                    }
                    let mut path: Vec<u32> = back.iter().rev().copied().collect();
                    path.push(v);
                    path.extend(fwd.iter().copied());
                    // Off-path children: out-children must see nothing of
                    // the path below them, in-children nothing above.
                    for (pos, &u) in path.iter().enumerate() {
                        let keep_out = if pos < back.len() { NONE } else { self.out_pick[u as usize] };
                        let keep_in = if pos > back.len() { NONE } else { self.in_pick[u as usize] };
                        for a in children(u) {
                            if a.to == keep_out || a.to == keep_in {
                                continue;
                            }
                            stack.push((a.to, if a.out { 1 } else { 2 }));
                        }
                    }
                    paths.push(path);
                }
            }
        }
        PathFamily { paths }
    }
}

/// Linear-time `p(H)` via the six-function recursion over a level order
/// from `root` (default vertex 0).
pub fn general_p_dp(h: &DirectedTree, root: Option<u32>) -> Result<(u64, DpTables), DplenError> {
    let root = root.unwrap_or(0);
    if root as usize >= h.len() {
        return Err(DplenError::BadRoot(root));
    }
    let (order, parent) = h.undirected_order(root);
    let n = h.len();
    let mut values = vec![SixValues::default(); n];
    let mut out_pick = vec![u32::MAX; n];
    let mut in_pick = vec![u32::MAX; n];
    for &v in order.iter().rev() {
        let vi = v as usize;
        let (mut s1_out, mut s6_in, mut s2_in, mut s6_out) = (0u64, 0u64, 0u64, 0u64);
        let (mut g3, mut g4) = (0u64, 0u64);
        let mut earlier = 0;
        for a in h.arcs(v) {
            if a.to == parent[vi] {
                earlier += 1;
                continue;
            }
            let c = values[a.to as usize];
            if a.out {
                s1_out += c.a1;
                s6_out += c.a6;
                if c.a3 > c.a1 && c.a3 - c.a1 > g3 {
                    g3 = c.a3 - c.a1;
                    out_pick[vi] = a.to;
                }
            } else {
                s2_in += c.a2;
                s6_in += c.a6;
                if c.a4 > c.a2 && c.a4 - c.a2 > g4 {
                    g4 = c.a4 - c.a2;
                    in_pick[vi] = a.to;
                }
            }
        }
        debug_assert!(earlier <= 1, "level order gives at most one earlier neighbor");
        let base = 1 + s1_out + s2_in;
        let a1 = s1_out + s6_in;
        let a2 = s2_in + s6_out;
        let a5 = base + g3 + g4;
        values[vi] = SixValues { a1, a2, a3: base + g3, a4: base + g4, a5, a6: a1.max(a2).max(a5) };
    }
    let p = values[root as usize].a6;
    Ok((p, DpTables { root, order, parent, values, out_pick, in_pick }))
}

/// `j` labels of a flow-out tree and the class counts `k_i`.
#[derive(Clone, Debug, Serialize)]
pub struct JLabeling {
    pub j: Vec<u32>,
    /// `counts[i]` vertices carry label `i` (index 0 unused).
    pub counts: Vec<usize>,
}

impl JLabeling {
    /// Vertices labeled `i`, grouped into chains along the unique max child.
    pub fn class_family(&self, h: &DirectedTree, i: u32) -> PathFamily {
        let mut paths = Vec::new();
        for v in 0..h.len() as u32 {
            if self.j[v as usize] != i {
                continue;
            }
            if h.in_neighbors(v).any(|p| self.j[p as usize] == i) {
                continue;
            }
            let mut path = vec![v];
            let mut cur = v;
            while let Some(next) = h.out_neighbors(cur).find(|&w| self.j[w as usize] == i) {
                path.push(next);
                cur = next;
            }
            paths.push(path);
        }
        PathFamily { paths }
    }

    /// Label with the most vertices (smallest on ties) and its count.
    pub fn best_class(&self) -> (u32, usize) {
        let mut best = (1, 0);
        for (i, &k) in self.counts.iter().enumerate().skip(1) {
            if k > best.1 {
                best = (i as u32, k);
            }
        }
        best
    }
}

/// The `j` labeling: leaves get 1, a unique max child passes its label up,
/// a tied max adds one. Returns the labeling and `max_i k_i`.
pub fn j_label_bound(h: &DirectedTree) -> Result<(JLabeling, usize), DplenError> {
    let TreeKind::FlowOut(r) = h.kind() else { return Err(DplenError::NotFlowOut) };
    let order = out_order(h, r.0);
    let mut j = vec![0u32; h.len()];
    for &v in order.iter().rev() {
        let (mut top, mut ties) = (0u32, 0);
        for w in h.out_neighbors(v) {
            let x = j[w as usize];
            if x > top {
                top = x;
                ties = 1;
            } else if x == top {
                ties += 1;
            }
        }
        j[v as usize] = match ties {
            0 => 1,
            1 => top,
            _ => top + 1,
        };
    }
    let max = j.iter().copied().max().unwrap_or(1) as usize;
    let mut counts = vec![0usize; max + 1];
    for &x in &j {
        counts[x as usize] += 1;
    }
    let labeling = JLabeling { j, counts };
    let best = labeling.best_class().1;
    Ok((labeling, best))
}

/// Alternating reachability layers from a source `r`.
#[derive(Clone, Debug, Serialize)]
pub struct BkDecomposition {
    pub root: u32,
    /// `layers[0] = {r}`, odd layers reached from the previous layer, even
    /// layers reaching it.
    pub layers: Vec<Vec<u32>>,
    /// Union of odd layers: disjoint flow-out trees.
    pub b1: Vec<u32>,
    /// Union of even layers: disjoint flow-in trees.
    pub b2: Vec<u32>,
}

pub fn bk_decompose(h: &DirectedTree) -> BkDecomposition {
    let n = h.len();
    let root = (0..n as u32).find(|&v| h.in_degree(v) == 0).expect("finite trees have a source");
    let mut layer_of = vec![usize::MAX; n];
    layer_of[root as usize] = 0;
    let mut layers = vec![vec![root]];
    let mut assigned = 1;
    while assigned < n {
        let k = layers.len();
        let forward = k % 2 == 1;
        let mut next = Vec::new();
        let mut stack = layers[k - 1].clone();
        while let Some(u) = stack.pop() {
            for a in h.arcs(u) {
                if a.out == forward && layer_of[a.to as usize] == usize::MAX {
                    layer_of[a.to as usize] = k;
                    next.push(a.to);
                    stack.push(a.to);
                }
            }
        }
        assert!(!next.is_empty(), "connected trees never produce an empty layer");
        assigned += next.len();
        next.sort_unstable();
        layers.push(next);
    }
    let collect = |parity: usize| -> Vec<u32> {
        let mut v: Vec<u32> = layers.iter().enumerate().filter(|(i, _)| i % 2 == parity).flat_map(|(_, l)| l.iter().copied()).collect();
        v.sort_unstable();
        v
    };
    let (b1, b2) = (collect(1), collect(0));
    BkDecomposition { root, layers, b1, b2 }
}

/// `⌈V / (lg V + 1)⌉`.
pub fn flowout_lower_bound(v: usize) -> usize {
    if v == 0 {
        return 0;
    }
    (v as f64 / ((v as f64).log2() + 1.0)).ceil() as usize
}

/// `⌈V / (2 (lg V + 1))⌉`.
pub fn general_lower_bound(v: usize) -> usize {
    if v == 0 {
        return 0;
    }
    (v as f64 / (2.0 * ((v as f64).log2() + 1.0))).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub elapsed_secs: f64,
    pub p: u64,
}

/// Times `general_p_dp` on seeded random trees, keeping the fastest of
/// `reps` runs per size. Tree generation is not timed.
pub fn bench(sizes: &[usize], seed: u64, reps: usize) -> Vec<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sizes
        .iter()
        .map(|&n| {
            let tree = DirectedTree::random(n, &mut rng);
            let mut best = Duration::MAX;
            let mut p = 0;
            for _ in 0..reps.max(1) {
                let start = Instant::now();
                let (value, tables) = general_p_dp(&tree, None).expect("root 0 exists");
                best = best.min(start.elapsed());
                drop(tables);
                p = value;
            }
            BenchRow { n, elapsed_secs: best.as_secs_f64(), p }
        })
        .collect()
}
