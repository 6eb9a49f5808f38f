//! Structure statistics of a tree and the symbolic bound profiles they
//! feed. Profiles carry no constants, so they are compared by dominance.

use msnlab::bounds::{compare_profiles, compute_stats, flowout_c, profile, ProfileInput, Side, Theorem};
use msnlab::graphs::DiGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut edges: Vec<(String, String)> = Vec::new();
    let spine = ["s", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "t"];
    for w in spine.windows(2) {
        edges.push((w[0].into(), w[1].into()));
    }
    for i in 0..6 {
        edges.push((if i == 0 { "p2".into() } else { format!("x{}", i - 1) }, format!("x{i}")));
    }
    let g = DiGraph::from_edges(edges.iter().map(|(u, v)| (u.as_str(), v.as_str())))?;

    let stats = compute_stats(&g)?;
    println!("n = {}, ell = {}, c_s = {:?}, c_t = {:?}, d_bar = {}", stats.n, stats.ell, stats.c_s, stats.c_t, stats.d_bar);

    let flow = flowout_c(&g)?;
    let mut all = Vec::new();
    for t in Theorem::ALL {
        let input = match t {
            Theorem::T5_4 => ProfileInput::FlowOut(&flow),
            _ => ProfileInput::Stats(&stats),
        };
        let set = profile(t, input)?;
        for p in set.lower.iter().chain(set.upper.iter()) {
            println!("{p}");
        }
        all.extend(set.lower.into_iter().chain(set.upper));
    }
    let lower: Vec<_> = all.iter().filter(|p| p.side == Side::Lower).collect();
    if let [a, b, ..] = lower.as_slice() {
        println!("\n{} vs {}: {:?}", a.theorem, b.theorem, compare_profiles(a, b));
    }
    Ok(())
}
