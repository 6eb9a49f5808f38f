//! Permutation sets: every relabeling of a graph that keeps `s` and `t`
//! in place, and the fingerprint that identifies the class.

use msnlab::graphs::{sigma, sigma_fingerprint, sigma_st, DiGraph, VertexId};
use msnlab::search::figure2_graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = DiGraph::from_edges([("s", "a"), ("a", "b"), ("b", "t")])?;
    let members = sigma_st(&g)?;
    println!("|sigma(s->a->b->t)| = {}", members.len());
    for m in &members {
        println!("{m}---");
    }

    // Holding a fixed as well leaves only the identity.
    let a = g.require("a")?;
    println!("fixing a too: {}", sigma(&g, &[VertexId::S, VertexId::T, a], u128::MAX)?.len());

    // Members share one fingerprint; a different shape gets another.
    let same = members.iter().all(|m| sigma_fingerprint(m) == sigma_fingerprint(&g));
    let other = DiGraph::from_edges([("s", "a"), ("a", "t"), ("b", "a")])?;
    println!("members share the fingerprint: {same}");
    println!("other shape differs: {}", sigma_fingerprint(&other) != sigma_fingerprint(&g));

    let fig2 = figure2_graph();
    println!("\nfigure 2 graph:\n{fig2}|sigma| = {}", sigma_st(&fig2)?.len());
    Ok(())
}
