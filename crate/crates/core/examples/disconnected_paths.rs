//! Disconnected-path length of directed trees: the dynamic program, the
//! flow-out recursion and brute force side by side.

use msnlab::dplen::{brute_force_p, flowout_b, general_p_dp, is_family, j_label_bound};
use msnlab::graphs::{DiGraph, DirectedTree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = DiGraph::from_edges([("r", "a"), ("a", "b"), ("r", "c"), ("d", "c"), ("c", "e"), ("e", "f")])?;
    let (h, _) = DirectedTree::from_digraph(&g)?;
    let (p, tables) = general_p_dp(&h, None)?;
    let w = tables.witness(&h);
    println!("p(H) = {p}");
    for path in w.named(&h) {
        println!("  {}", path.join(" -> "));
    }
    println!("witness is a family: {}", is_family(&h, &w));
    println!("brute force agrees: {}", brute_force_p(&h, 16)?.0 as u64 == p);

    let star = DirectedTree::out_star(5);
    let table = flowout_b(&star)?;
    println!("\nout-star with 5 leaves: b(root) = {}, greedy family {:?}", table.p(), table.witness.paths);

    let path = DirectedTree::directed_path(7);
    let (labels, best) = j_label_bound(&path)?;
    println!("directed path of 7: p = {}, best j-class keeps {best} (counts {:?})", general_p_dp(&path, None)?.0, labels.counts);
    Ok(())
}
