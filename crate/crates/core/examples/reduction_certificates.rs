//! Reduce a tree step by step and check the recorded steps by replaying
//! them. Each certificate shows that the end graph needs no larger network
//! than the start graph.

use msnlab::graphs::{DiGraph, DirectedTree};
use msnlab::reduce::{
    check_certificate, dplen_path_certificate, flowout_lower_certificate, thm51_lower_certificates, upper_graph_sequence,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A 3-edge s-t path with pieces hanging off both sides and one piece
    // that reaches neither s nor t.
    let g = DiGraph::from_edges([
        ("s", "a"),
        ("a", "b"),
        ("b", "t"),
        ("a", "x1"),
        ("x1", "x2"),
        ("y1", "b"),
        ("y2", "y1"),
        ("x2", "f"),
        ("g", "f"),
    ])?;
    for c in thm51_lower_certificates(&g)? {
        let check = check_certificate(&c);
        println!("part {}: {} moves, valid {}", c.meta_str("part").unwrap_or("?"), c.moves.len(), check.valid);
        print!("{}", c.end);
    }

    // Tampering is caught on replay.
    let mut c = thm51_lower_certificates(&g)?.remove(1);
    c.end = DiGraph::from_edges([("s", "t")])?;
    println!("tampered end graph valid: {}", check_certificate(&c).valid);

    // Flow-out trees have their own reduction.
    let fo = DiGraph::from_edges([("s", "a"), ("a", "b"), ("b", "t"), ("a", "c"), ("s", "d")])?;
    let c = flowout_lower_certificate(&fo, 1)?;
    println!("\nflow-out, case {}:\n{}", c.meta_str("case").unwrap_or("?"), c.end);

    // Disjoint union with a tree H becomes a path of p(H) vertices.
    let h = DirectedTree::out_star(3).renamed(|v| format!("h{v}")).to_digraph();
    let c = dplen_path_certificate(&DiGraph::from_edges([("s", "t")])?, &h)?;
    println!("path of {} vertices, valid {}", c.meta_usize("path_vertices").unwrap_or(0), check_certificate(&c).valid);

    let seq = upper_graph_sequence(&g)?;
    println!("\nupper sequence: {} graphs, final form ok: {}", seq.graphs.len(), seq.final_invariant_holds());
    println!("certificate JSON is {} bytes", serde_json::to_string(&c)?.len());
    Ok(())
}
