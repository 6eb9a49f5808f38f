//! Random label paths through a layered graph: draw C paths and check that
//! every relabeling of the graph is accepted.

use msnlab::construct::{build_layered_relaxed, construct_with_retries, per_path_probability, required_c};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, ell) = (10, 3);
    let g = build_layered_relaxed(n, ell)?;
    let (p, c) = required_c(n, ell);
    println!("layers {:?}, isolated {:?}", g.layers, g.isolated);
    println!("p = {p}, C = {c}, |sigma(G)| = {}", g.sigma_size());
    println!("one path accepts a fixed member with probability {}", per_path_probability(n, ell));

    for paths in [20, 200, 6400] {
        let reports = construct_with_retries(&g, paths, 1, 0)?;
        let last = reports.last().expect("one draw at least");
        println!(
            "C = {paths}: {} draw(s), last rejects {} of {}, sound {}, size {}",
            reports.len(),
            last.rejected,
            last.swept,
            last.sound,
            last.network_size
        );
    }
    Ok(())
}
