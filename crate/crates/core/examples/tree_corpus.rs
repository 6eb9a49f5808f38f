//! Oriented trees up to isomorphism, with how many are flow-out or
//! flow-in and the smallest p(H) at each order.

use msnlab::dplen::general_p_dp;
use msnlab::graphs::{enumerate_directed_trees, DirectedTree, TreeKind, DEFAULT_TREE_LIMIT};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut by_order: Vec<Vec<DirectedTree>> = vec![Vec::new(); 9];
    for t in enumerate_directed_trees(8, DEFAULT_TREE_LIMIT)? {
        by_order[t.len()].push(t);
    }
    println!("n\ttrees\tflow-out\tflow-in\tmin p");
    for (n, trees) in by_order.iter().enumerate().skip(1) {
        let out = trees.iter().filter(|t| matches!(t.kind(), TreeKind::FlowOut(_))).count();
        let inn = trees.iter().filter(|t| matches!(t.kind(), TreeKind::FlowIn(_))).count();
        let min_p = trees.iter().map(|t| general_p_dp(t, None).map(|r| r.0)).collect::<Result<Vec<_>, _>>()?;
        println!("{n}\t{}\t{out}\t\t{inn}\t{}", trees.len(), min_p.iter().min().unwrap_or(&0));
    }
    if let Err(e) = enumerate_directed_trees(40, DEFAULT_TREE_LIMIT) {
        println!("\n{e}");
    }
    Ok(())
}
