//! Time the tree dynamic program on random trees of growing size.
//!
//! ```bash
//! cargo run --release --example linear_time_bench -- 10000 100000 1000000
//! ```

use msnlab::dplen::bench;

fn main() {
    let sizes: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sizes = if sizes.is_empty() { vec![10_000, 100_000, 1_000_000] } else { sizes };
    let rows = bench(&sizes, 1, 3);
    println!("{:>10}  {:>12}  {:>12}  {:>8}", "n", "seconds", "ns/vertex", "p");
    for r in &rows {
        println!("{:>10}  {:>12.6}  {:>12.1}  {:>8}", r.n, r.elapsed_secs, r.elapsed_secs * 1e9 / r.n as f64, r.p);
    }
}
