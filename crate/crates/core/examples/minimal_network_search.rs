//! Exact minimum size of a sound network accepting a set of graphs.
//!
//! The search is exhaustive, so it only scales to universes of four or
//! five vertices.

use std::time::Instant;

use msnlab::graphs::{sigma_st, DiGraph};
use msnlab::search::{figure2_graph, min_sound_msn, SearchBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = DiGraph::from_edges([("s", "a"), ("a", "t")])?;
    let instances = [
        ("{s->t}", vec![DiGraph::from_edges([("s", "t")])?]),
        ("sigma(s->a->t)", sigma_st(&path)?),
        ("sigma(figure 2)", sigma_st(&figure2_graph())?),
    ];
    for (name, instance) in instances {
        let start = Instant::now();
        let r = min_sound_msn(&instance, SearchBudget::default())?;
        println!("m({name}) = {}  [{} candidates, {:.1?}]", r.m, r.explored, start.elapsed());
        println!("{}", r.witness);
    }

    // A tight budget reports what it learned instead of an answer.
    let tight = SearchBudget { max_size: 3, ..SearchBudget::default() };
    match min_sound_msn(&sigma_st(&figure2_graph())?, tight) {
        Ok(r) => println!("unexpected: m = {}", r.m),
        Err(e) => println!("with max size 3: {e}"),
    }
    Ok(())
}
