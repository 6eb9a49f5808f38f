//! Build a small switching network by hand, run it on a few inputs and ask
//! whether it is sound and complete.
//!
//! ```bash
//! cargo run --example evaluate_network
//! ```

use msnlab::graphs::DiGraph;
use msnlab::msn::{figure1_network, SwitchingNetwork, DEFAULT_COMPLETE_BUDGET, DEFAULT_SOUND_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Two routes: s' -> x' needs s->a, x' -> t' needs a->t; the direct
    // edge needs s->t.
    let net = SwitchingNetwork::parse(
        "universe s t a\n\
         s' -- x' : s->a\n\
         x' -- t' : a->t\n\
         s' -- t' : s->t\n",
    )?;
    println!("network of size {}:\n{net}", net.size());

    for edges in [vec![("s", "a"), ("a", "t")], vec![("s", "t")], vec![("s", "a")], vec![("a", "t"), ("t", "s")]] {
        let mut g = DiGraph::with_vertices(["a"])?;
        for (u, v) in &edges {
            g.insert_edge(g.require(u)?, g.require(v)?)?;
        }
        println!("{edges:?}: {}", if net.accepts(&g) { "accepted" } else { "rejected" });
    }

    let sound = net.is_sound(DEFAULT_SOUND_BUDGET)?;
    let complete = net.is_complete(DEFAULT_COMPLETE_BUDGET)?;
    println!("sound: {}, complete: {} ({} paths checked)", sound.sound, complete.complete, complete.checked);

    // Vertices the labels never mention cannot break soundness.
    let mut wide = net.clone();
    wide.pad_universe(5);
    println!("padded to 5 vertices, still sound: {}", wide.is_sound_by_cuts()?.sound);

    // This one accepts {s->a, b->t}, which has no s-t path.
    let bad = SwitchingNetwork::parse(
        "universe s t a b\n\
         s' -- x' : s->a\n\
         x' -- y' : *\n\
         y' -- t' : b->t\n",
    )?;
    let report = bad.is_sound(DEFAULT_SOUND_BUDGET)?;
    if let Some(w) = report.witness {
        println!("\nunsound: walk {} accepts\n{}", w.walk.join(" "), w.graph);
    }

    let fig1 = figure1_network();
    println!("the stock example has size {} and is sound: {}", fig1.size(), fig1.is_sound_by_cuts()?.sound);
    Ok(())
}
