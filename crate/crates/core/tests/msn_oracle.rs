//! Switching-network verdicts against exhaustive enumeration of inputs.

use msnlab::graphs::{has_st_path, DiGraph, VertexId};
use msnlab::msn::{figure1_network, random_network, random_sound_network, NetworkTransform, SwitchingNetwork};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every simple digraph over the network's universe.
fn all_inputs(net: &SwitchingNetwork) -> Vec<DiGraph> {
    let names: Vec<&str> = net.universe().iter().map(String::as_str).collect();
    let k = names.len();
    let pairs: Vec<(u32, u32)> =
        (0..k as u32).flat_map(|u| (0..k as u32).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let mut g = DiGraph::with_vertices(names[2..].iter().copied()).unwrap();
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g.add_edge(VertexId(u), VertexId(v)).unwrap();
                }
            }
            g
        })
        .collect()
}

fn brute_sound(net: &SwitchingNetwork, inputs: &[DiGraph]) -> bool {
    inputs.iter().all(|g| has_st_path(g) || !net.accepts(g))
}

fn brute_complete(net: &SwitchingNetwork, inputs: &[DiGraph]) -> bool {
    inputs.iter().all(|g| !has_st_path(g) || net.accepts(g))
}

#[test]
fn verdicts_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut sound, mut complete) = (0, 0);
    for trial in 0..400 {
        let universe = if trial % 2 == 0 { 3 } else { 4 };
        let size = rng.gen_range(2..=6);
        let edges = rng.gen_range(1..=3 * size);
        let net = random_network(&mut rng, size, universe, edges, 0.1);
        let inputs = all_inputs(&net);
        let expect_sound = brute_sound(&net, &inputs);
        let walk = net.is_sound(1_000_000).unwrap();
        assert_eq!(walk.sound, expect_sound, "{net}");
        assert_eq!(net.is_sound_by_cuts().unwrap().sound, expect_sound, "{net}");
        if let Some(w) = &walk.witness {
            assert!(!has_st_path(&w.graph) && net.accepts(&w.graph));
            assert_eq!(w.walk.first().map(String::as_str), Some("s'"));
            assert_eq!(w.walk.last().map(String::as_str), Some("t'"));
        }
        let c = net.is_complete(1_000_000).unwrap();
        assert_eq!(c.complete, brute_complete(&net, &inputs), "{net}");
        if let Some(g) = &c.counterexample {
            assert!(has_st_path(g) && !net.accepts(g));
        }
        sound += expect_sound as usize;
        complete += c.complete as usize;
    }
    // Both verdicts occur in the sample, so neither side is vacuous.
    assert!(sound > 20 && sound < 380, "sound = {sound}");
    assert!(complete > 0, "complete = {complete}");
}

#[test]
fn figure1_is_sound_and_complete_by_enumeration() {
    let net = figure1_network();
    let inputs = all_inputs(&net);
    assert!(brute_sound(&net, &inputs));
    assert!(brute_complete(&net, &inputs));
}

#[test]
fn acceptance_is_monotone_under_edge_addition() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let (size, edges) = (rng.gen_range(2..=6), rng.gen_range(1..=12));
        let net = random_network(&mut rng, size, 4, edges, 0.1);
        let inputs = all_inputs(&net);
        let g = inputs.choose(&mut rng).unwrap();
        let extra = inputs.choose(&mut rng).unwrap();
        let mut h = g.clone();
        for (u, v) in extra.edges() {
            h.insert_edge(u, v).unwrap();
        }
        assert!(!net.accepts(g) || net.accepts(&h));
    }
}

#[test]
fn text_and_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let (size, universe, edges) = (rng.gen_range(2..=7), rng.gen_range(2..=5), rng.gen_range(0..=10));
        let net = random_network(&mut rng, size, universe, edges, 0.2);
        let back = SwitchingNetwork::parse(&net.to_string()).unwrap();
        assert_eq!(back, net);
        let json = serde_json::to_string(&net).unwrap();
        assert_eq!(serde_json::from_str::<SwitchingNetwork>(&json).unwrap(), net);
    }
}

#[test]
fn padding_the_universe_keeps_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let net = random_sound_network(&mut rng, 5, 3);
        let mut wide = net.clone();
        wide.pad_universe(4);
        assert!(wide.is_sound(1_000_000).unwrap().sound);
        assert!(brute_sound(&wide, &all_inputs(&wide)));
    }
}

#[test]
fn transforms_keep_soundness_by_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..150 {
        let net = random_sound_network(&mut rng, 5, 4);
        let names = net.universe().to_vec();
        let t = match rng.gen_range(0..5) {
            0 => NetworkTransform::ParallelSTo { label: None },
            1 => NetworkTransform::ParallelToT { label: None },
            2 => NetworkTransform::UnlabelIntoS,
            3 => NetworkTransform::UnlabelFromT,
            _ => {
                let mut inner = names[2..].to_vec();
                inner.shuffle(&mut rng);
                let cut = rng.gen_range(0..=inner.len());
                NetworkTransform::RelabelMerge { s_set: inner[..cut].to_vec(), t_set: inner[cut..].to_vec() }
            }
        };
        let out = net.apply_transform(&t).unwrap();
        assert_eq!(out.size(), net.size());
        assert!(brute_sound(&out, &all_inputs(&out)), "{t:?}\n{net}\n{out}");
    }
}
