use std::collections::VecDeque;

use proptest::prelude::*;
use recomb_core::format::{
    parse_graph, parse_moves, parse_partition, write_graph, write_map_jsonl, write_moves, write_partition, write_trace,
};
use recomb_core::generate::{
    arc_partition, chords_split_distinct, gen_grid, gen_hamiltonian, gen_negative, gen_random_connected, random_partition,
    seeded,
};
use recomb_core::hamiltonian::{hamiltonian_bound, transform_hamiltonian};
use recomb_core::ncl::{k4_all_blue, reduce_ncl};
use recomb_core::oracle::{build_space, decide_br, recom_walk};
use recomb_core::partition::{replay, SlackBound};
use recomb_core::unbounded::transform_unbounded;
use recomb_core::validate;

/// Shortest distance between two nodes of the configuration graph by plain BFS.
fn space_distance(adj: &[Vec<usize>], from: usize, to: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (dist[to] != usize::MAX).then_some(dist[to])
}

#[test]
fn decide_matches_configuration_graph_distances() {
    let g = gen_grid(3, 3).unwrap();
    let slack = SlackBound::Finite(1);
    let space = build_space(&g, 3, slack).unwrap();
    let adj = space.adjacency();
    for (a, b) in [(0, space.nodes.len() - 1), (1, space.nodes.len() / 2), (3, 3)] {
        let (pa, pb) = (space.nodes[a].to_partition(), space.nodes[b].to_partition());
        let d = decide_br(&g, 3, slack, &pa, &pb).unwrap();
        match (space_distance(&adj, a, b), d.path) {
            (Some(dist), Some(path)) => {
                assert_eq!(path.len(), dist);
                let end = replay(&g, &pa, &path, slack).unwrap().pop().unwrap_or(pa.clone());
                assert_eq!(end.key(), pb.key());
            }
            (None, None) => assert!(!d.reachable),
            other => panic!("oracle and decide disagree: {other:?}"),
        }
    }
}

#[test]
fn moves_written_by_transforms_replay_after_parsing() {
    let g = gen_random_connected(11, 16, 4).unwrap();
    let mut rng = seeded(4);
    let pa = random_partition(&g, 4, SlackBound::Infinite, &mut rng, 100).unwrap();
    let pb = random_partition(&g, 4, SlackBound::Infinite, &mut rng, 100).unwrap();
    let moves = transform_unbounded(&g, &pa, &pb).unwrap();
    let parsed = parse_moves(&write_moves(&moves)).unwrap();
    assert_eq!(parsed, moves);
    let end = replay(&g, &pa, &parsed, SlackBound::Infinite).unwrap().pop().unwrap_or(pa);
    assert_eq!(end.key(), pb.key());
}

#[test]
fn hamiltonian_transform_with_chords() {
    let (g, cycle) = gen_hamiltonian(12, 5, 8).unwrap();
    let slack = SlackBound::Finite(4);
    let mut rng = seeded(8);
    for _ in 0..10 {
        let pa = random_partition(&g, 3, slack, &mut rng, 1000).unwrap();
        let pb = random_partition(&g, 3, slack, &mut rng, 1000).unwrap();
        let moves = transform_hamiltonian(&g, &cycle, &pa, &pb, slack).unwrap();
        assert!(moves.len() <= hamiltonian_bound(12, 3));
        let states = replay(&g, &pa, &moves, slack).unwrap();
        assert!(states.iter().all(|p| validate(&g, p, 3, slack).is_ok()));
        assert_eq!(states.last().unwrap_or(&pa).key(), pb.key());
    }
}

#[test]
fn walks_are_reproducible_and_traced() {
    let g = gen_grid(3, 2).unwrap();
    let start = parse_partition("k 2\n0 0 0 1 1 1\n", 6).unwrap();
    let a = recom_walk(&g, 2, SlackBound::Finite(1), &start, 25, 11).unwrap();
    let b = recom_walk(&g, 2, SlackBound::Finite(1), &start, 25, 11).unwrap();
    assert_eq!(a, b);
    let text = write_trace(&a, 2, SlackBound::Finite(1));
    assert!(text.starts_with("# seed 11 k 2 slack 1 steps 25\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("s m ")).count(), a.steps.len());
}

#[test]
fn negative_instances_with_extra_districts() {
    let inst = gen_negative(6, 2).unwrap();
    let slack = SlackBound::Finite(2);
    assert_eq!(inst.graph.n(), 48);
    assert!(validate(&inst.graph, &inst.split, 6, slack).is_ok());
    assert!(chords_split_distinct(&inst.graph, &inst.split, &inst.chords).unwrap());
    // the extra districts are contiguous runs of 8
    for d in &inst.split.districts()[4..] {
        let v = d.as_slice();
        assert_eq!(v.len(), 8);
        assert_eq!(v[7] - v[0], 7);
    }
    assert_eq!(inst.arcs, arc_partition(&inst.cycle, 0, &[8; 6]));
}

#[test]
fn reduction_map_records_cover_the_graph() {
    let (ncl, a, b) = k4_all_blue();
    let r = reduce_ncl(&ncl, &a, &b, 1).unwrap();
    let records = r.map_records();
    let text = write_map_jsonl(&records);
    assert_eq!(text.lines().count(), records.len());
    assert!(text.lines().all(|l| l.starts_with("{\"kind\":")));
    let mut covered = vec![false; r.graph.n()];
    for rec in records.iter().filter(|x| x.kind == "edge" || x.kind == "gadget") {
        for &v in &rec.graph_vertices {
            assert!(!covered[v], "vertex {v} listed twice");
            covered[v] = true;
        }
    }
    assert!(covered.iter().all(|&c| c));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_and_partition_files_round_trip(n in 2usize..14, extra in 0usize..10, seed in 0u64..1000, k in 1usize..5) {
        let m = (n - 1 + extra).min(n * (n - 1) / 2);
        let g = gen_random_connected(n, m, seed).unwrap();
        let text = write_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g.clone());
        let k = k.min(n);
        let mut rng = seeded(seed);
        let p = random_partition(&g, k, SlackBound::Infinite, &mut rng, 50).unwrap();
        let ptext = write_partition(&p, n).unwrap();
        let back = parse_partition(&ptext, n).unwrap();
        prop_assert_eq!(write_partition(&back, n).unwrap(), ptext);
        prop_assert_eq!(back, p);
    }
}
