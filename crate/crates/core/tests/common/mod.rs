//! Random instance builders shared by the integration tests.
#![allow(dead_code)]

use episource_core::graph::{bfs_rooted, Graph, Vertex};
use episource_core::likelihood::{HostedSubgraph, LikelihoodProfile};
use rand::seq::SliceRandom;
use rand::Rng;
use std::path::PathBuf;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// Uniform-ish random tree on `n` vertices with every degree at most `max_deg`,
/// ids shuffled.
pub fn random_tree(n: usize, max_deg: usize, rng: &mut impl Rng) -> Graph {
    assert!(n <= 2 || max_deg >= 2);
    let mut deg = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let open: Vec<Vertex> = (0..v).filter(|&u| deg[u] < max_deg).collect();
        let u = open[rng.random_range(0..open.len())];
        deg[u] += 1;
        deg[v] += 1;
        edges.push((u, v));
    }
    relabel(n, &edges, rng)
}

/// Random tree plus one extra edge between two vertices at distance at
/// least 2, keeping degrees at most `max_deg`. `None` when no such pair exists.
pub fn random_unicyclic(n: usize, max_deg: usize, rng: &mut impl Rng) -> Option<Graph> {
    for _ in 0..50 {
        let t = random_tree(n, max_deg, rng);
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !t.has_edge(u, v) && t.degree(u) < max_deg && t.degree(v) < max_deg {
                    pairs.push((u, v));
                }
            }
        }
        if let Some(&(u, v)) = pairs.get(rng.random_range(0..pairs.len().max(1))) {
            let mut e: Vec<_> = t.edges().collect();
            e.push((u, v));
            return Some(Graph::from_edges(n, &e).unwrap());
        }
    }
    None
}

pub fn relabel(n: usize, edges: &[(Vertex, Vertex)], rng: &mut impl Rng) -> Graph {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let e: Vec<_> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(n, &e).unwrap()
}

/// Same hosted instance with vertex `v` renamed `perm[v]`.
pub fn permute_hosted(hs: &HostedSubgraph, perm: &[Vertex]) -> HostedSubgraph {
    let g = hs.graph();
    let e: Vec<_> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    let mut deg = vec![0; g.order()];
    for v in 0..g.order() {
        deg[perm[v]] = hs.host_degree(v);
    }
    HostedSubgraph::with_degrees(Graph::from_edges(g.order(), &e).unwrap(), deg).unwrap()
}

/// Vertices on the tree path between `a` and `b`, inclusive.
pub fn tree_path(t: &Graph, a: Vertex, b: Vertex) -> Vec<Vertex> {
    bfs_rooted(t, b).unwrap().path_to_root(a)
}

pub fn argmax(p: &LikelihoodProfile) -> Vec<Vertex> {
    p.argmax()
}

/// Uniform random labelled tree on `n >= 2` vertices from a Prüfer sequence.
pub fn prufer_tree(n: usize, rng: &mut impl Rng) -> Graph {
    if n <= 2 {
        return Graph::from_edges(n, &[(0, 1)][..n - 1]).unwrap();
    }
    let seq: Vec<Vertex> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut deg = vec![1usize; n];
    for &v in &seq {
        deg[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &seq {
        let leaf = (0..n).find(|&u| deg[u] == 1).unwrap();
        edges.push((leaf, v));
        deg[leaf] -= 1;
        deg[v] -= 1;
    }
    let rest: Vec<Vertex> = (0..n).filter(|&u| deg[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, &edges).unwrap()
}
