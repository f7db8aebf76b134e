//! Undirected simple graphs, traversal and structural queries.

mod cycles;
pub mod generate;
pub mod io;
mod traversal;

pub use cycles::{
    cycle_distance, minimum_cycle_sizes, unicyclic_spanning_trees, unique_cycle, CycleInfo,
    CycleSize, UnicyclicLayout,
};
pub use generate::{generate, GeneratorSpec};
pub use traversal::{
    all_pairs_distance, all_pairs_distance_capped, bfs_rooted, distances, DistanceMatrix, RootedTreeView,
};
pub(crate) use traversal::bfs_levels as traversal_levels;

use crate::error::{Error, Result};
use std::collections::HashMap;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Build from an edge list over vertices `0..n`. Duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, order: n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph { adj, edge_count: edge_count / 2, labels: None })
    }

    pub fn empty(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n], edge_count: 0, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.order() {
            return Err(Error::param(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.order()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::param(format!("duplicate label {l:?}")));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.order()
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, order: self.order() })
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: Vertex) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn label_map(&self) -> HashMap<String, Vertex> {
        (0..self.order()).map(|v| (self.label(v), v)).collect()
    }

    pub fn find_label(&self, label: &str) -> Option<Vertex> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse::<usize>().ok().filter(|&v| v < self.order()),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Most frequent degree; the smaller value wins a tie.
    pub fn modal_degree(&self) -> usize {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for l in &self.adj {
            *counts.entry(l.len()).or_default() += 1;
        }
        counts
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(d, _)| d)
            .unwrap_or(0)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.order() <= 1 || self.components().len() == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        let c = self.components().len();
        if c > 1 {
            Err(Error::Disconnected { components: c })
        } else {
            Ok(())
        }
    }

    pub fn is_tree(&self) -> bool {
        self.order() >= 1 && self.size() + 1 == self.order() && self.is_connected()
    }

    pub fn is_unicyclic(&self) -> bool {
        self.order() >= 3 && self.size() == self.order() && self.is_connected()
    }

    pub(crate) fn require_tree(&self) -> Result<()> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(Error::NotATree { vertices: self.order(), edges: self.size() })
        }
    }

    pub(crate) fn require_unicyclic(&self) -> Result<()> {
        if self.is_unicyclic() {
            Ok(())
        } else {
            Err(Error::NotUnicyclic { vertices: self.order(), edges: self.size() })
        }
    }

    /// Induced subgraph on `vertices` (in the given order), relabelled `0..k`.
    /// Labels are carried over from this graph.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<Graph> {
        let mut local = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if local.insert(v, i).is_some() {
                return Err(Error::param(format!("vertex {v} listed twice")));
            }
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(&j) = local.get(&w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let g = Graph::from_edges(vertices.len(), &edges)?;
        g.with_labels(vertices.iter().map(|&v| self.label(v)).collect())
    }

    /// Copy of this graph without the edge `(u, v)`.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Graph {
        let mut g = self.clone();
        if let Ok(i) = g.adj[u].binary_search(&v) {
            g.adj[u].remove(i);
            let j = g.adj[v].binary_search(&u).expect("symmetric adjacency");
            g.adj[v].remove(j);
            g.edge_count -= 1;
        }
        g
    }
}
