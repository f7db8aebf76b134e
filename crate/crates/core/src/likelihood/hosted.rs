use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// An infection subgraph `G_n` together with the degree each of its vertices
/// has in the underlying graph. Degrees outside `G_n` are all the spreading
/// rule needs to know about the rest of the host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostedSubgraph {
    graph: Graph,
    host_degree: Vec<usize>,
}

impl HostedSubgraph {
    /// `G_n` induced on `infected` inside `host`; local id `i` is `infected[i]`.
    pub fn from_host(host: &Graph, infected: &[Vertex]) -> Result<Self> {
        let graph = host.induced_subgraph(infected)?;
        graph.require_connected()?;
        let host_degree = infected.iter().map(|&v| host.degree(v)).collect();
        Ok(HostedSubgraph { graph, host_degree })
    }

    pub fn with_degrees(graph: Graph, host_degree: Vec<usize>) -> Result<Self> {
        if host_degree.len() != graph.order() {
            return Err(Error::param("one host degree per vertex required"));
        }
        for v in 0..graph.order() {
            if host_degree[v] < graph.degree(v) {
                return Err(Error::param(format!(
                    "host degree {} of vertex {} is below its degree {} in the infection graph",
                    host_degree[v],
                    graph.label(v),
                    graph.degree(v)
                )));
            }
        }
        graph.require_connected()?;
        Ok(HostedSubgraph { graph, host_degree })
    }

    /// Every vertex has host degree `d`.
    pub fn with_uniform_degree(graph: Graph, d: usize) -> Result<Self> {
        let n = graph.order();
        Self::with_degrees(graph, vec![d; n])
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn host_degree(&self, v: Vertex) -> usize {
        self.host_degree[v]
    }

    pub fn host_degrees(&self) -> &[usize] {
        &self.host_degree
    }

    /// The common host degree, if all vertices share one.
    pub fn uniform_degree(&self) -> Option<usize> {
        let d = *self.host_degree.first()?;
        self.host_degree.iter().all(|&x| x == d).then_some(d)
    }

    /// Materialise a host: each vertex gets fresh pendant stubs up to its host degree.
    pub fn padded_host(&self) -> Graph {
        let n = self.order();
        let mut edges: Vec<(Vertex, Vertex)> = self.graph.edges().collect();
        let mut next = n;
        for v in 0..n {
            for _ in self.graph.degree(v)..self.host_degree[v] {
                edges.push((v, next));
                next += 1;
            }
        }
        Graph::from_edges(next, &edges).expect("valid padding")
    }
}
