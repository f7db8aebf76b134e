//! Likelihood on a unicyclic infection graph inside a degree-regular host.
//!
//! Cutting cycle edge `(v_j, v_{j+1})` leaves a spanning tree `T_j` whose
//! spreading orders are spreading orders of the whole graph in which the
//! cycle closes at the later of `v_j`, `v_{j+1}`. Each order of the graph
//! shows up in exactly two such trees (the two cut edges incident to its
//! last cycle vertex), so the tree counts are summed and halved.

use super::closed_form::cyclic_position_probability;
use super::positions::tracked_positions;
use super::{HostedSubgraph, LikelihoodProfile, Method, PositionTerm, VertexLikelihood};
use crate::error::{Error, Result};
use crate::graph::{unique_cycle, Graph, Vertex};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

/// `m(k)` for `k = 0..=n`: spreading orders from `source` in which the cycle
/// is completed by the `k`-th infection.
pub fn last_cycle_vertex_counts(g: &Graph, source: Vertex) -> Result<Vec<BigUint>> {
    let cycle = unique_cycle(g)?;
    g.check_vertex(source)?;
    let h = cycle.len();
    let n = g.order();
    let mut m = vec![BigUint::zero(); n + 1];
    for j in 0..h {
        let (a, b) = (cycle[j], cycle[(j + 1) % h]);
        let t = g.without_edge(a, b);
        let counts = tracked_positions(&t, source, &[a, b])?;
        for (k, c) in counts.counts {
            m[k[0].max(k[1])] += c;
        }
    }
    for x in m.iter_mut() {
        debug_assert!((&*x % 2u8).is_zero());
        *x /= 2u8;
    }
    Ok(m)
}

/// Likelihood of every vertex of a unicyclic `G_n` whose host degrees are
/// all equal. Terms are indexed by the position closing the cycle.
pub fn unicyclic_likelihood(hs: &HostedSubgraph) -> Result<LikelihoodProfile> {
    let g = hs.graph();
    g.require_unicyclic()?;
    let d = hs
        .uniform_degree()
        .ok_or_else(|| Error::param("unicyclic likelihood needs a degree-regular host"))?;
    let n = g.order();
    let mut vertices = Vec::with_capacity(n);
    for v in 0..n {
        let m = last_cycle_vertex_counts(g, v)?;
        let mut terms = Vec::new();
        for (k, count) in m.into_iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            terms.push(PositionTerm { position: k, count, probability: cyclic_position_probability(d, n, k)? });
        }
        let likelihood = terms.iter().fold(BigRational::zero(), |a, t| a + t.contribution());
        vertices.push(VertexLikelihood { vertex: v, likelihood, terms });
    }
    Ok(LikelihoodProfile {
        method: Method::CyclicDecomposition,
        vertices,
        labels: (0..n).map(|v| g.label(v)).collect(),
    })
}

/// As [`unicyclic_likelihood`] for the subgraph induced by `infected` in `host`.
pub fn unicyclic_likelihood_in(host: &Graph, infected: &[Vertex]) -> Result<LikelihoodProfile> {
    unicyclic_likelihood(&HostedSubgraph::from_host(host, infected)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::likelihood::{Marker, Oracle};

    fn fig6() -> Graph {
        // C_3 = v1 v2 v3 (ids 0 1 2); v4 - v1, v5 - v2, v7 - v4  (ids 3 4 5)
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (3, 5)]).unwrap()
    }

    #[test]
    fn counts_match_oracle_grouping() {
        let g = fig6();
        let hs = HostedSubgraph::with_uniform_degree(g.clone(), 3).unwrap();
        for v in 0..6 {
            let m = last_cycle_vertex_counts(&g, v).unwrap();
            let out = Oracle::new(&hs).marker(Marker::LastOf(vec![0, 1, 2])).enumerate(v).unwrap();
            let total: BigUint = m.iter().sum();
            assert_eq!(total, BigUint::from(out.order_count));
            for (k, (c, _)) in out.by_position {
                assert_eq!(m[k], BigUint::from(c), "source {v} position {k}");
            }
        }
    }

    #[test]
    fn likelihood_matches_oracle() {
        let hs = HostedSubgraph::with_uniform_degree(fig6(), 3).unwrap();
        let cf = unicyclic_likelihood(&hs).unwrap();
        let or = Oracle::new(&hs).profile().unwrap();
        for v in 0..6 {
            assert_eq!(cf.likelihood(v), or.likelihood(v));
        }
        assert!(cf.decompositions_consistent());
    }

    #[test]
    fn pure_cycle_is_symmetric() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let hs = HostedSubgraph::with_uniform_degree(c5, 4).unwrap();
        let p = unicyclic_likelihood(&hs).unwrap();
        let first = p.likelihood(0).unwrap().clone();
        assert!((1..5).all(|v| p.likelihood(v) == Some(&first)));
    }

    #[test]
    fn rejects_trees_and_irregular_hosts() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(unicyclic_likelihood(&HostedSubgraph::with_uniform_degree(path, 3).unwrap()).is_err());
        let hs = HostedSubgraph::with_degrees(fig6(), vec![3, 3, 3, 3, 3, 2]).unwrap();
        assert!(unicyclic_likelihood(&hs).is_err());
    }
}
