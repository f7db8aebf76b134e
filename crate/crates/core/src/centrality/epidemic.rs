//! Epidemic (rumor) centrality: the number of spreading orders from each vertex.

use super::{CentralityKind, CentralityScores};
use crate::combinatorics::factorial;
use crate::error::Result;
use crate::graph::{bfs_rooted, unicyclic_spanning_trees, Graph, UnicyclicLayout, Vertex};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

/// `|M(v, t)| = n! / prod_u size_v(u)` for every vertex of tree `t`, by one
/// product at vertex 0 and root shifting along edges.
pub fn rumor_counts(t: &Graph) -> Result<Vec<BigUint>> {
    t.require_tree()?;
    let n = t.order();
    let view = bfs_rooted(t, 0)?;
    let prod = view.subtree_size.iter().fold(BigUint::one(), |a, &s| a * s as u64);
    let mut m = vec![BigUint::one(); n];
    m[0] = factorial(n) / prod;
    for &u in view.order.iter().skip(1) {
        let p = view.parent[u].unwrap();
        let s = view.subtree_size[u] as u64;
        m[u] = &m[p] * s / (n as u64 - s);
    }
    Ok(m)
}

pub fn epidemic_centrality_tree(t: &Graph) -> Result<CentralityScores> {
    Ok(CentralityScores::from_integers(CentralityKind::Epidemic, rumor_counts(t)?, t))
}

/// Sum of the tree centralities over the cycle's spanning trees. This counts
/// each spreading order of `g` twice; see [`unicyclic_order_counts`].
pub fn epidemic_centrality_unicyclic(g: &Graph) -> Result<CentralityScores> {
    let mut total = vec![BigUint::default(); g.order()];
    for (t, _) in unicyclic_spanning_trees(g)? {
        for (acc, m) in total.iter_mut().zip(rumor_counts(&t)?) {
            *acc += m;
        }
    }
    Ok(CentralityScores::from_integers(CentralityKind::Epidemic, total, g))
}

/// Exact number of spreading orders of a unicyclic graph from each vertex.
pub fn unicyclic_order_counts(g: &Graph) -> Result<Vec<BigUint>> {
    let s = epidemic_centrality_unicyclic(g)?;
    Ok(s.scores
        .into_iter()
        .map(|x| {
            let v = x.to_integer().into_parts().1;
            v / 2u8
        })
        .collect())
}

/// Rumor centrality of each vertex on its own BFS tree.
pub fn bfs_rumor_centrality(g: &Graph) -> Result<CentralityScores> {
    g.require_connected()?;
    let n = g.order();
    let nf = factorial(n);
    let scores: Vec<BigUint> = (0..n)
        .into_par_iter()
        .map(|v| {
            let view = bfs_rooted(g, v).expect("connected");
            let prod = view.subtree_size.iter().fold(BigUint::one(), |a, &s| a * s as u64);
            &nf / prod
        })
        .collect();
    Ok(CentralityScores::from_integers(CentralityKind::BfsRumor, scores, g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterCertificate {
    /// Every component left after removing the vertex has at most n/2 vertices.
    ComponentCondition,
    /// No vertex satisfies the component condition; the center is the cycle
    /// vertex with the largest count, found from spanning-tree count ratios.
    CycleRatio,
}

/// `table[q][i] = |M(v_i, T_q)|` for cycle positions `i` and spanning trees
/// `T_q = g \ (v_q, v_{q+1})`, filled from one exact count by ratios of
/// subtree sizes.
pub fn spanning_tree_table(g: &Graph) -> Result<Vec<Vec<BigUint>>> {
    let layout = UnicyclicLayout::new(g)?;
    table_from_layout(g, &layout)
}

fn table_from_layout(g: &Graph, layout: &UnicyclicLayout) -> Result<Vec<Vec<BigUint>>> {
    let h = layout.cycle_len();
    let n = g.order() as u64;
    let t: Vec<u64> = layout.hanging_sizes().into_iter().map(|x| x as u64).collect();
    // T_q read as a path starting after the cut: v_{q+1}, v_{q+2}, ..., v_q
    let path_of = |q: usize| -> Vec<usize> { (0..h).map(|s| (q + 1 + s) % h).collect() };
    // product over j != i of the size of cycle vertex j's subtree in T_q rooted at v_i
    let cycle_product = |q: usize, i: usize| -> BigUint {
        let path = path_of(q);
        let si = path.iter().position(|&x| x == i).unwrap();
        let mut prod = BigUint::one();
        let mut acc = 0u64;
        for s in (si + 1..h).rev() {
            acc += t[path[s]];
            prod *= acc;
        }
        acc = 0;
        for s in 0..si {
            acc += t[path[s]];
            prod *= acc;
        }
        prod
    };
    let t0 = g.without_edge(layout.cycle[0], layout.cycle[1 % h]);
    let anchor = rumor_counts(&t0)?[layout.cycle[0]].clone();
    let base = cycle_product(0, 0);
    let mut table = vec![vec![BigUint::default(); h]; h];
    for q in 0..h {
        // M(v_0, T_q) = M(v_0, T_0) * prod_0 / prod_q
        let first = BigRational::from_integer((&anchor * &base).into())
            / BigRational::from_integer(cycle_product(q, 0).into());
        debug_assert!(first.is_integer());
        let path = path_of(q);
        let s0 = path.iter().position(|&x| x == 0).unwrap();
        let mut prefix = vec![0u64; h];
        let mut acc = 0;
        for s in 0..h {
            acc += t[path[s]];
            prefix[s] = acc;
        }
        let mut row = vec![BigUint::default(); h];
        row[0] = first.to_integer().into_parts().1;
        // walk away from v_0 in both directions along the path
        for s in s0 + 1..h {
            let prev = row[path[s - 1]].clone();
            row[path[s]] = prev * (n - prefix[s - 1]) / prefix[s - 1];
        }
        for s in (0..s0).rev() {
            let next = row[path[s + 1]].clone();
            row[path[s]] = next * prefix[s] / (n - prefix[s]);
        }
        table[q] = row;
    }
    Ok(table)
}

/// Epidemic center of a unicyclic graph (lowest id among ties) and how it was found.
pub fn locate_epidemic_center_unicyclic(g: &Graph) -> Result<(Vertex, CenterCertificate)> {
    let layout = UnicyclicLayout::new(g)?;
    let n = g.order();
    for v in 0..n {
        let rest = n - layout.below[v];
        let largest = g
            .neighbors(v)
            .iter()
            .filter(|&&w| layout.toward_cycle[w] == Some(v))
            .map(|&w| layout.below[w])
            .chain(std::iter::once(rest))
            .max()
            .unwrap_or(0);
        if 2 * largest <= n {
            return Ok((v, CenterCertificate::ComponentCondition));
        }
    }
    let table = table_from_layout(g, &layout)?;
    let h = layout.cycle_len();
    let totals: Vec<BigUint> = (0..h).map(|i| table.iter().map(|row| &row[i]).sum()).collect();
    let best = totals.iter().max().unwrap();
    let center = (0..h)
        .filter(|&i| &totals[i] == best)
        .map(|i| layout.cycle[i])
        .min()
        .unwrap();
    Ok((center, CenterCertificate::CycleRatio))
}
