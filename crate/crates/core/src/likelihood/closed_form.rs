//! Closed-form likelihoods for regular interiors, lines, brooms and trees with
//! a single irregular vertex.

use super::positions::marked_position_counts;
use super::{HostedSubgraph, LikelihoodProfile, Method, PositionTerm, VertexLikelihood};
use crate::centrality::rumor_counts;
use crate::combinatorics::{binomial, binomial_i, factorial, to_rational};
use crate::error::{Error, Result};
use crate::graph::Graph;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `z(i) = (i - 1)(d - 2)`: extra boundary gained by the first `i` infections.
fn z(d: usize, i: usize) -> i64 {
    (i as i64 - 1) * (d as i64 - 2)
}

fn recip(x: i64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(x))
}

fn regular_cut(d: usize, m: usize) -> i64 {
    d as i64 + z(d, m)
}

/// Probability of any single spreading order of `n` vertices inside the
/// interior of a `d`-regular tree.
pub fn regular_tree_order_probability(d: usize, n: usize) -> Result<BigRational> {
    if d < 2 || n == 0 {
        return Err(Error::param(format!("need d >= 2 and n >= 1 (d={d}, n={n})")));
    }
    Ok((1..n).fold(BigRational::one(), |acc, m| acc * recip(regular_cut(d, m))))
}

/// Per-order probability when the only irregular vertex (host degree `dp`)
/// is infected `k`-th. `k = 1` means it is the source.
pub(crate) fn position_probability(d: usize, dp: usize, n: usize, k: usize) -> BigRational {
    let shift = dp as i64 - d as i64;
    let mut p = BigRational::one();
    for m in 1..n {
        let cut = if m < k { regular_cut(d, m) } else { regular_cut(d, m) + shift };
        p *= recip(cut);
    }
    p
}

/// Probability of any single order in which the irregular vertex of host
/// degree `d_prime` is the `k`-th infection, `2 <= k <= n`.
pub fn irregular_position_probability(d: usize, d_prime: usize, n: usize, k: usize) -> Result<BigRational> {
    if d < 2 || d_prime == 0 || d_prime > d {
        return Err(Error::param(format!("need 1 <= d' <= d and d >= 2 (d={d}, d'={d_prime})")));
    }
    if k < 2 || k > n {
        return Err(Error::param(format!("position k={k} outside 2..={n}")));
    }
    Ok(position_probability(d, d_prime, n, k))
}

fn labelled(g: Graph, labels: Vec<String>) -> Graph {
    g.with_labels(labels).expect("distinct generated labels")
}

/// Path `v_1 .. v_n` in a `d`-regular host whose end `v_n` is a host leaf.
pub fn line_instance(d: usize, n: usize) -> Result<HostedSubgraph> {
    if n < 2 {
        return Err(Error::param("line needs n >= 2"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    let g = labelled(Graph::from_edges(n, &edges)?, (1..=n).map(|i| format!("v{i}")).collect());
    let mut deg = vec![d; n];
    deg[n - 1] = 1;
    HostedSubgraph::with_degrees(g, deg)
}

/// Likelihood of each path vertex for the line with one irregular end.
/// Vertex `i - 1` is `v_i`; terms are indexed by the position of `v_n`.
pub fn line_likelihood(d: usize, n: usize) -> Result<LikelihoodProfile> {
    if d < 3 {
        return Err(Error::param(format!("line likelihood needs d >= 3, got {d}")));
    }
    let inst = line_instance(d, n)?;
    let mut vertices = Vec::with_capacity(n);
    for i in 1..=n {
        let terms: Vec<PositionTerm> = if i == n {
            vec![PositionTerm { position: 1, count: BigUint::one(), probability: position_probability(d, 1, n, 1) }]
        } else {
            (n - i + 1..=n)
                .map(|k| PositionTerm {
                    position: k,
                    count: binomial_i(k as i64 - 2, k as i64 - n as i64 + i as i64 - 1),
                    probability: position_probability(d, 1, n, k),
                })
                .collect()
        };
        let likelihood = sum_terms(&terms);
        vertices.push(VertexLikelihood { vertex: i - 1, likelihood, terms });
    }
    Ok(profile(Method::LineClosedForm, vertices, inst.graph()))
}

fn sum_terms(terms: &[PositionTerm]) -> BigRational {
    terms.iter().fold(BigRational::zero(), |a, t| a + t.contribution())
}

fn profile(method: Method, vertices: Vec<VertexLikelihood>, g: &Graph) -> LikelihoodProfile {
    LikelihoodProfile { method, vertices, labels: (0..g.order()).map(|v| g.label(v)).collect() }
}

/// Path `v_1 .. v_2t` with `k` host leaves `u_1 .. u_k` hanging from `v_2t`,
/// inside a `d`-regular host. Path vertex `v_i` has id `i - 1`, leaf `u_j`
/// has id `2t + j - 1`.
pub fn broom_instance(d: usize, t: usize, k: usize) -> Result<HostedSubgraph> {
    check_broom(d, t, k)?;
    let p = 2 * t;
    let n = p + k;
    let mut edges: Vec<_> = (1..p).map(|i| (i - 1, i)).collect();
    edges.extend((0..k).map(|j| (p - 1, p + j)));
    let labels = (1..=p).map(|i| format!("v{i}")).chain((1..=k).map(|j| format!("u{j}"))).collect();
    let g = labelled(Graph::from_edges(n, &edges)?, labels);
    let deg = (0..n).map(|v| if v < p { d } else { 1 }).collect();
    HostedSubgraph::with_degrees(g, deg)
}

fn check_broom(d: usize, t: usize, k: usize) -> Result<()> {
    if d < 3 || t == 0 || k == 0 {
        return Err(Error::param(format!("broom needs d >= 3, t >= 1, k >= 1 (d={d}, t={t}, k={k})")));
    }
    if k >= d {
        return Err(Error::param(format!("{k} leaves cannot hang from a vertex of degree {d}")));
    }
    Ok(())
}

/// Likelihoods on the broom. Path-vertex terms are grouped by the position of
/// the first infected leaf (each carrying the mean per-order probability of
/// its group); a leaf source has a single group at position 1.
pub fn broom_likelihood(d: usize, t: usize, k: usize) -> Result<LikelihoodProfile> {
    let inst = broom_instance(d, t, k)?;
    let p = 2 * t;
    let n = p + k;
    let cut = |m: usize, j: usize| -> i64 {
        d as i64 + z(d, m) - j as i64 * (d as i64 - 1)
    };
    // tail[m][j]: summed probability of all step-type completions from m
    // infected vertices, j of them leaves
    let mut tail = vec![vec![BigRational::zero(); k + 2]; n + 1];
    tail[n][k] = BigRational::one();
    for m in (1..n).rev() {
        // at least one path vertex, at most 2t of them
        for j in m.saturating_sub(p)..=k.min(m - 1) {
            let mut s = tail[m + 1][j].clone();
            if j < k {
                s += &tail[m + 1][j + 1];
            }
            if !s.is_zero() {
                let c = cut(m, j);
                debug_assert!(c > 0);
                tail[m][j] = s * recip(c);
            }
        }
    }
    let k_fact = factorial(k);
    let mut vertices = Vec::with_capacity(n);
    for i in 1..=p {
        let mut prefix = BigRational::one();
        let mut terms = Vec::new();
        for h1 in 2..=p + 1 {
            prefix *= recip(cut(h1 - 1, 0));
            let paths = if i == p {
                BigUint::one()
            } else {
                (p - i + 1..h1).map(|r| binomial_i(r as i64 - 2, r as i64 - p as i64 + i as i64 - 1)).sum()
            };
            if paths.is_zero() {
                continue;
            }
            let placements = binomial(n - h1, k - 1);
            let group = &prefix * &tail[h1][1];
            terms.push(PositionTerm {
                position: h1,
                count: &k_fact * &paths * &placements,
                probability: group / to_rational(&placements),
            });
        }
        let likelihood = sum_terms(&terms);
        vertices.push(VertexLikelihood { vertex: i - 1, likelihood, terms });
    }
    // a leaf source must infect v_2t next; then any interleaving is possible
    let leaf_total = recip(cut(1, 1)) * &tail[2][1];
    let leaf_count = factorial(k - 1) * binomial(n - 2, k - 1);
    let leaf_terms = vec![PositionTerm {
        position: 1,
        count: leaf_count.clone(),
        probability: leaf_total / to_rational(&binomial(n - 2, k - 1)),
    }];
    let leaf_likelihood = sum_terms(&leaf_terms);
    for j in 0..k {
        vertices.push(VertexLikelihood {
            vertex: p + j,
            likelihood: leaf_likelihood.clone(),
            terms: leaf_terms.clone(),
        });
    }
    Ok(profile(Method::BroomClosedForm, vertices, inst.graph()))
}

/// Likelihoods on a tree whose host degrees are all `d` except for at most
/// one vertex of smaller degree. Terms are indexed by that vertex's position.
pub fn single_irregular_tree_likelihood(hs: &HostedSubgraph) -> Result<LikelihoodProfile> {
    let g = hs.graph();
    g.require_tree()?;
    let n = g.order();
    let d = *hs.host_degrees().iter().max().unwrap();
    let irregular: Vec<usize> = (0..n).filter(|&v| hs.host_degree(v) < d).collect();
    if d < 2 || irregular.len() > 1 {
        return Err(Error::param(format!(
            "expected at most one vertex below host degree {d}, found {}",
            irregular.len()
        )));
    }
    let mut vertices = Vec::with_capacity(n);
    match irregular.first() {
        None => {
            let per_order = regular_tree_order_probability(d, n)?;
            for (v, count) in rumor_counts(g)?.into_iter().enumerate() {
                let term = PositionTerm { position: 0, count, probability: per_order.clone() };
                let likelihood = term.contribution();
                vertices.push(VertexLikelihood { vertex: v, likelihood, terms: vec![term] });
            }
        }
        Some(&ir) => {
            let dp = hs.host_degree(ir);
            for v in 0..n {
                let m = marked_position_counts(g, v, ir)?;
                let terms: Vec<PositionTerm> = (1..=n)
                    .filter(|&k| !m[k].is_zero())
                    .map(|k| PositionTerm {
                        position: k,
                        count: m[k].clone(),
                        probability: position_probability(d, dp, n, k),
                    })
                    .collect();
                let likelihood = sum_terms(&terms);
                vertices.push(VertexLikelihood { vertex: v, likelihood, terms });
            }
        }
    }
    Ok(profile(Method::IrregularDecomposition, vertices, g))
}

/// Per-order probability on a unicyclic infection graph inside a `d`-regular
/// host when the cycle closes with the `k`-th infection. The closing vertex
/// has two infected neighbors, and every later step sees a boundary two
/// smaller than on a tree.
pub fn cyclic_position_probability(d: usize, n: usize, k: usize) -> Result<BigRational> {
    if d < 3 {
        return Err(Error::param(format!("cyclic likelihood needs d >= 3, got {d}")));
    }
    if k < 3 || k > n {
        return Err(Error::param(format!("cycle closing position k={k} outside 3..={n}")));
    }
    let mut p = BigRational::from_integer(BigInt::from(2));
    for m in 1..n {
        let cut = if m < k { regular_cut(d, m) } else { regular_cut(d, m) - 2 };
        p *= recip(cut);
    }
    Ok(p)
}
