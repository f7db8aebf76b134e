//! Distance-based centralities.

use super::{CentralityKind, CentralityScores};
use crate::error::{Error, Result};
use crate::graph::traversal_levels;
use crate::graph::{CycleInfo, CycleSize, Graph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

/// Per-vertex BFS, returning `f(levels)` or the unreachable error.
fn per_vertex<T: Send>(g: &Graph, f: impl Fn(&[u32]) -> T + Sync) -> Result<Vec<T>> {
    g.require_connected()?;
    Ok((0..g.order())
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(level, order), v| {
                traversal_levels(g, v, level, order);
                f(level)
            },
        )
        .collect())
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Sum of hop distances to every other vertex (lower is more central).
pub fn distance_centrality(g: &Graph) -> Result<CentralityScores> {
    let sums = per_vertex(g, |lv| lv.iter().map(|&x| x as u64).sum::<u64>())?;
    Ok(CentralityScores::new(CentralityKind::Distance, sums.into_iter().map(int).collect(), g))
}

/// Eccentricity (lower is more central).
pub fn jordan_centrality(g: &Graph) -> Result<CentralityScores> {
    let ecc = per_vertex(g, |lv| lv.iter().copied().max().unwrap_or(0) as u64)?;
    Ok(CentralityScores::new(CentralityKind::Jordan, ecc.into_iter().map(int).collect(), g))
}

/// `w = c / (c + 1)` for minimum cycle size `c`; 1 for acyclic non-leaves.
pub fn sdc_weights(cycles: &CycleInfo) -> Vec<BigRational> {
    cycles
        .sizes
        .iter()
        .map(|s| match *s {
            CycleSize::Finite(c) => BigRational::new(BigInt::from(c), BigInt::from(c + 1)),
            CycleSize::Acyclic => int(1),
        })
        .collect()
}

/// `SDC(v) = sum_u w_u d(v, u)` (lower is more central). Vertices are
/// grouped by weight so each BFS only accumulates integer level sums.
pub fn statistical_distance_centrality(g: &Graph, weights: &[BigRational]) -> Result<CentralityScores> {
    if weights.len() != g.order() {
        return Err(Error::param(format!("{} weights for {} vertices", weights.len(), g.order())));
    }
    if weights.iter().any(|w| *w <= BigRational::zero()) {
        return Err(Error::param("weights must be positive"));
    }
    let mut classes: Vec<BigRational> = Vec::new();
    let class_of: Vec<usize> = weights
        .iter()
        .map(|w| match classes.iter().position(|c| c == w) {
            Some(i) => i,
            None => {
                classes.push(w.clone());
                classes.len() - 1
            }
        })
        .collect();
    let k = classes.len();
    let sums = per_vertex(g, |lv| {
        let mut s = vec![0u64; k];
        for (u, &l) in lv.iter().enumerate() {
            s[class_of[u]] += l as u64;
        }
        s
    })?;
    let scores = sums
        .into_iter()
        .map(|s| s.iter().zip(&classes).fold(BigRational::zero(), |a, (&x, w)| a + w * int(x)))
        .collect();
    Ok(CentralityScores::new(CentralityKind::Sdc, scores, g))
}
