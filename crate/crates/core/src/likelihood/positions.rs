//! Counting linear extensions of a rooted tree (every vertex after its
//! parent) by the positions of up to two tracked vertices.
//!
//! A subtree's extensions are its root followed by an interleaving of the
//! children's extensions, so counts are built bottom-up. Interleaving two
//! sequences with some elements pinned to known merged positions splits into
//! independent gaps, each contributing one binomial.

use crate::combinatorics::Pascal;
use crate::error::{Error, Result};
use crate::graph::{bfs_rooted, Graph, Vertex};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Counts keyed by the 1-based positions of the tracked vertices (in the
/// order they were requested).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionCounts {
    pub tracked: Vec<Vertex>,
    pub counts: BTreeMap<Vec<usize>, BigUint>,
}

impl PositionCounts {
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// For a single tracked vertex: `m[k]` for `k = 0..=n` (index 0 unused).
    pub fn single(&self, n: usize) -> Vec<BigUint> {
        let mut m = vec![BigUint::zero(); n + 1];
        for (k, c) in &self.counts {
            m[k[0]] += c;
        }
        m
    }
}

#[derive(Debug, Clone)]
struct Seq {
    len: usize,
    tracked: Vec<Vertex>,
    table: BTreeMap<Vec<usize>, BigUint>,
}

impl Seq {
    fn empty() -> Seq {
        Seq { len: 0, tracked: Vec::new(), table: BTreeMap::from([(Vec::new(), BigUint::one())]) }
    }

    fn prepend(mut self, u: Vertex, tracked: bool) -> Seq {
        let table = std::mem::take(&mut self.table)
            .into_iter()
            .map(|(k, c)| {
                let mut k2: Vec<usize> = k.into_iter().map(|p| p + 1).collect();
                if tracked {
                    k2.push(1);
                }
                (k2, c)
            })
            .collect();
        if tracked {
            self.tracked.push(u);
        }
        Seq { len: self.len + 1, tracked: self.tracked, table }
    }
}

/// Anchored interleavings of sequences of lengths `a` and `b`. Each anchor is
/// `(merged position, from_a, index within its side)`, all 1-based.
fn anchored(p: &Pascal, a: usize, b: usize, anchors: &mut [(usize, bool, usize)]) -> BigUint {
    anchors.sort_unstable();
    let (mut prev, mut used_a, mut used_b) = (0usize, 0usize, 0usize);
    let mut acc = BigUint::one();
    for &(pos, from_a, idx) in anchors.iter() {
        if pos <= prev || idx == 0 || pos < idx {
            return BigUint::zero();
        }
        let (a_before, b_before) =
            if from_a { (idx - 1, pos - idx) } else { (pos - idx, idx - 1) };
        if a_before < used_a || b_before < used_b || a_before + from_a as usize > a || b_before + !from_a as usize > b {
            return BigUint::zero();
        }
        acc *= p.get(pos - 1 - prev, a_before - used_a);
        used_a = a_before + from_a as usize;
        used_b = b_before + !from_a as usize;
        prev = pos;
    }
    acc * p.get(a + b - prev, a - used_a)
}

fn merge(p: &Pascal, x: Seq, y: Seq) -> Seq {
    let (a, b) = (x.len, y.len);
    let mut table: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
    for (ka, ca) in &x.table {
        for (kb, cb) in &y.table {
            let base = ca * cb;
            // candidate merged positions for each tracked element
            let mut elems: Vec<(bool, usize, std::ops::RangeInclusive<usize>)> = Vec::new();
            for &r in ka {
                elems.push((true, r, r..=r + b));
            }
            for &s in kb {
                elems.push((false, s, s..=s + a));
            }
            match elems.len() {
                0 => {
                    *table.entry(Vec::new()).or_insert_with(BigUint::zero) += &base * p.get(a + b, a);
                }
                1 => {
                    let (fa, i, ref range) = elems[0];
                    for q in range.clone() {
                        let c = anchored(p, a, b, &mut [(q, fa, i)]);
                        if !c.is_zero() {
                            *table.entry(vec![q]).or_insert_with(BigUint::zero) += &base * c;
                        }
                    }
                }
                2 => {
                    let (f0, i0, ref r0) = elems[0];
                    let (f1, i1, ref r1) = elems[1];
                    for q0 in r0.clone() {
                        for q1 in r1.clone() {
                            if q0 == q1 {
                                continue;
                            }
                            let c = anchored(p, a, b, &mut [(q0, f0, i0), (q1, f1, i1)]);
                            if !c.is_zero() {
                                *table.entry(vec![q0, q1]).or_insert_with(BigUint::zero) += &base * c;
                            }
                        }
                    }
                }
                _ => unreachable!("at most two tracked vertices"),
            }
        }
    }
    let mut tracked = x.tracked;
    tracked.extend(y.tracked);
    Seq { len: a + b, tracked, table }
}

/// Spreading orders of tree `t` from `root`, counted by where the `tracked`
/// vertices (at most two) appear.
pub fn tracked_positions(t: &Graph, root: Vertex, tracked: &[Vertex]) -> Result<PositionCounts> {
    t.require_tree()?;
    if tracked.len() > 2 {
        return Err(Error::param("at most two tracked vertices"));
    }
    for &v in tracked {
        t.check_vertex(v)?;
    }
    if tracked.len() == 2 && tracked[0] == tracked[1] {
        return Err(Error::param("tracked vertices must differ"));
    }
    let view = bfs_rooted(t, root)?;
    let p = Pascal::new(t.order());
    let mut seqs: Vec<Option<Seq>> = vec![None; t.order()];
    for &u in view.order.iter().rev() {
        let mut acc = Seq::empty();
        for &c in &view.children[u] {
            let child = seqs[c].take().expect("children finished first");
            acc = merge(&p, acc, child);
        }
        seqs[u] = Some(acc.prepend(u, tracked.contains(&u)));
    }
    let seq = seqs[root].take().unwrap();
    // reorder keys to the requested tracked order
    let perm: Vec<usize> = tracked
        .iter()
        .map(|v| seq.tracked.iter().position(|w| w == v).unwrap())
        .collect();
    let counts = seq
        .table
        .into_iter()
        .fold(BTreeMap::new(), |mut m: BTreeMap<Vec<usize>, BigUint>, (k, c)| {
            let key = perm.iter().map(|&i| k[i]).collect();
            *m.entry(key).or_insert_with(BigUint::zero) += c;
            m
        });
    Ok(PositionCounts { tracked: tracked.to_vec(), counts })
}

/// `m(k)`: spreading orders of tree `t` from `source` that infect `marked` at
/// position `k`, for `k = 0..=n` (index 0 unused).
pub fn marked_position_counts(t: &Graph, source: Vertex, marked: Vertex) -> Result<Vec<BigUint>> {
    Ok(tracked_positions(t, source, &[marked])?.single(t.order()))
}
