//! Brute-force enumeration of every spreading order from a source.

use super::{HostedSubgraph, LikelihoodProfile, Method, PositionTerm, VertexLikelihood};
use crate::combinatorics::{factorial, to_rational};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

pub const DEFAULT_ENUMERATION_CAP: usize = 10;
const HARD_LIMIT: usize = 63;

/// Which event's position to group orders by.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Marker {
    /// One group holding every order, reported at position 0.
    #[default]
    None,
    /// Position at which this vertex is infected.
    Vertex(Vertex),
    /// Position at which the last of these vertices is infected.
    LastOf(Vec<Vertex>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub source: Vertex,
    pub likelihood: BigRational,
    pub order_count: u64,
    /// position -> (number of orders, sum of their probabilities)
    pub by_position: BTreeMap<usize, (u64, BigRational)>,
    pub orders: Option<Vec<(Vec<Vertex>, BigRational)>>,
}

#[derive(Debug, Clone)]
pub struct Oracle<'a> {
    hs: &'a HostedSubgraph,
    cap: usize,
    keep_orders: bool,
    marker: Marker,
}

type Key = (usize, u128, u128);

#[derive(Default)]
struct Acc {
    exact: HashMap<Key, u64>,
    big: BTreeMap<usize, (u64, BigRational)>,
    orders: Vec<(Vec<Vertex>, BigRational)>,
}

impl Acc {
    fn merge(mut self, other: Acc) -> Acc {
        for (k, c) in other.exact {
            *self.exact.entry(k).or_default() += c;
        }
        for (p, (c, s)) in other.big {
            let e = self.big.entry(p).or_insert_with(|| (0, BigRational::zero()));
            e.0 += c;
            e.1 += s;
        }
        self.orders.extend(other.orders);
        self
    }
}

struct Walk<'a> {
    adj: &'a [u64],
    host_degree: &'a [usize],
    marker_mask: u64,
    marker_single: bool,
    n: usize,
    keep_orders: bool,
    order: Vec<Vertex>,
    acc: Acc,
}

impl Walk<'_> {
    fn exact_probability(&self) -> BigRational {
        let mut infected = 0u64;
        let mut cut: i64 = 0;
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (i, &v) in self.order.iter().enumerate() {
            let inside = (self.adj[v] & infected).count_ones() as i64;
            if i > 0 {
                num *= inside;
                den *= cut;
            }
            cut += self.host_degree[v] as i64 - 2 * inside;
            infected |= 1 << v;
        }
        BigRational::new(num, den)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(&mut self, infected: u64, frontier: u64, cut: i64, num: u128, den: u128, overflow: bool, mark: usize) {
        let depth = self.order.len();
        if depth == self.n {
            if self.keep_orders || overflow {
                let p = self.exact_probability();
                if overflow {
                    let e = self.acc.big.entry(mark).or_insert_with(|| (0, BigRational::zero()));
                    e.0 += 1;
                    e.1 += &p;
                }
                if self.keep_orders {
                    self.acc.orders.push((self.order.clone(), p));
                }
            }
            if !overflow {
                *self.acc.exact.entry((mark, num, den)).or_default() += 1;
            }
            return;
        }
        let mut rest = frontier;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let inside = (self.adj[w] & infected).count_ones() as u128;
            let (mut n2, mut d2, mut of) = (num, den, overflow);
            if !of {
                match (num.checked_mul(inside), den.checked_mul(cut as u128)) {
                    (Some(a), Some(b)) => {
                        let g = a.gcd(&b);
                        n2 = a / g;
                        d2 = b / g;
                    }
                    _ => of = true,
                }
            }
            let inf2 = infected | (1 << w);
            let front2 = (frontier | self.adj[w]) & !inf2;
            let cut2 = cut + self.host_degree[w] as i64 - 2 * inside as i64;
            let mark2 = if mark == 0 && self.hit(inf2, w) { depth + 1 } else { mark };
            self.order.push(w);
            self.dfs(inf2, front2, cut2, n2, d2, of, mark2);
            self.order.pop();
        }
    }

    fn hit(&self, infected: u64, w: Vertex) -> bool {
        if self.marker_single {
            self.marker_mask == 1 << w
        } else {
            self.marker_mask != 0 && infected & self.marker_mask == self.marker_mask
        }
    }
}

impl<'a> Oracle<'a> {
    pub fn new(hs: &'a HostedSubgraph) -> Self {
        Oracle { hs, cap: DEFAULT_ENUMERATION_CAP, keep_orders: false, marker: Marker::None }
    }

    pub fn cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn keep_orders(mut self, yes: bool) -> Self {
        self.keep_orders = yes;
        self
    }

    pub fn marker(mut self, marker: Marker) -> Self {
        self.marker = marker;
        self
    }

    fn check_size(&self) -> Result<()> {
        let n = self.hs.order();
        if n > self.cap || n > HARD_LIMIT {
            return Err(Error::EnumerationCap {
                vertices: n,
                cap: self.cap.min(HARD_LIMIT),
                bound: format!("{n}! = {}", factorial(n)),
            });
        }
        Ok(())
    }

    pub fn enumerate(&self, source: Vertex) -> Result<OracleOutcome> {
        self.check_size()?;
        let g: &Graph = self.hs.graph();
        g.check_vertex(source)?;
        let n = g.order();
        let adj: Vec<u64> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect();
        let (marker_mask, marker_single) = match &self.marker {
            Marker::None => (0, false),
            Marker::Vertex(m) => {
                g.check_vertex(*m)?;
                (1u64 << m, true)
            }
            Marker::LastOf(list) => {
                let mut mask = 0u64;
                for &m in list {
                    g.check_vertex(m)?;
                    mask |= 1 << m;
                }
                (mask, false)
            }
        };
        let new_walk = || Walk {
            adj: &adj,
            host_degree: self.hs.host_degrees(),
            marker_mask,
            marker_single,
            n,
            keep_orders: self.keep_orders,
            order: vec![source],
            acc: Acc::default(),
        };
        let start = 1u64 << source;
        let mark0 = {
            let w = new_walk();
            if w.marker_mask != 0 && w.hit(start, source) { 1 } else { 0 }
        };
        let cut0 = self.hs.host_degree(source) as i64;
        let acc = if n == 1 {
            let mut w = new_walk();
            w.dfs(start, adj[source], cut0, 1, 1, false, mark0);
            w.acc
        } else {
            let firsts: Vec<Vertex> = g.neighbors(source).to_vec();
            firsts
                .par_iter()
                .map(|&f| {
                    let mut w = new_walk();
                    let front = adj[source] & !start;
                    let inf2 = start | (1 << f);
                    let front2 = (front | adj[f]) & !inf2;
                    let inside = 1u128;
                    let g0 = inside.gcd(&(cut0 as u128));
                    let cut2 = cut0 + self.hs.host_degree(f) as i64 - 2;
                    let mark2 = if mark0 == 0 && w.hit(inf2, f) { 2 } else { mark0 };
                    w.order.push(f);
                    w.dfs(inf2, front2, cut2, inside / g0, cut0 as u128 / g0, false, mark2);
                    w.acc
                })
                .reduce(Acc::default, Acc::merge)
        };
        Ok(finish(source, acc))
    }

    /// Likelihood of every vertex as the source.
    pub fn profile(&self) -> Result<LikelihoodProfile> {
        self.check_size()?;
        let n = self.hs.order();
        let mut vertices = Vec::with_capacity(n);
        for v in 0..n {
            let out = self.enumerate(v)?;
            let terms = out
                .by_position
                .iter()
                .map(|(&position, (count, sum))| PositionTerm {
                    position,
                    count: BigUint::from(*count),
                    probability: sum / to_rational(&BigUint::from(*count)),
                })
                .collect();
            vertices.push(VertexLikelihood { vertex: v, likelihood: out.likelihood, terms });
        }
        let g = self.hs.graph();
        Ok(LikelihoodProfile {
            method: Method::Oracle,
            vertices,
            labels: (0..n).map(|v| g.label(v)).collect(),
        })
    }
}

fn finish(source: Vertex, acc: Acc) -> OracleOutcome {
    let mut by_position = acc.big;
    // group equal denominators before touching big rationals
    let mut grouped: BTreeMap<(usize, u128), (u64, BigUint)> = BTreeMap::new();
    for ((pos, num, den), c) in acc.exact {
        let e = grouped.entry((pos, den)).or_insert_with(|| (0, BigUint::zero()));
        e.0 += c;
        e.1 += BigUint::from(num) * c;
    }
    for ((pos, den), (c, num)) in grouped {
        let e = by_position.entry(pos).or_insert_with(|| (0, BigRational::zero()));
        e.0 += c;
        e.1 += BigRational::new(num.into(), BigUint::from(den).into());
    }
    let likelihood = by_position.values().fold(BigRational::zero(), |a, (_, s)| a + s);
    let order_count = by_position.values().map(|(c, _)| c).sum();
    let orders = if acc.orders.is_empty() { None } else { Some(acc.orders) };
    OracleOutcome { source, likelihood, order_count, by_position, orders }
}

/// Enumerate every spreading order of the subgraph induced by `infected` in
/// `host`, started at `source` (a vertex id of `host`).
pub fn oracle_enumerate(
    host: &Graph,
    infected: &[Vertex],
    source: Vertex,
    keep_orders: bool,
) -> Result<OracleOutcome> {
    let local = infected
        .iter()
        .position(|&v| v == source)
        .ok_or_else(|| Error::param(format!("source {} is not infected", host.label(source))))?;
    let hs = HostedSubgraph::from_host(host, infected)?;
    let mut out = Oracle::new(&hs).keep_orders(keep_orders).enumerate(local)?;
    out.source = source;
    if let Some(orders) = out.orders.as_mut() {
        for (o, _) in orders.iter_mut() {
            for v in o.iter_mut() {
                *v = infected[*v];
            }
        }
    }
    Ok(out)
}
