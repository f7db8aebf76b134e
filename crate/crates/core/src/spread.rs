//! SI spreading simulation and exact order probabilities.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::HashMap;

/// Per-vertex infection and spreading rates; `None` means all ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeRates {
    infect: Option<Vec<f64>>,
    spread: Option<Vec<f64>>,
}

impl NodeRates {
    pub fn unit() -> Self {
        NodeRates::default()
    }

    pub fn new(infect: Vec<f64>, spread: Vec<f64>) -> Result<Self> {
        if infect.len() != spread.len() {
            return Err(Error::param("infect and spread rate vectors differ in length"));
        }
        if infect.iter().chain(&spread).any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::param("rates must be positive and finite"));
        }
        Ok(NodeRates { infect: Some(infect), spread: Some(spread) })
    }

    pub fn is_unit(&self) -> bool {
        self.infect.is_none()
    }

    pub fn infect(&self, v: Vertex) -> f64 {
        self.infect.as_ref().map_or(1.0, |r| r[v])
    }

    pub fn spread(&self, v: Vertex) -> f64 {
        self.spread.as_ref().map_or(1.0, |r| r[v])
    }

    fn check(&self, g: &Graph) -> Result<()> {
        match &self.infect {
            Some(r) if r.len() != g.order() => Err(Error::param(format!(
                "{} rates for {} vertices",
                r.len(),
                g.order()
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepWeight {
    pub chosen: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SnapshotParams {
    pub target: usize,
    /// Irregular-vertex cap divisor; 0 disables the cap.
    pub cap_k: usize,
    /// The susceptible boundary emptied before `target` was reached.
    pub exhausted: bool,
    /// Stopped because the irregular-vertex cap was hit.
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfectionSnapshot {
    pub source: Vertex,
    /// Infection order; `order[0] == source`.
    pub order: Vec<Vertex>,
    pub seed: u64,
    pub params: SnapshotParams,
    pub frontier_history: Option<Vec<StepWeight>>,
}

impl InfectionSnapshot {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The infection subgraph, relabelled so that local id `i` is `order[i]`.
    pub fn subgraph(&self, g: &Graph) -> Result<Graph> {
        g.induced_subgraph(&self.order)
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "source": g.label(self.source),
            "order": self.order.iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
            "seed": self.seed,
            "params": {
                "n": self.params.target,
                "cap_k": self.params.cap_k,
                "exhausted": self.params.exhausted,
                "capped": self.params.capped,
            },
        })
    }

    pub fn from_json(value: &Value, g: &Graph) -> Result<Self> {
        let bad = |m: &str| Error::param(format!("snapshot JSON: {m}"));
        let lookup = |v: &Value| -> Result<Vertex> {
            let s = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(bad("labels must be strings or integers")),
            };
            g.find_label(&s).ok_or_else(|| bad(&format!("unknown vertex {s:?}")))
        };
        let order = value
            .get("order")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing order"))?
            .iter()
            .map(lookup)
            .collect::<Result<Vec<_>>>()?;
        let source = match value.get("source") {
            Some(v) => lookup(v)?,
            None => *order.first().ok_or_else(|| bad("empty order"))?,
        };
        let p = value.get("params");
        let field = |k: &str| p.and_then(|p| p.get(k));
        let snap = InfectionSnapshot {
            source,
            seed: value.get("seed").and_then(Value::as_u64).unwrap_or(0),
            params: SnapshotParams {
                target: field("n").and_then(Value::as_u64).map_or(order.len(), |x| x as usize),
                cap_k: field("cap_k").and_then(Value::as_u64).unwrap_or(0) as usize,
                exhausted: field("exhausted").and_then(Value::as_bool).unwrap_or(false),
                capped: field("capped").and_then(Value::as_bool).unwrap_or(false),
            },
            order,
            frontier_history: None,
        };
        validate_order(g, &snap.order)?;
        if snap.order[0] != snap.source {
            return Err(bad("order must start at the source"));
        }
        Ok(snap)
    }
}

/// Reusable simulator over one graph; computes the modal degree once.
#[derive(Debug, Clone)]
pub struct Simulator<'g> {
    g: &'g Graph,
    rates: NodeRates,
    modal_degree: usize,
    record_history: bool,
}

impl<'g> Simulator<'g> {
    pub fn new(g: &'g Graph, rates: NodeRates) -> Result<Self> {
        rates.check(g)?;
        Ok(Simulator { g, rates, modal_degree: g.modal_degree(), record_history: false })
    }

    pub fn record_history(mut self, yes: bool) -> Self {
        self.record_history = yes;
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn is_irregular(&self, v: Vertex) -> bool {
        self.g.degree(v) != self.modal_degree
    }

    pub fn run(&self, source: Vertex, n: usize, cap_k: usize, seed: u64) -> Result<InfectionSnapshot> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut snap = self.run_with_rng(source, n, cap_k, &mut rng)?;
        snap.seed = seed;
        Ok(snap)
    }

    pub fn run_with_rng(
        &self,
        source: Vertex,
        n: usize,
        cap_k: usize,
        rng: &mut impl Rng,
    ) -> Result<InfectionSnapshot> {
        let g = self.g;
        g.check_vertex(source)?;
        if n == 0 || n > g.order() {
            return Err(Error::param(format!("n={n} must be in 1..={}", g.order())));
        }
        let irregular_limit = (cap_k > 0).then(|| n.div_ceil(cap_k));
        let mut infected: HashMap<Vertex, ()> = HashMap::with_capacity(n);
        // boundary vertex -> (slot, weight)
        let mut slot: HashMap<Vertex, usize> = HashMap::new();
        let mut boundary: Vec<Vertex> = Vec::new();
        let mut weight: Vec<f64> = Vec::new();
        let mut order = Vec::with_capacity(n);
        let mut history = self.record_history.then(Vec::new);
        let mut irregular = 0usize;
        let mut params = SnapshotParams { target: n, cap_k, ..Default::default() };

        let infect = |v: Vertex,
                          infected: &mut HashMap<Vertex, ()>,
                          slot: &mut HashMap<Vertex, usize>,
                          boundary: &mut Vec<Vertex>,
                          weight: &mut Vec<f64>| {
            infected.insert(v, ());
            if let Some(i) = slot.remove(&v) {
                boundary.swap_remove(i);
                weight.swap_remove(i);
                if i < boundary.len() {
                    slot.insert(boundary[i], i);
                }
            }
            let rs = self.rates.spread(v);
            for &w in g.neighbors(v) {
                if infected.contains_key(&w) {
                    continue;
                }
                let add = self.rates.infect(w) * rs;
                match slot.get(&w) {
                    Some(&i) => weight[i] += add,
                    None => {
                        slot.insert(w, boundary.len());
                        boundary.push(w);
                        weight.push(add);
                    }
                }
            }
        };

        infect(source, &mut infected, &mut slot, &mut boundary, &mut weight);
        order.push(source);
        if self.is_irregular(source) {
            irregular += 1;
        }
        while order.len() < n {
            if irregular_limit.is_some_and(|lim| irregular >= lim) {
                params.capped = true;
                break;
            }
            if boundary.is_empty() {
                params.exhausted = true;
                break;
            }
            let total: f64 = weight.iter().sum();
            let mut r = rng.random::<f64>() * total;
            let mut pick = boundary.len() - 1;
            for (i, &w) in weight.iter().enumerate() {
                if r < w {
                    pick = i;
                    break;
                }
                r -= w;
            }
            let v = boundary[pick];
            if let Some(h) = history.as_mut() {
                h.push(StepWeight { chosen: weight[pick], total });
            }
            infect(v, &mut infected, &mut slot, &mut boundary, &mut weight);
            order.push(v);
            if self.is_irregular(v) {
                irregular += 1;
            }
        }
        Ok(InfectionSnapshot { source, order, seed: 0, params, frontier_history: history })
    }
}

/// Simulate until `n` vertices are infected (or the boundary empties, or the
/// irregular-vertex cap `ceil(n / cap_k)` is reached when `cap_k > 0`).
pub fn simulate(
    g: &Graph,
    source: Vertex,
    n: usize,
    rates: &NodeRates,
    cap_k: usize,
    seed: u64,
) -> Result<InfectionSnapshot> {
    Simulator::new(g, rates.clone())?.run(source, n, cap_k, seed)
}

/// Checks that `order` has no repeats and each vertex touches an earlier one.
pub fn validate_order(g: &Graph, order: &[Vertex]) -> Result<()> {
    if order.is_empty() {
        return Err(Error::param("empty infection order"));
    }
    let mut pos = HashMap::with_capacity(order.len());
    for (i, &v) in order.iter().enumerate() {
        g.check_vertex(v)?;
        if pos.insert(v, i).is_some() {
            return Err(Error::param(format!("vertex {} infected twice", g.label(v))));
        }
        if i > 0 && !g.neighbors(v).iter().any(|w| pos.get(w).is_some_and(|&j| j < i)) {
            return Err(Error::param(format!(
                "vertex {} at step {i} has no infected neighbor",
                g.label(v)
            )));
        }
    }
    Ok(())
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite rate")
}

/// Exact probability of the realized order under the spreading rule,
/// recomputed from the graph.
pub fn realized_order_probability(g: &Graph, snapshot: &InfectionSnapshot) -> Result<BigRational> {
    order_probability(g, &snapshot.order, &NodeRates::unit())
}

/// Exact probability of an infection order with the given rates.
pub fn order_probability(g: &Graph, order: &[Vertex], rates: &NodeRates) -> Result<BigRational> {
    validate_order(g, order)?;
    rates.check(g)?;
    if rates.is_unit() {
        return unit_order_probability(g, order);
    }
    let mut infected = std::collections::HashSet::new();
    let mut weight: HashMap<Vertex, BigRational> = HashMap::new();
    let mut p = BigRational::one();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 {
            let total = weight.values().fold(BigRational::zero(), |a, b| a + b);
            p *= &weight[&v] / total;
        }
        infected.insert(v);
        weight.remove(&v);
        let rs = exact(rates.spread(v));
        for &w in g.neighbors(v) {
            if !infected.contains(&w) {
                *weight.entry(w).or_insert_with(BigRational::zero) += exact(rates.infect(w)) * &rs;
            }
        }
    }
    Ok(p)
}

fn unit_order_probability(g: &Graph, order: &[Vertex]) -> Result<BigRational> {
    let mut infected = std::collections::HashSet::with_capacity(order.len());
    let mut cut: i64 = 0;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, &v) in order.iter().enumerate() {
        let inside = g.neighbors(v).iter().filter(|w| infected.contains(*w)).count() as i64;
        if i > 0 {
            num *= inside;
            den *= cut;
        }
        cut += g.degree(v) as i64 - 2 * inside;
        infected.insert(v);
    }
    Ok(BigRational::new(num, den))
}
