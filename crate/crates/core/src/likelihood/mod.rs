//! Exact likelihoods `P(G_n | v)`: a brute-force oracle over spreading orders
//! and closed forms for lines, brooms, single-irregular trees and unicyclic
//! infection graphs.

mod closed_form;
mod hosted;
mod oracle;
pub mod positions;
mod unicyclic;

pub use closed_form::{
    broom_instance, broom_likelihood, cyclic_position_probability, irregular_position_probability,
    line_instance, line_likelihood, regular_tree_order_probability, single_irregular_tree_likelihood,
};
pub use hosted::HostedSubgraph;
pub use oracle::{oracle_enumerate, Marker, Oracle, OracleOutcome, DEFAULT_ENUMERATION_CAP};
pub use unicyclic::{last_cycle_vertex_counts, unicyclic_likelihood, unicyclic_likelihood_in};

use crate::combinatorics::{rational_to_decimal, rational_to_f64, to_rational};
use crate::graph::Vertex;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Oracle,
    LineClosedForm,
    BroomClosedForm,
    IrregularDecomposition,
    CyclicDecomposition,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::LineClosedForm => "line-closed-form",
            Method::BroomClosedForm => "broom-closed-form",
            Method::IrregularDecomposition => "irregular-decomposition",
            Method::CyclicDecomposition => "cyclic-decomposition",
        }
    }
}

/// `count` spreading orders whose tracked event happens at `position`, each
/// (on average, for grouped terms) with probability `probability`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionTerm {
    pub position: usize,
    pub count: BigUint,
    pub probability: BigRational,
}

impl PositionTerm {
    pub fn contribution(&self) -> BigRational {
        to_rational(&self.count) * &self.probability
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLikelihood {
    pub vertex: Vertex,
    pub likelihood: BigRational,
    pub terms: Vec<PositionTerm>,
}

impl VertexLikelihood {
    /// Sum of `count * probability` over the decomposition.
    pub fn decomposition_total(&self) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, t| acc + t.contribution())
    }

    pub fn order_count(&self) -> BigUint {
        self.terms.iter().map(|t| &t.count).sum()
    }

    /// Counts indexed by position `1..=n` (index 0 unused).
    pub fn counts_by_position(&self, n: usize) -> Vec<BigUint> {
        let mut m = vec![BigUint::zero(); n + 1];
        for t in &self.terms {
            m[t.position] += &t.count;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LikelihoodProfile {
    pub method: Method,
    pub vertices: Vec<VertexLikelihood>,
    pub labels: Vec<String>,
}

impl LikelihoodProfile {
    pub fn get(&self, v: Vertex) -> Option<&VertexLikelihood> {
        self.vertices.iter().find(|x| x.vertex == v)
    }

    pub fn likelihood(&self, v: Vertex) -> Option<&BigRational> {
        self.get(v).map(|x| &x.likelihood)
    }

    /// Likelihood normalised over all candidate sources (uniform prior).
    pub fn posterior(&self, v: Vertex) -> Option<BigRational> {
        let total = self.vertices.iter().fold(BigRational::zero(), |a, x| a + &x.likelihood);
        self.likelihood(v).map(|p| p / total)
    }

    /// All maximizers, ascending by vertex id.
    pub fn argmax(&self) -> Vec<Vertex> {
        let Some(best) = self.vertices.iter().map(|x| &x.likelihood).max() else {
            return Vec::new();
        };
        let mut out: Vec<Vertex> =
            self.vertices.iter().filter(|x| &x.likelihood == best).map(|x| x.vertex).collect();
        out.sort_unstable();
        out
    }

    /// Every vertex's decomposition reproduces its likelihood exactly.
    pub fn decompositions_consistent(&self) -> bool {
        self.vertices.iter().all(|x| x.decomposition_total() == x.likelihood)
    }

    /// Vertices sorted by descending likelihood, ties by ascending id.
    pub fn ranked(&self) -> Vec<&VertexLikelihood> {
        let mut v: Vec<&VertexLikelihood> = self.vertices.iter().collect();
        v.sort_by(|a, b| b.likelihood.cmp(&a.likelihood).then(a.vertex.cmp(&b.vertex)));
        v
    }

    fn label(&self, v: Vertex) -> String {
        self.labels.get(v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .ranked()
            .into_iter()
            .map(|x| {
                json!({
                    "vertex": self.label(x.vertex),
                    "decimal": rational_to_decimal(&x.likelihood, 20),
                    "numerator": x.likelihood.numer().to_string(),
                    "denominator": x.likelihood.denom().to_string(),
                    "terms": x.terms.iter().map(|t| json!({
                        "position": t.position,
                        "count": t.count.to_string(),
                        "probability": t.probability.to_string(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "method": self.method.as_str(), "likelihoods": rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex,likelihood,numerator,denominator\n");
        for x in self.ranked() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.label(x.vertex),
                rational_to_decimal(&x.likelihood, 20),
                x.likelihood.numer(),
                x.likelihood.denom()
            ));
        }
        out
    }

    pub fn approx(&self, v: Vertex) -> Option<f64> {
        self.likelihood(v).map(rational_to_f64)
    }
}
