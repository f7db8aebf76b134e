//! Vertex centralities used as source estimators.

mod distance;
mod epidemic;

pub use distance::{distance_centrality, jordan_centrality, sdc_weights, statistical_distance_centrality};
pub use epidemic::{
    bfs_rumor_centrality, epidemic_centrality_tree, epidemic_centrality_unicyclic,
    locate_epidemic_center_unicyclic, rumor_counts, spanning_tree_table, unicyclic_order_counts,
    CenterCertificate,
};

use crate::combinatorics::rational_to_decimal;
use crate::graph::{Graph, Vertex};
use num_bigint::BigUint;
use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralityKind {
    Epidemic,
    BfsRumor,
    Distance,
    Jordan,
    Sdc,
}

impl CentralityKind {
    pub fn higher_is_better(self) -> bool {
        matches!(self, CentralityKind::Epidemic | CentralityKind::BfsRumor)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CentralityKind::Epidemic => "epidemic",
            CentralityKind::BfsRumor => "bfs-rc",
            CentralityKind::Distance => "distance",
            CentralityKind::Jordan => "jordan",
            CentralityKind::Sdc => "sdc",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    pub scores: Vec<BigRational>,
    /// Every vertex attaining the best score, ascending.
    pub argbest: Vec<Vertex>,
    pub labels: Vec<String>,
}

impl CentralityScores {
    pub fn new(kind: CentralityKind, scores: Vec<BigRational>, g: &Graph) -> Self {
        let best = if kind.higher_is_better() { scores.iter().max() } else { scores.iter().min() };
        let argbest = match best {
            Some(b) => (0..scores.len()).filter(|&v| &scores[v] == b).collect(),
            None => Vec::new(),
        };
        let labels = (0..g.order()).map(|v| g.label(v)).collect();
        CentralityScores { kind, scores, argbest, labels }
    }

    pub(crate) fn from_integers(kind: CentralityKind, scores: Vec<BigUint>, g: &Graph) -> Self {
        let scores = scores.into_iter().map(|s| BigRational::from_integer(s.into())).collect();
        Self::new(kind, scores, g)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Vertices from best to worst, ties by ascending id.
    pub fn ranking(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = (0..self.scores.len()).collect();
        if self.kind.higher_is_better() {
            v.sort_by(|&a, &b| self.scores[b].cmp(&self.scores[a]).then(a.cmp(&b)));
        } else {
            v.sort_by(|&a, &b| self.scores[a].cmp(&self.scores[b]).then(a.cmp(&b)));
        }
        v
    }

    /// Exact score as text: an integer or `p/q`.
    pub fn score_text(&self, v: Vertex) -> String {
        self.scores[v].to_string()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex,score,is_argbest\n");
        for v in 0..self.scores.len() {
            let s = &self.scores[v];
            let text = if s.is_integer() { s.to_string() } else { rational_to_decimal(s, 20) };
            out.push_str(&format!("{},{},{}\n", self.labels[v], text, self.argbest.binary_search(&v).is_ok()));
        }
        out
    }
}
