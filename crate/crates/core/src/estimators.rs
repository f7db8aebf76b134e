//! Source estimators over an infection graph `G_n`: the irregular-count
//! descent (κ set) for trees, statistical distance centrality (SCT), top-k
//! wrappers around centralities, and the hop-error metric.

use crate::centrality::{
    bfs_rumor_centrality, distance_centrality, epidemic_centrality_tree, epidemic_centrality_unicyclic,
    jordan_centrality, rumor_counts, sdc_weights, statistical_distance_centrality, CentralityScores,
};
use crate::error::{Error, Result};
use crate::graph::{bfs_rooted, distances, minimum_cycle_sizes, Graph, Vertex};
use serde_json::{json, Map, Value};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    /// Irregular-count descent from the epidemic center (trees only).
    Kappa,
    Sct,
    BfsRumor,
    /// Exact epidemic centrality (trees and unicyclic graphs only).
    Epidemic,
    Distance,
    Jordan,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 6] = [
        EstimatorKind::Kappa,
        EstimatorKind::Sct,
        EstimatorKind::BfsRumor,
        EstimatorKind::Epidemic,
        EstimatorKind::Distance,
        EstimatorKind::Jordan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Kappa => "algo1",
            EstimatorKind::Sct => "sct",
            EstimatorKind::BfsRumor => "bfs-rc",
            EstimatorKind::Epidemic => "epidemic",
            EstimatorKind::Distance => "distance",
            EstimatorKind::Jordan => "jordan",
        }
    }

    /// Centrality baselines that switch to top-|κ| when κ is available.
    pub fn is_baseline(self) -> bool {
        matches!(
            self,
            EstimatorKind::BfsRumor | EstimatorKind::Epidemic | EstimatorKind::Distance | EstimatorKind::Jordan
        )
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "algo1" | "kappa" => EstimatorKind::Kappa,
            "sct" => EstimatorKind::Sct,
            "bfs-rc" | "bfsrc" | "rc" => EstimatorKind::BfsRumor,
            "epidemic" => EstimatorKind::Epidemic,
            "distance" | "dc" => EstimatorKind::Distance,
            "jordan" | "jc" => EstimatorKind::Jordan,
            other => return Err(Error::param(format!("unknown estimator {other:?}"))),
        })
    }
}

/// Parse a comma-separated estimator list; `all` expands to every estimator.
pub fn parse_estimators(s: &str) -> Result<Vec<EstimatorKind>> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        if part.trim().eq_ignore_ascii_case("all") {
            out.extend(EstimatorKind::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    out.dedup();
    if out.is_empty() {
        return Err(Error::param("empty estimator list"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimatorResult {
    pub estimator: EstimatorKind,
    /// Candidate set, best first.
    pub candidates: Vec<Vertex>,
    pub scores: Option<CentralityScores>,
    /// Vertices of the max-irregular subtree (κ estimator only).
    pub t_ml: Vec<Vertex>,
    /// Requested top-k exceeded the number of vertices.
    pub clamped: bool,
}

impl EstimatorResult {
    fn from_scores(estimator: EstimatorKind, scores: CentralityScores) -> Self {
        EstimatorResult {
            estimator,
            candidates: scores.argbest.clone(),
            scores: Some(scores),
            t_ml: Vec::new(),
            clamped: false,
        }
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let mut obj = Map::new();
        obj.insert("estimator".into(), json!(self.estimator.as_str()));
        obj.insert("candidates".into(), json!(self.candidates.iter().map(|&v| g.label(v)).collect::<Vec<_>>()));
        let mut scores = Map::new();
        if let Some(s) = &self.scores {
            for v in 0..s.len() {
                scores.insert(g.label(v), json!(s.score_text(v)));
            }
        }
        obj.insert("scores".into(), Value::Object(scores));
        if self.estimator == EstimatorKind::Kappa {
            obj.insert("t_ml".into(), json!(self.t_ml.iter().map(|&v| g.label(v)).collect::<Vec<_>>()));
        }
        Value::Object(obj)
    }
}

/// κ set on a tree: start at the epidemic center (lowest id among ties),
/// count irregular vertices in every branch, descend into all children with
/// the largest positive count, and return the center plus the parents of the
/// leaves of the subtree so obtained.
pub fn algo1_kappa(g_n: &Graph, irregular: &[Vertex]) -> Result<EstimatorResult> {
    let counts = rumor_counts(g_n)?;
    for &v in irregular {
        g_n.check_vertex(v)?;
    }
    let n = g_n.order();
    let best = counts.iter().max().unwrap();
    let center = (0..n).find(|&v| &counts[v] == best).unwrap();
    let view = bfs_rooted(g_n, center)?;
    let mut below = vec![0usize; n];
    for &v in irregular {
        below[v] = 1;
    }
    for &u in view.order.iter().rev() {
        if let Some(p) = view.parent[u] {
            below[p] += below[u];
        }
    }
    let mut t_ml = vec![center];
    let mut leaves = Vec::new();
    let mut i = 0;
    while i < t_ml.len() {
        let u = t_ml[i];
        i += 1;
        let top = view.children[u].iter().map(|&c| below[c]).max().unwrap_or(0);
        if top == 0 {
            leaves.push(u);
            continue;
        }
        t_ml.extend(view.children[u].iter().copied().filter(|&c| below[c] == top));
    }
    let mut kappa: Vec<Vertex> = leaves.iter().filter_map(|&l| view.parent[l]).collect();
    kappa.sort_unstable();
    kappa.dedup();
    kappa.retain(|&v| v != center);
    kappa.insert(0, center);
    t_ml.sort_unstable();
    let scores = CentralityScores::from_integers(crate::centrality::CentralityKind::Epidemic, counts, g_n);
    Ok(EstimatorResult { estimator: EstimatorKind::Kappa, candidates: kappa, scores: Some(scores), t_ml, clamped: false })
}

/// Argmin tie-group of statistical distance centrality on a connected graph.
pub fn sct(g_n: &Graph) -> Result<EstimatorResult> {
    g_n.require_connected()?;
    let w = sdc_weights(&minimum_cycle_sizes(g_n));
    Ok(EstimatorResult::from_scores(EstimatorKind::Sct, statistical_distance_centrality(g_n, &w)?))
}

/// SCT on each connected component, with candidates in the ids of `g_n`.
pub fn sct_components(g_n: &Graph) -> Result<Vec<(Vec<Vertex>, EstimatorResult)>> {
    let mut out = Vec::new();
    for comp in g_n.components() {
        let sub = g_n.induced_subgraph(&comp)?;
        let mut r = sct(&sub)?;
        r.candidates = r.candidates.iter().map(|&v| comp[v]).collect();
        out.push((comp, r));
    }
    Ok(out)
}

/// Scores behind a centrality estimator, or `None` when it does not apply
/// to this topology.
pub fn centrality_for(kind: EstimatorKind, g_n: &Graph) -> Result<Option<CentralityScores>> {
    Ok(match kind {
        EstimatorKind::BfsRumor => Some(bfs_rumor_centrality(g_n)?),
        EstimatorKind::Distance => Some(distance_centrality(g_n)?),
        EstimatorKind::Jordan => Some(jordan_centrality(g_n)?),
        EstimatorKind::Epidemic if g_n.is_tree() => Some(epidemic_centrality_tree(g_n)?),
        EstimatorKind::Epidemic if g_n.is_unicyclic() => Some(epidemic_centrality_unicyclic(g_n)?),
        EstimatorKind::Epidemic => None,
        EstimatorKind::Sct => Some(sct(g_n)?.scores.unwrap()),
        EstimatorKind::Kappa => None,
    })
}

/// Full best-score tie group of a centrality estimator.
pub fn centrality_estimate(kind: EstimatorKind, g_n: &Graph) -> Result<Option<EstimatorResult>> {
    Ok(centrality_for(kind, g_n)?.map(|s| EstimatorResult::from_scores(kind, s)))
}

/// Runs one estimator. Baselines return their best-score tie group, or the
/// top `k` when `k` is given. `Ok(None)` means the estimator does not apply
/// to this topology (κ on a cyclic graph, exact epidemic centrality on a
/// multicyclic one).
pub fn estimate(
    kind: EstimatorKind,
    g_n: &Graph,
    irregular: &[Vertex],
    k: Option<usize>,
    tie_mode: TieMode,
) -> Result<Option<EstimatorResult>> {
    match kind {
        EstimatorKind::Kappa if g_n.is_tree() => algo1_kappa(g_n, irregular).map(Some),
        EstimatorKind::Kappa => Ok(None),
        EstimatorKind::Sct => sct(g_n).map(Some),
        _ => match (centrality_for(kind, g_n)?, k) {
            (None, _) => Ok(None),
            (Some(s), Some(k)) => topk_wrapper(kind, &s, k, tie_mode).map(Some),
            (Some(s), None) => Ok(Some(EstimatorResult::from_scores(kind, s))),
        },
    }
}

/// Runs several estimators on one graph. When κ is requested and applies,
/// it runs first and baselines without an explicit `k` return top-|κ|.
pub fn estimate_many(
    kinds: &[EstimatorKind],
    g_n: &Graph,
    irregular: &[Vertex],
    k: Option<usize>,
    tie_mode: TieMode,
) -> Vec<(EstimatorKind, Result<Option<EstimatorResult>>)> {
    let mut k = k;
    let mut out: Vec<(EstimatorKind, Result<Option<EstimatorResult>>)> = Vec::with_capacity(kinds.len());
    if kinds.contains(&EstimatorKind::Kappa) {
        let r = estimate(EstimatorKind::Kappa, g_n, irregular, None, tie_mode);
        if let (None, Ok(Some(res))) = (k, &r) {
            k = Some(res.candidates.len());
        }
        out.push((EstimatorKind::Kappa, r));
    }
    for &kind in kinds.iter().filter(|&&e| e != EstimatorKind::Kappa) {
        out.push((kind, estimate(kind, g_n, irregular, k, tie_mode)));
    }
    out.sort_by_key(|(e, _)| kinds.iter().position(|x| x == e));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMode {
    /// Exactly `k` vertices; ties at the boundary resolved by ascending id.
    #[default]
    Truncate,
    /// Also include every vertex tied with the `k`-th score.
    Spill,
}

/// The `k` best vertices by score.
pub fn topk_wrapper(estimator: EstimatorKind, scores: &CentralityScores, k: usize, mode: TieMode) -> Result<EstimatorResult> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let ranking = scores.ranking();
    let clamped = k > ranking.len();
    let k = k.min(ranking.len());
    let mut candidates: Vec<Vertex> = ranking[..k].to_vec();
    if mode == TieMode::Spill && k > 0 {
        let last = &scores.scores[ranking[k - 1]];
        candidates.extend(ranking[k..].iter().copied().filter(|&v| &scores.scores[v] == last));
    }
    Ok(EstimatorResult { estimator, candidates, scores: Some(scores.clone()), t_ml: Vec::new(), clamped })
}

/// Smallest hop distance in `g_n` from the true source to a candidate.
pub fn hop_error(g_n: &Graph, candidates: &[Vertex], true_source: Vertex) -> Result<usize> {
    g_n.check_vertex(true_source)?;
    if candidates.is_empty() {
        return Err(Error::param("empty candidate set"));
    }
    let dist = distances(g_n, true_source)?;
    let mut best = None;
    for &c in candidates {
        g_n.check_vertex(c)?;
        if let Some(d) = dist[c] {
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
    }
    best.ok_or(Error::Unreachable { root: true_source, vertex: candidates[0] })
}
