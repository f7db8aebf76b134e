//! Seeded Monte-Carlo comparisons of source estimators.
//!
//! One underlying graph is generated per experiment. Each trial draws a
//! uniform true source, runs the SI process to `n_infected` vertices and
//! scores every configured estimator on the infection subgraph by hop error.

use crate::error::{Error, Result};
use crate::estimators::{
    estimate, hop_error, parse_estimators, EstimatorKind, EstimatorResult, TieMode,
};
use crate::graph::{generate, GeneratorSpec, Graph, Vertex};
use crate::spread::{NodeRates, Simulator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

/// Which infected vertices count as irregular for the κ estimator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum IrregularRule {
    /// Degree one in the underlying graph.
    #[default]
    HostLeaves,
    /// Degree in the underlying graph differs from its modal degree.
    ModalDegree,
    /// Degree one in the infection subgraph; used when the host is unknown.
    SubgraphLeaves,
    /// Fixed labels.
    Explicit(Vec<String>),
}

impl IrregularRule {
    /// Irregular vertices of `g_n`, where `host_of[i]` is the host id of
    /// subgraph vertex `i` (ignored by the subgraph-only rules).
    pub fn select(&self, host: Option<&Graph>, g_n: &Graph, host_of: &[Vertex]) -> Result<Vec<Vertex>> {
        let need_host = || host.ok_or_else(|| Error::param("irregular rule needs the underlying graph"));
        Ok(match self {
            IrregularRule::HostLeaves => {
                let h = need_host()?;
                (0..g_n.order()).filter(|&i| h.degree(host_of[i]) == 1).collect()
            }
            IrregularRule::ModalDegree => {
                let h = need_host()?;
                let d = h.modal_degree();
                (0..g_n.order()).filter(|&i| h.degree(host_of[i]) != d).collect()
            }
            IrregularRule::SubgraphLeaves => (0..g_n.order()).filter(|&i| g_n.degree(i) == 1).collect(),
            IrregularRule::Explicit(labels) => {
                let mut out = Vec::new();
                for l in labels {
                    if let Some(v) = g_n.find_label(l) {
                        out.push(v);
                    }
                }
                out.sort_unstable();
                out.dedup();
                out
            }
        })
    }
}

impl FromStr for IrregularRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "host-leaves" => IrregularRule::HostLeaves,
            "modal" => IrregularRule::ModalDegree,
            "subgraph-leaves" => IrregularRule::SubgraphLeaves,
            other => match other.strip_prefix("explicit:") {
                Some(list) => IrregularRule::Explicit(
                    list.split(',').map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect(),
                ),
                None => return Err(Error::param(format!("unknown irregular rule {other:?}"))),
            },
        })
    }
}

impl std::fmt::Display for IrregularRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IrregularRule::HostLeaves => f.write_str("host-leaves"),
            IrregularRule::ModalDegree => f.write_str("modal"),
            IrregularRule::SubgraphLeaves => f.write_str("subgraph-leaves"),
            IrregularRule::Explicit(l) => write!(f, "explicit:{}", l.join(",")),
        }
    }
}

fn parse_tie_mode(s: &str) -> Result<TieMode> {
    match s.trim() {
        "truncate" => Ok(TieMode::Truncate),
        "spill" => Ok(TieMode::Spill),
        other => Err(Error::param(format!("unknown tie mode {other:?}"))),
    }
}

fn tie_mode_str(t: TieMode) -> &'static str {
    match t {
        TieMode::Truncate => "truncate",
        TieMode::Spill => "spill",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub n_infected: usize,
    pub trials: usize,
    pub estimators: Vec<EstimatorKind>,
    pub seed: u64,
    /// Stop spreading at `ceil(n / cap_k)` irregular vertices; 0 disables.
    pub cap_k: usize,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Fill the `micros` column. Off by default so reruns are byte-identical.
    pub timing: bool,
    pub irregular: IrregularRule,
    pub tie_mode: TieMode,
}

impl ExperimentConfig {
    pub fn new(generator: GeneratorSpec, n_infected: usize, trials: usize, estimators: Vec<EstimatorKind>, seed: u64) -> Self {
        ExperimentConfig {
            generator,
            n_infected,
            trials,
            estimators,
            seed,
            cap_k: 0,
            output: None,
            threads: None,
            timing: false,
            irregular: IrregularRule::default(),
            tie_mode: TieMode::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.n_infected == 0 {
            return Err(Error::param("n must be at least 1"));
        }
        if self.estimators.is_empty() {
            return Err(Error::param("estimator list is empty"));
        }
        if self.threads == Some(0) {
            return Err(Error::param("threads must be at least 1"));
        }
        Ok(())
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: "expected key = value".into() })?;
            if kv.insert(k.trim().to_string(), (i + 1, v.trim().to_string())).is_some() {
                return Err(Error::Parse { line: i + 1, msg: format!("duplicate key {:?}", k.trim()) });
            }
        }
        let take = |kv: &mut BTreeMap<String, (usize, String)>, key: &str| kv.remove(key);
        let num = |(line, v): (usize, String)| -> Result<u64> {
            v.parse::<u64>().map_err(|e| Error::Parse { line, msg: format!("{v:?}: {e}") })
        };
        let generator = match take(&mut kv, "generator") {
            Some((_, v)) => v.parse()?,
            None => return Err(Error::param("config is missing `generator`")),
        };
        let n_infected = num(take(&mut kv, "n").ok_or_else(|| Error::param("config is missing `n`"))?)? as usize;
        let trials = take(&mut kv, "trials").map(num).transpose()?.unwrap_or(1) as usize;
        let estimators = match take(&mut kv, "estimators") {
            Some((_, v)) => parse_estimators(&v)?,
            None => vec![EstimatorKind::Sct, EstimatorKind::BfsRumor],
        };
        let seed = take(&mut kv, "seed").map(num).transpose()?.unwrap_or(0);
        let mut cfg = ExperimentConfig::new(generator, n_infected, trials, estimators, seed);
        if let Some(p) = take(&mut kv, "cap_k") {
            cfg.cap_k = num(p)? as usize;
        }
        if let Some((_, v)) = take(&mut kv, "output") {
            cfg.output = Some(PathBuf::from(v));
        }
        if let Some(p) = take(&mut kv, "threads") {
            cfg.threads = Some(num(p)? as usize);
        }
        if let Some((line, v)) = take(&mut kv, "timing") {
            cfg.timing = v.parse().map_err(|_| Error::Parse { line, msg: format!("bad bool {v:?}") })?;
        }
        if let Some((_, v)) = take(&mut kv, "irregular") {
            cfg.irregular = v.parse()?;
        }
        if let Some((_, v)) = take(&mut kv, "ties") {
            cfg.tie_mode = parse_tie_mode(&v)?;
        }
        if let Some((k, (line, _))) = kv.into_iter().next() {
            return Err(Error::Parse { line, msg: format!("unknown key {k:?}") });
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "generator = {}", self.generator);
        let _ = writeln!(s, "n = {}", self.n_infected);
        let _ = writeln!(s, "trials = {}", self.trials);
        let names: Vec<_> = self.estimators.iter().map(|e| e.as_str()).collect();
        let _ = writeln!(s, "estimators = {}", names.join(","));
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "cap_k = {}", self.cap_k);
        if let Some(o) = &self.output {
            let _ = writeln!(s, "output = {}", o.display());
        }
        if let Some(t) = self.threads {
            let _ = writeln!(s, "threads = {t}");
        }
        let _ = writeln!(s, "timing = {}", self.timing);
        let _ = writeln!(s, "irregular = {}", self.irregular);
        let _ = writeln!(s, "ties = {}", tie_mode_str(self.tie_mode));
        s
    }
}

/// SplitMix64 finaliser over `seed + (stream + 1) * golden`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed stream for the underlying graph; trials use streams `0..trials`.
const GRAPH_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Scored { candidates: Vec<String>, error: usize },
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimatorOutcome {
    pub estimator: EstimatorKind,
    pub outcome: Outcome,
    pub micros: Option<u128>,
}

impl EstimatorOutcome {
    pub fn k(&self) -> Option<usize> {
        match &self.outcome {
            Outcome::Scored { candidates, .. } => Some(candidates.len()),
            Outcome::Skipped(_) => None,
        }
    }

    pub fn error(&self) -> Option<usize> {
        match &self.outcome {
            Outcome::Scored { error, .. } => Some(*error),
            Outcome::Skipped(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub source: String,
    pub infected: usize,
    pub outcomes: Vec<EstimatorOutcome>,
}

impl TrialRecord {
    pub fn get(&self, e: EstimatorKind) -> Option<&EstimatorOutcome> {
        self.outcomes.iter().find(|o| o.estimator == e)
    }
}

pub const CSV_HEADER: &str = "trial,seed,source,estimator,k,error,micros";

/// One row per trial and estimator. Skipped estimators leave `k` and
/// `error` empty.
pub fn records_csv(records: &[TrialRecord]) -> String {
    let mut s = String::with_capacity(64 * records.len());
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in records {
        for o in &r.outcomes {
            let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            let micros = o.micros.map(|m| m.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.trial,
                r.seed,
                csv_field(&r.source),
                o.estimator,
                opt(o.k()),
                opt(o.error()),
                micros
            );
        }
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Scores every estimator on one infection subgraph against a known source.
pub fn run_estimators(
    g_n: &Graph,
    true_source: Vertex,
    estimators: &[EstimatorKind],
    irregular: &[Vertex],
    tie_mode: TieMode,
    timing: bool,
) -> Vec<(EstimatorOutcome, Option<EstimatorResult>)> {
    let mut k = None;
    let mut order = estimators.to_vec();
    // κ first so baselines can match its size
    order.sort_by_key(|&e| e != EstimatorKind::Kappa);
    let mut results = Vec::with_capacity(order.len());
    for e in order {
        let t = Instant::now();
        let r = estimate(e, g_n, irregular, k, tie_mode);
        let micros = timing.then(|| t.elapsed().as_micros());
        if let (EstimatorKind::Kappa, Ok(Some(res))) = (e, &r) {
            k = Some(res.candidates.len());
        }
        results.push((e, r, micros));
    }
    results.sort_by_key(|(e, _, _)| estimators.iter().position(|x| x == e));
    results
        .into_iter()
        .map(|(e, res, micros)| {
            let (outcome, result) = match res {
                Ok(Some(r)) => match hop_error(g_n, &r.candidates, true_source) {
                    Ok(error) => {
                        let candidates = r.candidates.iter().map(|&v| g_n.label(v)).collect();
                        (Outcome::Scored { candidates, error }, Some(r))
                    }
                    Err(err) => (Outcome::Skipped(err.to_string()), None),
                },
                Ok(None) => (Outcome::Skipped(format!("{e} does not apply to this topology")), None),
                Err(err) => (Outcome::Skipped(err.to_string()), None),
            };
            (EstimatorOutcome { estimator: e, outcome, micros }, result)
        })
        .collect()
}

/// Generates the experiment's underlying graph.
pub fn experiment_graph(cfg: &ExperimentConfig) -> Result<Graph> {
    generate(&cfg.generator, derive_seed(cfg.seed, GRAPH_STREAM))
}

/// Runs one trial on a prepared simulator.
pub fn run_trial(cfg: &ExperimentConfig, sim: &Simulator<'_>, trial: usize) -> Result<TrialRecord> {
    let g = sim.graph();
    let seed = derive_seed(cfg.seed, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source = rng.random_range(0..g.order());
    let snap = sim.run_with_rng(source, cfg.n_infected, cfg.cap_k, &mut rng)?;
    // subgraph ids follow infection order, so the source is 0
    let g_n = snap.subgraph(g)?;
    let irregular = cfg.irregular.select(Some(g), &g_n, &snap.order)?;
    let outcomes = run_estimators(&g_n, 0, &cfg.estimators, &irregular, cfg.tie_mode, cfg.timing)
        .into_iter()
        .map(|(o, _)| o)
        .collect();
    Ok(TrialRecord { trial, seed, source: g.label(source), infected: snap.order.len(), outcomes })
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

/// Runs all trials, in parallel when more than one thread is allowed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let g = experiment_graph(cfg)?;
    run_experiment_on(cfg, &g)
}

/// Like [`run_experiment`] on a caller-supplied underlying graph.
pub fn run_experiment_on(cfg: &ExperimentConfig, g: &Graph) -> Result<ExperimentRun> {
    cfg.validate()?;
    if cfg.n_infected > g.order() {
        return Err(Error::param(format!("n={} exceeds |G|={}", cfg.n_infected, g.order())));
    }
    let sim = Simulator::new(g, NodeRates::unit())?;
    let work = || (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, &sim, t)).collect::<Result<Vec<_>>>();
    let records = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::param(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let summary = summarize(&records, &cfg.estimators)?;
    if let Some(path) = &cfg.output {
        std::fs::write(path, records_csv(&records))?;
    }
    Ok(ExperimentRun { records, summary })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorSummary {
    pub estimator: EstimatorKind,
    pub scored: usize,
    pub skipped: usize,
    pub error_sum: u64,
    pub k_sum: u64,
    pub zero_count: u64,
    pub mean_error: f64,
    pub mean_k: f64,
    pub zero_rate: f64,
    /// Standard error of the mean hop error.
    pub std_error: f64,
    pub ci95: (f64, f64),
    pub histogram: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub trials: usize,
    pub estimators: Vec<EstimatorSummary>,
}

impl Summary {
    pub fn get(&self, e: EstimatorKind) -> Option<&EstimatorSummary> {
        self.estimators.iter().find(|s| s.estimator == e)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .estimators
            .iter()
            .map(|s| {
                let hist: Map<String, Value> = s.histogram.iter().map(|(h, c)| (h.to_string(), json!(c))).collect();
                json!({
                    "estimator": s.estimator.as_str(),
                    "scored": s.scored,
                    "skipped": s.skipped,
                    "mean_error": s.mean_error,
                    "mean_k": s.mean_k,
                    "zero_rate": s.zero_rate,
                    "std_error": s.std_error,
                    "ci95": [s.ci95.0, s.ci95.1],
                    "histogram": hist,
                })
            })
            .collect();
        json!({ "trials": self.trials, "estimators": rows })
    }

    /// `estimator,hops,count` buckets for external plotting.
    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("estimator,hops,count\n");
        for e in &self.estimators {
            for (h, c) in &e.histogram {
                let _ = writeln!(s, "{},{h},{c}", e.estimator);
            }
        }
        s
    }
}

const Z95: f64 = 1.959_963_984_540_054;

/// Per-estimator aggregates. Sums are exact integers, so the result does not
/// depend on record order.
pub fn summarize(records: &[TrialRecord], estimators: &[EstimatorKind]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::param("no trial records"));
    }
    let mut out = Vec::new();
    for &e in estimators {
        let mut s = EstimatorSummary {
            estimator: e,
            scored: 0,
            skipped: 0,
            error_sum: 0,
            k_sum: 0,
            zero_count: 0,
            mean_error: f64::NAN,
            mean_k: f64::NAN,
            zero_rate: f64::NAN,
            std_error: f64::NAN,
            ci95: (f64::NAN, f64::NAN),
            histogram: BTreeMap::new(),
        };
        let mut sq_sum: u128 = 0;
        for o in records.iter().filter_map(|r| r.get(e)) {
            match (&o.outcome, o.k()) {
                (Outcome::Scored { error, .. }, Some(k)) => {
                    s.scored += 1;
                    s.error_sum += *error as u64;
                    sq_sum += (*error as u128).pow(2);
                    s.k_sum += k as u64;
                    s.zero_count += u64::from(*error == 0);
                    *s.histogram.entry(*error).or_default() += 1;
                }
                _ => s.skipped += 1,
            }
        }
        if s.scored > 0 {
            let m = s.scored as f64;
            s.mean_error = s.error_sum as f64 / m;
            s.mean_k = s.k_sum as f64 / m;
            s.zero_rate = s.zero_count as f64 / m;
            let var = if s.scored > 1 {
                // exact numerator: m*Σx² - (Σx)²
                let num = s.scored as u128 * sq_sum - (s.error_sum as u128).pow(2);
                num as f64 / (m * (m - 1.0))
            } else {
                0.0
            };
            s.std_error = (var / m).sqrt();
            s.ci95 = (s.mean_error - Z95 * s.std_error, s.mean_error + Z95 * s.std_error);
        }
        out.push(s);
    }
    Ok(Summary { trials: records.len(), estimators: out })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedTest {
    pub pairs: usize,
    /// Mean of `error(a) - error(b)`.
    pub mean_diff: f64,
    pub z: f64,
    /// One-sided p-value for `mean error(a) < mean error(b)`.
    pub p_value: f64,
}

/// Normal-approximation paired test over trials where both estimators scored.
pub fn paired_test(records: &[TrialRecord], a: EstimatorKind, b: EstimatorKind) -> Result<PairedTest> {
    let diffs: Vec<f64> = records
        .iter()
        .filter_map(|r| Some(r.get(a)?.error()? as f64 - r.get(b)?.error()? as f64))
        .collect();
    if diffs.len() < 2 {
        return Err(Error::param(format!("paired test needs 2 or more paired trials, got {}", diffs.len())));
    }
    let m = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / m;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt();
    let (z, p) = if se == 0.0 {
        let z = if mean < 0.0 { f64::NEG_INFINITY } else if mean > 0.0 { f64::INFINITY } else { 0.0 };
        (z, if mean < 0.0 { 0.0 } else if mean > 0.0 { 1.0 } else { 0.5 })
    } else {
        let z = mean / se;
        (z, Normal::standard().cdf(z))
    };
    Ok(PairedTest { pairs: diffs.len(), mean_diff: mean, z, p_value: p })
}

#[derive(Debug, Clone)]
pub struct ReplayReport {
    pub true_source: String,
    /// Vertices dropped because they are not connected to the true source.
    pub dropped: usize,
    pub results: Vec<(EstimatorOutcome, Option<EstimatorResult>)>,
    /// The graph the estimators ran on (the source's component).
    pub graph: Graph,
}

impl ReplayReport {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .results
            .iter()
            .map(|(o, r)| {
                let mut v = match r {
                    Some(r) => r.to_json(&self.graph),
                    None => json!({ "estimator": o.estimator.as_str() }),
                };
                let obj = v.as_object_mut().unwrap();
                match &o.outcome {
                    Outcome::Scored { error, .. } => {
                        obj.insert("error".into(), json!(error));
                    }
                    Outcome::Skipped(why) => {
                        obj.insert("skipped".into(), json!(why));
                    }
                }
                v
            })
            .collect();
        json!({ "true_source": self.true_source, "dropped": self.dropped, "results": rows })
    }
}

/// Runs estimators on an observed infection graph with a known source,
/// restricted to the source's connected component.
pub fn replay(
    g_n: &Graph,
    true_source: &str,
    estimators: &[EstimatorKind],
    irregular: &IrregularRule,
    tie_mode: TieMode,
) -> Result<ReplayReport> {
    let src = g_n
        .find_label(true_source)
        .ok_or_else(|| Error::param(format!("true source {true_source:?} is not in the graph")))?;
    let comp = g_n.components().into_iter().find(|c| c.contains(&src)).unwrap();
    let dropped = g_n.order() - comp.len();
    let sub = g_n.induced_subgraph(&comp)?;
    let local_src = comp.iter().position(|&v| v == src).unwrap();
    let irr = irregular.select(None, &sub, &comp)?;
    let results = run_estimators(&sub, local_src, estimators, &irr, tie_mode, false);
    Ok(ReplayReport { true_source: true_source.to_string(), dropped, results, graph: sub })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(e: EstimatorKind, error: usize, k: usize) -> EstimatorOutcome {
        EstimatorOutcome {
            estimator: e,
            outcome: Outcome::Scored { candidates: (0..k).map(|i| i.to_string()).collect(), error },
            micros: None,
        }
    }

    fn rec(trial: usize, outs: Vec<EstimatorOutcome>) -> TrialRecord {
        TrialRecord { trial, seed: trial as u64, source: "0".into(), infected: 1, outcomes: outs }
    }

    #[test]
    fn summary_basics() {
        let e = EstimatorKind::Sct;
        let zeros: Vec<_> = (0..4).map(|t| rec(t, vec![outcome(e, 0, 1)])).collect();
        let s = summarize(&zeros, &[e]).unwrap();
        assert_eq!(s.get(e).unwrap().mean_error, 0.0);
        assert_eq!(s.get(e).unwrap().zero_rate, 1.0);
        let two = vec![rec(0, vec![outcome(e, 0, 1)]), rec(1, vec![outcome(e, 2, 3)])];
        let s = summarize(&two, &[e]).unwrap();
        let es = s.get(e).unwrap();
        assert_eq!(es.mean_error, 1.0);
        assert_eq!(es.mean_k, 2.0);
        assert_eq!(es.histogram, BTreeMap::from([(0, 1), (2, 1)]));
        assert!(summarize(&[], &[e]).is_err());
    }

    #[test]
    fn skipped_rows_do_not_count() {
        let e = EstimatorKind::Kappa;
        let recs = vec![
            rec(0, vec![outcome(e, 1, 1)]),
            rec(1, vec![EstimatorOutcome { estimator: e, outcome: Outcome::Skipped("cyclic".into()), micros: None }]),
        ];
        let s = summarize(&recs, &[e]).unwrap();
        assert_eq!((s.get(e).unwrap().scored, s.get(e).unwrap().skipped), (1, 1));
        assert!(records_csv(&recs).ends_with("1,1,0,algo1,,,\n"));
    }

    #[test]
    fn paired_direction() {
        let (a, b) = (EstimatorKind::Sct, EstimatorKind::BfsRumor);
        let recs: Vec<_> = (0..50).map(|t| rec(t, vec![outcome(a, t % 2, 1), outcome(b, 2 + t % 3, 1)])).collect();
        let p = paired_test(&recs, a, b).unwrap();
        assert!(p.mean_diff < 0.0 && p.p_value < 1e-6);
        let q = paired_test(&recs, b, a).unwrap();
        assert!(q.p_value > 0.99);
    }

    #[test]
    fn config_round_trip() {
        let text = "generator = grid:10x10\nn = 20 # infected\ntrials = 3\nestimators = sct,bfs-rc\nseed = 7\nties = spill\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.n_infected, 20);
        assert_eq!(cfg.tie_mode, TieMode::Spill);
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
        assert!(ExperimentConfig::parse("generator = grid:3x3\nn = 2\nbogus = 1\n").is_err());
        assert!(ExperimentConfig::parse("generator = grid:3x3\nn = 2\ntrials = 0\n").is_err());
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let s: Vec<_> = (0..1000).map(|t| derive_seed(42, t)).collect();
        let mut d = s.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), s.len());
        assert_eq!(derive_seed(42, 3), s[3]);
        assert_ne!(derive_seed(43, 3), s[3]);
    }

    #[test]
    fn small_experiment_is_deterministic() {
        let mut cfg = ExperimentConfig::new("grid:12x12".parse().unwrap(), 25, 8, vec![EstimatorKind::Sct, EstimatorKind::BfsRumor], 5);
        let a = run_experiment(&cfg).unwrap();
        cfg.threads = Some(1);
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(records_csv(&a.records), records_csv(&b.records));
        assert_eq!(a.records.len(), 8);
        assert!(a.records.iter().all(|r| r.infected == 25));
    }

    #[test]
    fn kappa_sizes_baselines() {
        let est = vec![EstimatorKind::BfsRumor, EstimatorKind::Kappa, EstimatorKind::Jordan];
        let cfg = ExperimentConfig::new("rbt:dmax=4:n=300".parse().unwrap(), 30, 20, est.clone(), 11);
        let run = run_experiment(&cfg).unwrap();
        for r in &run.records {
            let k = r.get(EstimatorKind::Kappa).unwrap().k().unwrap();
            assert_eq!(r.get(EstimatorKind::BfsRumor).unwrap().k(), Some(k));
            assert_eq!(r.get(EstimatorKind::Jordan).unwrap().k(), Some(k));
            assert_eq!(r.outcomes.iter().map(|o| o.estimator).collect::<Vec<_>>(), est);
        }
    }

    #[test]
    fn replay_uses_source_component() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let rep = replay(&g, "4", &[EstimatorKind::Sct], &IrregularRule::SubgraphLeaves, TieMode::Truncate).unwrap();
        assert_eq!(rep.dropped, 3);
        assert_eq!(rep.results[0].0.error(), Some(0));
        assert!(replay(&g, "9", &[EstimatorKind::Sct], &IrregularRule::SubgraphLeaves, TieMode::Truncate).is_err());
    }
}
