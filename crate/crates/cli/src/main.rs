use clap::{Args, Parser, Subcommand, ValueEnum};
use episource_core::bench::{self, ExperimentConfig, IrregularRule};
use episource_core::estimators::{estimate_many, parse_estimators, EstimatorResult, TieMode};
use episource_core::graph::io::{edge_list_string, read_edge_list, read_edge_list_file};
use episource_core::graph::{generate, GeneratorSpec, Graph, Vertex};
use episource_core::likelihood::{HostedSubgraph, Oracle, DEFAULT_ENUMERATION_CAP};
use episource_core::spread::{InfectionSnapshot, NodeRates, Simulator};
use episource_core::{Error, ErrorClass};
use rand::Rng;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "episource", version, about = "Epidemic source detection under SI spreading")]
struct Cli {
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Ties {
    Truncate,
    Spill,
}

impl From<Ties> for TieMode {
    fn from(t: Ties) -> Self {
        match t {
            Ties::Truncate => TieMode::Truncate,
            Ties::Spill => TieMode::Spill,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic graph as an edge list.
    Generate {
        /// e.g. grid:100x100, circulant:6000:s=3, rbt:dmax=5:n=1000
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the SI process and print the infection snapshot.
    Simulate {
        #[command(flatten)]
        graph: GraphSource,
        /// Source label; drawn uniformly when absent.
        #[arg(long)]
        source: Option<String>,
        #[arg(short, long)]
        n: usize,
        /// Stop at ceil(n / cap_k) irregular vertices; 0 disables the cap.
        #[arg(long, default_value_t = 0)]
        cap_k: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run source estimators on an observed infection graph.
    Estimate {
        graph: PathBuf,
        /// Comma-separated: algo1, sct, bfs-rc, epidemic, distance, jordan, all.
        #[arg(long, default_value = "sct")]
        est: String,
        /// Candidate set size for centrality baselines (default: best tie group, or |κ| with algo1).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Ties::Truncate)]
        ties: Ties,
        /// host-leaves is unavailable here; subgraph-leaves or explicit:a,b,c.
        #[arg(long, default_value = "subgraph-leaves")]
        irregular: String,
        /// Estimate on each connected component instead of failing.
        #[arg(long)]
        per_component: bool,
    },
    /// Exact likelihood of every candidate source by enumeration.
    Oracle {
        graph: PathBuf,
        /// Infected labels; the graph file is then the underlying graph.
        #[arg(long, value_delimiter = ',')]
        infected: Option<Vec<String>>,
        /// Underlying degree of every infected vertex (default: its degree in the file).
        #[arg(long)]
        host_degree: Option<usize>,
        /// Per-vertex override, label=degree; repeatable.
        #[arg(long = "degree")]
        degrees: Vec<String>,
        /// Largest infection graph to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Monte-Carlo comparison of estimators.
    Bench(BenchArgs),
    /// Score estimators on one infection graph with a known source.
    Replay {
        /// Infection graph edge list; or the underlying graph with --snapshot.
        graph: PathBuf,
        /// True source label (taken from the snapshot when given).
        #[arg(long)]
        source: Option<String>,
        /// Snapshot JSON produced by `simulate`.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        est: String,
        #[arg(long, value_enum, default_value_t = Ties::Truncate)]
        ties: Ties,
        #[arg(long)]
        irregular: Option<String>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Edge-list file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generator spec; uses --seed for the graph too.
    #[arg(long)]
    generator: Option<String>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// key = value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    generator: Option<String>,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    est: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap_k: Option<usize>,
    /// Per-trial CSV destination (stdout with --format csv when absent).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Summary JSON destination (stdout with --format json when absent).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Record per-estimator wall time in the micros column.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    irregular: Option<String>,
    #[arg(long, value_enum)]
    ties: Option<Ties>,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            Ok(()) => run(&cli),
            Err(e) => Err(Failure::Usage(format!("thread pool: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage | ErrorClass::Io => 2,
                ErrorClass::Topology => 3,
                ErrorClass::ResourceCap => 4,
            })
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate { spec, seed, out } => cmd_generate(spec, *seed, out.as_deref()),
        Command::Simulate { graph, source, n, cap_k, seed } => {
            cmd_simulate(cli.format, graph, source.as_deref(), *n, *cap_k, *seed)
        }
        Command::Estimate { graph, est, k, ties, irregular, per_component } => {
            cmd_estimate(cli.format, graph, est, *k, (*ties).into(), irregular, *per_component)
        }
        Command::Oracle { graph, infected, host_degree, degrees, max_n } => {
            cmd_oracle(cli.format, graph, infected.as_deref(), *host_degree, degrees, *max_n)
        }
        Command::Bench(args) => cmd_bench(cli.format, cli.threads, args),
        Command::Replay { graph, source, snapshot, est, ties, irregular } => cmd_replay(
            cli.format,
            graph,
            source.as_deref(),
            snapshot.as_deref(),
            est,
            (*ties).into(),
            irregular.as_deref(),
        ),
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::rng().random();
        eprintln!("seed: {s}");
        s
    })
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    if path.as_os_str() == "-" {
        Ok(read_edge_list(std::io::stdin().lock())?)
    } else {
        Ok(read_edge_list_file(path)?)
    }
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn lookup(g: &Graph, label: &str) -> CliResult<Vertex> {
    g.find_label(label).ok_or_else(|| Failure::Usage(format!("no vertex labelled {label:?}")))
}

fn cmd_generate(spec: &str, seed: Option<u64>, out: Option<&Path>) -> CliResult<()> {
    let spec: GeneratorSpec = spec.parse()?;
    let seed = if spec.is_random() { seed_or_random(seed) } else { seed.unwrap_or(0) };
    let g = generate(&spec, seed)?;
    let text = edge_list_string(&g);
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => emit(&text)?,
    }
    Ok(())
}

fn cmd_simulate(
    format: Format,
    src: &GraphSource,
    source: Option<&str>,
    n: usize,
    cap_k: usize,
    seed: Option<u64>,
) -> CliResult<()> {
    let seed = seed_or_random(seed);
    let g = match (&src.graph, &src.generator) {
        (Some(p), _) => read_graph(p)?,
        (None, Some(spec)) => generate(&spec.parse()?, bench::derive_seed(seed, u64::MAX))?,
        (None, None) => unreachable!("clap enforces one graph source"),
    };
    let source = match source {
        Some(l) => lookup(&g, l)?,
        None => {
            use rand::SeedableRng;
            rand_chacha::ChaCha8Rng::seed_from_u64(bench::derive_seed(seed, 0)).random_range(0..g.order())
        }
    };
    let snap = Simulator::new(&g, NodeRates::unit())?.run(source, n, cap_k, seed)?;
    if snap.params.exhausted {
        eprintln!("warning: component exhausted after {} of {n} infections", snap.order.len());
    }
    if snap.params.capped {
        eprintln!("warning: irregular-vertex cap reached after {} infections", snap.order.len());
    }
    match format {
        Format::Json => emit(&snap.to_json(&g).to_string()),
        Format::Csv => {
            let mut s = String::from("position,vertex\n");
            for (i, &v) in snap.order.iter().enumerate() {
                s.push_str(&format!("{},{}\n", i + 1, g.label(v)));
            }
            emit(&s)
        }
    }
}

fn irregular_vertices(g: &Graph, rule: &str) -> CliResult<Vec<Vertex>> {
    let rule: IrregularRule = rule.parse()?;
    if let IrregularRule::Explicit(labels) = &rule {
        for l in labels {
            lookup(g, l)?;
        }
    }
    let ids: Vec<Vertex> = (0..g.order()).collect();
    Ok(rule.select(None, g, &ids)?)
}

fn result_csv(r: &EstimatorResult, g: &Graph, out: &mut String) {
    for v in 0..g.order() {
        let score = r.scores.as_ref().map(|s| s.score_text(v)).unwrap_or_default();
        let cand = r.candidates.contains(&v);
        out.push_str(&format!("{},{},{},{}\n", r.estimator, g.label(v), score, cand));
    }
}

fn cmd_estimate(
    format: Format,
    path: &Path,
    est: &str,
    k: Option<usize>,
    ties: TieMode,
    irregular: &str,
    per_component: bool,
) -> CliResult<()> {
    let g = read_graph(path)?;
    let kinds = parse_estimators(est)?;
    if g.order() == 0 {
        return Err(Failure::Usage("empty graph".into()));
    }
    let comps = g.components();
    if comps.len() > 1 && !per_component {
        eprintln!("input has {} connected components:", comps.len());
        for (i, c) in comps.iter().enumerate() {
            eprintln!("  component {i}: {} vertices, first {}", c.len(), g.label(c[0]));
        }
        eprintln!("rerun with --per-component to estimate on each");
        return Err(Error::Disconnected { components: comps.len() }.into());
    }
    if comps.len() > 1 {
        eprintln!("warning: estimating on {} components separately", comps.len());
    }
    let irregular_all = irregular_vertices(&g, irregular)?;
    let mut csv = String::from("estimator,vertex,score,is_candidate\n");
    let mut lines = Vec::new();
    for (ci, comp) in comps.iter().enumerate() {
        let sub = g.induced_subgraph(comp)?;
        let irr: Vec<Vertex> =
            comp.iter().enumerate().filter(|(_, v)| irregular_all.contains(v)).map(|(i, _)| i).collect();
        for (kind, res) in estimate_many(&kinds, &sub, &irr, k, ties) {
            match res? {
                Some(r) => {
                    if r.clamped {
                        eprintln!("warning: k exceeds {} vertices; clamped", sub.order());
                    }
                    let mut j = r.to_json(&sub);
                    if comps.len() > 1 {
                        j["component"] = json!(ci);
                    }
                    lines.push(j.to_string());
                    result_csv(&r, &sub, &mut csv);
                }
                None => {
                    eprintln!("warning: {kind} does not apply to this topology; skipped");
                    let mut j = json!({ "estimator": kind.as_str(), "skipped": "inapplicable topology" });
                    if comps.len() > 1 {
                        j["component"] = json!(ci);
                    }
                    lines.push(j.to_string());
                }
            }
        }
    }
    match format {
        Format::Json => emit(&lines.join("\n")),
        Format::Csv => emit(&csv),
    }
}

fn cmd_oracle(
    format: Format,
    path: &Path,
    infected: Option<&[String]>,
    host_degree: Option<usize>,
    degrees: &[String],
    max_n: usize,
) -> CliResult<()> {
    let g = read_graph(path)?;
    let (g_n, mut host) = match infected {
        Some(labels) => {
            let ids = labels.iter().map(|l| lookup(&g, l)).collect::<CliResult<Vec<_>>>()?;
            let g_n = g.induced_subgraph(&ids)?;
            let host: Vec<usize> = ids.iter().map(|&v| g.degree(v)).collect();
            (g_n, host)
        }
        None => {
            let host = (0..g.order()).map(|v| g.degree(v)).collect();
            (g, host)
        }
    };
    if let Some(d) = host_degree {
        host.iter_mut().for_each(|h| *h = d);
    }
    for spec in degrees {
        let (label, d) = spec
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--degree expects label=degree, got {spec:?}")))?;
        let d: usize = d.trim().parse().map_err(|_| Failure::Usage(format!("bad degree in {spec:?}")))?;
        host[lookup(&g_n, label.trim())?] = d;
    }
    let hs = HostedSubgraph::with_degrees(g_n, host)?;
    let profile = Oracle::new(&hs).cap(max_n).profile()?;
    match format {
        Format::Json => emit(&profile.to_json().to_string()),
        Format::Csv => emit(&profile.to_csv()),
    }
}

/// Replaces `key` in a key = value text.
fn set_key(text: &mut String, key: &str, value: String) {
    let kept: Vec<&str> = text.lines().filter(|l| l.split('=').next().map(str::trim) != Some(key)).collect();
    *text = kept.join("\n") + &format!("\n{key} = {value}\n");
}

fn cmd_bench(format: Format, threads: Option<usize>, a: &BenchArgs) -> CliResult<()> {
    let mut text = match &a.config {
        Some(p) => std::fs::read_to_string(p)?,
        None => String::new(),
    };
    if let Some(g) = &a.generator {
        set_key(&mut text, "generator", g.clone());
    }
    if let Some(n) = a.n {
        set_key(&mut text, "n", n.to_string());
    }
    if let Some(t) = a.trials {
        set_key(&mut text, "trials", t.to_string());
    }
    if let Some(e) = &a.est {
        set_key(&mut text, "estimators", e.clone());
    }
    if let Some(c) = a.cap_k {
        set_key(&mut text, "cap_k", c.to_string());
    }
    if let Some(r) = &a.irregular {
        set_key(&mut text, "irregular", r.clone());
    }
    if let Some(t) = a.ties {
        set_key(&mut text, "ties", if t == Ties::Spill { "spill".into() } else { "truncate".into() });
    }
    if a.timing {
        set_key(&mut text, "timing", "true".into());
    }
    let has_seed = text.lines().any(|l| l.split('=').next().map(str::trim) == Some("seed"));
    if a.seed.is_some() || !has_seed {
        set_key(&mut text, "seed", seed_or_random(a.seed).to_string());
    }
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(o) = &a.out {
        cfg.output = Some(o.clone());
    }
    if threads.is_some() {
        cfg.threads = threads;
    }
    let run = bench::run_experiment(&cfg)?;
    for s in &run.summary.estimators {
        if s.skipped > 0 {
            eprintln!("note: {} skipped on {} of {} trials", s.estimator, s.skipped, run.summary.trials);
        }
    }
    let summary = json!({ "config": cfg.to_text(), "summary": run.summary.to_json() });
    if let Some(p) = &a.summary {
        std::fs::write(p, format!("{summary:#}\n"))?;
    }
    match format {
        Format::Json if a.summary.is_none() => emit(&format!("{summary:#}")),
        Format::Csv if cfg.output.is_none() => emit(&bench::records_csv(&run.records)),
        _ => Ok(()),
    }
}

fn cmd_replay(
    format: Format,
    path: &Path,
    source: Option<&str>,
    snapshot: Option<&Path>,
    est: &str,
    ties: TieMode,
    irregular: Option<&str>,
) -> CliResult<()> {
    let g = read_graph(path)?;
    let kinds = parse_estimators(est)?;
    let (g_n, source, rule) = match snapshot {
        Some(p) => {
            let value: Value = serde_json::from_str(&std::fs::read_to_string(p)?).map_err(Error::from)?;
            let snap = InfectionSnapshot::from_json(&value, &g)?;
            let g_n = snap.subgraph(&g)?;
            let rule: IrregularRule = irregular.unwrap_or("host-leaves").parse()?;
            let ids = &snap.order;
            // resolve host-dependent rules against the underlying graph here
            let irr = rule.select(Some(&g), &g_n, ids)?;
            let labels = irr.iter().map(|&v| g_n.label(v)).collect();
            (g_n, source.map(String::from).unwrap_or_else(|| g.label(snap.source)), IrregularRule::Explicit(labels))
        }
        None => {
            let s = source.ok_or_else(|| Failure::Usage("--source is required without --snapshot".into()))?;
            (g, s.to_string(), irregular.unwrap_or("subgraph-leaves").parse()?)
        }
    };
    let report = bench::replay(&g_n, &source, &kinds, &rule, ties)?;
    if report.dropped > 0 {
        eprintln!("warning: dropped {} vertices outside the source's component", report.dropped);
    }
    match format {
        Format::Json => emit(&report.to_json().to_string()),
        Format::Csv => {
            let mut s = String::from("estimator,k,error,candidates\n");
            for (o, _) in &report.results {
                let cands = match &o.outcome {
                    bench::Outcome::Scored { candidates, .. } => candidates.join(" "),
                    bench::Outcome::Skipped(_) => String::new(),
                };
                let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
                s.push_str(&format!("{},{},{},{}\n", o.estimator, opt(o.k()), opt(o.error()), cands));
            }
            emit(&s)
        }
    }
}
