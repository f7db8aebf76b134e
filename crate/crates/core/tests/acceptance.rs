//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p episource-core --test acceptance -- --nocapture` (or plain
//! `cargo test`; output is printed either way). Exits non-zero if any fails.

mod common;

use common::{permute_hosted, random_unicyclic, tree_path};
use episource_core::bench::{
    paired_test, records_csv, replay, run_experiment, ExperimentConfig, IrregularRule, Outcome,
};
use episource_core::centrality::{epidemic_centrality_unicyclic, rumor_counts, unicyclic_order_counts};
use episource_core::combinatorics::ratio;
use episource_core::estimators::{EstimatorKind, TieMode};
use episource_core::graph::generate::Jumps;
use episource_core::graph::io::read_edge_list_file;
use episource_core::graph::{GeneratorSpec, Graph, UnicyclicLayout, Vertex};
use episource_core::likelihood::positions::marked_position_counts;
use episource_core::likelihood::{
    broom_instance, broom_likelihood, cyclic_position_probability, line_instance, line_likelihood,
    unicyclic_likelihood, HostedSubgraph, LikelihoodProfile, Oracle,
};
use episource_core::spread::{order_probability, NodeRates};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

struct Report {
    failed: usize,
}

impl Report {
    fn run(&mut self, id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let (ok, detail) = match res {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {budget:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            self.failed += 1;
        }
        println!("[{}] {id:>2} {name} ({:.2?}): {detail}", if ok { "PASS" } else { "FAIL" }, took);
    }
}

fn fixture_graph(name: &str) -> Graph {
    read_edge_list_file(common::fixture(name)).expect("fixture")
}

fn irregular_of(hs: &HostedSubgraph, d: usize) -> Vec<Vertex> {
    (0..hs.order()).filter(|&v| hs.host_degree(v) != d).collect()
}

fn compare(closed: &LikelihoodProfile, oracle: &LikelihoodProfile, n: usize) -> bool {
    (0..n).all(|v| closed.likelihood(v) == oracle.likelihood(v))
}

fn six_vertex_table() -> Check {
    let g = fixture_graph("six_vertex_tree.edges");
    let v = |l: &str| g.find_label(l).unwrap();
    let mut deg = vec![3; g.order()];
    deg[v("v5")] = 2;
    let hs = HostedSubgraph::with_degrees(g.clone(), deg).map_err(|e| e.to_string())?;
    let p = Oracle::new(&hs).profile().map_err(|e| e.to_string())?;
    let printed = [("v1", 0.0149), ("v5", 0.0138), ("v2", 0.0114), ("v3", 0.002), ("v4", 0.002), ("v6", 0.0018)];
    let mut bad = Vec::new();
    let mut got = Vec::new();
    for (l, want) in printed {
        let x = p.approx(v(l)).unwrap();
        got.push(format!("{l}={x:.4}"));
        // printed to 4 decimals (or fewer when trailing digits vanish)
        let digits = if want == 0.002 { 3 } else { 4 };
        let scale = 10f64.powi(digits);
        if ((x * scale).round() / scale - want).abs() > 5e-5 {
            bad.push(format!("{l}: {x:.6} vs {want}"));
        }
    }
    let row = marked_position_counts(&g, v("v1"), v("v5")).map_err(|e| e.to_string())?;
    let row: Vec<u64> = row[1..].iter().map(|x| u64::try_from(x).unwrap()).collect();
    let want_row = [0u64, 8, 6, 6, 0];
    if row[..want_row.len()] != want_row || row[want_row.len()..].iter().any(|&x| x != 0) {
        bad.push(format!("m row from v1 marking v5 is {row:?}, printed (0,8,6,6,0)"));
    }
    if bad.is_empty() {
        Ok(got.join(" "))
    } else {
        Err(format!("computed {}; mismatches: {}", got.join(" "), bad.join("; ")))
    }
}

fn triangle_orders() -> Check {
    let mut bad = Vec::new();
    for (k, want) in [(4, ratio(2, 1200)), (5, ratio(2, 1800)), (6, ratio(2, 2520))] {
        let got = cyclic_position_probability(3, 6, k).map_err(|e| e.to_string())?;
        if got != want {
            bad.push(format!("closed form, last cycle vertex at {k}: {got} vs {want}"));
        }
    }
    let g = fixture_graph("triangle_with_tails.edges");
    let host = HostedSubgraph::with_uniform_degree(g.clone(), 3).map_err(|e| e.to_string())?.padded_host();
    let orders = [
        ("v4 v1 v3 v2 v5 v7", ratio(2, 1200)),
        ("v4 v1 v2 v5 v3 v7", ratio(2, 1800)),
        ("v4 v1 v2 v5 v7 v3", ratio(2, 2520)),
    ];
    for (text, want) in orders {
        let order: Vec<Vertex> = text.split(' ').map(|l| g.find_label(l).unwrap()).collect();
        let got = order_probability(&host, &order, &NodeRates::unit()).map_err(|e| e.to_string())?;
        if got != want {
            bad.push(format!("order {text}: {got} vs {want}"));
        }
    }
    if bad.is_empty() {
        Ok("2/1200, 2/1800, 2/2520 from the closed form and from explicit orders".into())
    } else {
        Err(bad.join("; "))
    }
}

fn line_transition() -> Check {
    let mut wins = Vec::new();
    for n in 2..=10 {
        let hs = line_instance(4, n).map_err(|e| e.to_string())?;
        let end = irregular_of(&hs, 4)[0];
        let p = line_likelihood(4, n).map_err(|e| e.to_string())?;
        wins.push((n, p.argmax() == vec![end]));
    }
    let first_loss = wins.iter().find(|w| !w.1).map(|w| w.0);
    let detail = format!(
        "irregular end is the unique argmax for n in {:?}",
        wins.iter().filter(|w| w.1).map(|w| w.0).collect::<Vec<_>>()
    );
    if wins.iter().all(|&(n, w)| w == (n <= 9)) {
        Ok(detail)
    } else {
        Err(format!("{detail}; first n where it is not: {first_loss:?}, expected 10"))
    }
}

#[derive(Default)]
struct Equivalence {
    line: usize,
    broom: usize,
    unicyclic: usize,
    mismatches: Vec<String>,
    locator_checks: usize,
    locator_violations: Vec<String>,
}

fn oracle_profile(hs: &HostedSubgraph) -> LikelihoodProfile {
    Oracle::new(hs).profile().expect("enumerable")
}

/// Vertices on some path from an epidemic center to `target`.
fn center_paths(t: &Graph, target: Vertex) -> BTreeSet<Vertex> {
    let m = rumor_counts(t).unwrap();
    let best = m.iter().max().unwrap();
    (0..t.order()).filter(|&c| &m[c] == best).flat_map(|c| tree_path(t, c, target)).collect()
}

fn check_tree_locator(eq: &mut Equivalence, what: &str, hs: &HostedSubgraph, oracle: &LikelihoodProfile, ir: Vertex) {
    let allowed = center_paths(hs.graph(), ir);
    eq.locator_checks += 1;
    for a in oracle.argmax() {
        if !allowed.contains(&a) {
            eq.locator_violations.push(format!("{what}: argmax {a} off {allowed:?}"));
        }
    }
}

fn equivalence(rng: &mut ChaCha8Rng) -> Equivalence {
    let mut eq = Equivalence::default();
    while eq.line < 200 {
        let d = rng.random_range(3..=5);
        let n = rng.random_range(2..=8);
        let mut perm: Vec<Vertex> = (0..n).collect();
        perm.shuffle(rng);
        let closed = line_likelihood(d, n).unwrap();
        let hs = permute_hosted(&line_instance(d, n).unwrap(), &perm);
        let oracle = oracle_profile(&hs);
        if (0..n).any(|v| closed.likelihood(v) != oracle.likelihood(perm[v])) {
            eq.mismatches.push(format!("line d={d} n={n}"));
        }
        check_tree_locator(&mut eq, &format!("line d={d} n={n}"), &hs, &oracle, irregular_of(&hs, d)[0]);
        eq.line += 1;
    }
    while eq.broom < 200 {
        let d = rng.random_range(3..=5);
        let t = rng.random_range(1..=3);
        let k = rng.random_range(1..d);
        if 2 * t + k > 8 {
            continue;
        }
        let base = broom_instance(d, t, k).unwrap();
        let n = base.order();
        let mut perm: Vec<Vertex> = (0..n).collect();
        perm.shuffle(rng);
        let closed = broom_likelihood(d, t, k).unwrap();
        let hs = permute_hosted(&base, &perm);
        let oracle = oracle_profile(&hs);
        if (0..n).any(|v| closed.likelihood(v) != oracle.likelihood(perm[v])) {
            eq.mismatches.push(format!("broom d={d} t={t} k={k}"));
        }
        // the locator property is about a single irregular vertex
        if let [ir] = irregular_of(&hs, d)[..] {
            check_tree_locator(&mut eq, &format!("broom d={d} t={t} k={k}"), &hs, &oracle, ir);
        }
        eq.broom += 1;
    }
    while eq.unicyclic < 200 {
        let d = rng.random_range(3..=5);
        let n = rng.random_range(3..=8);
        let Some(g) = random_unicyclic(n, d, rng) else { continue };
        let hs = HostedSubgraph::with_uniform_degree(g.clone(), d).unwrap();
        let closed = unicyclic_likelihood(&hs).unwrap();
        let oracle = oracle_profile(&hs);
        if !compare(&closed, &oracle, n) {
            eq.mismatches.push(format!("unicyclic d={d} edges={:?}", g.edges().collect::<Vec<_>>()));
        }
        let layout = UnicyclicLayout::new(&g).unwrap();
        let centers = epidemic_centrality_unicyclic(&g).unwrap().argbest;
        let allowed: BTreeSet<Vertex> = layout
            .cycle
            .iter()
            .copied()
            .chain(centers.iter().flat_map(|&c| layout.path_to_cycle(c)))
            .collect();
        eq.locator_checks += 1;
        for a in oracle.argmax() {
            if !allowed.contains(&a) {
                eq.locator_violations.push(format!("unicyclic {:?}: argmax {a}", g.edges().collect::<Vec<_>>()));
            }
        }
        eq.unicyclic += 1;
    }
    eq
}

/// Triangle with random trees hanging off it, ids shuffled.
fn random_triangle_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = vec![(0, 1), (1, 2), (2, 0)];
    for v in 3..n {
        edges.push((rng.random_range(0..v), v));
    }
    common::relabel(n, &edges, rng)
}

fn triangle_ratios(rng: &mut ChaCha8Rng) -> Check {
    for i in 0..100 {
        let n = rng.random_range(3..=40);
        let g = random_triangle_graph(n, rng);
        let layout = UnicyclicLayout::new(&g).map_err(|e| e.to_string())?;
        let m = unicyclic_order_counts(&g).map_err(|e| e.to_string())?;
        let t = layout.hanging_sizes();
        let c = &layout.cycle;
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            if &m[c[a]] * BigUint::from(t[b]) != &m[c[b]] * BigUint::from(t[a]) {
                return Err(format!("graph {i} (n={n}): M ratio differs from t ratio {t:?}"));
            }
        }
    }
    Ok("100 graphs, M(v1):M(v2):M(v3) = t1:t2:t3 in every one".into())
}

fn partial_sum_dominance(rng: &mut ChaCha8Rng) -> Check {
    let mut pairs = 0usize;
    let mut violations = Vec::new();
    for _ in 0..500 {
        let n = rng.random_range(3..=10);
        let t = common::prufer_tree(n, rng);
        let ir = rng.random_range(0..n);
        let m = rumor_counts(&t).unwrap();
        let dist: Vec<usize> = (0..n).map(|v| tree_path(&t, v, ir).len() - 1).collect();
        let rows: Vec<Vec<BigUint>> = (0..n).map(|v| marked_position_counts(&t, v, ir).unwrap()).collect();
        for a in 0..n {
            for b in 0..n {
                if a == b || a == ir || b == ir {
                    continue;
                }
                let cond1 = m[a] >= m[b] && dist[a] < dist[b];
                let cond2 = m[a] > m[b] && dist[a] <= dist[b];
                if !(cond1 || cond2) {
                    continue;
                }
                pairs += 1;
                let (mut sa, mut sb) = (BigUint::default(), BigUint::default());
                for k in 1..=n {
                    sa += &rows[a][k];
                    sb += &rows[b][k];
                    if sa < sb {
                        let fmt = |r: &Vec<BigUint>| r[1..].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                        violations.push(format!(
                            "n={n} edges={:?} a={a} b={b} ir={ir} k={k}: rows [{}] vs [{}]",
                            t.edges().collect::<Vec<_>>(),
                            fmt(&rows[a]),
                            fmt(&rows[b])
                        ));
                        break;
                    }
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{pairs} qualifying pairs, no violations"))
    } else {
        Err(format!("{} violations in {pairs} qualifying pairs; first: {}", violations.len(), violations[0]))
    }
}

fn bench_check(
    cfg: &ExperimentConfig,
    a: EstimatorKind,
    b: EstimatorKind,
    test: impl FnOnce(f64, f64, f64, f64, f64) -> Vec<String>,
) -> Check {
    let run = run_experiment(cfg).map_err(|e| e.to_string())?;
    let sa = run.summary.get(a).unwrap();
    let sb = run.summary.get(b).unwrap();
    let p = paired_test(&run.records, a, b).map_err(|e| e.to_string())?;
    let detail = format!(
        "{} trials: {} mean {:.3} (zero rate {:.3}), {} mean {:.3} (zero rate {:.3}), mean |k| {:.2}, one-sided p {:.2e}",
        cfg.trials,
        a.as_str(),
        sa.mean_error,
        sa.zero_rate,
        b.as_str(),
        sb.mean_error,
        sb.zero_rate,
        sa.mean_k,
        p.p_value
    );
    let bad = test(sa.mean_error, sb.mean_error, sa.zero_rate, sb.zero_rate, p.p_value);
    if bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", bad.join("; ")))
    }
}

fn within(name: &str, x: f64, lo: f64, hi: f64, bad: &mut Vec<String>) {
    if !(lo..=hi).contains(&x) {
        bad.push(format!("{name} {x:.3} outside [{lo}, {hi}]"));
    }
}

fn grid_bench() -> Check {
    let cfg = ExperimentConfig::new(
        GeneratorSpec::Grid { w: 100, h: 100 },
        150,
        1000,
        vec![EstimatorKind::Sct, EstimatorKind::BfsRumor],
        1,
    );
    bench_check(&cfg, EstimatorKind::Sct, EstimatorKind::BfsRumor, |a, b, za, zb, p| {
        let mut bad = Vec::new();
        within("sct mean", a, 1.6, 2.2, &mut bad);
        within("bfs-rc mean", b, 3.3, 4.3, &mut bad);
        within("sct zero rate", za, 0.121 - 0.03, 0.121 + 0.03, &mut bad);
        within("bfs-rc zero rate", zb, 0.026 - 0.03, 0.026 + 0.03, &mut bad);
        if !(a < b && p < 0.01) {
            bad.push(format!("ordering not significant (p={p:.3e})"));
        }
        bad
    })
}

fn circulant_bench() -> Check {
    let cfg = ExperimentConfig::new(
        GeneratorSpec::Circulant { n: 6000, jumps: Jumps::Random(3) },
        400,
        500,
        vec![EstimatorKind::Sct, EstimatorKind::BfsRumor],
        2,
    );
    bench_check(&cfg, EstimatorKind::Sct, EstimatorKind::BfsRumor, |a, b, _, _, p| {
        let mut bad = Vec::new();
        within("sct mean", a, 1.67 - 0.4, 1.67 + 0.4, &mut bad);
        within("bfs-rc mean", b, 2.75 - 0.4, 2.75 + 0.4, &mut bad);
        if !(a < b && p < 0.01) {
            bad.push(format!("ordering not significant (p={p:.3e})"));
        }
        bad
    })
}

fn tree_bench() -> Check {
    let cfg = ExperimentConfig::new(
        GeneratorSpec::RandomBranchingTree { dmax: 5, n: 1000 },
        100,
        500,
        vec![EstimatorKind::Kappa, EstimatorKind::BfsRumor],
        3,
    );
    bench_check(&cfg, EstimatorKind::Kappa, EstimatorKind::BfsRumor, |a, b, _, _, p| {
        if a <= b && p < 0.05 {
            Vec::new()
        } else {
            vec![format!("ordering not significant (p={p:.3e})")]
        }
    })
}

fn places_replay() -> Check {
    let g = fixture_graph("four_places.edges");
    let rep = replay(&g, "WTG", &[EstimatorKind::Sct], &IrregularRule::SubgraphLeaves, TieMode::Truncate)
        .map_err(|e| e.to_string())?;
    match &rep.results[0].0.outcome {
        Outcome::Scored { candidates, error } if candidates.iter().any(|c| c == "WTG") => {
            Ok(format!("sct candidates {candidates:?}, hop error {error}"))
        }
        other => Err(format!("sct outcome {other:?}")),
    }
}

fn determinism() -> Check {
    let mut cfg = ExperimentConfig::new(
        GeneratorSpec::RandomBranchingTree { dmax: 4, n: 400 },
        60,
        80,
        EstimatorKind::ALL.to_vec(),
        12,
    );
    cfg.threads = Some(1);
    let first = records_csv(&run_experiment(&cfg).map_err(|e| e.to_string())?.records);
    cfg.threads = Some(4);
    let second = records_csv(&run_experiment(&cfg).map_err(|e| e.to_string())?.records);
    let third = records_csv(&run_experiment(&cfg).map_err(|e| e.to_string())?.records);
    if first == second && second == third {
        Ok(format!("{} CSV bytes identical across 3 runs (1 and 4 threads)", first.len()))
    } else {
        Err("CSV differs between reruns".into())
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut report = Report { failed: 0 };
    let sec = Duration::from_secs;
    report.run(1, "six-vertex likelihood table", sec(1), six_vertex_table);
    report.run(2, "triangle order probabilities", sec(1), triangle_orders);
    report.run(3, "line argmax transition at n=10 (d=4)", sec(1), line_transition);

    let start = Instant::now();
    let eq = equivalence(&mut rng);
    let eq_time = start.elapsed();
    report.run(4, "closed forms equal the oracle", sec(300).saturating_sub(eq_time), || {
        let counts = format!("{} line, {} broom, {} unicyclic instances", eq.line, eq.broom, eq.unicyclic);
        if eq.mismatches.is_empty() {
            Ok(format!("{counts} agree exactly (built in {eq_time:.2?})"))
        } else {
            Err(format!("{counts}; {} mismatches, first: {}", eq.mismatches.len(), eq.mismatches[0]))
        }
    });
    report.run(5, "argmax locators", sec(1), || {
        if eq.locator_violations.is_empty() {
            Ok(format!("{} argmax sets checked, none off the allowed paths", eq.locator_checks))
        } else {
            Err(format!("{} violations, first: {}", eq.locator_violations.len(), eq.locator_violations[0]))
        }
    });
    report.run(6, "triangle count ratios", sec(30), || triangle_ratios(&mut rng));
    report.run(7, "partial-sum dominance", sec(120), || partial_sum_dominance(&mut rng));
    report.run(8, "grid 100x100, n=150: sct vs bfs-rc", sec(600), grid_bench);
    report.run(9, "circulant 6000, n=400: sct vs bfs-rc", sec(600), circulant_bench);
    report.run(10, "branching trees, n=100: algo1 vs bfs-rc top-|k|", sec(600), tree_bench);
    report.run(11, "four-place replay", sec(1), places_replay);
    report.run(12, "bench CSV determinism", sec(120), determinism);

    if report.failed > 0 {
        println!("{} of 12 criteria failed", report.failed);
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
