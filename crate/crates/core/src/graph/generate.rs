//! Seeded synthetic graph generators and their spec-string grammar.
//!
//! Spec strings look like `grid:100x100`, `circulant:6000:s=3`,
//! `circulant:12:jumps=1,5`, `rbt:dmax=5:n=1000`, `regtree:d=3:depth=4`,
//! `regular:n=5000:d=3`, `ba:n=5000:m=3`, `path:10`, `cycle:10`, `star:4`.

use super::{Graph, Vertex};
use crate::error::{Error, Result};
use num_integer::Integer;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Jumps {
    Explicit(Vec<usize>),
    /// Draw this many distinct jumps from `[1, N/2)` until they generate `Z_N`.
    Random(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    RegularTree { d: usize, depth: usize },
    RandomBranchingTree { dmax: usize, n: usize },
    Grid { w: usize, h: usize },
    Circulant { n: usize, jumps: Jumps },
    RandomRegular { n: usize, d: usize },
    PreferentialAttachment { n: usize, m: usize },
    Path(usize),
    Cycle(usize),
    Star(usize),
}

impl GeneratorSpec {
    /// Whether `generate` consumes randomness for this kind.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            GeneratorSpec::RandomBranchingTree { .. }
                | GeneratorSpec::RandomRegular { .. }
                | GeneratorSpec::PreferentialAttachment { .. }
                | GeneratorSpec::Circulant { jumps: Jumps::Random(_), .. }
        )
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::param(format!("bad {what} {s:?} in generator spec")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
        let mut positional = Vec::new();
        let mut named = BTreeMap::new();
        for p in parts {
            match p.split_once('=') {
                Some((k, v)) => {
                    named.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
                }
                None => positional.push(p.trim().to_string()),
            }
        }
        let get = |key: &str, pos: usize| -> Result<usize> {
            match named.get(key).or(positional.get(pos)) {
                Some(v) => parse_usize(v, key),
                None => Err(Error::param(format!("generator {kind:?} needs {key}"))),
            }
        };
        let spec = match kind.as_str() {
            "grid" => {
                let dims = named
                    .get("size")
                    .or(positional.first())
                    .ok_or_else(|| Error::param("grid needs WxH"))?;
                let (w, h) = dims
                    .split_once(['x', 'X'])
                    .ok_or_else(|| Error::param(format!("bad grid size {dims:?}")))?;
                GeneratorSpec::Grid { w: parse_usize(w, "width")?, h: parse_usize(h, "height")? }
            }
            "circulant" => {
                let n = get("n", 0)?;
                let jumps = if let Some(list) = named.get("jumps") {
                    let v = list
                        .split(',')
                        .map(|x| parse_usize(x, "jump"))
                        .collect::<Result<Vec<_>>>()?;
                    Jumps::Explicit(v)
                } else {
                    Jumps::Random(get("s", 1)?)
                };
                GeneratorSpec::Circulant { n, jumps }
            }
            "rbt" => GeneratorSpec::RandomBranchingTree { dmax: get("dmax", 0)?, n: get("n", 1)? },
            "regtree" => GeneratorSpec::RegularTree { d: get("d", 0)?, depth: get("depth", 1)? },
            "regular" => GeneratorSpec::RandomRegular { n: get("n", 0)?, d: get("d", 1)? },
            "ba" => GeneratorSpec::PreferentialAttachment { n: get("n", 0)?, m: get("m", 1)? },
            "path" => GeneratorSpec::Path(get("n", 0)?),
            "cycle" => GeneratorSpec::Cycle(get("n", 0)?),
            "star" => GeneratorSpec::Star(get("k", 0)?),
            _ => return Err(Error::param(format!("unknown generator kind {kind:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::RegularTree { d, depth } => write!(f, "regtree:d={d}:depth={depth}"),
            GeneratorSpec::RandomBranchingTree { dmax, n } => write!(f, "rbt:dmax={dmax}:n={n}"),
            GeneratorSpec::Grid { w, h } => write!(f, "grid:{w}x{h}"),
            GeneratorSpec::Circulant { n, jumps: Jumps::Random(s) } => write!(f, "circulant:{n}:s={s}"),
            GeneratorSpec::Circulant { n, jumps: Jumps::Explicit(j) } => {
                let j: Vec<String> = j.iter().map(|x| x.to_string()).collect();
                write!(f, "circulant:{n}:jumps={}", j.join(","))
            }
            GeneratorSpec::RandomRegular { n, d } => write!(f, "regular:n={n}:d={d}"),
            GeneratorSpec::PreferentialAttachment { n, m } => write!(f, "ba:n={n}:m={m}"),
            GeneratorSpec::Path(n) => write!(f, "path:{n}"),
            GeneratorSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorSpec::Star(k) => write!(f, "star:{k}"),
        }
    }
}

/// Build the graph described by `spec`. Deterministic for a fixed seed.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *spec {
        GeneratorSpec::RegularTree { d, depth } => regular_tree(d, depth),
        GeneratorSpec::RandomBranchingTree { dmax, n } => random_branching_tree(dmax, n, &mut rng),
        GeneratorSpec::Grid { w, h } => grid(w, h),
        GeneratorSpec::Circulant { n, ref jumps } => {
            let s = match jumps {
                Jumps::Explicit(s) => s.clone(),
                Jumps::Random(k) => random_generating_jumps(n, *k, &mut rng)?,
            };
            circulant(n, &s)
        }
        GeneratorSpec::RandomRegular { n, d } => random_regular(n, d, &mut rng),
        GeneratorSpec::PreferentialAttachment { n, m } => preferential_attachment(n, m, &mut rng),
        GeneratorSpec::Path(n) => {
            let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Graph::from_edges(n, &e)
        }
        GeneratorSpec::Cycle(n) => {
            if n < 3 {
                return Err(Error::Infeasible(format!("cycle needs at least 3 vertices, got {n}")));
            }
            let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &e)
        }
        GeneratorSpec::Star(k) => {
            let e: Vec<_> = (1..=k).map(|i| (0, i)).collect();
            Graph::from_edges(k + 1, &e)
        }
    }
}

/// Root has `d` children, every other internal vertex `d - 1`, down to `depth`.
pub fn regular_tree(d: usize, depth: usize) -> Result<Graph> {
    if d < 2 {
        return Err(Error::Infeasible(format!("regular tree needs d >= 2, got {d}")));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for level in 0..depth {
        let mut next = Vec::new();
        for &u in &frontier {
            let kids = if level == 0 { d } else { d - 1 };
            for _ in 0..kids {
                edges.push((u, next_id));
                next.push(next_id);
                next_id += 1;
                if next_id > 50_000_000 {
                    return Err(Error::Infeasible("regular tree too large".into()));
                }
            }
        }
        frontier = next;
    }
    Graph::from_edges(next_id, &edges)
}

/// Breadth-first branching: each vertex gets a uniform number of children in
/// `[1, dmax - 1]` until `n` vertices exist.
pub fn random_branching_tree(dmax: usize, n: usize, rng: &mut impl Rng) -> Result<Graph> {
    if dmax < 2 || n == 0 {
        return Err(Error::Infeasible(format!("rbt needs dmax >= 2 and n >= 1 (dmax={dmax}, n={n})")));
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut count = 1;
    let mut u = 0;
    while count < n {
        let kids = rng.random_range(1..dmax);
        for _ in 0..kids {
            if count == n {
                break;
            }
            edges.push((u, count));
            count += 1;
        }
        u += 1;
    }
    Graph::from_edges(n, &edges)
}

/// `w x h` grid; vertex `(x, y)` has id `y * w + x`.
pub fn grid(w: usize, h: usize) -> Result<Graph> {
    if w == 0 || h == 0 {
        return Err(Error::Infeasible(format!("grid {w}x{h} is empty")));
    }
    let mut edges = Vec::with_capacity(2 * w * h);
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                edges.push((v, v + 1));
            }
            if y + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    Graph::from_edges(w * h, &edges)
}

/// Circulant graph on `Z_n` with jump set `s`; every jump must lie in `[1, n/2)`
/// and together with `n` have gcd 1 so the graph is connected.
pub fn circulant(n: usize, s: &[usize]) -> Result<Graph> {
    if s.is_empty() {
        return Err(Error::Infeasible("circulant needs at least one jump".into()));
    }
    let mut seen = HashSet::new();
    for &j in s {
        if j == 0 || 2 * j >= n {
            return Err(Error::Infeasible(format!("jump {j} outside [1, {n}/2)")));
        }
        if !seen.insert(j) {
            return Err(Error::Infeasible(format!("jump {j} repeated")));
        }
    }
    if s.iter().fold(n, |g, &j| g.gcd(&j)) != 1 {
        return Err(Error::Infeasible(format!("jumps {s:?} do not generate Z_{n}")));
    }
    let mut edges = Vec::with_capacity(n * s.len());
    for i in 0..n {
        for &j in s {
            edges.push((i, (i + j) % n));
        }
    }
    Graph::from_edges(n, &edges)
}

fn random_generating_jumps(n: usize, k: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let pool = n.saturating_sub(1) / 2; // values 1 ..= pool satisfy 2j < n
    if k == 0 || k > pool {
        return Err(Error::Infeasible(format!("cannot pick {k} jumps from [1, {n}/2)")));
    }
    for _ in 0..10_000 {
        let mut s: Vec<usize> = sample(rng, pool, k).into_iter().map(|x| x + 1).collect();
        s.sort_unstable();
        if s.iter().fold(n, |g, &j| g.gcd(&j)) == 1 {
            return Ok(s);
        }
    }
    Err(Error::Infeasible(format!("no generating jump set of size {k} found for N={n}")))
}

/// Random simple `d`-regular graph by stub matching with local retries and
/// full restarts when stuck.
pub fn random_regular(n: usize, d: usize, rng: &mut impl Rng) -> Result<Graph> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(Error::Infeasible(format!("no {d}-regular graph on {n} vertices")));
    }
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    'restart: for _ in 0..1000 {
        let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut adj: Vec<HashSet<Vertex>> = vec![HashSet::new(); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..100 {
                let i = rng.random_range(0..stubs.len());
                let j = rng.random_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i != j && u != v && !adj[u].contains(&v) {
                    adj[u].insert(v);
                    adj[v].insert(u);
                    edges.push((u, v));
                    let (hi, lo) = (i.max(j), i.min(j));
                    stubs.swap_remove(hi);
                    stubs.swap_remove(lo);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'restart;
            }
        }
        return Graph::from_edges(n, &edges);
    }
    Err(Error::Infeasible(format!("random {d}-regular graph on {n} vertices: too many restarts")))
}

/// Preferential attachment starting from a star on `m + 1` vertices; each new
/// vertex joins `m` distinct targets drawn proportionally to degree.
pub fn preferential_attachment(n: usize, m: usize, rng: &mut impl Rng) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::Infeasible(format!("preferential attachment needs 1 <= m < n (n={n}, m={m})")));
    }
    let mut edges: Vec<(Vertex, Vertex)> = (1..=m).map(|i| (0, i)).collect();
    let mut repeated: Vec<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    for v in (m + 1)..n {
        let mut targets = Vec::with_capacity(m);
        while targets.len() < m {
            let t = repeated[rng.random_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((v, t));
            repeated.push(v);
            repeated.push(t);
        }
    }
    Graph::from_edges(n, &edges)
}
