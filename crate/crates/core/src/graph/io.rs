//! Edge-list text format: one `<label> <label>` pair per line, `#` starts a
//! comment, and an optional leading `%n <count>` header pre-declares vertices
//! `0 .. count-1` so isolated vertices survive a round trip.

use super::Graph;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

pub fn read_edge_list(reader: impl BufRead) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |l: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(l) {
            return i;
        }
        labels.push(l.to_string());
        index.insert(l.to_string(), labels.len() - 1);
        labels.len() - 1
    };
    for (no, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: no + 1, msg };
        if let Some(rest) = body.strip_prefix("%n") {
            if !edges.is_empty() || !labels.is_empty() {
                return Err(parse_err("%n header must precede all edges".into()));
            }
            let count: usize = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad vertex count {:?}", rest.trim())))?;
            for i in 0..count {
                intern(&i.to_string(), &mut labels);
            }
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_err(format!("expected two labels, found {}", tokens.len())));
        }
        if tokens[0] == tokens[1] {
            return Err(parse_err(format!("self-loop at {}", tokens[0])));
        }
        let u = intern(tokens[0], &mut labels);
        let v = intern(tokens[1], &mut labels);
        edges.push((u, v));
    }
    // labels 0..n-1 keep their own ids so index-labelled files round-trip
    let n = labels.len();
    let numeric: Option<Vec<usize>> = labels
        .iter()
        .map(|l| l.parse::<usize>().ok().filter(|&i| i < n && *l == i.to_string()))
        .collect();
    if let Some(ids) = numeric {
        let edges: Vec<_> = edges.iter().map(|&(u, v)| (ids[u], ids[v])).collect();
        return Graph::from_edges(n, &edges);
    }
    Graph::from_edges(n, &edges)?.with_labels(labels)
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<Graph> {
    let f = std::fs::File::open(path)?;
    read_edge_list(std::io::BufReader::new(f))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    read_edge_list(text.as_bytes())
}

fn has_index_labels(g: &Graph) -> bool {
    match g.labels() {
        None => true,
        Some(l) => l.iter().enumerate().all(|(i, s)| *s == i.to_string()),
    }
}

/// Canonical form: edges with `u < v` in lexicographic order of internal
/// ids, preceded by a `%n` header only when index-labelled vertices would
/// otherwise be lost (isolated vertices).
pub fn write_edge_list(g: &Graph, mut w: impl Write) -> Result<()> {
    if has_index_labels(g) && (0..g.order()).any(|v| g.degree(v) == 0) {
        writeln!(w, "%n {}", g.order())?;
    }
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("labels are UTF-8")
}
