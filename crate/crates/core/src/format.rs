//! Text formats for graphs, partitions, cycles, move sequences, NCL
//! instances and walk traces, plus DOT export.
//!
//! All formats are ASCII with LF line endings. Parsers report the 1-based
//! line number of the first offending line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::ncl::{EdgeColor, MapRecord, NclEdge, NclInstance, Orientation, VertexKind};
use crate::oracle::WalkTrace;
use crate::partition::{Partition, RecombMove, SlackBound};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Non-empty lines with their 1-based numbers. A trailing `\r` is an error
/// so that only LF files are accepted.
fn lines(text: &str) -> Result<Vec<(usize, &str)>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.split('\n').enumerate() {
        if line.ends_with('\r') {
            return err(i + 1, "CR line ending");
        }
        if !line.is_ascii() {
            return err(i + 1, "non-ASCII input");
        }
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T, ParseError> {
    match tok {
        None => err(line, format!("missing {what}")),
        Some(t) => t.parse().or_else(|_| err(line, format!("bad {what} `{t}`"))),
    }
}

fn expect_end(line: usize, mut toks: std::str::SplitWhitespace<'_>) -> Result<(), ParseError> {
    match toks.next() {
        Some(t) => err(line, format!("unexpected token `{t}`")),
        None => Ok(()),
    }
}

/// Parses `p <n> <m>` followed by `m` lines `e <u> <v>` with `u < v < n`.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let lines = lines(text)?;
    let Some(&(hl, header)) = lines.first() else {
        return err(1, "empty graph file");
    };
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") {
        return err(hl, "expected `p <n> <m>`");
    }
    let n: usize = number(hl, toks.next(), "vertex count")?;
    let m: usize = number(hl, toks.next(), "edge count")?;
    expect_end(hl, toks)?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for &(ln, line) in &lines[1..] {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("e") {
            return err(ln, "expected `e <u> <v>`");
        }
        let u: Vertex = number(ln, toks.next(), "endpoint")?;
        let v: Vertex = number(ln, toks.next(), "endpoint")?;
        expect_end(ln, toks)?;
        if u >= v {
            return err(ln, format!("edge {u} {v} must satisfy u < v"));
        }
        if v >= n {
            return err(ln, format!("vertex {v} out of range 0..{n}"));
        }
        if !seen.insert((u, v)) {
            return err(ln, format!("duplicate edge {u} {v}"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        let at = lines.last().map_or(1, |l| l.0);
        return err(at, format!("header promises {m} edges, found {}", edges.len()));
    }
    Graph::new(n, &edges).or_else(|e| err(hl, e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// Parses `k <k>` followed by one line of `n` labels in `0..k`.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition, ParseError> {
    let lines = lines(text)?;
    let Some(&(hl, header)) = lines.first() else {
        return err(1, "empty partition file");
    };
    let mut toks = header.split_whitespace();
    if toks.next() != Some("k") {
        return err(hl, "expected `k <k>`");
    }
    let k: usize = number(hl, toks.next(), "district count")?;
    expect_end(hl, toks)?;
    let Some(&(ll, label_line)) = lines.get(1) else {
        return err(hl + 1, "missing label line");
    };
    if let Some(&(extra, _)) = lines.get(2) {
        return err(extra, "unexpected content after label line");
    }
    let labels: Vec<usize> =
        label_line.split_whitespace().map(|t| number(ll, Some(t), "label")).collect::<Result<_, _>>()?;
    if labels.len() != n {
        return err(ll, format!("expected {n} labels, found {}", labels.len()));
    }
    Partition::from_assignment(k, &labels).or_else(|e| err(ll, e))
}

/// Writes `p` over vertices `0..n`; `None` if `p` does not partition them.
pub fn write_partition(p: &Partition, n: usize) -> Option<String> {
    let labels = p.assignment(n)?;
    let body: Vec<String> = labels.iter().map(usize::to_string).collect();
    Some(format!("k {}\n{}\n", p.k(), body.join(" ")))
}

/// One line of vertex ids in cyclic order.
pub fn parse_cycle(text: &str) -> Result<Vec<Vertex>, ParseError> {
    let lines = lines(text)?;
    let Some(&(ln, line)) = lines.first() else {
        return err(1, "empty cycle file");
    };
    if let Some(&(extra, _)) = lines.get(1) {
        return err(extra, "cycle must be a single line");
    }
    line.split_whitespace().map(|t| number(ln, Some(t), "vertex")).collect()
}

pub fn write_cycle(order: &[Vertex]) -> String {
    let body: Vec<String> = order.iter().map(usize::to_string).collect();
    format!("{}\n", body.join(" "))
}

fn parse_move_line(ln: usize, line: &str) -> Result<RecombMove, ParseError> {
    let mut parts = line.split('|');
    let head = parts.next().unwrap_or("");
    let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
        return err(ln, "expected `m <i> <j> | <members> | <members>`");
    };
    if parts.next().is_some() {
        return err(ln, "too many `|` separators");
    }
    let mut toks = head.split_whitespace();
    if toks.next() != Some("m") {
        return err(ln, "move line must start with `m`");
    }
    let i: usize = number(ln, toks.next(), "district label")?;
    let j: usize = number(ln, toks.next(), "district label")?;
    expect_end(ln, toks)?;
    let set = |s: &str| -> Result<VertexSet, ParseError> {
        let v: Vec<Vertex> = s.split_whitespace().map(|t| number(ln, Some(t), "vertex")).collect::<Result<_, _>>()?;
        Ok(VertexSet::from_vec(v))
    };
    Ok(RecombMove { i, j, new_i: set(a)?, new_j: set(b)? })
}

/// One `m <i> <j> | ... | ...` line per move.
pub fn parse_moves(text: &str) -> Result<Vec<RecombMove>, ParseError> {
    lines(text)?.into_iter().map(|(ln, line)| parse_move_line(ln, line)).collect()
}

pub fn write_moves(moves: &[RecombMove]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

/// An NCL instance and its named orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NclFile {
    pub instance: NclInstance,
    pub orientations: Vec<(String, Orientation)>,
}

impl NclFile {
    pub fn orientation(&self, name: &str) -> Option<&Orientation> {
        self.orientations.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }
}

/// Parses `ncl <nv> <ne>`, `nv` vertex lines `v <id> <AND|OR>`, `ne` edge
/// lines `e <id> <u> <v> <red|blue>`, then blocks `orient <name>` each
/// followed by `ne` lines `<edge-id> <uv|vu>`. Ids must appear in order.
pub fn parse_ncl(text: &str) -> Result<NclFile, ParseError> {
    let lines = lines(text)?;
    let Some(&(hl, header)) = lines.first() else {
        return err(1, "empty NCL file");
    };
    let mut toks = header.split_whitespace();
    if toks.next() != Some("ncl") {
        return err(hl, "expected `ncl <nv> <ne>`");
    }
    let nv: usize = number(hl, toks.next(), "vertex count")?;
    let ne: usize = number(hl, toks.next(), "edge count")?;
    expect_end(hl, toks)?;
    let mut rest = lines[1..].iter();
    let mut kinds = Vec::with_capacity(nv);
    for id in 0..nv {
        let Some(&(ln, line)) = rest.next() else {
            return err(hl, format!("expected {nv} vertex lines"));
        };
        let mut toks = line.split_whitespace();
        if toks.next() != Some("v") {
            return err(ln, "expected `v <id> <AND|OR>`");
        }
        let got: usize = number(ln, toks.next(), "vertex id")?;
        if got != id {
            return err(ln, format!("expected vertex id {id}, found {got}"));
        }
        kinds.push(match toks.next() {
            Some("AND") => VertexKind::And,
            Some("OR") => VertexKind::Or,
            other => return err(ln, format!("bad vertex kind {other:?}")),
        });
        expect_end(ln, toks)?;
    }
    let mut edges = Vec::with_capacity(ne);
    for id in 0..ne {
        let Some(&(ln, line)) = rest.next() else {
            return err(hl, format!("expected {ne} edge lines"));
        };
        let mut toks = line.split_whitespace();
        if toks.next() != Some("e") {
            return err(ln, "expected `e <id> <u> <v> <red|blue>`");
        }
        let got: usize = number(ln, toks.next(), "edge id")?;
        if got != id {
            return err(ln, format!("expected edge id {id}, found {got}"));
        }
        let u: usize = number(ln, toks.next(), "endpoint")?;
        let v: usize = number(ln, toks.next(), "endpoint")?;
        if u >= nv || v >= nv || u == v {
            return err(ln, format!("bad endpoints {u} {v}"));
        }
        let color = match toks.next() {
            Some("red") => EdgeColor::Red,
            Some("blue") => EdgeColor::Blue,
            other => return err(ln, format!("bad edge color {other:?}")),
        };
        expect_end(ln, toks)?;
        edges.push(NclEdge { u, v, color });
    }
    let mut orientations = Vec::new();
    while let Some(&(ln, line)) = rest.next() {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("orient") {
            return err(ln, "expected `orient <name>`");
        }
        let Some(name) = toks.next() else {
            return err(ln, "missing orientation name");
        };
        expect_end(ln, toks.clone())?;
        let mut o = Vec::with_capacity(ne);
        for id in 0..ne {
            let Some(&(el, eline)) = rest.next() else {
                return err(ln, format!("orientation `{name}` needs {ne} lines"));
            };
            let mut toks = eline.split_whitespace();
            let got: usize = number(el, toks.next(), "edge id")?;
            if got != id {
                return err(el, format!("expected edge id {id}, found {got}"));
            }
            o.push(match toks.next() {
                Some("uv") => true,
                Some("vu") => false,
                other => return err(el, format!("bad direction {other:?}")),
            });
            expect_end(el, toks)?;
        }
        orientations.push((name.to_string(), o));
    }
    Ok(NclFile { instance: NclInstance { kinds, edges }, orientations })
}

pub fn write_ncl(file: &NclFile) -> String {
    let ncl = &file.instance;
    let mut out = format!("ncl {} {}\n", ncl.kinds.len(), ncl.edges.len());
    for (id, kind) in ncl.kinds.iter().enumerate() {
        let _ = writeln!(out, "v {id} {kind}");
    }
    for (id, e) in ncl.edges.iter().enumerate() {
        let _ = writeln!(out, "e {id} {} {} {}", e.u, e.v, e.color);
    }
    for (name, o) in &file.orientations {
        let _ = writeln!(out, "orient {name}");
        for (id, &toward_v) in o.iter().enumerate() {
            let _ = writeln!(out, "{id} {}", if toward_v { "uv" } else { "vu" });
        }
    }
    out
}

/// One JSON object per line.
pub fn write_map_jsonl(records: &[MapRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("map records serialize") + "\n")
        .collect()
}

/// Header `# seed <seed> k <k> slack <s> steps <t>`, then one
/// `s <move-line> -> <key hash>` line per step, and `# halted` if the walk
/// stopped early.
pub fn write_trace(trace: &WalkTrace, k: usize, slack: SlackBound) -> String {
    let mut out = format!("# seed {} k {k} slack {slack} steps {}\n", trace.seed, trace.steps.len());
    for step in &trace.steps {
        let _ = writeln!(out, "s {} -> {:016x}", step.mv, step.key.fnv_hash());
    }
    if trace.halted {
        out.push_str("# halted\n");
    }
    out
}

const PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
    "#ccebc5", "#ffed6f",
];

/// Undirected DOT rendering; districts of `p`, if given, become fill colors.
pub fn to_dot(g: &Graph, p: Option<&Partition>) -> String {
    let mut out = String::from("graph G {\n  node [style=filled];\n");
    let labels = p.and_then(|p| p.assignment(g.n()));
    for v in g.vertices().iter() {
        match &labels {
            Some(l) => {
                let _ = writeln!(out, "  {v} [fillcolor=\"{}\", xlabel=\"{}\"];", PALETTE[l[v] % PALETTE.len()], l[v]);
            }
            None => {
                let _ = writeln!(out, "  {v} [fillcolor=\"white\"];");
            }
        }
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip_and_errors() {
        let text = "p 4 3\ne 0 1\ne 1 2\ne 2 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(write_graph(&g), text);
        let e = parse_graph("p 3 2\ne 0 1\ne 1 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(parse_graph("p 3 2\ne 0 1\ne 0 1\n").unwrap_err().line, 3);
        assert_eq!(parse_graph("p 3 1\ne 0 5\n").unwrap_err().line, 2);
        assert!(parse_graph("p 3 2\ne 0 1\n").is_err());
        assert_eq!(parse_graph("p 3 1\r\ne 0 1\n").unwrap_err().line, 1);
        assert_eq!(parse_graph("p 3 1\nx 0 1\n").unwrap_err().to_string(), "line 2: expected `e <u> <v>`");
    }

    #[test]
    fn partition_round_trip() {
        let text = "k 3\n2 2 0 1 1 0\n";
        let p = parse_partition(text, 6).unwrap();
        assert_eq!(write_partition(&p, 6).unwrap(), text);
        assert_eq!(parse_partition("k 2\n0 1 2\n", 3).unwrap_err().line, 2);
        assert_eq!(parse_partition("k 2\n0 1\n", 3).unwrap_err().line, 2);
    }

    #[test]
    fn moves_round_trip() {
        let m = RecombMove { i: 0, j: 2, new_i: VertexSet::from_vec(vec![0, 1]), new_j: VertexSet::from_vec(vec![2, 5]) };
        let text = write_moves(&[m.clone(), m.clone()]);
        assert_eq!(text.lines().next().unwrap(), "m 0 2 | 0 1 | 2 5");
        assert_eq!(parse_moves(&text).unwrap(), vec![m.clone(), m]);
        assert_eq!(parse_moves("m 0 1 | 0\n").unwrap_err().line, 1);
    }

    #[test]
    fn ncl_round_trip() {
        let (instance, a, b) = crate::ncl::k4_all_blue();
        let file = NclFile { instance, orientations: vec![("A".into(), a.clone()), ("B".into(), b)] };
        let text = write_ncl(&file);
        let back = parse_ncl(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.orientation("A"), Some(&a));
        assert!(text.starts_with("ncl 4 6\nv 0 OR\n"));
        assert_eq!(parse_ncl("ncl 1 0\nv 0 XOR\n").unwrap_err().line, 2);
    }

    #[test]
    fn dot_lists_every_vertex_and_edge() {
        let g = parse_graph("p 3 2\ne 0 1\ne 1 2\n").unwrap();
        let p = parse_partition("k 2\n0 0 1\n", 3).unwrap();
        let dot = to_dot(&g, Some(&p));
        assert!(dot.contains("0 -- 1;") && dot.contains("1 -- 2;"));
        assert_eq!(dot.matches("fillcolor").count(), 3);
    }
}
