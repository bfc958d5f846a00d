//! Text formats.
//!
//! * Edge list: `p <n> <m>`, then `<u> <v>` per edge, 0-indexed.
//! * Bipartite edge list: `b <n1> <n2>`, then `<i> <j>` with `i` on the left
//!   and `j` on the right, each side 0-indexed.
//! * Colouring: `c <N> <k>`, then `<u> <v> <colour>` with colours `1..=k`;
//!   the host is the graph of the listed pairs.
//! * graph6, one graph per string, optionally prefixed by `>>graph6<<`.
//!
//! Blank lines and lines starting with `#` are ignored in the line formats.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph};
use crate::ramsey::EdgeColoring;

/// A parsed graph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFile {
    Plain(Graph),
    Bipartite(BipartiteGraph),
}

impl GraphFile {
    /// The graph itself, bipartite files numbered left side first.
    pub fn into_graph(self) -> Graph {
        match self {
            GraphFile::Plain(g) => g,
            GraphFile::Bipartite(b) => b.to_graph(),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers<const K: usize>(line: usize, s: &str) -> Result<[usize; K]> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() != K {
        return Err(perr(line, format!("expected {K} fields, found {}", fields.len())));
    }
    let mut out = [0; K];
    for (o, f) in out.iter_mut().zip(&fields) {
        *o = f
            .parse()
            .map_err(|_| perr(line, format!("`{f}` is not a non-negative integer")))?;
    }
    Ok(out)
}

/// Header letter and its numbers.
fn header<'a, const K: usize>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    tag: &str,
) -> Result<[usize; K]> {
    let (line, s) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let rest = s
        .strip_prefix(tag)
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| perr(line, format!("expected a `{tag}` header")))?;
    numbers::<K>(line, rest)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let [n, m] = header::<2>(&mut lines, "p")?;
    let mut g = Graph::empty(n);
    let mut last = 1;
    for (line, s) in lines {
        last = line;
        let [u, v] = numbers::<2>(line, s)?;
        if u >= n || v >= n {
            return Err(perr(line, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(perr(line, format!("self-loop at {u}")));
        }
        if !g.add_edge(u, v)? {
            return Err(perr(line, format!("duplicate edge {u}-{v}")));
        }
    }
    if g.m() != m {
        return Err(perr(last, format!("header announces {m} edges, found {}", g.m())));
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("p {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").expect("writing to a string");
    }
    s
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let mut lines = content_lines(text);
    let [n1, n2] = header::<2>(&mut lines, "b")?;
    let mut b = BipartiteGraph::empty(n1, n2)?;
    for (line, s) in lines {
        let [i, j] = numbers::<2>(line, s)?;
        if i >= n1 || j >= n2 {
            return Err(perr(line, format!("pair {i} {j} out of range {n1} x {n2}")));
        }
        if !b.add_edge(i, j)? {
            return Err(perr(line, format!("duplicate edge {i}-{j}")));
        }
    }
    Ok(b)
}

pub fn write_bipartite(b: &BipartiteGraph) -> String {
    let mut s = format!("b {} {}\n", b.n1(), b.n2());
    for i in 0..b.n1() {
        for j in 0..b.n2() {
            if b.has_edge(i, j) {
                writeln!(s, "{i} {j}").expect("writing to a string");
            }
        }
    }
    s
}

pub fn parse_colouring(text: &str) -> Result<EdgeColoring> {
    let mut lines = content_lines(text);
    let [n, k] = header::<2>(&mut lines, "c")?;
    if k == 0 {
        return Err(perr(1, "a colouring needs at least one colour"));
    }
    let mut host = Graph::empty(n);
    let mut triples = Vec::new();
    for (line, s) in lines {
        let [u, v, c] = numbers::<3>(line, s)?;
        if u >= n || v >= n {
            return Err(perr(line, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(perr(line, format!("self-loop at {u}")));
        }
        if c == 0 || c > k {
            return Err(perr(line, format!("colour {c} outside 1..={k}")));
        }
        if !host.add_edge(u, v)? {
            return Err(perr(line, format!("duplicate edge {u}-{v}")));
        }
        triples.push((u, v, c - 1));
    }
    EdgeColoring::from_triples(host, k, &triples)
}

pub fn write_colouring(c: &EdgeColoring) -> String {
    let mut s = format!("c {} {}\n", c.host().n(), c.k());
    for (u, v, col) in c.triples() {
        writeln!(s, "{u} {v} {}", col + 1).expect("writing to a string");
    }
    s
}

/// Decodes one graph6 string.
pub fn parse_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(perr(1, format!("byte {pos} is outside the graph6 range")));
    }
    let (n, rest) = match bytes {
        [] => return Err(perr(1, "empty graph6 string")),
        [126, 126, r @ ..] => {
            if r.len() < 6 {
                return Err(perr(1, "truncated graph6 size"));
            }
            let n = r[..6].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &r[6..])
        }
        [126, r @ ..] => {
            if r.len() < 3 {
                return Err(perr(1, "truncated graph6 size"));
            }
            let n = r[..3].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &r[3..])
        }
        [b, r @ ..] => ((b - 63) as usize, r),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if rest.len() != bits.div_ceil(6) {
        return Err(perr(1, format!("{n} vertices need {} data bytes, found {}", bits.div_ceil(6), rest.len())));
    }
    let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                g.add_edge(u, v)?;
            }
            k += 1;
        }
    }
    if rest.len() * 6 > bits && (bits..rest.len() * 6).any(bit) {
        return Err(perr(1, "nonzero padding bits"));
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Dispatches on the first content line: `p`, `b`, or a graph6 string.
pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let first = content_lines(text).next().map(|(_, l)| l).unwrap_or("");
    match first.split_whitespace().next() {
        Some("p") => parse_edge_list(text).map(GraphFile::Plain),
        Some("b") => parse_bipartite(text).map(GraphFile::Bipartite),
        Some(_) => parse_graph6(first).map(GraphFile::Plain),
        None => Err(perr(1, "empty file")),
    }
}

pub fn read_graph(path: &Path) -> Result<GraphFile> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Writes the edge-list format, or graph6 for a `.g6` extension.
pub fn write_graph(g: &Graph, path: &Path) -> Result<()> {
    let text = if path.extension().is_some_and(|e| e == "g6") {
        write_graph6(g) + "\n"
    } else {
        write_edge_list(g)
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_colouring(path: &Path) -> Result<EdgeColoring> {
    parse_colouring(&std::fs::read_to_string(path)?)
}
