//! Plain-text and JSON encodings of hypergraphs and edge-index lists.
//!
//! Text layout: a header `H n m p` (`p = 0` when unpartitioned), then, when
//! `p > 0`, one line of `n` part ids, then `m` lines each holding one edge
//! as ascending vertex ids. All separators are single spaces and every line
//! ends in `\n`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn to_text(h: &Hypergraph) -> String {
    let mut out = String::new();
    let p = h.parts().map_or(0, |p| p.count());
    let _ = writeln!(out, "H {} {} {}", h.n_vertices(), h.n_edges(), p);
    if let Some(parts) = h.parts() {
        out.push_str(&join(parts.ids()));
        out.push('\n');
    }
    for e in h.edges() {
        out.push_str(&join(e));
        out.push('\n');
    }
    out
}

fn join(xs: &[usize]) -> String {
    let mut s = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x}");
    }
    s
}

pub(crate) fn parse_usizes(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| {
                parse_err(
                    lineno,
                    format!("expected a non-negative integer, got {tok:?}"),
                )
            })
        })
        .collect()
}

pub fn from_text(src: &str) -> Result<Hypergraph> {
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (ln, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("H") {
        return Err(parse_err(ln, "header must start with 'H'"));
    }
    let nums = parse_usizes(&toks.collect::<Vec<_>>().join(" "), ln)?;
    let [n, m, p] = nums[..] else {
        return Err(parse_err(ln, "header must be 'H n m p'"));
    };
    let parts = if p > 0 {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(ln + 1, "missing part line"))?;
        let ids = parse_usizes(line, ln)?;
        if ids.len() != n {
            return Err(parse_err(
                ln,
                format!("expected {n} part ids, got {}", ids.len()),
            ));
        }
        Some((ln, ids))
    } else {
        None
    };
    let mut edges = Vec::with_capacity(m);
    let mut last = ln;
    for (ln, line) in lines.by_ref() {
        if edges.len() == m {
            if !line.trim().is_empty() {
                return Err(parse_err(ln, format!("more than the declared {m} edges")));
            }
            continue;
        }
        let e = parse_usizes(line, ln)?;
        if e.is_empty() {
            return Err(parse_err(ln, "empty edge"));
        }
        if let Some(&v) = e.iter().find(|&&v| v >= n) {
            return Err(parse_err(
                ln,
                format!("vertex {v} out of range for n = {n}"),
            ));
        }
        if e.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(ln, "edge vertices must be strictly ascending"));
        }
        edges.push(e);
        last = ln;
    }
    if edges.len() != m {
        return Err(parse_err(
            last + 1,
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    let h = Hypergraph::new(n, edges)?;
    match parts {
        None => Ok(h),
        Some((ln, ids)) => h
            .with_parts(ids, p)
            .map_err(|e| parse_err(ln, e.to_string())),
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parts: Option<Vec<usize>>,
    edges: Vec<Vec<usize>>,
}

pub fn to_json(h: &Hypergraph) -> String {
    let doc = HypergraphJson {
        n: h.n_vertices(),
        parts: h.parts().map(|p| p.ids().to_vec()),
        edges: h.edges().to_vec(),
    };
    let mut s = serde_json::to_string(&doc).expect("hypergraph JSON serialisation");
    s.push('\n');
    s
}

/// JSON form; the part count is taken as `max(part id) + 1`.
pub fn from_json(src: &str) -> Result<Hypergraph> {
    let doc: HypergraphJson = serde_json::from_str(src)?;
    let h = Hypergraph::new(doc.n, doc.edges)?;
    match doc.parts {
        None => Ok(h),
        Some(ids) => {
            let count = ids.iter().max().map_or(0, |&m| m + 1);
            h.with_parts(ids, count)
        }
    }
}

/// Parses either encoding, choosing JSON when the first non-blank
/// character is `{`.
pub fn parse_hypergraph(src: &str) -> Result<Hypergraph> {
    if src.trim_start().starts_with('{') {
        from_json(src)
    } else {
        from_text(src)
    }
}

pub fn encode(h: &Hypergraph, format: Format) -> String {
    match format {
        Format::Text => to_text(h),
        Format::Json => to_json(h),
    }
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_hypergraph(&std::fs::read_to_string(path)?)
}

pub fn write_hypergraph(path: impl AsRef<Path>, h: &Hypergraph, format: Format) -> Result<()> {
    std::fs::write(path, encode(h, format))?;
    Ok(())
}

/// One edge index per line.
pub fn selection_to_text(indices: &[usize]) -> String {
    indices.iter().map(|e| format!("{e}\n")).collect()
}

/// Whitespace-separated edge indices; `#` starts a comment.
pub fn parse_selection(src: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        out.extend(parse_usizes(body, i + 1)?);
    }
    Ok(out)
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" | "txt" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}
