//! Graph and artifact formats.
//!
//! JSON (`{"n": .., "edges": [[u, v], ..]}`, edges sorted with `u < v`) is
//! canonical. The text format is a header line `n m` followed by `m` lines
//! `u v`. DOT is write-only.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partitions::HPartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFormat {
    Json,
    Text,
    Dot,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(GraphFormat::Json),
            "text" | "txt" => Ok(GraphFormat::Text),
            "dot" => Ok(GraphFormat::Dot),
            _ => Err(Error::input(format!("unknown graph format {s:?}"))),
        }
    }
}

/// Parses JSON when the input starts with `{`, the text format otherwise.
pub fn parse_graph(s: &str) -> Result<Graph> {
    if s.trim_start().starts_with('{') {
        from_json(s)
    } else {
        parse_text(s)
    }
}

pub fn parse_graph_as(s: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Json => from_json(s),
        GraphFormat::Text => parse_text(s),
        GraphFormat::Dot => Err(Error::input("DOT input is not supported")),
    }
}

/// Parses any JSON artifact; errors carry the line and column.
pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| {
        if e.line() == 0 {
            Error::input(format!("JSON error: {e}"))
        } else {
            Error::input(format!("JSON error at line {}, column {}: {e}", e.line(), e.column()))
        }
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("artifacts serialize")
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("artifacts serialize")
}

fn parse_text(s: &str) -> Result<Graph> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::input("line 1: missing header \"n m\""))?;
    let nums = |line: usize, l: &str| -> Result<Vec<usize>> {
        l.split_whitespace()
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| Error::input(format!("line {line}: {w:?} is not a vertex count or id")))
            })
            .collect()
    };
    let head = nums(hl, header)?;
    let [n, m] = head[..] else {
        return Err(Error::input(format!("line {hl}: header must be \"n m\"")));
    };
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let e = nums(line, l)?;
        let [u, v] = e[..] else {
            return Err(Error::input(format!("line {line}: edge lines must be \"u v\"")));
        };
        if u >= n || v >= n || u == v {
            return Err(Error::input(format!("line {line}: bad edge {u} {v}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::input(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::new(n, &edges)
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => to_json(g),
        GraphFormat::Text => {
            let mut out = format!("{} {}\n", g.n(), g.edge_count());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
            out
        }
        GraphFormat::Dot => graph_dot(g, None),
    }
}

/// DOT output; with a partition, every part becomes a labelled cluster.
pub fn graph_dot(g: &Graph, hp: Option<&HPartition>) -> String {
    let mut out = String::from("graph G {\n");
    match hp {
        Some(hp) => {
            for (x, p) in hp.parts.iter().enumerate() {
                let _ = writeln!(out, "  subgraph cluster_{x} {{\n    label=\"{x}\";");
                for v in p.iter() {
                    let _ = writeln!(out, "    {v};");
                }
                out.push_str("  }\n");
            }
        }
        None => {
            for v in 0..g.n() {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
