//! Plain-text graph files.
//!
//! ```text
//! # comments run to the end of the line
//! vertices: 6
//! inputs: 0
//! 0 1 1
//! 1 2 1
//! ```
//!
//! The first two directives are mandatory and come in that order. Every
//! further line is an undirected edge `u v w` with a nonzero integer weight;
//! unlisted pairs have weight zero. Vertices are 0-based.

use graphcode_core::zmod::IntMatrix;
use graphcode_core::{GraphError, WeightedGraph};
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    OutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: edge {u}-{v} listed again with a different weight")]
    ConflictingEdge { line: usize, u: usize, v: usize },
    #[error("missing `{0}:` directive")]
    MissingDirective(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The parsed file before the input/output split is validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGraph {
    pub n: usize,
    pub inputs: Option<Vec<usize>>,
    pub gamma: IntMatrix,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn directive<'a>(line: usize, text: &'a str, key: &'static str) -> Result<&'a str, FormatError> {
    let (k, v) = text
        .split_once(':')
        .ok_or_else(|| syntax(line, format!("expected `{key}: ...`")))?;
    if k.trim() != key {
        return Err(syntax(
            line,
            format!("expected `{key}:`, found `{}:`", k.trim()),
        ));
    }
    Ok(v.trim())
}

/// Parses a comma-separated vertex list; the empty string is the empty list.
pub fn parse_vertex_list(text: &str) -> Result<Vec<usize>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{}` is not a vertex index", t.trim()))
        })
        .collect()
}

/// Parses the file layout. With `require_inputs` unset the `inputs:` line may
/// be omitted, which is how skeleton files are read.
pub fn parse_raw(text: &str, require_inputs: bool) -> Result<RawGraph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let (ln, first) = lines
        .next()
        .ok_or(FormatError::MissingDirective("vertices"))?;
    let n: usize = directive(ln, first, "vertices")?
        .parse()
        .map_err(|_| syntax(ln, "vertex count must be a non-negative integer"))?;

    let inputs = match lines.peek() {
        Some(&(ln, l)) if l.contains(':') => {
            lines.next();
            let list = parse_vertex_list(directive(ln, l, "inputs")?).map_err(|m| syntax(ln, m))?;
            for &v in &list {
                if v >= n {
                    return Err(FormatError::OutOfRange {
                        line: ln,
                        vertex: v,
                        n,
                    });
                }
            }
            Some(list)
        }
        _ if require_inputs => return Err(FormatError::MissingDirective("inputs")),
        _ => None,
    };

    let mut gamma = IntMatrix::zeros(n, n);
    for (ln, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [u, v, w] = fields[..] else {
            return Err(syntax(ln, "expected an edge `u v w`"));
        };
        let parse_vertex = |t: &str| -> Result<usize, FormatError> {
            let x: usize = t
                .parse()
                .map_err(|_| syntax(ln, format!("`{t}` is not a vertex index")))?;
            if x >= n {
                return Err(FormatError::OutOfRange {
                    line: ln,
                    vertex: x,
                    n,
                });
            }
            Ok(x)
        };
        let (u, v) = (parse_vertex(u)?, parse_vertex(v)?);
        let w: BigInt = w
            .parse()
            .map_err(|_| syntax(ln, format!("`{w}` is not an integer weight")))?;
        if u == v {
            return Err(FormatError::SelfLoop {
                line: ln,
                vertex: u,
            });
        }
        if w.is_zero() {
            return Err(syntax(ln, "edge weights must be nonzero"));
        }
        if !gamma[(u, v)].is_zero() && gamma[(u, v)] != w {
            return Err(FormatError::ConflictingEdge {
                line: ln,
                u: u.min(v),
                v: u.max(v),
            });
        }
        gamma[(u, v)] = w.clone();
        gamma[(v, u)] = w;
    }
    Ok(RawGraph { n, inputs, gamma })
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, FormatError> {
    let raw = parse_raw(text, true)?;
    let inputs = raw.inputs.expect("inputs are required");
    Ok(WeightedGraph::new(raw.gamma, &inputs)?)
}

pub fn serialize_graph(graph: &WeightedGraph) -> String {
    let inputs: Vec<String> = graph.inputs().iter().map(|v| v.to_string()).collect();
    let mut out = format!(
        "vertices: {}\ninputs: {}\n",
        graph.vertex_count(),
        inputs.join(",")
    );
    for (u, v, w) in graph.edges() {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}
