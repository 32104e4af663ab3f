//! Plain-text graph files.
//!
//! ```text
//! # comment lines start with '#'
//! nodes 4
//! undirected          # optional, mirrors every edge line
//! edge 1 2
//! edge 2 3
//! ```
//!
//! Node ids are 1-based. Self-loops are implied and may also be listed.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{DirectedGraph, GraphError, MAX_NODES};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `nodes <n>` directive")]
    MissingNodes,
    #[error("`nodes` must be the first directive")]
    NodesNotFirst,
    #[error("`{0}` must appear before any edge")]
    DirectiveAfterEdges(&'static str),
    #[error("duplicate `{0}` directive")]
    DuplicateDirective(&'static str),
    #[error("node count must be between 2 and {MAX_NODES}, got {0}")]
    BadNodeCount(String),
    #[error("invalid node id `{0}`")]
    BadNodeId(String),
    #[error("node {id} out of range 1..={n}")]
    OutOfRange { id: usize, n: usize },
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("expected `{0}`")]
    Arity(&'static str),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parses the text format. Rejects out-of-range ids and edges listed twice
/// (in undirected mode `edge 1 2` and `edge 2 1` are the same edge).
pub fn parse_graph(text: &str) -> Result<DirectedGraph, ParseError> {
    let mut n: Option<usize> = None;
    let mut undirected = false;
    let mut seen_edge = false;
    let mut listed: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let directive = tokens.next().expect("nonempty line");
        let args: Vec<&str> = tokens.collect();
        match directive {
            "nodes" => {
                if n.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateDirective("nodes")));
                }
                if undirected {
                    return Err(err(line, ParseErrorKind::NodesNotFirst));
                }
                let [count] = args[..] else {
                    return Err(err(line, ParseErrorKind::Arity("nodes <n>")));
                };
                let parsed = count
                    .parse::<usize>()
                    .ok()
                    .filter(|c| (2..=MAX_NODES).contains(c))
                    .ok_or_else(|| err(line, ParseErrorKind::BadNodeCount(count.to_string())))?;
                n = Some(parsed);
            }
            "undirected" => {
                if n.is_none() {
                    return Err(err(line, ParseErrorKind::NodesNotFirst));
                }
                if seen_edge {
                    return Err(err(line, ParseErrorKind::DirectiveAfterEdges("undirected")));
                }
                if undirected {
                    return Err(err(line, ParseErrorKind::DuplicateDirective("undirected")));
                }
                if !args.is_empty() {
                    return Err(err(line, ParseErrorKind::Arity("undirected")));
                }
                undirected = true;
            }
            "edge" => {
                let Some(count) = n else {
                    return Err(err(line, ParseErrorKind::NodesNotFirst));
                };
                let [a, b] = args[..] else {
                    return Err(err(line, ParseErrorKind::Arity("edge <u> <v>")));
                };
                let u = parse_id(a, count, line)?;
                let v = parse_id(b, count, line)?;
                let key = if undirected { (u.min(v), u.max(v)) } else { (u, v) };
                if !listed.insert(key) {
                    return Err(err(line, ParseErrorKind::DuplicateEdge(u, v)));
                }
                seen_edge = true;
            }
            other => return Err(err(line, ParseErrorKind::UnknownDirective(other.to_string()))),
        }
    }

    let n = n.ok_or_else(|| err(last_line.max(1), ParseErrorKind::MissingNodes))?;
    let edges = listed.into_iter().map(|(u, v)| (u - 1, v - 1));
    let built = if undirected { DirectedGraph::undirected(n, edges) } else { DirectedGraph::new(n, edges) };
    built.map_err(|e| match e {
        GraphError::TooFewNodes(c) | GraphError::TooManyNodes(c) => err(1, ParseErrorKind::BadNodeCount(c.to_string())),
        other => unreachable!("ids were range-checked: {other}"),
    })
}

fn parse_id(token: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    let id: usize = token.parse().map_err(|_| err(line, ParseErrorKind::BadNodeId(token.to_string())))?;
    if id == 0 || id > n {
        return Err(err(line, ParseErrorKind::OutOfRange { id, n }));
    }
    Ok(id)
}

/// Canonical directed rendering: every edge, self-loops included, in
/// lexicographic order. Induced subgraphs are written over their id space.
pub fn write_graph(g: &DirectedGraph, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        for line in h.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "nodes {}", g.order());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge {} {}", u + 1, v + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::families::{build_density_family, build_fig1};

    #[test]
    fn parses_directed_and_undirected() {
        let g = parse_graph("# demo\nnodes 3\nedge 1 2\n\nedge 2 3\n").unwrap();
        assert_eq!(g.edge_count(), 5);
        assert!(g.has_edge(0, 1) && !g.has_edge(1, 0));

        let u = parse_graph("nodes 3\nundirected\nedge 1 2\nedge 3 2\n").unwrap();
        assert!(u.is_symmetric());
        assert_eq!(u.edge_count(), 7);
    }

    #[test]
    fn explicit_self_loops_are_accepted() {
        let g = parse_graph("nodes 2\nedge 1 1\nedge 1 2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let e = parse_graph("nodes 3\nedge 1 4\n").unwrap_err();
        assert_eq!(e, ParseError { line: 2, kind: ParseErrorKind::OutOfRange { id: 4, n: 3 } });
        let e = parse_graph("nodes 3\nedge 1 2\nedge 1 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::DuplicateEdge(1, 2)));
        let e = parse_graph("nodes 3\nundirected\nedge 1 2\nedge 2 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(matches!(parse_graph("edge 1 2\n").unwrap_err().kind, ParseErrorKind::NodesNotFirst));
        assert!(matches!(parse_graph("# nothing\n").unwrap_err().kind, ParseErrorKind::MissingNodes));
        assert!(matches!(parse_graph("nodes 1\n").unwrap_err().kind, ParseErrorKind::BadNodeCount(_)));
        assert!(matches!(parse_graph("nodes 3\nedge 0 1\n").unwrap_err().kind, ParseErrorKind::OutOfRange { .. }));
        assert!(matches!(parse_graph("nodes 3\nedge x 1\n").unwrap_err().kind, ParseErrorKind::BadNodeId(_)));
        assert!(matches!(parse_graph("nodes 3\nedge 1\n").unwrap_err().kind, ParseErrorKind::Arity(_)));
        assert!(matches!(parse_graph("nodes 3\nedge 1 2\nundirected\n").unwrap_err().kind, ParseErrorKind::DirectiveAfterEdges(_)));
        assert!(matches!(parse_graph("nodes 3\nvertex 1\n").unwrap_err().kind, ParseErrorKind::UnknownDirective(_)));
    }

    #[test]
    fn written_files_round_trip() {
        for g in [build_fig1(), build_density_family(7).unwrap()] {
            let text = write_graph(&g, Some("generated"));
            assert_eq!(parse_graph(&text).unwrap(), g);
        }
        let text = write_graph(&build_density_family(8).unwrap(), None);
        assert_eq!(text.lines().filter(|l| l.starts_with("edge")).count(), 32);
    }
}
