//! Graphviz export of a network snapshot, and a reader for the same dialect.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{NodeId, OverlayNetwork};
use crate::semantic::ResourceDescription;

/// Renders the network as an undirected DOT graph.
///
/// Vertices appear in ascending id order, then each link once as
/// `low -- high`, ascending. Output is byte-stable for a given network.
pub fn export_dot(net: &OverlayNetwork) -> String {
    let mut out = String::from("graph overlay {\n");
    for node in net.nodes() {
        let _ = writeln!(out, "  {} [label=\"{}\"];", node.id, node.description);
    }
    for (a, b) in net.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

/// Vertex and edge sets recovered from DOT text written by [`export_dot`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotGraph {
    pub vertices: Vec<(NodeId, ResourceDescription)>,
    pub edges: Vec<(NodeId, NodeId)>,
}

impl DotGraph {
    pub fn of(net: &OverlayNetwork) -> Self {
        Self {
            vertices: net.nodes().iter().map(|n| (n.id, n.description)).collect(),
            edges: net.edges().collect(),
        }
    }
}

pub fn parse_dot(text: &str) -> Result<DotGraph> {
    let mut graph = DotGraph::default();
    let mut opened = false;
    let mut closed = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |reason: String| Error::Parse {
            line: line_no,
            reason,
        };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !opened {
            if line.starts_with("graph") && line.ends_with('{') {
                opened = true;
                continue;
            }
            return Err(err("expected `graph <name> {`".into()));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        if closed {
            return Err(err("content after closing brace".into()));
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err("statement must end with `;`".into()))?;
        if let Some((a, b)) = stmt.split_once("--") {
            let a = parse_id(a).ok_or_else(|| err(format!("bad vertex id `{a}`")))?;
            let b = parse_id(b).ok_or_else(|| err(format!("bad vertex id `{b}`")))?;
            graph.edges.push((a.min(b), a.max(b)));
        } else {
            let (id, attrs) = stmt
                .split_once('[')
                .ok_or_else(|| err(format!("unrecognized statement `{stmt}`")))?;
            let id = parse_id(id).ok_or_else(|| err(format!("bad vertex id `{id}`")))?;
            let label = attrs
                .trim_end_matches(']')
                .trim()
                .strip_prefix("label=")
                .map(|l| l.trim_matches('"'))
                .ok_or_else(|| err("vertex needs a label attribute".into()))?;
            let desc = label
                .parse()
                .map_err(|_| err(format!("bad label `{label}`")))?;
            graph.vertices.push((id, desc));
        }
    }
    if !closed {
        return Err(Error::Parse {
            line: text.lines().count(),
            reason: "missing closing brace".into(),
        });
    }
    Ok(graph)
}

fn parse_id(s: &str) -> Option<NodeId> {
    s.trim().parse().ok().map(NodeId)
}
