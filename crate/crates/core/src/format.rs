//! Line-oriented graph files.
//!
//! ```text
//! # a triangle with two named terminals
//! v 1
//! v 2
//! v 3
//! e 0 1 2
//! e 1 2 3
//! e 2 1 3
//! t ends 1 3
//! ```
//!
//! `v <id>` declares a vertex, `e <eid> <u> <v>` an edge (a loop when
//! `u = v`), `t <name> <id>...` an ordered terminal list. `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::multigraph::{EdgeId, GraphError, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

/// A parsed graph file: the graph plus its named terminal lists in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphDoc {
    pub graph: Multigraph,
    pub terminals: Vec<(String, Vec<VertexId>)>,
}

impl GraphDoc {
    pub fn new(graph: Multigraph) -> Self {
        Self {
            graph,
            terminals: Vec::new(),
        }
    }

    pub fn with_terminals(mut self, name: &str, vs: Vec<VertexId>) -> Self {
        self.terminals.push((name.to_string(), vs));
        self
    }

    pub fn terminal_list(&self, name: &str) -> Option<&[VertexId]> {
        self.terminals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut graph = Multigraph::new();
        let mut terminals: Vec<(String, Vec<VertexId>)> = Vec::new();
        let mut pending: Vec<(usize, EdgeId, VertexId, VertexId)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| FormatError { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut fields = body.split_whitespace();
            let tag = fields.next().unwrap_or_default();
            let rest: Vec<&str> = fields.collect();
            let num = |s: &str| -> Result<u32, FormatError> {
                s.parse::<u32>()
                    .map_err(|_| err(format!("`{s}` is not a non-negative integer")))
            };
            match tag {
                "v" => {
                    let [id] = rest.as_slice() else {
                        return Err(err("expected `v <id>`".into()));
                    };
                    graph
                        .add_vertex(VertexId(num(id)?))
                        .map_err(|e| err(e.to_string()))?;
                }
                "e" => {
                    let [eid, u, v] = rest.as_slice() else {
                        return Err(err("expected `e <eid> <u> <v>`".into()));
                    };
                    let eid = EdgeId(num(eid)?);
                    if pending.iter().any(|p| p.1 == eid) {
                        return Err(err(GraphError::DuplicateEdge(eid).to_string()));
                    }
                    pending.push((line, eid, VertexId(num(u)?), VertexId(num(v)?)));
                }
                "t" => {
                    let Some((name, ids)) = rest.split_first() else {
                        return Err(err("expected `t <name> <id>...`".into()));
                    };
                    if terminals.iter().any(|(n, _)| n == name) {
                        return Err(err(format!("terminal list `{name}` declared twice")));
                    }
                    let ids = ids
                        .iter()
                        .map(|s| num(s).map(VertexId))
                        .collect::<Result<Vec<_>, _>>()?;
                    terminals.push((name.to_string(), ids));
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }

        // Edges and terminal lists may precede the vertex records they use.
        for (line, eid, u, v) in pending {
            graph
                .insert_edge(eid, u, v)
                .map_err(|e| FormatError {
                    line,
                    message: e.to_string(),
                })?;
        }
        for (name, ids) in &terminals {
            let mut seen = std::collections::BTreeSet::new();
            for v in ids {
                if !graph.has_vertex(*v) {
                    return Err(FormatError {
                        line: find_line(text, name),
                        message: format!("terminal list `{name}` uses undeclared vertex {v}"),
                    });
                }
                if !seen.insert(*v) {
                    return Err(FormatError {
                        line: find_line(text, name),
                        message: format!("terminal list `{name}` repeats vertex {v}"),
                    });
                }
            }
        }
        Ok(Self { graph, terminals })
    }

    /// Canonical rendering: vertices, then edges, then terminal lists, each in
    /// id or file order. `parse(render(d)) == d`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(name) = self.graph.name() {
            let _ = writeln!(out, "# {name}");
        }
        for v in self.graph.vertices() {
            let _ = writeln!(out, "v {v}");
        }
        for (e, a, b) in self.graph.edges() {
            let _ = writeln!(out, "e {e} {a} {b}");
        }
        for (name, ids) in &self.terminals {
            let _ = write!(out, "t {name}");
            for v in ids {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }
}

fn find_line(text: &str, name: &str) -> usize {
    text.lines()
        .position(|l| {
            let mut f = l.split_whitespace();
            f.next() == Some("t") && f.next() == Some(name)
        })
        .map_or(0, |i| i + 1)
}

pub fn parse_graph(text: &str) -> Result<Multigraph, FormatError> {
    GraphDoc::parse(text).map(|d| d.graph)
}

pub fn render_graph(g: &Multigraph) -> String {
    GraphDoc::new(g.clone()).render()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "# a triangle\nv 1\nv 2\nv 3\ne 0 1 2\ne 1 2 3\ne 2 1 3 # closing edge\nt ends 1 3\n";

    #[test]
    fn parses_triangle_with_terminals() {
        let d = GraphDoc::parse(TRIANGLE).unwrap();
        assert_eq!(d.graph.vertex_count(), 3);
        assert_eq!(d.graph.edge_count(), 3);
        assert_eq!(d.terminal_list("ends"), Some(&[VertexId(1), VertexId(3)][..]));
    }

    #[test]
    fn render_roundtrip() {
        let d = GraphDoc::parse(TRIANGLE).unwrap();
        let again = GraphDoc::parse(&d.render()).unwrap();
        assert_eq!(again.graph.edges().collect::<Vec<_>>(), d.graph.edges().collect::<Vec<_>>());
        assert_eq!(again.terminals, d.terminals);
        assert_eq!(again.render(), d.render());
    }

    #[test]
    fn loops_and_parallels() {
        let g = parse_graph("v 0\nv 1\ne 0 0 0\ne 1 0 1\ne 2 1 0\n").unwrap();
        assert_eq!(g.total_loops(), 1);
        assert_eq!(g.multiplicity(VertexId(0), VertexId(1)), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dup = GraphDoc::parse("v 1\nv 1\n").unwrap_err();
        assert_eq!(dup.line, 2);
        let dup_edge = GraphDoc::parse("v 1\nv 2\ne 0 1 2\ne 0 1 2\n").unwrap_err();
        assert_eq!(dup_edge.line, 4);
        let undeclared = GraphDoc::parse("v 1\ne 0 1 7\n").unwrap_err();
        assert_eq!(undeclared.line, 2);
        assert!(undeclared.message.contains("unknown vertex 7"));
        let bad = GraphDoc::parse("v x\n").unwrap_err();
        assert_eq!(bad.line, 1);
        let unknown = GraphDoc::parse("v 1\nq 3\n").unwrap_err();
        assert_eq!(unknown.line, 2);
        let term = GraphDoc::parse("v 1\nt a 1 9\n").unwrap_err();
        assert_eq!(term.line, 2);
    }
}
