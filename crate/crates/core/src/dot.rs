//! Graphviz DOT export. Output is sorted by id, so equal graphs give equal
//! text.

use std::fmt::Write;

use crate::graph::Graph;
use crate::termgraph::TermGraph;

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn graph_to_dot(g: &Graph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", esc(name));
    for n in g.nodes() {
        let _ = writeln!(out, "  \"{}\";", esc(n.as_str()));
    }
    for (id, e) in g.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            esc(e.src.as_str()),
            esc(e.tgt.as_str()),
            esc(id.as_str())
        );
    }
    out.push_str("}\n");
    out
}

/// Labelled nodes show `id: label`, unlabelled ones `id: ⊥`; out-edges
/// are numbered by argument position.
pub fn termgraph_to_dot(t: &TermGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", esc(name));
    for (n, term) in t.entries() {
        let label = term.as_ref().map_or("⊥", |t| t.label.as_str());
        let shape = if term.is_some() { "ellipse" } else { "box" };
        let _ = writeln!(out, "  \"{}\" [label=\"{}: {}\", shape={shape}];", esc(n.as_str()), esc(n.as_str()), esc(label));
    }
    for (n, term) in t.entries() {
        for (i, s) in term.iter().flat_map(|t| t.succ.iter().enumerate()) {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{i}\"];", esc(n.as_str()), esc(s.as_str()));
        }
    }
    out.push_str("}\n");
    out
}
