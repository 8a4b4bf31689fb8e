use std::fmt::Write;

use super::call::{CallGraph, Resolution};
use super::import::ImportGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn import_graph_dot(g: &ImportGraph) -> String {
    let mut out = String::from("digraph imports {\n  rankdir=LR;\n");
    for n in &g.nodes {
        let _ = writeln!(out, "  {};", quote(n));
    }
    for (a, b) in &g.edges {
        let _ = writeln!(out, "  {} -> {};", quote(a), quote(b));
    }
    out.push_str("}\n");
    out
}

pub fn call_graph_dot(g: &CallGraph) -> String {
    let mut out = String::from("digraph calls {\n  rankdir=LR;\n");
    for n in &g.nodes {
        let shape = if n.is_external() { "box" } else { "ellipse" };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(&n.qualified_name));
    }
    for e in &g.edges {
        let style = if e.resolution == Resolution::Unresolved { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            quote(&e.caller.qualified_name),
            quote(&e.callee.qualified_name),
            quote(e.resolution.as_str())
        );
    }
    out.push_str("}\n");
    out
}
