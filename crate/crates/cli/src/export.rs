//! DOT and GraphML renderings. Every node carries a `degree` attribute for
//! sizing or coloring in an external renderer.

use std::fmt::Write as _;

use netgame_core::Graph;

pub fn dot(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "// {c}");
    }
    out.push_str("graph netgame {\n");
    for v in 1..=g.order() {
        let _ = writeln!(out, "  {v} [degree={}];", g.degrees()[v - 1]);
    }
    for (i, j) in g.edges() {
        let _ = writeln!(out, "  {i} -- {j};");
    }
    out.push_str("}\n");
    out
}

pub fn graphml(g: &Graph, comments: &[String]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for c in comments {
        // `--` is not allowed inside XML comments.
        let _ = writeln!(out, "<!-- {} -->", c.replace("--", "- -"));
    }
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n");
    out.push_str("  <graph id=\"netgame\" edgedefault=\"undirected\">\n");
    for v in 1..=g.order() {
        let _ = writeln!(
            out,
            "    <node id=\"n{v}\"><data key=\"degree\">{}</data></node>",
            g.degrees()[v - 1]
        );
    }
    for (k, (i, j)) in g.edges().enumerate() {
        let _ = writeln!(out, "    <edge id=\"e{k}\" source=\"n{i}\" target=\"n{j}\"/>");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
