//! DOT rendering of level graphs.

use msd_core::EnhancedLevelGraph;

/// Renders a graph with one `rank = same` block per level and enhancements
/// as edge labels. The first line carries the graph JSON so the output can
/// be read back.
pub fn render(graph: &EnhancedLevelGraph, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("// graph: {}\n", graph.to_json_string()));
    out.push_str(&format!("digraph {name} {{\n"));
    out.push_str("  node [shape=circle];\n");
    let tree = graph.tree();
    for v in 0..tree.num_vertices() {
        out.push_str(&format!(
            "  v{v} [label=\"{{{}}}\\nlevel {}\"];\n",
            tree.legs(v),
            graph.level(v)
        ));
    }
    for lvl in 0..=graph.num_levels_below() {
        let members: Vec<String> = (0..tree.num_vertices())
            .filter(|&v| graph.level(v) == -(lvl as i64))
            .map(|v| format!("v{v}"))
            .collect();
        out.push_str(&format!("  {{ rank = same; {}; }}\n", members.join("; ")));
    }
    for e in 0..graph.num_edges() {
        match graph.ends(e) {
            Some((u, l)) => out.push_str(&format!("  v{u} -> v{l} [label=\"{}\"];\n", graph.kappa(e))),
            None => {
                let (a, b) = tree.edges()[e];
                out.push_str(&format!("  v{a} -> v{b} [label=\"0\", dir=none, style=dashed];\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}
