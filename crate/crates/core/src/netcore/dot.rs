use std::fmt::Write;

use super::{support, FlowKey, Hyperflow, Hypergraph};

/// Graphviz rendering: molecules as circles, reactions as squares, one arrow
/// per unit of stoichiometry. When a flow is given, its support is drawn in
/// bold, edge boxes show their flow and non-zero half-edges appear as arrows
/// from/to point nodes.
pub fn to_dot(h: &Hypergraph, flow: Option<&Hyperflow>) -> String {
    let used = flow.map(support).unwrap_or_default();
    let mut out = String::new();
    out.push_str("digraph network {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n");
    for v in h.vertices() {
        writeln!(
            out,
            "  v{} [shape=circle, label=\"{}\"];",
            v.id,
            escape(&v.display_name())
        )
        .unwrap();
    }
    for e in h.edges() {
        let bold = used.contains(&e.id);
        let label = match flow {
            Some(f) if bold => format!("e{}\\n{}", e.id, f.get(FlowKey::Edge(e.id))),
            _ => format!("e{}", e.id),
        };
        let style = if bold {
            ", style=bold, penwidth=2.5"
        } else {
            ""
        };
        writeln!(
            out,
            "  e{} [shape=square, label=\"{}\"{}];",
            e.id, label, style
        )
        .unwrap();
        let arrow_style = if bold {
            " [style=bold, penwidth=2.5]"
        } else {
            ""
        };
        for (v, m) in &e.reactants {
            for _ in 0..*m {
                writeln!(out, "  v{} -> e{}{};", v, e.id, arrow_style).unwrap();
            }
        }
        for (v, m) in &e.products {
            for _ in 0..*m {
                writeln!(out, "  e{} -> v{}{};", e.id, v, arrow_style).unwrap();
            }
        }
    }
    if let Some(f) = flow {
        for (v, amount) in f.inflows() {
            writeln!(
                out,
                "  in_v{v} [shape=point];\n  in_v{v} -> v{v} [label=\"{amount}\"];"
            )
            .unwrap();
        }
        for (v, amount) in f.outflows() {
            writeln!(
                out,
                "  out_v{v} [shape=point];\n  v{v} -> out_v{v} [label=\"{amount}\"];"
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
