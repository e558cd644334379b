use std::fmt::Write;

use serde_json::{json, Value};

use super::{EdgeKind, RecurrenceGraph};

pub fn to_dot(g: &RecurrenceGraph) -> String {
    let mut out = String::new();
    writeln!(out, "digraph G {{").unwrap();
    writeln!(out, "  // vector {}", g.vector()).unwrap();
    for (i, d) in g.vertices().iter().enumerate() {
        let shape = if g.is_initial(i) { "box" } else { "ellipse" };
        writeln!(out, "  v{i} [shape={shape}, label=\"{d}\\nn={}\"];", g.classes(i)).unwrap();
    }
    for e in g.edges() {
        let color = match e.label.kind {
            EdgeKind::Rigid => "black",
            EdgeKind::Augmenting => "red",
        };
        writeln!(
            out,
            "  v{} -> v{} [color={color}, label=\"{}\"];",
            e.from, e.to, e.label.case
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn to_json(g: &RecurrenceGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            json!({
                "id": i,
                "descriptor": d.to_string(),
                "n": g.classes(i),
                "initial": g.is_initial(i),
            })
        })
        .collect();
    json!({
        "vector": g.vector().to_string(),
        "construction": g.construction(),
        "M": g.vector().working_m(),
        "V": g.vertex_count(),
        "E": g.edge_count(),
        "rigid": g.count_by_kind(EdgeKind::Rigid),
        "augmenting": g.count_by_kind(EdgeKind::Augmenting),
        "outOfRange": g.stats().out_of_range,
        "vertices": vertices,
        "edges": g.edges(),
    })
}
