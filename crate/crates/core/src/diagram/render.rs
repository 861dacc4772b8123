use std::fmt::Write;

use super::{Diagram, Mark};

/// Graphviz text: one cluster per surface holding its curves, edges for
/// intersections, dashed exceptional curves and point-shaped pinch markers.
pub fn render_dot(d: &Diagram) -> String {
    let mut out = String::from("graph diagram {\n  compound=true;\n  node [shape=box, fontsize=10];\n");
    for (s, surf) in d.surfaces.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_s{s} {{\n    label=\"{}\";", surf.label);
        for c in d.curves.values().filter(|c| c.surfaces.contains(&s)) {
            let style = if c.exceptional_on.contains(&s) { ", style=dashed" } else { "" };
            let _ = writeln!(out, "    s{s}_c{} [label=\"{}\"{style}];", c.id, d.curve_label(c.id));
        }
        for p in d.points.values().filter(|p| p.marks.contains(&Mark::Pinch)) {
            for c in p.curves.iter().filter(|c| d.curves[c].surfaces.contains(&s)) {
                let _ = writeln!(out, "    s{s}_x{} [shape=point, width=0.08, label=\"\"];", p.id);
                let _ = writeln!(out, "    s{s}_c{c} -- s{s}_x{};", p.id);
            }
        }
        out.push_str("  }\n");
    }
    for p in d.points.values().filter(|p| !p.marks.contains(&Mark::Pinch)) {
        let curves: Vec<usize> = p.curves.iter().copied().collect();
        let style = if p.marks.contains(&Mark::Separated) { " [style=dotted, label=\"o\"]" } else { "" };
        for (i, &a) in curves.iter().enumerate() {
            for &b in &curves[i + 1..] {
                let shared: Vec<usize> = d.curves[&a].surfaces.intersection(&d.curves[&b].surfaces).copied().collect();
                for s in shared {
                    let _ = writeln!(out, "  s{s}_c{a} -- s{s}_c{b}{style};");
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
