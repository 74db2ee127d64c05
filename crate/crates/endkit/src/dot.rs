//! Graphviz output.

use std::fmt::Write;

use endkit_core::decompose::{PieceKind, SpineGraph, Window};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Pieces as nodes, circles as edges. Open circles end at a stub node.
pub fn window_dot(name: &str, w: &Window) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(name)).unwrap();
    for p in &w.pieces {
        let shape = match p.kind {
            PieceKind::Pants => "ellipse",
            PieceKind::PuncturedDisk => "point",
            PieceKind::OneHoledTorus => "doublecircle",
        };
        writeln!(
            out,
            "  p{} [label={}, shape={shape}];",
            p.id,
            quote(&format!("{} {}", p.kind.name(), p.source))
        )
        .unwrap();
    }
    for (c, ends) in w.circles() {
        match ends[..] {
            [(a, _), (b, _)] => writeln!(out, "  p{a} -- p{b} [label=\"c{c}\"];").unwrap(),
            [(a, _)] => {
                writeln!(out, "  o{c} [shape=none, label=\"\"];").unwrap();
                writeln!(out, "  p{a} -- o{c} [label=\"c{c}\", style=dashed];").unwrap();
            }
            _ => {}
        }
    }
    out.push_str("}\n");
    out
}

/// The spine rule graph; core states are drawn filled.
pub fn spine_dot(name: &str, g: &SpineGraph) -> String {
    let a = g.automaton();
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for (i, s) in a.states.iter().enumerate() {
        let style = if a.marked[i] { ", style=filled" } else { "" };
        let root = if i == a.root { ", peripheries=2" } else { "" };
        writeln!(
            out,
            "  {} [label={}{style}{root}];",
            quote(s),
            quote(&format!("{} {}", s, a.kinds[i].letter()))
        )
        .unwrap();
    }
    for (s, t) in a.edges() {
        writeln!(out, "  {} -> {};", quote(&a.states[s]), quote(&a.states[t])).unwrap();
    }
    out.push_str("}\n");
    out
}
