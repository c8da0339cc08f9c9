//! Graphviz rendering of frames: covering pairs point upward, and points
//! that are closed atoms of the complex algebra (no other point below them)
//! are filled.

use std::fmt::Write;

use forkalg::{Frame, PointSet};

/// Node outlines for highlighted point sets.
pub struct Highlight<'a> {
    pub set: PointSet,
    pub colour: &'a str,
    pub name: &'a str,
}

pub fn render(f: &Frame, title: &str, highlights: &[Highlight<'_>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(title));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle];");
    for x in f.points() {
        let closed = f.pred(x) == PointSet::singleton(x);
        let mut attrs = vec![format!("label=\"{}\"", escape(f.label(x)))];
        if closed {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=gray70".into());
        }
        if let Some(h) = highlights.iter().find(|h| h.set.contains(x)) {
            attrs.push(format!("color={}", h.colour));
            attrs.push("penwidth=2.5".into());
            attrs.push(format!("xlabel=\"{}\"", escape(h.name)));
        }
        let _ = writeln!(out, "  n{x} [{}];", attrs.join(", "));
    }
    for x in f.points() {
        for y in f.succ(x).iter() {
            if x == y {
                continue;
            }
            if f.rel(y, x) {
                if x < y {
                    let _ = writeln!(out, "  n{x} -> n{y} [dir=both, style=dashed];");
                }
                continue;
            }
            // covering pair: nothing strictly between
            let between = (f.succ(x) & f.pred(y))
                .iter()
                .any(|z| !f.rel(z, x) && !f.rel(y, z));
            if !between {
                let _ = writeln!(out, "  n{x} -> n{y};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use forkalg::frame::w_frame;

    #[test]
    fn w_has_four_edges_and_two_filled() {
        let d = render(&w_frame(), "W", &[]);
        assert_eq!(d.matches(" -> ").count(), 4);
        assert_eq!(d.matches("style=filled").count(), 2);
    }
}
