use std::fmt::Write as _;

use super::Dfao;

/// Graphviz rendering: one node per state labelled `name/output`, one edge per
/// transition labelled with its digit. The initial state is drawn bold.
pub fn to_dot(m: &Dfao) -> String {
    let mut out = String::from("digraph dfao {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in 0..m.state_count() {
        let style = if s == m.initial() { ", style=bold" } else { "" };
        let _ = writeln!(out, "  s{s} [label=\"{}/{}\"{style}];", m.display_name(s), m.output(s));
    }
    for s in 0..m.state_count() {
        for d in 0..m.alphabet_size() as u8 {
            let _ = writeln!(out, "  s{s} -> s{} [label=\"{d}\"];", m.successor(s, d));
        }
    }
    out.push_str("}\n");
    out
}
