use std::fmt::Write;

use super::sra::{Label, Sra};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: final states are double circles, the start state is
/// bold with a `start` side label, edges read `condition ↓ registers`.
pub fn to_dot(a: &Sra) -> String {
    let mut out = String::new();
    out.push_str("digraph sra {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in a.states() {
        let mut attrs = Vec::new();
        if a.is_final(q) {
            attrs.push("shape=doublecircle".to_string());
        }
        if q == a.start() {
            attrs.push("style=bold".to_string());
            attrs.push("xlabel=\"start\"".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  q{q};");
        } else {
            let _ = writeln!(out, "  q{q} [{}];", attrs.join(", "));
        }
    }
    for t in a.transitions() {
        let mut label = match &t.label {
            Label::Epsilon => "ε".to_string(),
            Label::Cond(c) => c.to_string(),
        };
        if !t.writes.is_empty() {
            let regs: Vec<&str> = t.writes.iter().map(|r| r.name()).collect();
            let _ = write!(label, " ↓ {}", regs.join(","));
        }
        let _ = writeln!(out, "  q{} -> q{} [label=\"{}\"];", t.source, t.target, escape(&label));
    }
    out.push_str("}\n");
    out
}
