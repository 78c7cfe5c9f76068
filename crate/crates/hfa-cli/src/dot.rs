//! Graphviz export.
//!
//! Final states get double circles, every initial state gets an entry arrow
//! from an invisible point, parallel transitions between the same pair of
//! states share one edge with comma-joined labels, and ε-edges are dashed.
//! Node names are the HF renderings of the states.

use std::collections::BTreeMap;

use hfa::{Dfa, Hf, Nfa};

use crate::format::Automaton;

fn quote(q: &Hf) -> String {
    format!("\"{q}\"")
}

fn edge_lines(edges: BTreeMap<(Hf, Hf), Vec<String>>) -> String {
    let mut out = String::new();
    for ((from, to), labels) in edges {
        out.push_str(&format!(
            "  {} -> {} [label=\"{}\"];\n",
            quote(&from),
            quote(&to),
            labels.join(",")
        ));
    }
    out
}

pub fn dfa_to_dot(d: &Dfa) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in &d.finals {
        out.push_str(&format!("  {} [shape=doublecircle];\n", quote(q)));
    }
    out.push_str("  __init0 [shape=point];\n");
    out.push_str(&format!("  __init0 -> {};\n", quote(&d.init)));
    let mut edges: BTreeMap<(Hf, Hf), Vec<String>> = BTreeMap::new();
    for (q, row) in &d.nxt {
        for (&x, t) in row {
            let label = d.alphabet.char_of(x).unwrap_or('?').to_string();
            edges.entry((q.clone(), t.clone())).or_default().push(label);
        }
    }
    out.push_str(&edge_lines(edges));
    out.push_str("}\n");
    out
}

pub fn nfa_to_dot(n: &Nfa) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in &n.finals {
        out.push_str(&format!("  {} [shape=doublecircle];\n", quote(q)));
    }
    for (i, q) in n.init.iter().enumerate() {
        out.push_str(&format!("  __init{i} [shape=point];\n"));
        out.push_str(&format!("  __init{i} -> {};\n", quote(q)));
    }
    let mut edges: BTreeMap<(Hf, Hf), Vec<String>> = BTreeMap::new();
    for (q, row) in &n.nxt {
        for (&x, targets) in row {
            let label = n.alphabet.char_of(x).unwrap_or('?').to_string();
            for t in targets {
                edges
                    .entry((q.clone(), t.clone()))
                    .or_default()
                    .push(label.clone());
            }
        }
    }
    out.push_str(&edge_lines(edges));
    for (from, to) in &n.eps {
        out.push_str(&format!(
            "  {} -> {} [label=\"ε\", style=dashed];\n",
            quote(from),
            quote(to)
        ));
    }
    out.push_str("}\n");
    out
}

pub fn to_dot(a: &Automaton) -> String {
    match a {
        Automaton::Dfa(d) => dfa_to_dot(d),
        Automaton::Nfa(n) => nfa_to_dot(n),
    }
}
