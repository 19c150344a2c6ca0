//! Graphviz output for Hasse and Greechie diagrams.

use std::fmt::Write;

use crate::oa::FiniteOrthoalgebra;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram of the derived order; edges are covering pairs only.
pub fn hasse_dot(l: &FiniteOrthoalgebra, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for a in l.elements() {
        writeln!(out, "  {};", quote(l.label(a))).unwrap();
    }
    for (a, b) in l.covers() {
        writeln!(
            out,
            "  {} -> {} [arrowhead=none];",
            quote(l.label(a)),
            quote(l.label(b))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Greechie diagram: atoms as nodes, each atomic orthopartition of unity
/// (a test of the canonical test space made of atoms) drawn as a smooth
/// line through its atoms.
pub fn greechie_dot(l: &FiniteOrthoalgebra, name: &str) -> String {
    let atoms = l.atoms();
    let lines: Vec<Vec<usize>> = l
        .orthopartitions_of_unit()
        .into_iter()
        .filter(|t| t.iter().all(|a| atoms.contains(a)))
        .collect();
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(name)).unwrap();
    writeln!(out, "  splines=true;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for &a in &atoms {
        writeln!(out, "  {};", quote(l.label(a))).unwrap();
    }
    for (k, t) in lines.iter().enumerate() {
        let path: Vec<String> = t.iter().map(|&a| quote(l.label(a))).collect();
        if path.len() == 1 {
            writeln!(out, "  {} [peripheries=2, test={k}];", path[0]).unwrap();
        } else {
            writeln!(out, "  {} [test={k}, penwidth=2];", path.join(" -- ")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
