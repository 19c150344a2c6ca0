//! Named examples used by tests, demos and the command line.

use crate::oa::FiniteOrthoalgebra;
use crate::testspace::{TestSpace, TestSpaceSpec};

fn spec(outcomes: &[&str], tests: &[&[&str]]) -> TestSpaceSpec {
    TestSpaceSpec {
        outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
        tests: tests
            .iter()
            .map(|t| t.iter().map(|s| s.to_string()).collect())
            .collect(),
    }
}

pub fn bool_n(n: usize) -> FiniteOrthoalgebra {
    FiniteOrthoalgebra::boolean(n).expect("1 ≤ n ≤ 10")
}

/// `k` four-element Boolean blocks glued at 0 and 1.
pub fn mo_k(k: usize) -> FiniteOrthoalgebra {
    FiniteOrthoalgebra::horizontal_sum(k).expect("k ≥ 1")
}

/// Three three-outcome tests arranged in a triangle, each pair sharing a
/// corner: `{a,x,b}`, `{b,y,c}`, `{c,z,a}`.
pub fn wright_triangle() -> TestSpace {
    TestSpace::new(&spec(
        &["a", "b", "c", "x", "y", "z"],
        &[&["a", "x", "b"], &["b", "y", "c"], &["c", "z", "a"]],
    ))
    .expect("valid test space")
}

/// The logic of [`wright_triangle`]: 14 elements, not orthocoherent.
pub fn wright_triangle_logic() -> FiniteOrthoalgebra {
    wright_triangle().logic().expect("algebraic").oa
}

/// `{a,b}`, `{b,c}`, `{c,d}`: not algebraic.
pub fn chain() -> TestSpace {
    TestSpace::new(&spec(
        &["a", "b", "c", "d"],
        &[&["a", "b"], &["b", "c"], &["c", "d"]],
    ))
    .expect("valid test space")
}

/// A single test with `n` outcomes `o1 … on`.
pub fn single_test(n: usize) -> TestSpace {
    let names: Vec<String> = (1..=n).map(|i| format!("o{i}")).collect();
    TestSpace::new(&TestSpaceSpec {
        outcomes: names.clone(),
        tests: vec![names],
    })
    .expect("valid test space")
}

/// `k` disjoint two-outcome tests; the logic is MO_k.
pub fn disjoint_pairs(k: usize) -> TestSpace {
    let mut outcomes = Vec::new();
    let mut tests = Vec::new();
    for i in 1..=k {
        let pair = vec![format!("p{i}"), format!("q{i}")];
        outcomes.extend(pair.clone());
        tests.push(pair);
    }
    TestSpace::new(&TestSpaceSpec { outcomes, tests }).expect("valid test space")
}

/// Orthoalgebras exercised by corpus-wide checks: bool1–bool4, MO2–MO4,
/// a product, and the Wright-triangle logic.
pub fn orthoalgebras() -> Vec<(String, FiniteOrthoalgebra)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("bool{n}"), bool_n(n)));
    }
    for k in 2..=4 {
        out.push((format!("mo{k}"), mo_k(k)));
    }
    out.push((
        "bool1xmo2".into(),
        bool_n(1).product(&mo_k(2)).expect("product"),
    ));
    out.push(("wtriangle".into(), wright_triangle_logic()));
    out
}

/// Algebraic test spaces exercised by corpus-wide checks.
pub fn algebraic_testspaces() -> Vec<(String, TestSpace)> {
    vec![
        ("single3".into(), single_test(3)),
        ("pairs2".into(), disjoint_pairs(2)),
        ("pairs3".into(), disjoint_pairs(3)),
        ("wtriangle".into(), wright_triangle()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wright_triangle_counts() {
        let t = wright_triangle();
        assert_eq!(t.events().unwrap().len(), 19);
        let l = wright_triangle_logic();
        assert_eq!(l.len(), 14);
        assert!(!l.is_orthocoherent());
    }

    #[test]
    fn corpus_is_valid() {
        assert_eq!(orthoalgebras().len(), 9);
        for (_, t) in algebraic_testspaces() {
            assert!(t.is_algebraic().unwrap());
        }
        assert!(!chain().is_algebraic().unwrap());
    }
}
