use proptest::prelude::*;
use toa_core::corpus::{
    algebraic_testspaces, bool_n, chain, disjoint_pairs, mo_k, orthoalgebras, single_test,
    wright_triangle,
};
use toa_core::testspace::{
    canonical_testspace, representation_roundtrip, TestSpace, TestSpaceError, TestSpaceSpec,
};

fn check_algebraic_laws(ts: &TestSpace) {
    let st = ts.structure().unwrap();
    let n = st.events.len();
    for a in 0..n {
        for b in 0..n {
            if !st.orthogonal(a, b) {
                continue;
            }
            for c in 0..n {
                if st.perspective(b, c) {
                    assert!(
                        st.orthogonal(a, c),
                        "{:?} {:?} {:?}",
                        st.events[a],
                        st.events[b],
                        st.events[c]
                    );
                    let ab = st.join(a, b).unwrap();
                    let ac = st.join(a, c).unwrap();
                    assert!(st.perspective(ab, ac));
                }
            }
        }
    }
}

#[test]
fn algebraic_corpus_satisfies_substitution_laws() {
    for (name, ts) in algebraic_testspaces() {
        assert!(ts.is_algebraic().unwrap(), "{name}");
        check_algebraic_laws(&ts);
    }
}

#[test]
fn logic_sizes() {
    assert_eq!(single_test(3).logic().unwrap().oa.len(), 8);
    for k in 2..=4 {
        let l = disjoint_pairs(k).logic().unwrap().oa;
        assert!(l.is_isomorphic(&mo_k(k)).is_some());
    }
    let w = wright_triangle().logic().unwrap();
    assert_eq!(w.events.len(), 19);
    assert_eq!(w.oa.len(), 14);
    assert!(single_test(3)
        .logic()
        .unwrap()
        .oa
        .is_isomorphic(&bool_n(3))
        .is_some());
}

#[test]
fn chain_is_refused_with_least_witness() {
    let ts = chain();
    assert!(!ts.is_algebraic().unwrap());
    match ts.logic() {
        Err(TestSpaceError::NotAlgebraic { a, b, c }) => {
            assert_eq!((a.len(), b.len()), (1, 1));
            assert!(!c.is_empty());
        }
        other => panic!("expected NotAlgebraic, got {other:?}"),
    }
}

#[test]
fn canonical_events_are_summable_subsets() {
    for (name, l) in orthoalgebras() {
        let ts = canonical_testspace(&l).unwrap();
        let by_label = |o: usize| l.index_of(&ts.outcomes()[o]).unwrap();
        let mut events: Vec<Vec<usize>> = ts
            .events()
            .unwrap()
            .into_iter()
            .map(|e| {
                let mut v: Vec<usize> = e.into_iter().map(by_label).collect();
                v.sort_unstable();
                v
            })
            .collect();
        events.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        assert_eq!(events, l.summable_subsets(), "{name}");
    }
}

#[test]
fn round_trip_on_corpus() {
    for (name, l) in orthoalgebras() {
        let rt = representation_roundtrip(&l).unwrap();
        assert_eq!(rt.pairs.len(), l.len(), "{name}");
        let mut image = rt.map.clone();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image.len(), l.len(), "{name}");
    }
}

#[test]
fn spec_errors() {
    let bad = |outcomes: &[&str], tests: &[&[&str]]| {
        TestSpace::new(&TestSpaceSpec {
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
            tests: tests
                .iter()
                .map(|t| t.iter().map(|s| s.to_string()).collect())
                .collect(),
        })
        .unwrap_err()
    };
    assert!(matches!(
        bad(&["a", "a"], &[&["a"]]),
        TestSpaceError::DuplicateOutcome(_)
    ));
    assert!(matches!(
        bad(&["a"], &[&["b"]]),
        TestSpaceError::UnknownOutcome(_)
    ));
    assert!(matches!(bad(&["a"], &[&[]]), TestSpaceError::EmptyTest(0)));
    assert!(matches!(
        bad(&["a", "b"], &[&["a"]]),
        TestSpaceError::Uncovered(_)
    ));
    assert!(matches!(
        bad(&["a"], &[&["a", "a"]]),
        TestSpaceError::RepeatedOutcome(0)
    ));
}

/// Random test spaces over at most six outcomes, each outcome covered.
fn random_testspace() -> impl Strategy<Value = TestSpace> {
    (2usize..=6, proptest::collection::vec(1u32..63, 1..5)).prop_map(|(n, masks)| {
        let outcomes: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
        let full = (1u32 << n) - 1;
        let mut tests: Vec<Vec<String>> = Vec::new();
        let mut covered = 0u32;
        for m in masks {
            let m = m & full;
            if m == 0 {
                continue;
            }
            covered |= m;
            tests.push(
                (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| outcomes[i].clone())
                    .collect(),
            );
        }
        let rest: Vec<String> = (0..n)
            .filter(|i| covered >> i & 1 == 0)
            .map(|i| outcomes[i].clone())
            .collect();
        if !rest.is_empty() {
            tests.push(rest);
        }
        TestSpace::new(&TestSpaceSpec { outcomes, tests }).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn algebraic_spaces_have_orthoalgebra_logics(ts in random_testspace()) {
        if ts.is_algebraic().unwrap() {
            check_algebraic_laws(&ts);
            let q = ts.logic().unwrap();
            prop_assert_eq!(q.class_of.len(), q.events.len());
            // Tests all land in the unit class, the empty event in the zero class.
            for t in ts.tests() {
                let e = q.events.iter().position(|e| e == t).unwrap();
                prop_assert_eq!(q.class_of[e], q.oa.one());
            }
            prop_assert_eq!(q.class_of[0], q.oa.zero());
        } else {
            let refused = matches!(ts.logic(), Err(TestSpaceError::NotAlgebraic { .. }));
            prop_assert!(refused);
        }
    }

    #[test]
    fn complements_partition_a_test(ts in random_testspace()) {
        for e in ts.events().unwrap() {
            for c in ts.complements(&e) {
                let mut u: Vec<usize> = e.iter().chain(&c).copied().collect();
                u.sort_unstable();
                prop_assert!(ts.is_test(&u));
                prop_assert!(e.iter().all(|x| !c.contains(x)));
            }
        }
    }
}
