//! Test spaces: outcome sets covered by tests, their events, perspectivity,
//! and the logic obtained by identifying perspective events.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oa::{check_isomorphism, Elem, FiniteOrthoalgebra, OaError, OaSpec};

/// Sorted outcome indices.
pub type Event = Vec<usize>;

/// Tests larger than this are refused by event enumeration.
pub const MAX_TEST_SIZE: usize = 20;

/// Orthoalgebras larger than this are refused by [`canonical_testspace`].
pub const MAX_CANONICAL_SIZE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TestSpaceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate outcome label {0:?}")]
    DuplicateOutcome(String),
    #[error("unknown outcome {0:?}")]
    UnknownOutcome(String),
    #[error("test {0} is empty")]
    EmptyTest(usize),
    #[error("outcome {0:?} lies in no test")]
    Uncovered(String),
    #[error("test {0} repeats an outcome")]
    RepeatedOutcome(usize),
    #[error("{0:?} is not an event")]
    NotAnEvent(Vec<String>),
    #[error("not algebraic: {a:?} ~ {b:?} but only one is complementary to {c:?}")]
    NotAlgebraic {
        a: Vec<String>,
        b: Vec<String>,
        c: Vec<String>,
    },
    #[error("perspectivity is not transitive: {a:?} and {b:?} share a class but no complement")]
    PerspectivityNotTransitive { a: Vec<String>, b: Vec<String> },
    #[error("class sum not well defined at {a:?} + {b:?}")]
    SumNotWellDefined { a: Vec<String>, b: Vec<String> },
    #[error("round trip failed at class {0}")]
    RoundTripFailure(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Oa(#[from] OaError),
}

/// File format: `{"outcomes": [...], "tests": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSpaceSpec {
    pub outcomes: Vec<String>,
    pub tests: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSpace {
    outcomes: Vec<String>,
    index: HashMap<String, usize>,
    tests: Vec<Event>,
}

fn event_order(a: &Event, b: &Event) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_err())
}

fn union(a: &[usize], b: &[usize]) -> Event {
    let mut u: Event = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

impl TestSpace {
    /// Validates the spec: distinct outcomes, nonempty tests without
    /// repeats, and every outcome in some test. Repeated tests are merged.
    pub fn new(spec: &TestSpaceSpec) -> Result<Self, TestSpaceError> {
        let mut index = HashMap::new();
        for (i, o) in spec.outcomes.iter().enumerate() {
            if index.insert(o.clone(), i).is_some() {
                return Err(TestSpaceError::DuplicateOutcome(o.clone()));
            }
        }
        let mut tests: Vec<Event> = Vec::new();
        for (t, test) in spec.tests.iter().enumerate() {
            if test.is_empty() {
                return Err(TestSpaceError::EmptyTest(t));
            }
            let mut ev = test
                .iter()
                .map(|o| {
                    index
                        .get(o)
                        .copied()
                        .ok_or_else(|| TestSpaceError::UnknownOutcome(o.clone()))
                })
                .collect::<Result<Event, _>>()?;
            ev.sort_unstable();
            let len = ev.len();
            ev.dedup();
            if ev.len() != len {
                return Err(TestSpaceError::RepeatedOutcome(t));
            }
            if !tests.contains(&ev) {
                tests.push(ev);
            }
        }
        for (i, o) in spec.outcomes.iter().enumerate() {
            if !tests.iter().any(|t| t.binary_search(&i).is_ok()) {
                return Err(TestSpaceError::Uncovered(o.clone()));
            }
        }
        Ok(TestSpace {
            outcomes: spec.outcomes.clone(),
            index,
            tests,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, TestSpaceError> {
        let spec: TestSpaceSpec =
            serde_json::from_str(text).map_err(|e| TestSpaceError::Parse(e.to_string()))?;
        Self::new(&spec)
    }

    pub fn to_spec(&self) -> TestSpaceSpec {
        TestSpaceSpec {
            outcomes: self.outcomes.clone(),
            tests: self.tests.iter().map(|t| self.names(t)).collect(),
        }
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn tests(&self) -> &[Event] {
        &self.tests
    }

    pub fn names(&self, event: &[usize]) -> Vec<String> {
        event.iter().map(|&i| self.outcomes[i].clone()).collect()
    }

    /// Outcome labels to a sorted event; not checked for being an event.
    pub fn subset(&self, labels: &[&str]) -> Result<Event, TestSpaceError> {
        let mut ev = labels
            .iter()
            .map(|l| {
                self.index
                    .get(*l)
                    .copied()
                    .ok_or_else(|| TestSpaceError::UnknownOutcome(l.to_string()))
            })
            .collect::<Result<Event, _>>()?;
        ev.sort_unstable();
        ev.dedup();
        Ok(ev)
    }

    pub fn is_event(&self, a: &[usize]) -> bool {
        self.tests.iter().any(|t| is_subset(a, t))
    }

    pub fn is_test(&self, a: &[usize]) -> bool {
        self.tests.iter().any(|t| t.as_slice() == a)
    }

    /// All events in (size, lexicographic) order.
    pub fn events(&self) -> Result<Vec<Event>, TestSpaceError> {
        let mut all = BTreeSet::new();
        for t in &self.tests {
            if t.len() > MAX_TEST_SIZE {
                return Err(TestSpaceError::TooLarge(format!(
                    "test with {} outcomes (limit {MAX_TEST_SIZE})",
                    t.len()
                )));
            }
            for mask in 0u32..1 << t.len() {
                let ev: Event = t
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect();
                all.insert(ev);
            }
        }
        let mut out: Vec<Event> = all.into_iter().collect();
        out.sort_by(event_order);
        Ok(out)
    }

    /// `{T \ A : T ⊇ A a test}`, sorted.
    pub fn complements(&self, a: &[usize]) -> Vec<Event> {
        let mut out: Vec<Event> = self
            .tests
            .iter()
            .filter(|t| is_subset(a, t))
            .map(|t| {
                t.iter()
                    .copied()
                    .filter(|x| a.binary_search(x).is_err())
                    .collect()
            })
            .collect();
        out.sort_by(event_order);
        out.dedup();
        out
    }

    fn require_event(&self, a: &[usize]) -> Result<(), TestSpaceError> {
        if self.is_event(a) {
            Ok(())
        } else {
            Err(TestSpaceError::NotAnEvent(self.names(a)))
        }
    }

    pub fn event_relations(
        &self,
        a: &[usize],
        b: &[usize],
    ) -> Result<EventRelations, TestSpaceError> {
        self.require_event(a)?;
        self.require_event(b)?;
        let dis = disjoint(a, b);
        let u = union(a, b);
        let ca = self.complements(a);
        let cb = self.complements(b);
        Ok(EventRelations {
            orthogonal: dis && self.is_event(&u),
            complementary: dis && self.is_test(&u),
            perspective: ca.iter().any(|c| cb.contains(c)),
        })
    }

    /// Precomputed events and complements, the basis for the remaining
    /// queries.
    pub fn structure(&self) -> Result<EventStructure, TestSpaceError> {
        let events = self.events()?;
        let position: HashMap<Event, usize> = events
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let complements = events
            .iter()
            .map(|e| self.complements(e).iter().map(|c| position[c]).collect())
            .collect();
        Ok(EventStructure {
            events,
            position,
            complements,
        })
    }

    /// `Ok(None)` when algebraic; otherwise the first `(A, B, C)` in event
    /// order with `A ∼ B` and `C` complementary to exactly one of them.
    pub fn algebraicity_witness(&self) -> Result<Option<(Event, Event, Event)>, TestSpaceError> {
        Ok(self.structure()?.algebraicity_witness())
    }

    pub fn is_algebraic(&self) -> Result<bool, TestSpaceError> {
        Ok(self.algebraicity_witness()?.is_none())
    }

    /// The quotient of the events by perspectivity, as an orthoalgebra.
    pub fn logic(&self) -> Result<LogicQuotient, TestSpaceError> {
        let st = self.structure()?;
        if let Some((a, b, c)) = st.algebraicity_witness() {
            return Err(TestSpaceError::NotAlgebraic {
                a: self.names(&a),
                b: self.names(&b),
                c: self.names(&c),
            });
        }
        let n = st.events.len();
        // Union-find over "share a complement".
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let mut sharing: HashMap<usize, Vec<usize>> = HashMap::new();
        for (e, comps) in st.complements.iter().enumerate() {
            for &c in comps {
                sharing.entry(c).or_default().push(e);
            }
        }
        let mut keys: Vec<usize> = sharing.keys().copied().collect();
        keys.sort_unstable();
        for c in keys {
            let group = &sharing[&c];
            for &e in &group[1..] {
                let (ra, rb) = (find(&mut parent, group[0]), find(&mut parent, e));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        // Classes in order of their least event; the empty event comes first.
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut root_class: HashMap<usize, usize> = HashMap::new();
        for e in 0..n {
            let r = find(&mut parent, e);
            let k = *root_class.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[k].push(e);
            class_of[e] = k;
        }
        for class in &classes {
            for (i, &a) in class.iter().enumerate() {
                for &b in &class[i + 1..] {
                    if !st.perspective(a, b) {
                        return Err(TestSpaceError::PerspectivityNotTransitive {
                            a: self.names(&st.events[a]),
                            b: self.names(&st.events[b]),
                        });
                    }
                }
            }
        }

        let m = classes.len();
        let mut table: Vec<Option<usize>> = vec![None; m * m];
        for (u, ev) in st.events.iter().enumerate() {
            for mask in 0u32..1 << ev.len() {
                let (a, b): (Event, Event) = (0..ev.len()).partition(|i| mask >> i & 1 == 1);
                let a: Event = a.into_iter().map(|i| ev[i]).collect();
                let b: Event = b.into_iter().map(|i| ev[i]).collect();
                let (ka, kb) = (class_of[st.position[&a]], class_of[st.position[&b]]);
                let slot = &mut table[ka * m + kb];
                match *slot {
                    None => *slot = Some(class_of[u]),
                    Some(k) if k == class_of[u] => {}
                    Some(_) => {
                        return Err(TestSpaceError::SumNotWellDefined {
                            a: self.names(&a),
                            b: self.names(&b),
                        })
                    }
                }
            }
        }

        let zero_class = class_of[st.position[&Vec::new()]];
        let unit_class = class_of[st.position[&self.tests[0]]];
        let mut labels: Vec<String> = Vec::with_capacity(m);
        for (k, class) in classes.iter().enumerate() {
            let label = if k == zero_class {
                "0".to_string()
            } else if k == unit_class {
                "1".to_string()
            } else {
                let plain = self.names(&st.events[class[0]]).join("+");
                if plain == "0" || plain == "1" || labels.contains(&plain) {
                    format!("{{{plain}}}")
                } else {
                    plain
                }
            };
            labels.push(label);
        }
        let mut sum = Vec::new();
        for i in 0..m {
            for j in i..m {
                if let Some(k) = table[i * m + j] {
                    sum.push([labels[i].clone(), labels[j].clone(), labels[k].clone()]);
                }
            }
        }
        let spec = OaSpec {
            elements: labels,
            zero: "0".into(),
            one: "1".into(),
            sum,
        };
        let oa = FiniteOrthoalgebra::build(&spec)?;
        Ok(LogicQuotient {
            events: st.events,
            classes,
            class_of,
            oa,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventRelations {
    pub orthogonal: bool,
    pub complementary: bool,
    pub perspective: bool,
}

/// All events of a test space with their complements, indexed in
/// (size, lexicographic) order.
#[derive(Debug, Clone)]
pub struct EventStructure {
    pub events: Vec<Event>,
    position: HashMap<Event, usize>,
    complements: Vec<Vec<usize>>,
}

impl EventStructure {
    pub fn position(&self, e: &[usize]) -> Option<usize> {
        self.position.get(e).copied()
    }

    /// Indices of the complements of event `i`, ascending.
    pub fn complements(&self, i: usize) -> &[usize] {
        &self.complements[i]
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.events[i], &self.events[j]);
        disjoint(a, b) && self.position.contains_key(&union(a, b))
    }

    pub fn complementary(&self, i: usize, j: usize) -> bool {
        self.complements[i].contains(&j)
    }

    pub fn perspective(&self, i: usize, j: usize) -> bool {
        self.complements[i]
            .iter()
            .any(|c| self.complements[j].contains(c))
    }

    /// The event `A ∪ B` for orthogonal `A`, `B`.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (&self.events[i], &self.events[j]);
        if !disjoint(a, b) {
            return None;
        }
        self.position(&union(a, b))
    }

    fn algebraicity_witness(&self) -> Option<(Event, Event, Event)> {
        for a in 0..self.events.len() {
            for b in 0..self.events.len() {
                if a == b || !self.perspective(a, b) {
                    continue;
                }
                let (ca, cb) = (&self.complements[a], &self.complements[b]);
                if ca != cb {
                    let c = ca
                        .iter()
                        .filter(|c| !cb.contains(c))
                        .chain(cb.iter().filter(|c| !ca.contains(c)))
                        .min()
                        .copied()
                        .expect("complement sets differ");
                    return Some((
                        self.events[a].clone(),
                        self.events[b].clone(),
                        self.events[c].clone(),
                    ));
                }
            }
        }
        None
    }
}

/// The logic of an algebraic test space.
#[derive(Debug, Clone)]
pub struct LogicQuotient {
    /// All events in (size, lexicographic) order.
    pub events: Vec<Event>,
    /// Event indices per class; class `k` is element `k` of `oa`.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub oa: FiniteOrthoalgebra,
}

/// The test space of finite orthopartitions of the unit: outcomes are the
/// nonzero elements, tests the sets of them summing to 1.
pub fn canonical_testspace(l: &FiniteOrthoalgebra) -> Result<TestSpace, TestSpaceError> {
    if l.len() > MAX_CANONICAL_SIZE {
        return Err(TestSpaceError::TooLarge(format!(
            "canonical test space of a {}-element orthoalgebra (limit {MAX_CANONICAL_SIZE})",
            l.len()
        )));
    }
    let elems: Vec<Elem> = l.elements().filter(|&a| a != l.zero()).collect();
    let spec = TestSpaceSpec {
        outcomes: elems.iter().map(|&a| l.label(a).to_string()).collect(),
        tests: l
            .orthopartitions_of_unit()
            .iter()
            .map(|t| t.iter().map(|&a| l.label(a).to_string()).collect())
            .collect(),
    };
    TestSpace::new(&spec)
}

/// Outcome index of the canonical test space back to the element.
fn canonical_element(l: &FiniteOrthoalgebra, outcome: usize) -> Elem {
    if outcome < l.zero() {
        outcome
    } else {
        outcome + 1
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTrip {
    /// `(class label, element label)` for every class of the logic.
    pub pairs: Vec<(String, String)>,
    #[serde(skip)]
    pub map: Vec<Elem>,
}

/// Builds the logic of the canonical test space of `l` and checks that
/// `p(A) ↦ ⊕A` is an isomorphism onto `l`.
pub fn representation_roundtrip(l: &FiniteOrthoalgebra) -> Result<RoundTrip, TestSpaceError> {
    let ts = canonical_testspace(l)?;
    let logic = ts.logic()?;
    let mut map = Vec::with_capacity(logic.classes.len());
    for (k, class) in logic.classes.iter().enumerate() {
        let mut value = None;
        for &e in class {
            let s = l.osum(logic.events[e].iter().map(|&o| canonical_element(l, o)));
            match (s, value) {
                (None, _) => {
                    return Err(TestSpaceError::RoundTripFailure(logic.oa.label(k).into()))
                }
                (Some(s), None) => value = Some(s),
                (Some(s), Some(v)) if s != v => {
                    return Err(TestSpaceError::RoundTripFailure(logic.oa.label(k).into()))
                }
                _ => {}
            }
        }
        map.push(value.expect("classes are nonempty"));
    }
    if !check_isomorphism(&logic.oa, l, &map) {
        let bad = (0..map.len())
            .find(|&k| map[..k].contains(&map[k]))
            .unwrap_or(0);
        return Err(TestSpaceError::RoundTripFailure(logic.oa.label(bad).into()));
    }
    let pairs = map
        .iter()
        .enumerate()
        .map(|(k, &a)| (logic.oa.label(k).to_string(), l.label(a).to_string()))
        .collect();
    Ok(RoundTrip { pairs, map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(outcomes: &[&str], tests: &[&[&str]]) -> TestSpace {
        TestSpace::new(&TestSpaceSpec {
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
            tests: tests
                .iter()
                .map(|t| t.iter().map(|s| s.to_string()).collect())
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn single_test_relations() {
        let t = space(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let a = t.subset(&["a"]).unwrap();
        let b = t.subset(&["b"]).unwrap();
        let bc = t.subset(&["b", "c"]).unwrap();
        let r = t.event_relations(&a, &b).unwrap();
        assert!(r.orthogonal && !r.complementary);
        assert!(t.event_relations(&a, &bc).unwrap().complementary);
        assert_eq!(t.events().unwrap().len(), 8);
        assert!(t.is_algebraic().unwrap());
    }

    #[test]
    fn invalid_spaces() {
        let spec = |o: &[&str], ts: &[&[&str]]| TestSpaceSpec {
            outcomes: o.iter().map(|s| s.to_string()).collect(),
            tests: ts
                .iter()
                .map(|t| t.iter().map(|s| s.to_string()).collect())
                .collect(),
        };
        assert!(matches!(
            TestSpace::new(&spec(&["a", "b"], &[&["a"]])),
            Err(TestSpaceError::Uncovered(_))
        ));
        assert!(matches!(
            TestSpace::new(&spec(&["a"], &[&["a"], &[]])),
            Err(TestSpaceError::EmptyTest(1))
        ));
        assert!(matches!(
            TestSpace::new(&spec(&["a"], &[&["z"]])),
            Err(TestSpaceError::UnknownOutcome(_))
        ));
        assert!(matches!(
            TestSpace::new(&spec(&["a", "a"], &[&["a"]])),
            Err(TestSpaceError::DuplicateOutcome(_))
        ));
    }

    #[test]
    fn non_events_are_rejected() {
        let t = space(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]);
        let ac = t.subset(&["a", "c"]).unwrap();
        let a = t.subset(&["a"]).unwrap();
        assert!(matches!(
            t.event_relations(&ac, &a),
            Err(TestSpaceError::NotAnEvent(_))
        ));
    }

    #[test]
    fn tests_are_perspective() {
        let t = space(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]);
        let r = t.event_relations(&t.tests()[0], &t.tests()[1]).unwrap();
        assert!(r.perspective && !r.orthogonal);
    }

    #[test]
    fn chain_is_not_algebraic() {
        let t = space(
            &["a", "b", "c", "d"],
            &[&["a", "b"], &["b", "c"], &["c", "d"]],
        );
        let (a, b, c) = t.algebraicity_witness().unwrap().unwrap();
        assert_eq!(
            (t.names(&a), t.names(&b), t.names(&c)),
            (
                vec!["a".to_string()],
                vec!["c".to_string()],
                vec!["d".to_string()]
            )
        );
        assert!(matches!(
            t.logic(),
            Err(TestSpaceError::NotAlgebraic { .. })
        ));
    }

    #[test]
    fn logic_of_two_disjoint_tests_is_mo2() {
        let t = space(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]);
        let logic = t.logic().unwrap();
        assert_eq!(logic.oa.len(), 6);
        let mo2 = FiniteOrthoalgebra::horizontal_sum(2).unwrap();
        assert!(logic.oa.is_isomorphic(&mo2).is_some());
        assert_eq!(logic.oa.labels(), ["0", "a", "b", "c", "d", "1"]);
    }

    #[test]
    fn canonical_spaces() {
        let b2 = FiniteOrthoalgebra::boolean(2).unwrap();
        let t = canonical_testspace(&b2).unwrap();
        assert_eq!(t.outcomes(), ["a", "b", "1"]);
        assert_eq!(
            t.to_spec().tests,
            vec![vec!["1".to_string()], vec!["a".into(), "b".into()]]
        );
        let b1 = FiniteOrthoalgebra::boolean(1).unwrap();
        assert_eq!(
            canonical_testspace(&b1).unwrap().to_spec().tests,
            vec![vec!["1".to_string()]]
        );
    }

    #[test]
    fn roundtrip_small_cases() {
        for l in [
            FiniteOrthoalgebra::boolean(1).unwrap(),
            FiniteOrthoalgebra::boolean(2).unwrap(),
            FiniteOrthoalgebra::horizontal_sum(3).unwrap(),
        ] {
            let rt = representation_roundtrip(&l).unwrap();
            assert_eq!(rt.map.len(), l.len());
        }
    }
}
