//! Finite topological spaces and the decision procedures run on finite
//! orthoalgebras and test spaces.
//!
//! A finite topology is determined by the minimal open neighbourhood
//! `N_x` of each point (the intersection of all opens containing `x`); a
//! set is open iff it contains `N_x` with each of its points. Every check
//! below that quantifies over opens commutes with unions, so it only has to
//! look at the neighbourhoods, and the (size, lexicographic) least failing
//! open is always one of them.

mod toa;
mod vietoris;

pub use toa::{
    check_toa, downset, is_stably_ordered, lemma37_check, mackey_relation_closure_witness,
    mackey_relation_identity_holds, meet_join_continuity, opens_osum, totally_nonorthogonal_cover,
    upset, Lemma37Report, MeetJoinContinuity, StableOrder, ToaReport, ToaWitnesses,
};
pub use vietoris::{is_stably_complemented, vietoris, vietoris_of_events, StableComplementation};

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default limit on the number of opens materialised by [`FiniteTopology::opens`].
pub const MAX_OPENS: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoError {
    #[error("point {index} out of range for a space of {n} points")]
    OutOfRange { index: usize, n: usize },
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("more than {0} open sets")]
    TooManyOpens(usize),
    #[error("topology has {got} points but the carrier has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("family member {0:?} is not closed")]
    NotClosedMember(Vec<usize>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    TestSpace(#[from] crate::testspace::TestSpaceError),
}

/// A topology on `{0, …, n−1}` stored by minimal neighbourhoods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    n: usize,
    nbhd: Vec<FixedBitSet>,
}

/// `(size, lexicographic)` order on subsets.
pub fn subset_order(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    a.count_ones(..)
        .cmp(&b.count_ones(..))
        .then_with(|| a.ones().cmp(b.ones()))
}

pub fn bitset(n: usize, items: &[usize]) -> Result<FixedBitSet, TopoError> {
    let mut s = FixedBitSet::with_capacity(n);
    for &i in items {
        if i >= n {
            return Err(TopoError::OutOfRange { index: i, n });
        }
        s.insert(i);
    }
    Ok(s)
}

pub fn members(s: &FixedBitSet) -> Vec<usize> {
    s.ones().collect()
}

impl FiniteTopology {
    /// The topology generated by a subbasis: `N_x` is the intersection of
    /// the subbasis sets containing `x` (the whole space when there are none).
    pub fn from_subbasis(n: usize, subbasis: &[Vec<usize>]) -> Result<Self, TopoError> {
        let sets = subbasis
            .iter()
            .map(|s| bitset(n, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_subbasis_sets(n, &sets))
    }

    pub fn from_subbasis_sets(n: usize, subbasis: &[FixedBitSet]) -> Self {
        let mut full = FixedBitSet::with_capacity(n);
        full.insert_range(..);
        let nbhd = (0..n)
            .map(|x| {
                let mut acc = full.clone();
                for s in subbasis.iter().filter(|s| s.contains(x)) {
                    acc.intersect_with(s);
                }
                acc
            })
            .collect();
        FiniteTopology { n, nbhd }
    }

    /// Validates an explicit family of opens (contains ∅ and the whole
    /// space, closed under pairwise unions and intersections).
    pub fn from_opens(n: usize, family: &[Vec<usize>]) -> Result<Self, TopoError> {
        let sets = family
            .iter()
            .map(|s| bitset(n, s))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(problem) = topology_violation(n, &sets) {
            return Err(TopoError::NotATopology(problem));
        }
        Ok(Self::from_subbasis_sets(n, &sets))
    }

    pub fn discrete(n: usize) -> Self {
        let nbhd = (0..n)
            .map(|x| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(x);
                s
            })
            .collect();
        FiniteTopology { n, nbhd }
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::from_subbasis_sets(n, &[])
    }

    /// Topology generated by `k` random subbasis sets, each point included
    /// with probability 1/2.
    pub fn random<R: Rng>(n: usize, k: usize, rng: &mut R) -> Self {
        let sets: Vec<FixedBitSet> = (0..k)
            .map(|_| {
                let mut s = FixedBitSet::with_capacity(n);
                for x in 0..n {
                    if rng.random_bool(0.5) {
                        s.insert(x);
                    }
                }
                s
            })
            .collect();
        Self::from_subbasis_sets(n, &sets)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Minimal open neighbourhood of `x`.
    pub fn nbhd(&self, x: usize) -> &FixedBitSet {
        &self.nbhd[x]
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.n)
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn is_open(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn is_closed(&self, s: &FixedBitSet) -> bool {
        let mut c = self.full_set();
        c.difference_with(s);
        self.is_open(&c)
    }

    /// Smallest closed superset: the points whose neighbourhood meets `s`.
    pub fn closure(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for x in 0..self.n {
            if !self.nbhd[x].is_disjoint(s) {
                out.insert(x);
            }
        }
        out
    }

    pub fn interior(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for x in s.ones() {
            if self.nbhd[x].is_subset(s) {
                out.insert(x);
            }
        }
        out
    }

    /// Distinct minimal neighbourhoods in (size, lexicographic) order.
    pub fn neighbourhoods(&self) -> Vec<FixedBitSet> {
        let mut out = self.nbhd.clone();
        out.sort_by(subset_order);
        out.dedup();
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.nbhd.iter().all(|s| s.count_ones(..) == 1)
    }

    /// Two distinct points that no pair of disjoint opens separates, least
    /// in lexicographic order.
    pub fn hausdorff_witness(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| (x + 1..self.n).map(move |y| (x, y)))
            .find(|&(x, y)| !self.nbhd[x].is_disjoint(&self.nbhd[y]))
    }

    /// Every open set, in (size, lexicographic) order.
    pub fn opens(&self) -> Result<Vec<FixedBitSet>, TopoError> {
        self.opens_capped(MAX_OPENS)
    }

    pub fn opens_capped(&self, limit: usize) -> Result<Vec<FixedBitSet>, TopoError> {
        let mut all = std::collections::BTreeSet::new();
        all.insert(members(&self.empty_set()));
        for n in self.neighbourhoods() {
            let added: Vec<Vec<usize>> = all
                .iter()
                .map(|o| {
                    let mut u = bitset(self.n, o).expect("in range");
                    u.union_with(&n);
                    members(&u)
                })
                .collect();
            all.extend(added);
            if all.len() > limit {
                return Err(TopoError::TooManyOpens(limit));
            }
        }
        let mut out: Vec<FixedBitSet> = all
            .iter()
            .map(|o| bitset(self.n, o).expect("in range"))
            .collect();
        out.sort_by(subset_order);
        Ok(out)
    }

    /// The product space; point `(x, y)` has index `x * other.len() + y`.
    pub fn product(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n, other.n);
        let mut nbhd = Vec::with_capacity(n1 * n2);
        for x in 0..n1 {
            for y in 0..n2 {
                let mut s = FixedBitSet::with_capacity(n1 * n2);
                for u in self.nbhd[x].ones() {
                    for v in other.nbhd[y].ones() {
                        s.insert(u * n2 + v);
                    }
                }
                nbhd.push(s);
            }
        }
        FiniteTopology { n: n1 * n2, nbhd }
    }

    /// The subspace on `dom`, re-indexed in increasing order.
    pub fn subspace(&self, dom: &FixedBitSet) -> Self {
        let points: Vec<usize> = dom.ones().collect();
        let m = points.len();
        let nbhd = points
            .iter()
            .map(|&x| {
                let mut s = FixedBitSet::with_capacity(m);
                for (i, &p) in points.iter().enumerate() {
                    if self.nbhd[x].contains(p) {
                        s.insert(i);
                    }
                }
                s
            })
            .collect();
        FiniteTopology { n: m, nbhd }
    }

    /// A point of the closure of `r` outside `r`, least by index, or `None`
    /// when `r` is closed.
    pub fn closure_witness(&self, r: &FixedBitSet) -> Option<usize> {
        (0..self.n).find(|&x| !r.contains(x) && !self.nbhd[x].is_disjoint(r))
    }

    pub fn to_spec(&self) -> TopologySpec {
        TopologySpec {
            n: Some(self.n),
            opens: None,
            subbasis: Some(self.neighbourhoods().iter().map(members).collect()),
        }
    }

    pub fn with_size(&self, n: usize) -> Result<&Self, TopoError> {
        if self.n != n {
            return Err(TopoError::SizeMismatch {
                expected: n,
                got: self.n,
            });
        }
        Ok(self)
    }
}

/// `true` when `family` is a topology on `{0, …, n−1}`.
pub fn is_topology(n: usize, family: &[Vec<usize>]) -> bool {
    match family
        .iter()
        .map(|s| bitset(n, s))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(sets) => topology_violation(n, &sets).is_none(),
        Err(_) => false,
    }
}

fn topology_violation(n: usize, sets: &[FixedBitSet]) -> Option<String> {
    let mut sorted: Vec<FixedBitSet> = sets.to_vec();
    sorted.sort_by(subset_order);
    sorted.dedup();
    let has = |s: &FixedBitSet| sorted.binary_search_by(|o| subset_order(o, s)).is_ok();
    let empty = FixedBitSet::with_capacity(n);
    let mut full = empty.clone();
    full.insert_range(..);
    if !has(&empty) {
        return Some("missing the empty set".into());
    }
    if !has(&full) {
        return Some("missing the whole space".into());
    }
    for a in &sorted {
        for b in &sorted {
            let mut u = a.clone();
            u.union_with(b);
            if !has(&u) {
                return Some(format!(
                    "union of {:?} and {:?} missing",
                    members(a),
                    members(b)
                ));
            }
            let mut i = a.clone();
            i.intersect_with(b);
            if !has(&i) {
                return Some(format!(
                    "intersection of {:?} and {:?} missing",
                    members(a),
                    members(b)
                ));
            }
        }
    }
    None
}

/// Topology file format: either `{"n": k, "opens": [...]}` or
/// `{"subbasis": [...]}` (optionally with `"n"`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subbasis: Option<Vec<Vec<usize>>>,
}

impl TopologySpec {
    pub fn from_json(text: &str) -> Result<Self, TopoError> {
        serde_json::from_str(text).map_err(|e| TopoError::Parse(e.to_string()))
    }

    /// Builds the topology on a carrier of `carrier` points.
    pub fn build(&self, carrier: usize) -> Result<FiniteTopology, TopoError> {
        if let Some(n) = self.n {
            if n != carrier {
                return Err(TopoError::SizeMismatch {
                    expected: carrier,
                    got: n,
                });
            }
        }
        match (&self.opens, &self.subbasis) {
            (Some(opens), None) => FiniteTopology::from_opens(carrier, opens),
            (None, Some(sub)) => FiniteTopology::from_subbasis(carrier, sub),
            (None, None) => Err(TopoError::Parse("need \"opens\" or \"subbasis\"".into())),
            (Some(_), Some(_)) => Err(TopoError::Parse(
                "give only one of \"opens\" and \"subbasis\"".into(),
            )),
        }
    }
}

/// Continuity of the partial map `f` (defined where `f[x]` is `Some`) from
/// the subspace of `dom_space` on its domain into `cod_space`.
///
/// On failure returns the least neighbourhood `N_y` of the codomain whose
/// preimage is not relatively open.
pub fn continuity_witness(
    dom_space: &FiniteTopology,
    cod_space: &FiniteTopology,
    f: &[Option<usize>],
) -> Option<FixedBitSet> {
    let mut failing: Vec<FixedBitSet> = Vec::new();
    for x in 0..dom_space.len() {
        let Some(fx) = f[x] else { continue };
        let target = cod_space.nbhd(fx);
        let broken = dom_space
            .nbhd(x)
            .ones()
            .any(|z| f[z].is_some_and(|fz| !target.contains(fz)));
        if broken {
            failing.push(target.clone());
        }
    }
    failing.into_iter().min_by(subset_order)
}

/// Closedness of a relation given as a predicate on points of a product of
/// spaces; returns the lexicographically least point of the closure outside
/// the relation.
pub fn product_closure_witness(
    spaces: &[&FiniteTopology],
    members: &[Vec<usize>],
    contains: impl Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let mut point = vec![0usize; spaces.len()];
    if spaces.iter().any(|s| s.is_empty()) {
        return None;
    }
    loop {
        if !contains(&point) {
            let meets = members.iter().any(|m| {
                m.iter()
                    .zip(&point)
                    .zip(spaces)
                    .all(|((&mi, &pi), s)| s.nbhd(pi).contains(mi))
            });
            if meets {
                return Some(point);
            }
        }
        let mut i = spaces.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            point[i] += 1;
            if point[i] < spaces[i].len() {
                break;
            }
            point[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subbasis_closure() {
        let t = FiniteTopology::from_subbasis(3, &[]).unwrap();
        assert_eq!(t.opens().unwrap().len(), 2);
        let d = FiniteTopology::from_subbasis(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(d.opens().unwrap().len(), 8);
        assert!(d.is_discrete());
        let t = FiniteTopology::from_subbasis(4, &[vec![1]]).unwrap();
        let opens: Vec<Vec<usize>> = t.opens().unwrap().iter().map(members).collect();
        assert_eq!(opens, vec![vec![], vec![1], vec![0, 1, 2, 3]]);
        assert!(matches!(
            FiniteTopology::from_subbasis(2, &[vec![5]]),
            Err(TopoError::OutOfRange { index: 5, n: 2 })
        ));
    }

    #[test]
    fn explicit_families() {
        assert!(is_topology(2, &[vec![], vec![0], vec![0, 1]]));
        assert!(!is_topology(2, &[vec![], vec![0], vec![1]]));
        assert!(!is_topology(2, &[vec![0], vec![0, 1]]));
        let t =
            FiniteTopology::from_opens(3, &[vec![], vec![0], vec![1], vec![0, 1], vec![0, 1, 2]])
                .unwrap();
        assert_eq!(members(t.nbhd(2)), vec![0, 1, 2]);
        assert_eq!(t.opens().unwrap().len(), 5);
    }

    #[test]
    fn closures() {
        let d = FiniteTopology::discrete(3);
        let s = bitset(3, &[1]).unwrap();
        assert_eq!(d.closure(&s), s);
        let i = FiniteTopology::indiscrete(3);
        assert_eq!(i.closure(&s), i.full_set());
        let t = FiniteTopology::from_subbasis(4, &[vec![1]]).unwrap();
        assert_eq!(members(&t.closure(&s)), vec![0, 1, 2, 3]);
        let rest = bitset(4, &[0, 2, 3]).unwrap();
        assert!(t.is_closed(&rest));
    }

    #[test]
    fn product_neighbourhoods_are_boxes() {
        let t = FiniteTopology::from_subbasis(2, &[vec![0]]).unwrap();
        let p = t.product(&t);
        assert_eq!(members(p.nbhd(0)), vec![0]);
        assert_eq!(members(p.nbhd(3)), vec![0, 1, 2, 3]);
        assert_eq!(members(p.nbhd(1)), vec![0, 1]);
    }

    #[test]
    fn identity_is_continuous() {
        let t = FiniteTopology::from_subbasis(3, &[vec![0, 1]]).unwrap();
        let id: Vec<Option<usize>> = (0..3).map(Some).collect();
        assert!(continuity_witness(&t, &t, &id).is_none());
        let d = FiniteTopology::discrete(3);
        let w = continuity_witness(&t, &d, &id).unwrap();
        assert_eq!(members(&w), vec![0]);
    }

    #[test]
    fn product_closure_matches_materialised_product() {
        let t = FiniteTopology::from_subbasis(3, &[vec![0], vec![0, 1]]).unwrap();
        let p = t.product(&t);
        let rel = [vec![1, 0], vec![2, 2]];
        let mut r = p.empty_set();
        for m in &rel {
            r.insert(m[0] * 3 + m[1]);
        }
        let direct = p.closure_witness(&r).map(|i| vec![i / 3, i % 3]);
        let generic = product_closure_witness(&[&t, &t], &rel, |x| rel.iter().any(|m| m == x));
        assert_eq!(direct, generic);
        assert_eq!(generic, Some(vec![1, 1]));
    }

    #[test]
    fn spec_round_trip() {
        let s = TopologySpec::from_json(r#"{"subbasis": [[1]]}"#).unwrap();
        let t = s.build(4).unwrap();
        assert_eq!(t.to_spec().build(4).unwrap(), t);
        let s = TopologySpec::from_json(r#"{"n": 2, "opens": [[], [0, 1]]}"#).unwrap();
        assert!(s.build(3).is_err());
        assert_eq!(s.build(2).unwrap(), FiniteTopology::indiscrete(2));
    }
}
