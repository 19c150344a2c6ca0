use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{continuity_witness, product_closure_witness, FiniteTopology, TopoError};
use crate::oa::{Elem, FiniteOrthoalgebra};

fn names(l: &FiniteOrthoalgebra, s: &FixedBitSet) -> Vec<String> {
    s.ones().map(|x| l.label(x).to_string()).collect()
}

fn pair_names(l: &FiniteOrthoalgebra, n: usize, point: usize) -> (String, String) {
    (
        l.label(point / n).to_string(),
        l.label(point % n).to_string(),
    )
}

fn relation(l: &FiniteOrthoalgebra, pred: impl Fn(Elem, Elem) -> bool) -> FixedBitSet {
    let n = l.len();
    let mut r = FixedBitSet::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            if pred(a, b) {
                r.insert(a * n + b);
            }
        }
    }
    r
}

fn binary_map(l: &FiniteOrthoalgebra, f: impl Fn(Elem, Elem) -> Option<Elem>) -> Vec<Option<Elem>> {
    let n = l.len();
    (0..n * n).map(|p| f(p / n, p % n)).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ToaWitnesses {
    /// A pair in the closure of `⊥` that is not orthogonal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perp: Option<(String, String)>,
    /// An open whose preimage under `⊕` is not open in `⊥`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oplus: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comp: Option<Vec<String>>,
    /// Two points without disjoint neighbourhoods.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hausdorff: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ominus: Option<Vec<String>>,
    /// An open whose upper set is not open.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_order: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToaReport {
    pub perp_closed: bool,
    pub oplus_continuous: bool,
    pub comp_continuous: bool,
    pub hausdorff: bool,
    pub order_closed: bool,
    pub ominus_continuous: bool,
    pub stably_ordered: bool,
    pub witnesses: ToaWitnesses,
}

impl ToaReport {
    /// The three defining conditions of a topological orthoalgebra.
    pub fn is_toa(&self) -> bool {
        self.perp_closed && self.oplus_continuous && self.comp_continuous
    }
}

/// Decides each topological condition for `(l, t)`.
///
/// When `⊥` is closed and `⊕`, `'` are continuous, the order must be closed,
/// the space Hausdorff and `⊖` continuous; a failure of any of these is
/// reported as an internal inconsistency.
pub fn check_toa(l: &FiniteOrthoalgebra, t: &FiniteTopology) -> Result<ToaReport, TopoError> {
    let n = l.len();
    t.with_size(n)?;
    let sq = t.product(t);

    let perp = relation(l, |a, b| l.perp(a, b));
    let perp_w = sq.closure_witness(&perp).map(|p| pair_names(l, n, p));
    let order = relation(l, |a, b| l.leq(a, b));
    let order_w = sq.closure_witness(&order).map(|p| pair_names(l, n, p));

    let oplus_w = continuity_witness(&sq, t, &binary_map(l, |a, b| l.sum(a, b)));
    let comp: Vec<Option<Elem>> = l.elements().map(|a| Some(l.complement(a))).collect();
    let comp_w = continuity_witness(t, t, &comp);
    let ominus_w = continuity_witness(&sq, t, &binary_map(l, |a, b| l.ominus(b, a).ok()));
    let haus_w = t
        .hausdorff_witness()
        .map(|(x, y)| (l.label(x).to_string(), l.label(y).to_string()));
    let stable = is_stably_ordered(l, t)?;

    let report = ToaReport {
        perp_closed: perp_w.is_none(),
        oplus_continuous: oplus_w.is_none(),
        comp_continuous: comp_w.is_none(),
        hausdorff: haus_w.is_none(),
        order_closed: order_w.is_none(),
        ominus_continuous: ominus_w.is_none(),
        stably_ordered: stable.stably_ordered,
        witnesses: ToaWitnesses {
            perp: perp_w,
            oplus: oplus_w.map(|s| names(l, &s)),
            comp: comp_w.map(|s| names(l, &s)),
            hausdorff: haus_w,
            order: order_w,
            ominus: ominus_w.map(|s| names(l, &s)),
            stable_order: stable.witness,
        },
    };
    if report.hausdorff != t.is_discrete() {
        return Err(TopoError::InternalInconsistency(
            "finite Hausdorff space that is not discrete".into(),
        ));
    }
    if report.is_toa() && !(report.order_closed && report.hausdorff && report.ominus_continuous) {
        return Err(TopoError::InternalInconsistency(format!(
            "topological orthoalgebra with order_closed={}, hausdorff={}, ominus_continuous={}",
            report.order_closed, report.hausdorff, report.ominus_continuous
        )));
    }
    Ok(report)
}

/// `{b : a ≤ b for some a ∈ s}`.
pub fn upset(l: &FiniteOrthoalgebra, s: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(l.len());
    for a in s.ones() {
        out.union_with(l.up_set(a));
    }
    out
}

/// `{b : b ≤ a for some a ∈ s}`.
pub fn downset(l: &FiniteOrthoalgebra, s: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(l.len());
    for a in s.ones() {
        out.union_with(l.down_set(a));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableOrder {
    pub stably_ordered: bool,
    /// Least open `U` with `U↑` not open.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    /// `U↓` is open for every open `U`.
    pub downsets_open: bool,
    pub comp_continuous: bool,
}

/// Whether `U↑` is open for every open `U`.
///
/// When `'` is continuous this must agree with openness of every `U↓`;
/// disagreement is an internal inconsistency.
pub fn is_stably_ordered(
    l: &FiniteOrthoalgebra,
    t: &FiniteTopology,
) -> Result<StableOrder, TopoError> {
    t.with_size(l.len())?;
    let nbhds = t.neighbourhoods();
    let witness = nbhds.iter().find(|u| !t.is_open(&upset(l, u)));
    let downsets_open = nbhds.iter().all(|u| t.is_open(&downset(l, u)));
    let comp: Vec<Option<Elem>> = l.elements().map(|a| Some(l.complement(a))).collect();
    let comp_continuous = continuity_witness(t, t, &comp).is_none();
    let stably_ordered = witness.is_none();
    if comp_continuous && stably_ordered != downsets_open {
        return Err(TopoError::InternalInconsistency(format!(
            "' continuous but upper sets open = {stably_ordered}, lower sets open = {downsets_open}"
        )));
    }
    Ok(StableOrder {
        stably_ordered,
        witness: witness.map(|u| names(l, u)),
        downsets_open,
        comp_continuous,
    })
}

/// `U ⊕ V = {a ⊕ b : a ∈ U, b ∈ V, a ⊥ b}`.
pub fn opens_osum(l: &FiniteOrthoalgebra, u: &FixedBitSet, v: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(l.len());
    for a in u.ones() {
        for b in v.ones() {
            if let Some(s) = l.sum(a, b) {
                out.insert(s);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma37Report {
    pub stably_ordered: bool,
    /// `U ⊕ V` is open for all opens `U`, `V`.
    pub osums_open: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Vec<String>, Vec<String>)>,
    pub ominus_continuous: bool,
    pub equivalent: bool,
}

/// Compares stable order with openness of every `U ⊕ V`.
///
/// `U⊕L = U↑`, so open sums always imply stable order. The converse is
/// asserted only when `⊖ : ≤ → L` is continuous; without that hypothesis
/// finite counterexamples exist and the discrepancy is merely reported.
pub fn lemma37_check(
    l: &FiniteOrthoalgebra,
    t: &FiniteTopology,
) -> Result<Lemma37Report, TopoError> {
    let n = l.len();
    t.with_size(n)?;
    let stably_ordered = is_stably_ordered(l, t)?.stably_ordered;
    let nbhds = t.neighbourhoods();
    let witness = nbhds.iter().find_map(|u| {
        nbhds
            .iter()
            .find(|v| !t.is_open(&opens_osum(l, u, v)))
            .map(|v| (names(l, u), names(l, v)))
    });
    let osums_open = witness.is_none();
    let sq = t.product(t);
    let ominus_continuous =
        continuity_witness(&sq, t, &binary_map(l, |a, b| l.ominus(b, a).ok())).is_none();
    let equivalent = stably_ordered == osums_open;
    if osums_open && !stably_ordered {
        return Err(TopoError::InternalInconsistency(
            "every U ⊕ V open but some U↑ = U ⊕ L not open".into(),
        ));
    }
    if ominus_continuous && !equivalent {
        return Err(TopoError::InternalInconsistency(
            "⊖ continuous, stably ordered, yet some U ⊕ V is not open".into(),
        ));
    }
    Ok(Lemma37Report {
        stably_ordered,
        osums_open,
        witness,
        ominus_continuous,
        equivalent,
    })
}

/// A cover of `L \ {0}` by opens containing no orthogonal pair, one
/// neighbourhood per nonzero element (duplicates merged), or `None` when
/// some nonzero element has no such neighbourhood.
pub fn totally_nonorthogonal_cover(
    l: &FiniteOrthoalgebra,
    t: &FiniteTopology,
) -> Result<Option<Vec<FixedBitSet>>, TopoError> {
    t.with_size(l.len())?;
    let mut cover: Vec<FixedBitSet> = Vec::new();
    for a in l.elements().filter(|&a| a != l.zero()) {
        let u = t.nbhd(a);
        let orthogonal_pair = u.ones().any(|x| u.ones().any(|y| l.perp(x, y)));
        if orthogonal_pair {
            return Ok(None);
        }
        if !cover.contains(u) {
            cover.push(u.clone());
        }
    }
    Ok(Some(cover))
}

/// A triple in the closure of `M(L) ⊆ L³` outside it, least in
/// lexicographic order.
pub fn mackey_relation_closure_witness(
    l: &FiniteOrthoalgebra,
    t: &FiniteTopology,
) -> Result<Option<(Elem, Elem, Elem)>, TopoError> {
    t.with_size(l.len())?;
    let rel: Vec<Vec<usize>> = l
        .mackey_relation()
        .into_iter()
        .map(|(a, c, b)| vec![a, c, b])
        .collect();
    let set: std::collections::HashSet<&[usize]> = rel.iter().map(|v| v.as_slice()).collect();
    Ok(product_closure_witness(&[t, t, t], &rel, |p| set.contains(p)).map(|p| (p[0], p[1], p[2])))
}

/// `M(L)` equals the set of `(a, c, b)` arising from Mackey decompositions
/// `(a ⊖ c, c, b ⊖ c)` of the pairs `(a, b)`.
pub fn mackey_relation_identity_holds(l: &FiniteOrthoalgebra) -> bool {
    let mut from_triples: Vec<(Elem, Elem, Elem)> = Vec::new();
    for a in l.elements() {
        for b in l.elements() {
            for m in l.mackey(a, b) {
                from_triples.push((a, m.c, b));
            }
        }
    }
    let mut rel = l.mackey_relation();
    from_triples.sort_unstable();
    rel.sort_unstable();
    from_triples == rel
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeetJoinContinuity {
    pub lattice: bool,
    pub meet_continuous: bool,
    pub join_continuous: bool,
}

/// Continuity of `∧` and `∨` as maps `L × L → L` (both reported false when
/// `L` is not a lattice).
pub fn meet_join_continuity(
    l: &FiniteOrthoalgebra,
    t: &FiniteTopology,
) -> Result<MeetJoinContinuity, TopoError> {
    t.with_size(l.len())?;
    if !l.is_lattice() {
        return Ok(MeetJoinContinuity {
            lattice: false,
            meet_continuous: false,
            join_continuous: false,
        });
    }
    let sq = t.product(t);
    Ok(MeetJoinContinuity {
        lattice: true,
        meet_continuous: continuity_witness(&sq, t, &binary_map(l, |a, b| l.meet(a, b))).is_none(),
        join_continuous: continuity_witness(&sq, t, &binary_map(l, |a, b| l.join(a, b))).is_none(),
    })
}
