use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{members, FiniteTopology, TopoError};
use crate::testspace::{Event, TestSpace};

/// The Vietoris topology on a family of closed subsets of `t`, generated by
/// `[U] = {F : F ∩ U ≠ ∅}` and `(U) = {F : F ⊆ U}` for open `U`. Points of
/// the result are the family indices.
pub fn vietoris(t: &FiniteTopology, family: &[FixedBitSet]) -> Result<FiniteTopology, TopoError> {
    for f in family {
        if !t.is_closed(f) {
            return Err(TopoError::NotClosedMember(members(f)));
        }
    }
    let m = family.len();
    // The least open meeting F at x is N_x and the least open containing F
    // is the union of the N_x, so N_F = (∪ N_x) ∩ ⋂ [N_x].
    let nbhd: Vec<FixedBitSet> = family
        .iter()
        .map(|f| {
            let mut hull = t.empty_set();
            for x in f.ones() {
                hull.union_with(t.nbhd(x));
            }
            let mut out = FixedBitSet::with_capacity(m);
            for (j, g) in family.iter().enumerate() {
                let inside = g.is_subset(&hull);
                let meets_all = f.ones().all(|x| !g.is_disjoint(t.nbhd(x)));
                if inside && meets_all {
                    out.insert(j);
                }
            }
            out
        })
        .collect();
    Ok(FiniteTopology::from_subbasis_sets(m, &nbhd))
}

/// The events of `ts` as subsets of the outcomes, with their Vietoris
/// topology induced by `t`.
pub fn vietoris_of_events(
    ts: &TestSpace,
    t: &FiniteTopology,
) -> Result<(Vec<Event>, FiniteTopology), TopoError> {
    let n = t.with_size(ts.outcomes().len())?.len();
    let events = ts.events()?;
    let sets: Vec<FixedBitSet> = events
        .iter()
        .map(|e| {
            let mut s = FixedBitSet::with_capacity(n);
            for &x in e {
                s.insert(x);
            }
            s
        })
        .collect();
    let v = vietoris(t, &sets)?;
    Ok((events, v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableComplementation {
    pub stably_complemented: bool,
    /// Least Vietoris-open family of events whose set of complements is not
    /// open.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
}

/// Whether `𝒰^co = {B : B complementary to some A ∈ 𝒰}` is Vietoris-open
/// for every Vietoris-open family of events `𝒰`.
pub fn is_stably_complemented(
    ts: &TestSpace,
    t: &FiniteTopology,
) -> Result<StableComplementation, TopoError> {
    let (events, v) = vietoris_of_events(ts, t)?;
    let st = ts.structure()?;
    let witness = v.neighbourhoods().into_iter().find(|u| {
        let mut co = v.empty_set();
        for a in u.ones() {
            for &b in st.complements(a) {
                co.insert(b);
            }
        }
        !v.is_open(&co)
    });
    Ok(StableComplementation {
        stably_complemented: witness.is_none(),
        witness: witness.map(|u| u.ones().map(|i| ts.names(&events[i])).collect()),
    })
}
