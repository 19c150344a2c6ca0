use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ContinuumError;

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A nonempty interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Self {
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn closed(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn point(p: Q) -> Self {
        Self::closed(p.clone(), p)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo_closed {
            *x >= self.lo
        } else {
            *x > self.lo
        };
        let below = if self.hi_closed {
            *x <= self.hi
        } else {
            *x < self.hi
        };
        above && below
    }

    fn intersect(&self, other: &Self) -> Option<Self> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        let i = Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        (!i.is_empty()).then_some(i)
    }

    /// `self \ other` as at most two intervals.
    fn minus(&self, other: &Self) -> Vec<Self> {
        let mut out = Vec::new();
        let left = Interval::new(
            self.lo.clone(),
            other.lo.clone(),
            self.lo_closed,
            !other.lo_closed,
        );
        if let Some(l) = self.intersect(&left) {
            out.push(l);
        }
        let right = Interval::new(
            other.hi.clone(),
            self.hi.clone(),
            !other.hi_closed,
            self.hi_closed,
        );
        if let Some(r) = self.intersect(&right) {
            out.push(r);
        }
        out
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// `(lo_num, lo_den, hi_num, hi_den, lo_closed, hi_closed)`.
pub type IntervalTuple = (i64, i64, i64, i64, bool, bool);

/// A finite union of intervals, kept sorted, disjoint and maximally merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalIntervalSet {
    parts: Vec<Interval>,
}

impl RationalIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals(parts: Vec<Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().filter(|i| !i.is_empty()).collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for i in parts {
            if let Some(last) = merged.last_mut() {
                let touches =
                    i.lo < last.hi || (i.lo == last.hi && (last.hi_closed || i.lo_closed));
                if touches {
                    match i.hi.cmp(&last.hi) {
                        std::cmp::Ordering::Greater => {
                            last.hi = i.hi;
                            last.hi_closed = i.hi_closed;
                        }
                        std::cmp::Ordering::Equal => last.hi_closed |= i.hi_closed,
                        std::cmp::Ordering::Less => {}
                    }
                    continue;
                }
            }
            merged.push(i);
        }
        RationalIntervalSet { parts: merged }
    }

    pub fn interval(i: Interval) -> Self {
        Self::from_intervals(vec![i])
    }

    pub fn point(p: Q) -> Self {
        Self::interval(Interval::point(p))
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.parts.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.parts.iter().chain(&other.parts).cloned().collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(i) = a.intersect(b) {
                    out.push(i);
                }
            }
        }
        Self::from_intervals(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut current = self.parts.clone();
        for b in &other.parts {
            current = current.iter().flat_map(|a| a.minus(b)).collect();
        }
        Self::from_intervals(current)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// `true` when `self` is open in the subspace topology of `carrier`
    /// (both as subsets of the real line).
    ///
    /// Only closed endpoints can fail: a closed left endpoint `p` needs no
    /// carrier points immediately to its left, i.e. no carrier part `K`
    /// with `K.lo < p ≤ K.hi`; symmetrically on the right.
    pub fn is_relatively_open(&self, carrier: &Self) -> bool {
        self.parts.iter().all(|i| {
            let left_ok =
                !i.lo_closed || !carrier.parts.iter().any(|k| k.lo < i.lo && i.lo <= k.hi);
            let right_ok =
                !i.hi_closed || !carrier.parts.iter().any(|k| k.lo <= i.hi && i.hi < k.hi);
            left_ok && right_ok
        })
    }

    /// JSON tuples `[lo_num, lo_den, hi_num, hi_den, lo_closed, hi_closed]`.
    pub fn to_tuples(&self) -> Result<Vec<IntervalTuple>, ContinuumError> {
        let part = |x: &Q| -> Result<(i64, i64), ContinuumError> {
            match (x.numer().to_i64(), x.denom().to_i64()) {
                (Some(n), Some(d)) => Ok((n, d)),
                _ => Err(ContinuumError::Parse(format!(
                    "endpoint {x} exceeds 64 bits"
                ))),
            }
        };
        self.parts
            .iter()
            .map(|i| {
                let (ln, ld) = part(&i.lo)?;
                let (hn, hd) = part(&i.hi)?;
                Ok((ln, ld, hn, hd, i.lo_closed, i.hi_closed))
            })
            .collect()
    }

    pub fn from_tuples(tuples: &[IntervalTuple]) -> Result<Self, ContinuumError> {
        let parts = tuples
            .iter()
            .map(|&(ln, ld, hn, hd, lc, hc)| {
                if ld == 0 || hd == 0 {
                    return Err(ContinuumError::Parse("zero denominator".into()));
                }
                Ok(Interval::new(q(ln, ld), q(hn, hd), lc, hc))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_intervals(parts))
    }
}

impl fmt::Display for RationalIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (k, i) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl Serialize for RationalIntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_tuples()
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalIntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let tuples = Vec::<IntervalTuple>::deserialize(deserializer)?;
        Self::from_tuples(&tuples).map_err(serde::de::Error::custom)
    }
}

/// The carrier `[0, 1/4] ∪ [3/4, 1]` of the interval model: `x ⊥ y` iff
/// `x + y = 1` or one of them is 0, and then `x ⊕ y = x + y`.
pub fn l33() -> RationalIntervalSet {
    RationalIntervalSet::from_intervals(vec![
        Interval::closed(Q::zero(), q(1, 4)),
        Interval::closed(q(3, 4), Q::one()),
    ])
}

fn in_carrier(s: &RationalIntervalSet) -> Result<(), ContinuumError> {
    let outside = s.difference(&l33());
    if outside.is_empty() {
        Ok(())
    } else {
        Err(ContinuumError::NotInCarrier(outside.to_string()))
    }
}

/// `x ⊕ y` in the interval model, `None` when undefined.
pub fn iv_oplus(x: &Q, y: &Q) -> Result<Option<Q>, ContinuumError> {
    let carrier = l33();
    for v in [x, y] {
        if !carrier.contains(v) {
            return Err(ContinuumError::NotInCarrier(v.to_string()));
        }
    }
    let s = x + y;
    Ok((s.is_one() || x.is_zero() || y.is_zero()).then_some(s))
}

/// `x ≤ y` iff `y = x ⊕ z` for some `z`: `y = x`, `x = 0`, or `y = 1`
/// (every `x` has `1 − x` in the carrier).
pub fn iv_leq(x: &Q, y: &Q) -> bool {
    x == y || x.is_zero() || y.is_one()
}

/// `U↑` in the interval model.
pub fn iv_upset(u: &RationalIntervalSet) -> Result<RationalIntervalSet, ContinuumError> {
    in_carrier(u)?;
    if u.contains(&Q::zero()) {
        return Ok(l33());
    }
    if u.is_empty() {
        return Ok(u.clone());
    }
    Ok(u.union(&RationalIntervalSet::point(Q::one())))
}

/// Openness in the subspace topology of the reals on the carrier.
pub fn iv_is_open(s: &RationalIntervalSet) -> Result<bool, ContinuumError> {
    in_carrier(s)?;
    Ok(s.is_relatively_open(&l33()))
}

pub fn iv_is_closed(s: &RationalIntervalSet) -> Result<bool, ContinuumError> {
    in_carrier(s)?;
    Ok(l33().difference(s).is_relatively_open(&l33()))
}

/// One closed piece of the graph of `⊕`, parametrised by `t` in the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OplusPiece {
    /// `(t, 1 − t) ↦ 1`
    Complementary,
    /// `(0, t) ↦ t`
    LeftZero,
    /// `(t, 0) ↦ t`
    RightZero,
}

impl OplusPiece {
    pub const ALL: [OplusPiece; 3] = [Self::Complementary, Self::LeftZero, Self::RightZero];

    /// The point `(x, y, x ⊕ y)` of the piece at parameter `t`.
    pub fn at(self, t: &Q) -> (Q, Q, Q) {
        match self {
            Self::Complementary => (t.clone(), Q::one() - t, Q::one()),
            Self::LeftZero => (Q::zero(), t.clone(), t.clone()),
            Self::RightZero => (t.clone(), Q::zero(), t.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PastingReport {
    /// The parameter domain (the carrier) is closed in the reals.
    pub domain_closed: bool,
    /// Each piece maps the carrier into `⊥` with the sum it claims.
    pub pieces_consistent: bool,
    /// Pieces agree wherever their `(x, y)` projections meet.
    pub overlaps_agree: bool,
    /// Every orthogonal pair lies on some piece (checked at the endpoints
    /// and midpoints of the carrier parts).
    pub covers_samples: bool,
}

impl PastingReport {
    pub fn holds(&self) -> bool {
        self.domain_closed && self.pieces_consistent && self.overlaps_agree && self.covers_samples
    }
}

/// The graph of `⊕` is the union of three images of the compact carrier
/// under affine maps, hence closed, and `⊕` is continuous on `⊥` by pasting
/// once the pieces agree on overlaps. Each step is checked exactly.
pub fn iv_oplus_pasting_check() -> PastingReport {
    let carrier = l33();
    let ambient = RationalIntervalSet::interval(Interval::closed(q(-1, 1), q(2, 1)));
    let domain_closed = ambient.difference(&carrier).is_relatively_open(&ambient);

    let mut samples: Vec<Q> = Vec::new();
    for p in carrier.parts() {
        samples.push(p.lo.clone());
        samples.push(p.hi.clone());
        samples.push((&p.lo + &p.hi) / q(2, 1));
    }
    let pieces_consistent = OplusPiece::ALL.iter().all(|piece| {
        samples.iter().all(|t| {
            let (x, y, s) = piece.at(t);
            matches!(iv_oplus(&x, &y), Ok(Some(v)) if v == s)
        })
    });

    // Overlaps of the (x, y) projections: Complementary ∩ LeftZero is
    // (0, 1); Complementary ∩ RightZero is (1, 0); LeftZero ∩ RightZero is
    // (0, 0). Solve for the parameters and compare the sums.
    let zero = Q::zero();
    let one = Q::one();
    let overlaps = [
        (
            OplusPiece::Complementary,
            zero.clone(),
            OplusPiece::LeftZero,
            one.clone(),
        ),
        (
            OplusPiece::Complementary,
            one.clone(),
            OplusPiece::RightZero,
            one.clone(),
        ),
        (
            OplusPiece::LeftZero,
            zero.clone(),
            OplusPiece::RightZero,
            zero.clone(),
        ),
    ];
    let overlaps_agree = overlaps.iter().all(|(p1, t1, p2, t2)| {
        let (a, b) = (p1.at(t1), p2.at(t2));
        carrier.contains(t1) && carrier.contains(t2) && a == b
    });

    let covers_samples = samples.iter().all(|x| {
        samples.iter().all(|y| match iv_oplus(x, y) {
            Ok(Some(s)) => OplusPiece::ALL.iter().any(|piece| {
                samples
                    .iter()
                    .chain([x, y])
                    .any(|t| piece.at(t) == (x.clone(), y.clone(), s.clone()))
            }),
            _ => true,
        })
    });

    PastingReport {
        domain_closed,
        pieces_consistent,
        overlaps_agree,
        covers_samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter() -> RationalIntervalSet {
        RationalIntervalSet::interval(Interval::closed(Q::zero(), q(1, 4)))
    }

    #[test]
    fn normalisation_merges() {
        let s = RationalIntervalSet::from_intervals(vec![
            Interval::new(q(1, 2), q(1, 1), true, false),
            Interval::open(Q::zero(), q(1, 2)),
            Interval::point(q(2, 1)),
            Interval::open(q(3, 1), q(3, 1)),
        ]);
        assert_eq!(s.to_string(), "(0,1) ∪ {2}");
        let gap = RationalIntervalSet::from_intervals(vec![
            Interval::open(Q::zero(), q(1, 2)),
            Interval::open(q(1, 2), q(1, 1)),
        ]);
        assert_eq!(gap.parts().len(), 2);
        let nested = RationalIntervalSet::from_intervals(vec![
            Interval::closed(Q::zero(), q(1, 1)),
            Interval::open(q(1, 4), q(1, 2)),
        ]);
        assert_eq!(nested.to_string(), "[0,1]");
    }

    #[test]
    fn set_algebra() {
        let a = RationalIntervalSet::interval(Interval::closed(Q::zero(), q(1, 1)));
        let b = RationalIntervalSet::interval(Interval::open(q(1, 4), q(1, 2)));
        assert_eq!(a.difference(&b).to_string(), "[0,1/4] ∪ [1/2,1]");
        assert_eq!(a.intersection(&b), b);
        assert!(b.is_subset(&a));
        assert_eq!(a.difference(&b).union(&b), a);
    }

    #[test]
    fn json_tuples() {
        let s = l33();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, "[[0,1,1,4,true,true],[3,4,1,1,true,true]]");
        let back: RationalIntervalSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn upsets_of_the_quarter() {
        // 0 lies below everything, so the closed quarter generates the carrier.
        let up = iv_upset(&quarter()).unwrap();
        assert_eq!(up, l33());
        assert!(iv_is_open(&up).unwrap());
        // Without 0 the upper set only gains the unit, and is not open.
        let half_open =
            RationalIntervalSet::interval(Interval::new(Q::zero(), q(1, 4), false, true));
        assert!(iv_is_open(&half_open).unwrap());
        let up = iv_upset(&half_open).unwrap();
        assert_eq!(up.to_string(), "(0,1/4] ∪ {1}");
        assert!(!iv_is_open(&up).unwrap());
        let with_unit = quarter().union(&RationalIntervalSet::point(Q::one()));
        assert_eq!(with_unit.to_string(), "[0,1/4] ∪ {1}");
        assert!(!iv_is_open(&with_unit).unwrap());
        assert!(iv_is_open(&quarter()).unwrap() && iv_is_closed(&quarter()).unwrap());
    }

    #[test]
    fn other_upsets() {
        assert_eq!(
            iv_upset(&RationalIntervalSet::point(Q::zero())).unwrap(),
            l33()
        );
        let u = RationalIntervalSet::interval(Interval::open(q(3, 4), Q::one()));
        let up = iv_upset(&u).unwrap();
        assert_eq!(
            up,
            RationalIntervalSet::interval(Interval::new(q(3, 4), Q::one(), false, true))
        );
        assert!(iv_is_open(&up).unwrap());
        let empty = RationalIntervalSet::empty();
        assert!(iv_is_open(&empty).unwrap() && iv_is_closed(&empty).unwrap());
        let outside = RationalIntervalSet::point(q(1, 2));
        assert!(matches!(
            iv_upset(&outside),
            Err(ContinuumError::NotInCarrier(_))
        ));
    }

    #[test]
    fn oplus_table() {
        assert_eq!(iv_oplus(&q(1, 8), &q(7, 8)).unwrap(), Some(Q::one()));
        assert_eq!(iv_oplus(&Q::zero(), &q(7, 8)).unwrap(), Some(q(7, 8)));
        assert_eq!(iv_oplus(&q(1, 8), &q(1, 8)).unwrap(), None);
        assert!(iv_leq(&q(1, 8), &Q::one()) && !iv_leq(&q(1, 8), &q(7, 8)));
        assert!(iv_oplus_pasting_check().holds());
    }
}
