//! Finite orthoalgebras given by an explicit partial-sum table.
//!
//! Every structure is validated on construction. Elements are addressed by
//! index internally; the input labels are kept for reports and files.

mod classify;
mod compat;
mod construct;
mod iso;
mod states;
mod vertex;

pub use classify::{ClassificationReport, Lemma11Report, OrthocoherenceWitness};
pub use compat::MackeyTriple;
pub use iso::check_isomorphism;
pub use states::State;
pub use vertex::enumerate_polytope_vertices;

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element inside a [`FiniteOrthoalgebra`].
pub type Elem = usize;

/// Violations listed per validation run before the list is truncated.
const MAX_VIOLATIONS: usize = 64;

/// The orthoalgebra file format: `a ⊕ b = c` for every listed `[a, b, c]`.
///
/// Each unordered pair is expected once; listing both orders is accepted
/// when the two entries agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OaSpec {
    pub elements: Vec<String>,
    pub zero: String,
    pub one: String,
    pub sum: Vec<[String; 3]>,
}

impl OaSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `0 ≠ 1`.
    Nondegeneracy,
    /// `a ⊕ b` and `b ⊕ a` are both defined and equal, or both undefined.
    Commutativity,
    /// `a ⊕ 0 = 0 ⊕ a = a`.
    ZeroIdentity,
    /// `(a ⊕ b) ⊕ c` defined forces `b ⊕ c`, `a ⊕ (b ⊕ c)` and equality.
    StrongAssociativity,
    ComplementExistence,
    ComplementUniqueness,
    /// `a ⊕ a` defined only for `a = 0`.
    SelfOrthogonality,
    /// The derived relation is a partial order.
    PartialOrder,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Nondegeneracy => "nondegeneracy",
            Axiom::Commutativity => "commutativity",
            Axiom::ZeroIdentity => "zero_identity",
            Axiom::StrongAssociativity => "strong_associativity",
            Axiom::ComplementExistence => "complement_existence",
            Axiom::ComplementUniqueness => "complement_uniqueness",
            Axiom::SelfOrthogonality => "self_orthogonality",
            Axiom::PartialOrder => "partial_order",
        };
        f.write_str(name)
    }
}

/// One failed axiom together with the elements that witness the failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub elements: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: {}",
            self.axiom,
            self.elements.join(", "),
            self.detail
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OaError {
    #[error("axiom violations: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    AxiomViolation(Vec<Violation>),
    #[error("malformed orthoalgebra file: {0}")]
    Parse(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("`{smaller}` is not below `{larger}`")]
    NotComparable { smaller: String, larger: String },
    #[error("state has {got} values, algebra has {expected} elements")]
    DomainMismatch { expected: usize, got: usize },
    #[error("structure too large: {0}")]
    TooLarge(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl OaError {
    /// The violated axioms, when this is an [`OaError::AxiomViolation`].
    pub fn violations(&self) -> &[Violation] {
        match self {
            OaError::AxiomViolation(v) => v,
            _ => &[],
        }
    }
}

/// A validated finite orthoalgebra with its derived order and complement.
#[derive(Debug, Clone)]
pub struct FiniteOrthoalgebra {
    labels: Vec<String>,
    index: HashMap<String, Elem>,
    zero: Elem,
    one: Elem,
    table: Vec<Option<Elem>>,
    complement: Vec<Elem>,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
}

impl FiniteOrthoalgebra {
    /// Parses and validates an [`OaSpec`].
    pub fn build(spec: &OaSpec) -> Result<Self, OaError> {
        let mut index = HashMap::with_capacity(spec.elements.len());
        for (i, label) in spec.elements.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(OaError::DuplicateLabel(label.clone()));
            }
        }
        let lookup = |label: &String| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| OaError::UnknownLabel(label.clone()))
        };
        let zero = lookup(&spec.zero)?;
        let one = lookup(&spec.one)?;
        let n = spec.elements.len();
        let mut table = vec![None; n * n];
        let mut conflicts = Vec::new();
        for [a, b, c] in &spec.sum {
            let (a, b, c) = (lookup(a)?, lookup(b)?, lookup(c)?);
            for (x, y) in [(a, b), (b, a)] {
                match table[x * n + y] {
                    Some(prev) if prev != c => conflicts.push(Violation {
                        axiom: Axiom::Commutativity,
                        elements: vec![spec.elements[x].clone(), spec.elements[y].clone()],
                        detail: format!(
                            "listed with two results `{}` and `{}`",
                            spec.elements[prev], spec.elements[c]
                        ),
                    }),
                    _ => table[x * n + y] = Some(c),
                }
            }
        }
        conflicts.dedup();
        Self::validate(spec.elements.clone(), zero, one, table, conflicts)
    }

    /// Parses a JSON document in the orthoalgebra file format.
    pub fn from_json(text: &str) -> Result<Self, OaError> {
        let spec = OaSpec::from_json(text).map_err(|e| OaError::Parse(e.to_string()))?;
        Self::build(&spec)
    }

    /// Builds from a full (possibly asymmetric) table; used by constructions.
    pub(crate) fn from_table(
        labels: Vec<String>,
        zero: Elem,
        one: Elem,
        table: Vec<Option<Elem>>,
    ) -> Result<Self, OaError> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(OaError::DuplicateLabel(label.clone()));
            }
        }
        Self::validate(labels, zero, one, table, Vec::new())
    }

    fn validate(
        labels: Vec<String>,
        zero: Elem,
        one: Elem,
        table: Vec<Option<Elem>>,
        mut violations: Vec<Violation>,
    ) -> Result<Self, OaError> {
        let n = labels.len();
        let sum = |a: Elem, b: Elem| table[a * n + b];
        let name = |i: Elem| labels[i].clone();
        fn push(v: &mut Vec<Violation>, axiom: Axiom, elements: Vec<String>, detail: String) {
            if v.len() < MAX_VIOLATIONS {
                v.push(Violation {
                    axiom,
                    elements,
                    detail,
                });
            }
        }

        if zero == one {
            push(
                &mut violations,
                Axiom::Nondegeneracy,
                vec![name(zero)],
                "zero and unit coincide".into(),
            );
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if sum(a, b) != sum(b, a) {
                    push(
                        &mut violations,
                        Axiom::Commutativity,
                        vec![name(a), name(b)],
                        "a ⊕ b and b ⊕ a differ".into(),
                    );
                }
            }
        }
        for a in 0..n {
            if sum(a, zero) != Some(a) || sum(zero, a) != Some(a) {
                push(
                    &mut violations,
                    Axiom::ZeroIdentity,
                    vec![name(a)],
                    "a ⊕ 0 ≠ a".into(),
                );
            }
            if a != zero && sum(a, a).is_some() {
                push(
                    &mut violations,
                    Axiom::SelfOrthogonality,
                    vec![name(a)],
                    "a ⊕ a is defined for a ≠ 0".into(),
                );
            }
            let comps: Vec<Elem> = (0..n).filter(|&b| sum(a, b) == Some(one)).collect();
            match comps.len() {
                0 => push(
                    &mut violations,
                    Axiom::ComplementExistence,
                    vec![name(a)],
                    "no b with a ⊕ b = 1".into(),
                ),
                1 => {}
                _ => push(
                    &mut violations,
                    Axiom::ComplementUniqueness,
                    vec![name(a), name(comps[0]), name(comps[1])],
                    "two distinct b with a ⊕ b = 1".into(),
                ),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = sum(a, b) else { continue };
                for c in 0..n {
                    let Some(abc) = sum(ab, c) else { continue };
                    let detail = match sum(b, c) {
                        None => Some("(a ⊕ b) ⊕ c defined but b ⊕ c undefined".to_string()),
                        Some(bc) => match sum(a, bc) {
                            None => Some("(a ⊕ b) ⊕ c defined but a ⊕ (b ⊕ c) undefined".into()),
                            Some(other) if other != abc => Some(format!(
                                "(a ⊕ b) ⊕ c = {} but a ⊕ (b ⊕ c) = {}",
                                name(abc),
                                name(other)
                            )),
                            Some(_) => None,
                        },
                    };
                    if let Some(detail) = detail {
                        push(
                            &mut violations,
                            Axiom::StrongAssociativity,
                            vec![name(a), name(b), name(c)],
                            detail,
                        );
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(OaError::AxiomViolation(violations));
        }

        let complement: Vec<Elem> = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| sum(a, b) == Some(one))
                    .expect("checked above")
            })
            .collect();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for c in 0..n {
                if let Some(b) = sum(a, c) {
                    down[b].insert(a);
                    up[a].insert(b);
                }
            }
        }
        for a in 0..n {
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    push(
                        &mut violations,
                        Axiom::PartialOrder,
                        vec![name(a), name(b)],
                        "a ≤ b and b ≤ a with a ≠ b".into(),
                    );
                }
                if !up[a].is_superset(&up[b]) {
                    push(
                        &mut violations,
                        Axiom::PartialOrder,
                        vec![name(a), name(b)],
                        "order is not transitive above b".into(),
                    );
                }
            }
        }
        if !violations.is_empty() {
            return Err(OaError::AxiomViolation(violations));
        }

        let index = labels.iter().cloned().zip(0..).collect();
        Ok(Self {
            labels,
            index,
            zero,
            one,
            table,
            complement,
            down,
            up,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Result<Elem, OaError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| OaError::UnknownLabel(label.to_string()))
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    /// `a ⊕ b`, if defined.
    pub fn sum(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.table[a * self.len() + b]
    }

    /// `a ⊥ b`, i.e. `a ⊕ b` is defined.
    pub fn perp(&self, a: Elem, b: Elem) -> bool {
        self.sum(a, b).is_some()
    }

    pub fn complement(&self, a: Elem) -> Elem {
        self.complement[a]
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.down[b].contains(a)
    }

    /// `{x : x ≤ a}` as a bitset over element indices.
    pub fn down_set(&self, a: Elem) -> &FixedBitSet {
        &self.down[a]
    }

    /// `{x : a ≤ x}` as a bitset over element indices.
    pub fn up_set(&self, a: Elem) -> &FixedBitSet {
        &self.up[a]
    }

    /// `b ⊖ a`: the unique `c` with `b = a ⊕ c`.
    pub fn ominus(&self, b: Elem, a: Elem) -> Result<Elem, OaError> {
        if !self.leq(a, b) {
            return Err(OaError::NotComparable {
                smaller: self.labels[a].clone(),
                larger: self.labels[b].clone(),
            });
        }
        // b ⊖ a = (a ⊕ b')', defined because a ≤ b means a ⊥ b'.
        let s = self
            .sum(a, self.complement(b))
            .expect("a ≤ b implies a ⊥ b'");
        Ok(self.complement(s))
    }

    /// Orthogonal sum of a set of elements, folded in index order.
    ///
    /// Returns `None` when some partial sum is undefined. The empty sum is 0.
    pub fn osum<I: IntoIterator<Item = Elem>>(&self, set: I) -> Option<Elem> {
        let mut items: Vec<Elem> = set.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        items
            .into_iter()
            .try_fold(self.zero, |acc, x| self.sum(acc, x))
    }

    /// Every two members are orthogonal (weaker than joint summability).
    pub fn is_pairwise_orthogonal(&self, set: &[Elem]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && self.perp(a, b)))
    }

    /// Every finite subset has an orthogonal sum; for a finite set this is
    /// the existence of the total sum.
    pub fn is_jointly_orthogonal(&self, set: &[Elem]) -> bool {
        self.is_pairwise_orthogonal(set) && self.osum(set.iter().copied()).is_some()
    }

    /// Serializes back to the file format, listing each unordered pair once.
    pub fn to_spec(&self) -> OaSpec {
        let n = self.len();
        let mut sum = Vec::new();
        for a in 0..n {
            for b in a..n {
                if let Some(c) = self.sum(a, b) {
                    sum.push([
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                        self.labels[c].clone(),
                    ]);
                }
            }
        }
        OaSpec {
            elements: self.labels.clone(),
            zero: self.labels[self.zero].clone(),
            one: self.labels[self.one].clone(),
            sum,
        }
    }

    /// Elements covering 0.
    pub fn atoms(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| a != self.zero && self.down[a].count_ones(..) == 2)
            .collect()
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for b in self.elements() {
            for a in self.down[b].ones() {
                if a == b {
                    continue;
                }
                let between = self.down[b]
                    .ones()
                    .any(|m| m != a && m != b && self.leq(a, m));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn names<I: IntoIterator<Item = Elem>>(&self, items: I) -> Vec<String> {
        items.into_iter().map(|i| self.labels[i].clone()).collect()
    }
}
