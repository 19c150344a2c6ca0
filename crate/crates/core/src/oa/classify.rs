use std::collections::{BTreeMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{Elem, FiniteOrthoalgebra, OaError};

/// Pairwise orthogonal `a, b, c` whose total sum `a ⊕ (b ⊕ c)` is undefined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthocoherenceWitness {
    pub a: String,
    pub b: String,
    pub c: String,
}

/// Structural classification of a finite orthoalgebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub size: usize,
    pub orthocoherent: bool,
    pub omp: bool,
    pub lattice: bool,
    pub boolean: bool,
    pub simple: bool,
    pub height: usize,
    pub num_atoms: usize,
    pub dimension: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthocoherence_witness: Option<OrthocoherenceWitness>,
}

/// Outcome of testing the three equivalent conditions for an orthoposet in
/// which orthogonal sums are joins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Lemma11Report {
    /// `a ⊕ b` is not the join of `a` and `b` for the listed pair.
    NotApplicable { a: String, b: String },
    Checked {
        orthomodular: bool,
        complement_maximal: bool,
        cancellative: bool,
        equivalent: bool,
    },
}

impl FiniteOrthoalgebra {
    /// Looks for `a, b, c` pairwise orthogonal with `a ⊕ (b ⊕ c)` undefined.
    pub fn orthocoherence_witness(&self) -> Option<(Elem, Elem, Elem)> {
        for a in self.elements() {
            for b in self.elements() {
                if !self.perp(a, b) {
                    continue;
                }
                for c in self.elements() {
                    if !self.perp(b, c) || !self.perp(a, c) {
                        continue;
                    }
                    let bc = self.sum(b, c).expect("b ⊥ c");
                    if !self.perp(a, bc) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_orthocoherent(&self) -> bool {
        self.orthocoherence_witness().is_none()
    }

    /// An orthogonal pair whose sum is not their least upper bound.
    pub fn sum_not_join_witness(&self) -> Option<(Elem, Elem)> {
        for a in self.elements() {
            for b in self.elements() {
                let Some(s) = self.sum(a, b) else { continue };
                let ub = self.common_upper_bounds(a, b);
                if !ub.ones().all(|u| self.leq(s, u)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// `a ⊕ b = a ∨ b` for every orthogonal pair.
    pub fn sum_is_join(&self) -> bool {
        self.sum_not_join_witness().is_none()
    }

    fn common_upper_bounds(&self, a: Elem, b: Elem) -> FixedBitSet {
        let mut ub = self.up_set(a).clone();
        ub.intersect_with(self.up_set(b));
        ub
    }

    fn common_lower_bounds(&self, a: Elem, b: Elem) -> FixedBitSet {
        let mut lb = self.down_set(a).clone();
        lb.intersect_with(self.down_set(b));
        lb
    }

    /// Greatest lower bound in the derived order, when it exists.
    pub fn meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        let lb = self.common_lower_bounds(a, b);
        lb.ones().find(|&m| self.down_set(m).is_superset(&lb))
    }

    /// Least upper bound in the derived order, when it exists.
    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        let ub = self.common_upper_bounds(a, b);
        ub.ones().find(|&m| self.up_set(m).is_superset(&ub))
    }

    pub fn is_lattice(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.meet(a, b).is_some()))
    }

    /// Lattice-ordered, distributive and complemented by `'`.
    pub fn is_boolean(&self) -> bool {
        if !self.is_lattice() {
            return false;
        }
        let meet = |a, b| self.meet(a, b).expect("lattice");
        let join = |a, b| self.join(a, b).expect("lattice");
        for a in self.elements() {
            let ac = self.complement(a);
            if meet(a, ac) != self.zero() || join(a, ac) != self.one() {
                return false;
            }
            for b in self.elements() {
                for c in self.elements() {
                    if meet(a, join(b, c)) != join(meet(a, b), meet(a, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Orthomodular poset test straight from the order: for `a ≤ b`, the
    /// meet `b ∧ a'` exists and `(b ∧ a') ∨ a = b`.
    pub fn is_orthomodular_poset(&self) -> bool {
        for a in self.elements() {
            let ac = self.complement(a);
            if self.meet(a, ac) != Some(self.zero()) {
                return false;
            }
            for b in self.up_set(a).ones() {
                let Some(m) = self.meet(b, ac) else {
                    return false;
                };
                if self.join(m, a) != Some(b) {
                    return false;
                }
            }
        }
        true
    }

    /// `a ⊕ b = 1 ⇒ b = a'` for all `a, b`.
    pub fn is_complement_maximal(&self) -> bool {
        self.elements().all(|a| {
            self.elements()
                .all(|b| self.sum(a, b) != Some(self.one()) || b == self.complement(a))
        })
    }

    /// `a ⊕ b = a ⊕ c ⇒ b = c`.
    pub fn is_cancellative(&self) -> bool {
        for a in self.elements() {
            let mut seen = vec![None; self.len()];
            for b in self.elements() {
                if let Some(s) = self.sum(a, b) {
                    if seen[s].replace(b).is_some() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn lemma11_check(&self) -> Lemma11Report {
        if let Some((a, b)) = self.sum_not_join_witness() {
            return Lemma11Report::NotApplicable {
                a: self.label(a).into(),
                b: self.label(b).into(),
            };
        }
        let orthomodular = self.is_orthomodular_poset();
        let complement_maximal = self.is_complement_maximal();
        let cancellative = self.is_cancellative();
        Lemma11Report::Checked {
            orthomodular,
            complement_maximal,
            cancellative,
            equivalent: orthomodular == complement_maximal && complement_maximal == cancellative,
        }
    }

    /// Length of the longest chain of covering steps from 0 to 1.
    pub fn height(&self) -> usize {
        let covers = self.covers();
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&a| self.down_set(a).count_ones(..));
        let mut longest = vec![0usize; self.len()];
        for &b in &order {
            for &(a, c) in &covers {
                if c == b {
                    longest[b] = longest[b].max(longest[a] + 1);
                }
            }
        }
        longest[self.one()]
    }

    /// Minimal number of atoms summing to each element, by breadth-first
    /// search over partial sums starting from 0. `None` marks elements that
    /// are not sums of atoms (never the case for a finite orthoalgebra).
    pub fn dimensions(&self) -> Vec<Option<usize>> {
        let atoms = self.atoms();
        let mut dim = vec![None; self.len()];
        dim[self.zero()] = Some(0);
        let mut queue = VecDeque::from([self.zero()]);
        while let Some(s) = queue.pop_front() {
            let d = dim[s].expect("queued elements have a distance");
            for &x in &atoms {
                if let Some(t) = self.sum(s, x) {
                    if dim[t].is_none() {
                        dim[t] = Some(d + 1);
                        queue.push_back(t);
                    }
                }
            }
        }
        dim
    }

    /// The sets `L₀ = {0}`, `L₁ = atoms`, `Lₖ₊₁ = Lₖ ⊕ L₁`, up to `k = dim(1)`.
    pub fn dimension_level_sets(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let atoms = self.atoms();
        let top = self.dimensions()[self.one()].unwrap_or(0);
        let mut levels = Vec::with_capacity(top + 1);
        let mut current = FixedBitSet::with_capacity(n);
        current.insert(self.zero());
        levels.push(current.clone());
        for _ in 0..top {
            let mut next = FixedBitSet::with_capacity(n);
            for s in current.ones() {
                for &x in &atoms {
                    if let Some(t) = self.sum(s, x) {
                        next.insert(t);
                    }
                }
            }
            levels.push(next.clone());
            current = next;
        }
        levels
    }

    pub fn classify(&self) -> ClassificationReport {
        let witness = self.orthocoherence_witness();
        let lattice = self.is_lattice();
        let dimension = self
            .elements()
            .zip(self.dimensions())
            .map(|(a, d)| {
                (
                    self.label(a).to_string(),
                    d.expect("finite orthoalgebras are atomic"),
                )
            })
            .collect();
        ClassificationReport {
            size: self.len(),
            orthocoherent: witness.is_none(),
            omp: self.sum_is_join(),
            lattice,
            boolean: lattice && self.is_boolean(),
            simple: self.center_by_mackey().len() == 2,
            height: self.height(),
            num_atoms: self.atoms().len(),
            dimension,
            orthocoherence_witness: witness.map(|(a, b, c)| OrthocoherenceWitness {
                a: self.label(a).into(),
                b: self.label(b).into(),
                c: self.label(c).into(),
            }),
        }
    }

    /// The largest pairwise orthogonal set of nonzero elements.
    pub fn max_pairwise_orthogonal(&self) -> Vec<Elem> {
        let nonzero: Vec<Elem> = self.elements().filter(|&a| a != self.zero()).collect();
        let cliques = super::compat::maximal_cliques(self.len(), &nonzero, |a, b| self.perp(a, b));
        cliques
            .into_iter()
            .max_by(|x, y| x.len().cmp(&y.len()).then_with(|| y.cmp(x)))
            .unwrap_or_default()
    }

    pub(crate) fn check_state_domain(&self, len: usize) -> Result<(), OaError> {
        if len != self.len() {
            return Err(OaError::DomainMismatch {
                expected: self.len(),
                got: len,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_algebras_classify_as_boolean() {
        for n in 1..=4 {
            let b = FiniteOrthoalgebra::boolean(n).unwrap();
            let r = b.classify();
            assert!(r.orthocoherent && r.omp && r.lattice && r.boolean);
            assert_eq!(r.height, n);
            assert_eq!(r.num_atoms, n);
            assert_eq!(r.dimension["1"], n);
        }
    }

    #[test]
    fn mo2_classification() {
        let mo2 = FiniteOrthoalgebra::horizontal_sum(2).unwrap();
        let r = mo2.classify();
        assert!(r.lattice && r.omp && r.orthocoherent);
        assert!(!r.boolean);
        assert!(r.simple);
        assert_eq!(r.height, 2);
        assert_eq!(r.num_atoms, 4);
        assert_eq!(r.dimension["1"], 2);
        assert_eq!(
            mo2.lemma11_check(),
            Lemma11Report::Checked {
                orthomodular: true,
                complement_maximal: true,
                cancellative: true,
                equivalent: true
            }
        );
    }

    #[test]
    fn mo3_dimensions() {
        let mo3 = FiniteOrthoalgebra::horizontal_sum(3).unwrap();
        let r = mo3.classify();
        assert_eq!(r.num_atoms, 6);
        assert_eq!(r.dimension["1"], 2);
        assert_eq!(r.dimension["0"], 0);
    }

    #[test]
    fn meets_and_joins_in_bool3() {
        let b = FiniteOrthoalgebra::boolean(3).unwrap();
        let ab = b.index_of("ab").unwrap();
        let bc = b.index_of("bc").unwrap();
        assert_eq!(b.label(b.meet(ab, bc).unwrap()), "b");
        assert_eq!(b.label(b.join(ab, bc).unwrap()), "1");
    }

    #[test]
    fn max_pairwise_orthogonal_in_mo2() {
        let mo2 = FiniteOrthoalgebra::horizontal_sum(2).unwrap();
        assert_eq!(mo2.max_pairwise_orthogonal().len(), 2);
        let b3 = FiniteOrthoalgebra::boolean(3).unwrap();
        assert_eq!(b3.max_pairwise_orthogonal().len(), 3);
    }
}
