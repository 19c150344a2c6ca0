use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::vertex::enumerate_polytope_vertices;
use super::{Elem, FiniteOrthoalgebra, OaError};

/// A `[0,1]`-valued function on the elements of an orthoalgebra, indexed by
/// element. Whether it is actually a state is decided by
/// [`FiniteOrthoalgebra::is_state`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    pub values: Vec<BigRational>,
}

impl State {
    pub fn new(values: Vec<BigRational>) -> Self {
        State { values }
    }

    /// Builds a state from `(numerator, denominator)` pairs.
    pub fn from_ratios(values: &[(i64, i64)]) -> Self {
        State {
            values: values
                .iter()
                .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        }
    }

    pub fn value(&self, a: Elem) -> &BigRational {
        &self.values[a]
    }

    /// `Σ wᵢ fᵢ` for nonnegative weights; the weights are not renormalised.
    pub fn combination(parts: &[(BigRational, &State)]) -> State {
        let len = parts.first().map_or(0, |(_, s)| s.values.len());
        let mut values = vec![BigRational::zero(); len];
        for (w, s) in parts {
            for (v, x) in values.iter_mut().zip(&s.values) {
                *v += w * x;
            }
        }
        State { values }
    }

    /// Values as `"p/q"` strings (integers without a denominator).
    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(|v| v.to_string()).collect()
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl FiniteOrthoalgebra {
    /// `f(1) = 1`, `0 ≤ f ≤ 1` and `f(a ⊕ b) = f(a) + f(b)` for every
    /// orthogonal pair.
    pub fn is_state(&self, f: &State) -> Result<bool, OaError> {
        self.check_state_domain(f.values.len())?;
        let v = &f.values;
        if !v[self.one()].is_one() {
            return Ok(false);
        }
        if v.iter().any(|x| x.is_negative() || *x > BigRational::one()) {
            return Ok(false);
        }
        for a in self.elements() {
            for b in a..self.len() {
                if let Some(c) = self.sum(a, b) {
                    if v[c] != &v[a] + &v[b] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// For every `p ≰ q` some `f ∈ Δ` has `f(p) > f(q)`.
    pub fn is_order_determining(&self, delta: &[State]) -> Result<bool, OaError> {
        for f in delta {
            self.check_state_domain(f.values.len())?;
        }
        for p in self.elements() {
            for q in self.elements() {
                if !self.leq(p, q) && !delta.iter().any(|f| f.values[p] > f.values[q]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The vertices of the state polytope, exactly, in lexicographic order
    /// of their value vectors.
    pub fn state_vertices(&self) -> Vec<State> {
        let n = self.len();
        let unit = |i: Elem| {
            let mut row = vec![BigRational::zero(); n];
            row[i] = BigRational::one();
            row
        };
        let mut equalities = vec![(unit(self.one()), BigRational::one())];
        for a in self.elements() {
            for b in a..n {
                if let Some(c) = self.sum(a, b) {
                    let mut row = unit(c);
                    row[a] -= BigRational::one();
                    row[b] -= BigRational::one();
                    if row.iter().any(|x| !x.is_zero()) {
                        equalities.push((row, BigRational::zero()));
                    }
                }
            }
        }
        enumerate_polytope_vertices(n, &equalities)
            .into_iter()
            .map(State::new)
            .collect()
    }
}
