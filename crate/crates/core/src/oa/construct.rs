use super::{Elem, FiniteOrthoalgebra, OaError};

impl FiniteOrthoalgebra {
    /// The Boolean algebra of subsets of an `n`-atom set (`n ≥ 1`).
    ///
    /// Element `i` is the subset with bitmask `i`; atoms are labelled
    /// `a`, `b`, `c`, ... and subsets by concatenating their atoms.
    pub fn boolean(n: usize) -> Result<Self, OaError> {
        if n == 0 {
            return Self::from_table(vec!["0".into()], 0, 0, vec![Some(0)]);
        }
        if n > 10 {
            return Err(OaError::TooLarge(format!("boolean algebra with {n} atoms")));
        }
        let size = 1usize << n;
        let full = size - 1;
        let labels = (0..size)
            .map(|mask| match mask {
                0 => "0".to_string(),
                m if m == full => "1".to_string(),
                m => (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| char::from(b'a' + i as u8))
                    .collect(),
            })
            .collect();
        let mut table = vec![None; size * size];
        for x in 0..size {
            for y in 0..size {
                if x & y == 0 {
                    table[x * size + y] = Some(x | y);
                }
            }
        }
        Self::from_table(labels, 0, full, table)
    }

    /// Horizontal sum of `k` copies of the four-element Boolean algebra:
    /// `{0, 1, x1, x1', …, xk, xk'}` with `xi ⊕ xi' = 1` as the only
    /// nontrivial sums. `k = 1` is the four-element Boolean algebra and
    /// `k = 2` is MO₂.
    pub fn horizontal_sum(k: usize) -> Result<Self, OaError> {
        if k == 0 {
            return Err(OaError::TooLarge("horizontal sum needs k ≥ 1".into()));
        }
        let n = 2 * k + 2;
        let one = n - 1;
        let mut labels = vec!["0".to_string()];
        for i in 1..=k {
            labels.push(format!("x{i}"));
            labels.push(format!("x{i}'"));
        }
        labels.push("1".into());
        let mut table = vec![None; n * n];
        for a in 0..n {
            table[a] = Some(a);
            table[a * n] = Some(a);
        }
        for i in 0..k {
            let (x, xc) = (2 * i + 1, 2 * i + 2);
            table[x * n + xc] = Some(one);
            table[xc * n + x] = Some(one);
        }
        Self::from_table(labels, 0, one, table)
    }

    /// The interval `[0, a]` with `x ⊕ₐ y = x ⊕ y` whenever `x ⊕ y ≤ a`.
    ///
    /// `a = 0` yields the degenerate one-point algebra and is rejected.
    pub fn interval(&self, a: Elem) -> Result<Self, OaError> {
        let carrier: Vec<Elem> = self.down_set(a).ones().collect();
        let position = |x: Elem| carrier.binary_search(&x).ok();
        let m = carrier.len();
        let mut table = vec![None; m * m];
        for (i, &x) in carrier.iter().enumerate() {
            for (j, &y) in carrier.iter().enumerate() {
                if let Some(s) = self.sum(x, y) {
                    if self.leq(s, a) {
                        table[i * m + j] = position(s);
                    }
                }
            }
        }
        let labels = self.names(carrier.iter().copied());
        let zero = position(self.zero()).expect("0 ≤ a");
        let one = position(a).expect("a ≤ a");
        Self::from_table(labels, zero, one, table)
    }

    /// Cartesian product with componentwise sum. Element `(x, y)` has index
    /// `x * other.len() + y` and label `(x,y)`.
    pub fn product(&self, other: &Self) -> Result<Self, OaError> {
        let (n1, n2) = (self.len(), other.len());
        let n = n1 * n2;
        let labels = (0..n1)
            .flat_map(|x| (0..n2).map(move |y| (x, y)))
            .map(|(x, y)| format!("({},{})", self.label(x), other.label(y)))
            .collect();
        let mut table = vec![None; n * n];
        for x in 0..n1 {
            for u in 0..n1 {
                let Some(xu) = self.sum(x, u) else { continue };
                for y in 0..n2 {
                    for v in 0..n2 {
                        if let Some(yv) = other.sum(y, v) {
                            table[(x * n2 + y) * n + (u * n2 + v)] = Some(xu * n2 + yv);
                        }
                    }
                }
            }
        }
        Self::from_table(
            labels,
            self.zero() * n2 + other.zero(),
            self.one() * n2 + other.one(),
            table,
        )
    }

    /// The restriction of `⊕` to a subset containing 0 and 1, validated as an
    /// orthoalgebra in its own right.
    pub fn restrict(&self, subset: &[Elem]) -> Result<Self, OaError> {
        let mut carrier = subset.to_vec();
        carrier.sort_unstable();
        carrier.dedup();
        let position = |x: Elem| carrier.binary_search(&x).ok();
        let m = carrier.len();
        let mut table = vec![None; m * m];
        for (i, &x) in carrier.iter().enumerate() {
            for (j, &y) in carrier.iter().enumerate() {
                if let Some(s) = self.sum(x, y) {
                    table[i * m + j] = position(s);
                }
            }
        }
        let zero = position(self.zero())
            .ok_or_else(|| OaError::UnknownLabel(self.label(self.zero()).into()))?;
        let one = position(self.one())
            .ok_or_else(|| OaError::UnknownLabel(self.label(self.one()).into()))?;
        Self::from_table(self.names(carrier.iter().copied()), zero, one, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_sizes() {
        for n in 1..=4 {
            let l = FiniteOrthoalgebra::boolean(n).unwrap();
            assert_eq!(l.len(), 1 << n);
            assert_eq!(l.atoms().len(), n);
        }
        assert!(FiniteOrthoalgebra::boolean(0).is_err());
    }

    #[test]
    fn horizontal_sum_shapes() {
        let k1 = FiniteOrthoalgebra::horizontal_sum(1).unwrap();
        assert!(k1
            .is_isomorphic(&FiniteOrthoalgebra::boolean(2).unwrap())
            .is_some());
        let k3 = FiniteOrthoalgebra::horizontal_sum(3).unwrap();
        assert_eq!(k3.len(), 8);
        assert_eq!(k3.atoms().len(), 6);
        assert!(FiniteOrthoalgebra::horizontal_sum(0).is_err());
    }

    #[test]
    fn interval_at_unit_is_whole_algebra() {
        let mo2 = FiniteOrthoalgebra::horizontal_sum(2).unwrap();
        let top = mo2.interval(mo2.one()).unwrap();
        assert_eq!(top.to_spec(), mo2.to_spec());
    }

    #[test]
    fn interval_at_zero_is_rejected() {
        let b = FiniteOrthoalgebra::boolean(2).unwrap();
        let err = b.interval(b.zero()).unwrap_err();
        assert!(err
            .violations()
            .iter()
            .any(|v| v.axiom == super::super::Axiom::Nondegeneracy));
    }

    #[test]
    fn interval_below_a_coatom_of_bool3_is_bool2() {
        let b3 = FiniteOrthoalgebra::boolean(3).unwrap();
        let coatom = b3.index_of("ab").unwrap();
        let i = b3.interval(coatom).unwrap();
        assert!(i
            .is_isomorphic(&FiniteOrthoalgebra::boolean(2).unwrap())
            .is_some());
    }

    #[test]
    fn product_embeds_factors_as_intervals() {
        let mo2 = FiniteOrthoalgebra::horizontal_sum(2).unwrap();
        let b1 = FiniteOrthoalgebra::boolean(1).unwrap();
        let p = mo2.product(&b1).unwrap();
        assert_eq!(p.len(), 12);
        let left = p.index_of("(1,0)").unwrap();
        let right = p.index_of("(0,1)").unwrap();
        assert!(p.interval(left).unwrap().is_isomorphic(&mo2).is_some());
        assert!(p.interval(right).unwrap().is_isomorphic(&b1).is_some());
        assert_eq!(p.complement(left), right);
        let b2 = b1.product(&b1).unwrap();
        assert!(b2
            .is_isomorphic(&FiniteOrthoalgebra::boolean(2).unwrap())
            .is_some());
    }
}
