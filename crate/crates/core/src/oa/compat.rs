use std::collections::BTreeSet;

use serde::Serialize;

use super::{Elem, FiniteOrthoalgebra, OaError};

/// `(a₁, c, b₁)` with `a = a₁ ⊕ c`, `b = c ⊕ b₁` and `a₁ ⊕ c ⊕ b₁` defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MackeyTriple {
    pub a1: Elem,
    pub c: Elem,
    pub b1: Elem,
}

/// Maximal cliques of the graph on `vertices` with adjacency `adj`
/// (Bron–Kerbosch with pivoting). Each clique is sorted; the list is sorted.
pub(crate) fn maximal_cliques(
    n: usize,
    vertices: &[Elem],
    adj: impl Fn(Elem, Elem) -> bool,
) -> Vec<Vec<Elem>> {
    let mut neighbours = vec![BTreeSet::new(); n];
    for &u in vertices {
        for &v in vertices {
            if u != v && adj(u, v) && adj(v, u) {
                neighbours[u].insert(v);
            }
        }
    }
    fn expand(
        r: &mut Vec<Elem>,
        mut p: BTreeSet<Elem>,
        mut x: BTreeSet<Elem>,
        nb: &[BTreeSet<Elem>],
        out: &mut Vec<Vec<Elem>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| (p.intersection(&nb[u]).count(), std::cmp::Reverse(u)))
            .expect("p ∪ x nonempty");
        let candidates: Vec<Elem> = p.difference(&nb[pivot]).copied().collect();
        for v in candidates {
            r.push(v);
            let p2 = p.intersection(&nb[v]).copied().collect();
            let x2 = x.intersection(&nb[v]).copied().collect();
            expand(r, p2, x2, nb, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    expand(
        &mut Vec::new(),
        vertices.iter().copied().collect(),
        BTreeSet::new(),
        &neighbours,
        &mut out,
    );
    out.sort();
    out
}

impl FiniteOrthoalgebra {
    /// All Mackey decompositions of the pair `(a, b)`, ordered by `c`.
    pub fn mackey(&self, a: Elem, b: Elem) -> Vec<MackeyTriple> {
        let mut lower = self.down_set(a).clone();
        lower.intersect_with(self.down_set(b));
        lower
            .ones()
            .filter_map(|c| {
                let a1 = self.ominus(a, c).ok()?;
                let b1 = self.ominus(b, c).ok()?;
                self.perp(a, b1).then_some(MackeyTriple { a1, c, b1 })
            })
            .collect()
    }

    pub fn compatible(&self, a: Elem, b: Elem) -> bool {
        !self.mackey(a, b).is_empty()
    }

    /// `M(L)`: triples `(a, c, b)` with `c ≤ a`, `c ≤ b`, `(a ⊖ c) ⊥ b`.
    pub fn mackey_relation(&self) -> Vec<(Elem, Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for c in self.down_set(a).ones() {
                let a1 = self.ominus(a, c).expect("c ≤ a");
                for b in self.up_set(c).ones() {
                    if self.perp(a1, b) {
                        out.push((a, c, b));
                    }
                }
            }
        }
        out
    }

    /// `{a : a compatible with b}`.
    pub fn comp_of(&self, b: Elem) -> Vec<Elem> {
        self.elements().filter(|&a| self.compatible(a, b)).collect()
    }

    /// Maximal pairwise-compatible subsets.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let all: Vec<Elem> = self.elements().collect();
        let n = self.len();
        let mut comp = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                let c = self.compatible(a, b);
                comp[a * n + b] = c;
                comp[b * n + a] = c;
            }
        }
        maximal_cliques(n, &all, |a, b| comp[a * n + b])
    }

    /// Maximal Boolean sub-orthoalgebras. Each finite Boolean
    /// sub-orthoalgebra is `{⊕S : S ⊆ E}` for its set of atoms `E`, which
    /// is an orthopartition of the unit.
    pub fn boolean_blocks(&self) -> Vec<Vec<Elem>> {
        let mut generated: Vec<Vec<Elem>> = self
            .orthopartitions_of_unit()
            .iter()
            .map(|test| {
                let mut members: Vec<Elem> = (0u64..1 << test.len())
                    .filter_map(|mask| {
                        self.osum(
                            test.iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .map(|(_, &x)| x),
                        )
                    })
                    .collect();
                members.sort_unstable();
                members.dedup();
                members
            })
            .collect();
        generated.sort();
        generated.dedup();
        let is_subset =
            |small: &[Elem], big: &[Elem]| small.iter().all(|x| big.binary_search(x).is_ok());
        let maximal: Vec<Vec<Elem>> = generated
            .iter()
            .filter(|s| {
                !generated
                    .iter()
                    .any(|t| t.len() > s.len() && is_subset(s, t))
            })
            .cloned()
            .collect();
        maximal
    }

    /// Sets of nonzero elements with a defined orthogonal sum, in
    /// (size, lexicographic) order. These are the events of the canonical
    /// test space.
    pub fn summable_subsets(&self) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        self.summable_dfs(&mut Vec::new(), self.zero(), 0, &mut |set, _| {
            out.push(set.to_vec());
        });
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        out
    }

    /// Sets of nonzero elements summing to the unit.
    pub fn orthopartitions_of_unit(&self) -> Vec<Vec<Elem>> {
        let one = self.one();
        let mut out = Vec::new();
        self.summable_dfs(&mut Vec::new(), self.zero(), 0, &mut |set, s| {
            if s == one {
                out.push(set.to_vec());
            }
        });
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        out
    }

    fn summable_dfs(
        &self,
        chosen: &mut Vec<Elem>,
        partial: Elem,
        start: Elem,
        visit: &mut dyn FnMut(&[Elem], Elem),
    ) {
        visit(chosen, partial);
        for x in start..self.len() {
            if x == self.zero() {
                continue;
            }
            if let Some(s) = self.sum(partial, x) {
                chosen.push(x);
                self.summable_dfs(chosen, s, x + 1, visit);
                chosen.pop();
            }
        }
    }

    fn is_central_by_mackey(&self, a: Elem) -> bool {
        self.elements().all(|b| self.mackey(a, b).len() == 1)
    }

    /// `[0,a] × [0,a'] → L, (x, y) ↦ x ⊕ y` is an isomorphism.
    fn is_central_by_splitting(&self, a: Elem) -> bool {
        let ac = self.complement(a);
        let below_a: Vec<Elem> = self.down_set(a).ones().collect();
        let below_ac: Vec<Elem> = self.down_set(ac).ones().collect();
        if below_a.len() * below_ac.len() != self.len() {
            return false;
        }
        let mut pairs = Vec::with_capacity(self.len());
        let mut hit = vec![false; self.len()];
        for &x in &below_a {
            for &y in &below_ac {
                let Some(s) = self.sum(x, y) else {
                    return false;
                };
                if std::mem::replace(&mut hit[s], true) {
                    return false;
                }
                pairs.push((x, y, s));
            }
        }
        for &(x, y, s) in &pairs {
            for &(u, v, t) in &pairs {
                let left = self.sum(x, u).filter(|&xu| self.leq(xu, a));
                let right = self.sum(y, v).filter(|&yv| self.leq(yv, ac));
                match (left.zip(right), self.sum(s, t)) {
                    (None, None) => {}
                    (Some((xu, yv)), Some(st)) => {
                        if self.sum(xu, yv) != Some(st) {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    /// Central elements, using unique Mackey decompositions only.
    pub(crate) fn center_by_mackey(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| self.is_central_by_mackey(a))
            .collect()
    }

    /// Decides centrality two ways and fails if they disagree.
    pub fn is_central(&self, a: Elem) -> Result<bool, OaError> {
        let by_mackey = self.is_central_by_mackey(a);
        let by_splitting = self.is_central_by_splitting(a);
        if by_mackey != by_splitting {
            return Err(OaError::InternalInconsistency(format!(
                "centrality of `{}`: unique-Mackey says {by_mackey}, splitting says {by_splitting}",
                self.label(a)
            )));
        }
        Ok(by_mackey)
    }

    pub fn center(&self) -> Result<Vec<Elem>, OaError> {
        let mut out = Vec::new();
        for a in self.elements() {
            if self.is_central(a)? {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Splits `L` as the product of the intervals below its central atoms.
    /// The product of the returned factors is checked to be isomorphic to `L`.
    pub fn central_decomposition(&self) -> Result<Vec<FiniteOrthoalgebra>, OaError> {
        let center = self.center()?;
        let central_atoms: Vec<Elem> = center
            .iter()
            .copied()
            .filter(|&a| {
                a != self.zero()
                    && center
                        .iter()
                        .all(|&b| b == self.zero() || b == a || !self.leq(b, a))
            })
            .collect();
        let factors = central_atoms
            .iter()
            .map(|&a| self.interval(a))
            .collect::<Result<Vec<_>, _>>()?;
        let mut product = factors[0].clone();
        for f in &factors[1..] {
            product = product.product(f)?;
        }
        if product.is_isomorphic(self).is_none() {
            return Err(OaError::InternalInconsistency(
                "product of central factors is not isomorphic to the input".into(),
            ));
        }
        Ok(factors)
    }
}
