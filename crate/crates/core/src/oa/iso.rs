use super::{Elem, FiniteOrthoalgebra};

/// `true` when `map` is a bijection preserving 0, 1 and the full sum table
/// (definedness in both directions and values).
pub fn check_isomorphism(from: &FiniteOrthoalgebra, to: &FiniteOrthoalgebra, map: &[Elem]) -> bool {
    let n = from.len();
    if to.len() != n || map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in map {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    if map[from.zero()] != to.zero() || map[from.one()] != to.one() {
        return false;
    }
    for a in 0..n {
        for b in 0..n {
            match (from.sum(a, b), to.sum(map[a], map[b])) {
                (None, None) => {}
                (Some(s), Some(t)) if map[s] == t => {}
                _ => return false,
            }
        }
    }
    true
}

type Invariant = (usize, usize, usize);

struct Search<'a> {
    from: &'a FiniteOrthoalgebra,
    to: &'a FiniteOrthoalgebra,
    inv_from: Vec<Invariant>,
    inv_to: Vec<Invariant>,
    forward: Vec<Option<Elem>>,
    backward: Vec<Option<Elem>>,
    order: Vec<Elem>,
}

impl Search<'_> {
    fn invariant(l: &FiniteOrthoalgebra, a: Elem) -> Invariant {
        let degree = l.elements().filter(|&b| l.perp(a, b)).count();
        (
            degree,
            l.down_set(a).count_ones(..),
            l.up_set(a).count_ones(..),
        )
    }

    fn consistent(&self, x: Elem) -> bool {
        let y = self.forward[x].expect("mapped");
        for z in 0..self.from.len() {
            let Some(w) = self.forward[z] else { continue };
            for (p, q, pi, qi) in [(x, z, y, w), (z, x, w, y)] {
                match (self.from.sum(p, q), self.to.sum(pi, qi)) {
                    (None, None) => {}
                    (Some(s), Some(t)) => {
                        if self.forward[s].is_some_and(|m| m != t)
                            || self.backward[t].is_some_and(|m| m != s)
                        {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    fn assign(&mut self, x: Elem, y: Elem) -> bool {
        if self.inv_from[x] != self.inv_to[y] {
            return false;
        }
        match (self.forward[x], self.backward[y]) {
            (Some(m), _) => m == y,
            (None, Some(_)) => false,
            (None, None) => {
                self.forward[x] = Some(y);
                self.backward[y] = Some(x);
                true
            }
        }
    }

    fn unassign(&mut self, x: Elem) {
        if let Some(y) = self.forward[x].take() {
            self.backward[y] = None;
        }
    }

    fn extend(&mut self, pos: usize) -> bool {
        let Some(&x) = self.order.get(pos) else {
            return true;
        };
        if self.forward[x].is_some() {
            return self.extend(pos + 1);
        }
        let xc = self.from.complement(x);
        for y in 0..self.to.len() {
            if self.backward[y].is_some() || self.inv_from[x] != self.inv_to[y] {
                continue;
            }
            let yc = self.to.complement(y);
            let comp_was_free = self.forward[xc].is_none();
            if !self.assign(x, y) {
                continue;
            }
            if self.assign(xc, yc)
                && self.consistent(x)
                && self.consistent(xc)
                && self.extend(pos + 1)
            {
                return true;
            }
            if comp_was_free {
                self.unassign(xc);
            }
            self.unassign(x);
        }
        false
    }
}

impl FiniteOrthoalgebra {
    /// Searches for an isomorphism `self → other`; returns the element map.
    ///
    /// Candidates are restricted by (⊥-degree, down-set size, up-set size),
    /// complements are mapped together, and elements with rarer invariants
    /// are placed first. Ties break by index, so the result is deterministic.
    pub fn is_isomorphic(&self, other: &Self) -> Option<Vec<Elem>> {
        let n = self.len();
        if other.len() != n {
            return None;
        }
        let inv_from: Vec<Invariant> = self
            .elements()
            .map(|a| Search::invariant(self, a))
            .collect();
        let inv_to: Vec<Invariant> = other
            .elements()
            .map(|a| Search::invariant(other, a))
            .collect();
        let mut sorted_from = inv_from.clone();
        let mut sorted_to = inv_to.clone();
        sorted_from.sort_unstable();
        sorted_to.sort_unstable();
        if sorted_from != sorted_to {
            return None;
        }
        let rarity = |inv: &Invariant| sorted_from.iter().filter(|&i| i == inv).count();
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&a| (rarity(&inv_from[a]), a));

        let mut search = Search {
            from: self,
            to: other,
            inv_from,
            inv_to,
            forward: vec![None; n],
            backward: vec![None; n],
            order,
        };
        if !search.assign(self.zero(), other.zero()) || !search.assign(self.one(), other.one()) {
            return None;
        }
        if !search.consistent(self.zero()) || !search.consistent(self.one()) {
            return None;
        }
        if !search.extend(0) {
            return None;
        }
        let map: Vec<Elem> = search
            .forward
            .into_iter()
            .map(|m| m.expect("complete"))
            .collect();
        debug_assert!(check_isomorphism(self, other, &map));
        check_isomorphism(self, other, &map).then_some(map)
    }
}
