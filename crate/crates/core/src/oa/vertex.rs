//! Exact vertex enumeration for `{x : A x = b, 0 ≤ x ≤ 1}`.
//!
//! The equality system is solved by exact Gaussian elimination, leaving an
//! affine parametrisation `x = x₀ + G t` over the free coordinates `t`. The
//! box constraints then cut out a polytope in `t`, whose vertices are found
//! by the double-description method on the homogenised cone
//! `{(t, s) : G t + x₀ s ≥ 0, s·1 − G t − x₀ s ≥ 0, s ≥ 0}`.

use fixedbitset::FixedBitSet;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

struct Parametrisation {
    /// Value at `t = 0`.
    offset: Vec<Q>,
    /// `gens[i][j]` is the coefficient of free variable `j` in coordinate `i`.
    gens: Vec<Vec<Q>>,
    free: usize,
}

fn solve_affine(m: usize, equalities: &[(Vec<Q>, Q)]) -> Option<Parametrisation> {
    let mut rows: Vec<Vec<Q>> = equalities
        .iter()
        .map(|(coeffs, rhs)| {
            let mut row = coeffs.clone();
            row.resize(m, Q::zero());
            row.push(rhs.clone());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..=m {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] = &rows[i][j] - delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let free_cols: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let k = free_cols.len();
    let mut offset = vec![Q::zero(); m];
    let mut gens = vec![vec![Q::zero(); k]; m];
    for (j, &c) in free_cols.iter().enumerate() {
        gens[c][j] = Q::one();
    }
    for (i, &pc) in pivots.iter().enumerate() {
        offset[pc] = rows[i][m].clone();
        for (j, &c) in free_cols.iter().enumerate() {
            gens[pc][j] = -rows[i][c].clone();
        }
    }
    Some(Parametrisation {
        offset,
        gens,
        free: k,
    })
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn normalise(ray: &mut [Q]) {
    let total = ray.iter().fold(Q::zero(), |acc, x| acc + x);
    if !total.is_zero() {
        for v in ray.iter_mut() {
            *v = &*v / &total;
        }
    }
}

/// Vertices of `{x ∈ ℚᵐ : A x = b, 0 ≤ x ≤ 1}`, sorted lexicographically.
/// Each equality is `(coefficients, right-hand side)`.
pub fn enumerate_polytope_vertices(m: usize, equalities: &[(Vec<Q>, Q)]) -> Vec<Vec<Q>> {
    let Some(par) = solve_affine(m, equalities) else {
        return Vec::new();
    };
    let k = par.free;
    let dim = k + 1;
    // Constraint rows over (t, s).
    let mut cons: Vec<Vec<Q>> = Vec::with_capacity(2 * m + 1);
    let mut s_row = vec![Q::zero(); dim];
    s_row[k] = Q::one();
    cons.push(s_row);
    for i in 0..m {
        let mut lower = par.gens[i].clone();
        lower.push(par.offset[i].clone());
        let mut upper: Vec<Q> = par.gens[i].iter().map(|g| -g.clone()).collect();
        upper.push(Q::one() - &par.offset[i]);
        for row in [lower, upper] {
            if !cons.contains(&row) {
                cons.push(row);
            }
        }
    }
    let nc = cons.len();

    // Start from the orthant t ≥ 0, s ≥ 0: the rows for the free coordinates'
    // lower bounds are unit vectors.
    let mut processed = FixedBitSet::with_capacity(nc);
    processed.insert(0);
    for j in 0..k {
        let mut unit = vec![Q::zero(); dim];
        unit[j] = Q::one();
        let idx = cons
            .iter()
            .position(|c| *c == unit)
            .expect("free coordinate bound present");
        processed.insert(idx);
    }
    let zero_set = |ray: &[Q], processed: &FixedBitSet| {
        let mut z = FixedBitSet::with_capacity(nc);
        for c in processed.ones() {
            if dot(&cons[c], ray).is_zero() {
                z.insert(c);
            }
        }
        z
    };
    let mut rays: Vec<(Vec<Q>, FixedBitSet)> = (0..dim)
        .map(|j| {
            let mut r = vec![Q::zero(); dim];
            r[j] = Q::one();
            let z = zero_set(&r, &processed);
            (r, z)
        })
        .collect();

    for c in 0..nc {
        if processed.contains(c) {
            continue;
        }
        let values: Vec<Q> = rays.iter().map(|(r, _)| dot(&cons[c], r)).collect();
        let plus: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let minus: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        let mut next: Vec<(Vec<Q>, FixedBitSet)> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let mut common = rays[p].1.clone();
                common.intersect_with(&rays[q].1);
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != q)
                    .all(|o| !rays[o].1.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let (vp, vq) = (&values[p], &values[q]);
                let mut ray: Vec<Q> = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(rq, rp)| vp * rq - vq * rp)
                    .collect();
                normalise(&mut ray);
                next.push((ray, FixedBitSet::new()));
            }
        }
        processed.insert(c);
        let mut kept: Vec<(Vec<Q>, FixedBitSet)> = rays
            .into_iter()
            .zip(&values)
            .filter(|(_, v)| !v.is_negative())
            .map(|(r, _)| r)
            .chain(next)
            .collect();
        for entry in kept.iter_mut() {
            entry.1 = zero_set(&entry.0, &processed);
        }
        kept.sort_by(|a, b| a.0.cmp(&b.0));
        kept.dedup_by(|a, b| a.0 == b.0);
        rays = kept;
    }

    let mut vertices: Vec<Vec<Q>> = rays
        .into_iter()
        .filter(|(r, _)| r[k].is_positive())
        .map(|(r, _)| {
            let t: Vec<Q> = r[..k].iter().map(|x| x / &r[k]).collect();
            (0..m)
                .map(|i| &par.offset[i] + dot(&par.gens[i], &t))
                .collect()
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    vertices
}
