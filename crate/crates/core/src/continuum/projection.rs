use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::ContinuumError;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Singular values at or below `RANK_FACTOR * tol` count as zero.
pub const RANK_FACTOR: f64 = 100.0;

/// An orthogonal projection on `ℂᵈ`, kept as orthonormal bases of its range
/// and of its kernel. The complement swaps the two, so `(P')' = P` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    range: CMatrix,
    kernel: CMatrix,
    tol: f64,
}

fn threshold(tol: f64) -> f64 {
    RANK_FACTOR * tol
}

fn check_band(sigma: f64, tol: f64) -> Result<(), ContinuumError> {
    let thr = threshold(tol);
    if (sigma - thr).abs() <= tol {
        return Err(ContinuumError::IllConditioned {
            sigma,
            threshold: thr,
        });
    }
    Ok(())
}

fn columns(m: &CMatrix, idx: &[usize]) -> CMatrix {
    let d = m.nrows();
    CMatrix::from_fn(d, idx.len(), |i, j| m[(i, idx[j])])
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

impl Projection {
    /// Splits `ℂᵈ` by the right singular vectors of `m`: those with singular
    /// value above the threshold span the returned range when `keep_large`,
    /// otherwise the kernel of `m` is the range.
    fn from_right_singular(
        m: &CMatrix,
        d: usize,
        keep_large: bool,
        tol: f64,
    ) -> Result<Self, ContinuumError> {
        // Pad to at least d rows so that V is square.
        let rows = m.nrows().max(d);
        let mut padded = CMatrix::zeros(rows, d);
        padded.view_mut((0, 0), (m.nrows(), d)).copy_from(m);
        let svd = padded.svd(false, true);
        let v_t = svd.v_t.expect("requested V");
        let mut large = Vec::new();
        let mut small = Vec::new();
        for (k, &sigma) in svd.singular_values.iter().enumerate() {
            check_band(sigma, tol)?;
            if sigma > threshold(tol) {
                large.push(k);
            } else {
                small.push(k);
            }
        }
        let v = v_t.adjoint();
        let (r, k) = if keep_large {
            (large, small)
        } else {
            (small, large)
        };
        Ok(Projection {
            range: columns(&v, &r),
            kernel: columns(&v, &k),
            tol,
        })
    }

    /// Projection onto the span of `vectors` (each normalised first).
    pub fn from_span(d: usize, vectors: &[CVector], tol: f64) -> Result<Self, ContinuumError> {
        for v in vectors {
            if v.len() != d {
                return Err(ContinuumError::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
        }
        let useful: Vec<CVector> = vectors
            .iter()
            .filter(|v| v.norm() > threshold(tol))
            .map(|v| v.unscale(v.norm()))
            .collect();
        if useful.is_empty() {
            return Ok(Self::zero(d, tol));
        }
        // Rows of A are the conjugated vectors; the right singular vectors
        // with nonzero singular value span the vectors' span.
        let a = CMatrix::from_fn(useful.len(), d, |i, j| useful[i][j].conj());
        Self::from_right_singular(&a, d, true, tol)
    }

    pub fn from_real_span(
        d: usize,
        vectors: &[Vec<f64>],
        tol: f64,
    ) -> Result<Self, ContinuumError> {
        let vs: Vec<CVector> = vectors
            .iter()
            .map(|v| CVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0))))
            .collect();
        Self::from_span(d, &vs, tol)
    }

    pub fn zero(d: usize, tol: f64) -> Self {
        Projection {
            range: CMatrix::zeros(d, 0),
            kernel: CMatrix::identity(d, d),
            tol,
        }
    }

    pub fn identity(d: usize, tol: f64) -> Self {
        Projection {
            range: CMatrix::identity(d, d),
            kernel: CMatrix::zeros(d, 0),
            tol,
        }
    }

    /// Diagonal projection onto the coordinates flagged `true`.
    pub fn diagonal(flags: &[bool], tol: f64) -> Self {
        let d = flags.len();
        let basis = |keep: bool| -> Vec<CVector> {
            (0..d)
                .filter(|&i| flags[i] == keep)
                .map(|i| {
                    let mut e = CVector::zeros(d);
                    e[i] = Complex64::new(1.0, 0.0);
                    e
                })
                .collect()
        };
        let stack = |vs: Vec<CVector>| {
            if vs.is_empty() {
                CMatrix::zeros(d, 0)
            } else {
                CMatrix::from_columns(&vs)
            }
        };
        Projection {
            range: stack(basis(true)),
            kernel: stack(basis(false)),
            tol,
        }
    }

    /// Validates a matrix as a projection (`‖P² − P‖`, `‖P − P*‖` within
    /// `RANK_FACTOR * tol`) and splits it by eigenvalue.
    pub fn from_matrix(m: &CMatrix, tol: f64) -> Result<Self, ContinuumError> {
        if m.nrows() != m.ncols() {
            return Err(ContinuumError::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let idem = op_norm(&(m * m - m));
        let herm = op_norm(&(m - m.adjoint()));
        if idem > threshold(tol) || herm > threshold(tol) {
            return Err(ContinuumError::NotProjection(format!(
                "‖P²−P‖ = {idem:e}, ‖P−P*‖ = {herm:e}"
            )));
        }
        let h = (m + m.adjoint()).map(|z| z * 0.5);
        let eig = h.symmetric_eigen();
        let (mut r, mut k) = (Vec::new(), Vec::new());
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda > 0.5 {
                r.push(i);
            } else {
                k.push(i);
            }
        }
        Ok(Projection {
            range: columns(&eig.eigenvectors, &r),
            kernel: columns(&eig.eigenvectors, &k),
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.range.nrows()
    }

    pub fn rank(&self) -> usize {
        self.range.ncols()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn range_basis(&self) -> &CMatrix {
        &self.range
    }

    pub fn matrix(&self) -> CMatrix {
        &self.range * self.range.adjoint()
    }

    /// `P' = 1 − P`.
    pub fn complement(&self) -> Self {
        Projection {
            range: self.kernel.clone(),
            kernel: self.range.clone(),
            tol: self.tol,
        }
    }

    fn same_dim(&self, other: &Self) -> Result<(), ContinuumError> {
        if self.dim() != other.dim() {
            return Err(ContinuumError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// `PQ = QP = 0` within tolerance.
    pub fn perp(&self, other: &Self) -> Result<bool, ContinuumError> {
        self.same_dim(other)?;
        let (p, q) = (self.matrix(), other.matrix());
        let tol = self.tol.max(other.tol);
        Ok(op_norm(&(&p * &q)) <= tol && op_norm(&(&q * &p)) <= tol)
    }

    /// `P ⊕ Q = P + Q` for orthogonal projections.
    pub fn oplus(&self, other: &Self) -> Result<Self, ContinuumError> {
        if !self.perp(other)? {
            return Err(ContinuumError::NotOrthogonal);
        }
        let vs: Vec<CVector> = self
            .range
            .column_iter()
            .chain(other.range.column_iter())
            .map(|c| c.into_owned())
            .collect();
        Self::from_span(self.dim(), &vs, self.tol.max(other.tol))
    }

    /// Projection onto `ran P ∩ ran Q`: the kernel of `[1 − P; 1 − Q]`.
    pub fn meet(&self, other: &Self) -> Result<Self, ContinuumError> {
        self.same_dim(other)?;
        let d = self.dim();
        let id = CMatrix::identity(d, d);
        let mut stacked = CMatrix::zeros(2 * d, d);
        stacked
            .view_mut((0, 0), (d, d))
            .copy_from(&(&id - self.matrix()));
        stacked
            .view_mut((d, 0), (d, d))
            .copy_from(&(&id - other.matrix()));
        Self::from_right_singular(&stacked, d, false, self.tol.max(other.tol))
    }

    /// `P ≤ Q` iff `QP = P` within tolerance.
    pub fn leq(&self, other: &Self) -> Result<bool, ContinuumError> {
        self.same_dim(other)?;
        let (p, q) = (self.matrix(), other.matrix());
        Ok(op_norm(&(&q * &p - &p)) <= threshold(self.tol.max(other.tol)))
    }

    pub fn distance(&self, other: &Self) -> Result<f64, ContinuumError> {
        self.same_dim(other)?;
        Ok(op_norm(&(self.matrix() - other.matrix())))
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        let m = self.matrix();
        (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>], tol: f64) -> Result<Self, ContinuumError> {
        let d = rows.len();
        for r in rows {
            if r.len() != d {
                return Err(ContinuumError::DimensionMismatch {
                    expected: d,
                    got: r.len(),
                });
            }
        }
        let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
        Self::from_matrix(&m, tol)
    }
}

impl Serialize for Projection {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Projection {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        Projection::from_rows(&rows, DEFAULT_TOL).map_err(serde::de::Error::custom)
    }
}

/// A complex vector with independent standard normal components.
pub fn gaussian_vector<R: Rng>(d: usize, rng: &mut R) -> CVector {
    CVector::from_fn(d, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    })
}

/// A Haar-like random orthonormal basis, as the columns of a unitary.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let frame: Vec<CVector> = (0..d).map(|_| gaussian_vector(d, rng)).collect();
    CMatrix::from_columns(&frame).qr().q()
}

/// Projection onto the span of `rank` Gaussian vectors.
pub fn random_projection<R: Rng>(
    d: usize,
    rank: usize,
    tol: f64,
    rng: &mut R,
) -> Result<Projection, ContinuumError> {
    let vs: Vec<CVector> = (0..rank).map(|_| gaussian_vector(d, rng)).collect();
    Projection::from_span(d, &vs, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeetDiscontinuity {
    pub theta: f64,
    /// `‖P_θ − P₀‖`, computed from the matrices.
    pub norm_gap: f64,
    /// `|sin θ|`.
    pub closed_form: f64,
    pub meet_rank_at_theta: usize,
    pub meet_rank_at_limit: usize,
}

/// In `ℂ²`, `P_θ` projects onto `(cos θ, sin θ)` and `Q = P₀` onto `e₁`.
/// `P_θ → P₀` in norm while `P_θ ∧ Q = 0` and `P₀ ∧ Q = Q`.
pub fn meet_discontinuity_witness(
    theta: f64,
    tol: f64,
) -> Result<MeetDiscontinuity, ContinuumError> {
    if !(theta.abs() > 0.0 && theta.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(ContinuumError::ThetaOutOfRange(theta));
    }
    let p_theta = Projection::from_real_span(2, &[vec![theta.cos(), theta.sin()]], tol)?;
    let p_zero = Projection::from_real_span(2, &[vec![1.0, 0.0]], tol)?;
    let q = p_zero.clone();
    Ok(MeetDiscontinuity {
        theta,
        norm_gap: p_theta.distance(&p_zero)?,
        closed_form: theta.sin().abs(),
        meet_rank_at_theta: p_theta.meet(&q)?.rank(),
        meet_rank_at_limit: p_zero.meet(&q)?.rank(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSeparation {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub min_distance: f64,
}

/// Minimum `‖P − Q‖` over `trials` random pairs with `rank P ≠ rank Q`.
pub fn rank_separation_check(
    d: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<RankSeparation, ContinuumError> {
    if !(2..=8).contains(&d) {
        return Err(ContinuumError::DimensionOutOfRange(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_distance = f64::INFINITY;
    for _ in 0..trials {
        let r1 = rng.random_range(0..=d);
        let mut r2 = rng.random_range(0..d);
        if r2 >= r1 {
            r2 += 1;
        }
        let p = random_projection(d, r1, tol, &mut rng)?;
        let q = random_projection(d, r2, tol, &mut rng)?;
        debug_assert_eq!((p.rank(), q.rank()), (r1, r2));
        min_distance = min_distance.min(p.distance(&q)?);
    }
    Ok(RankSeparation {
        d,
        trials,
        seed,
        min_distance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubeffectReport {
    /// `‖(Q−P)² − (Q−P)‖`.
    pub idempotence_error: f64,
    /// `‖(Q−P) − (Q−P)*‖`.
    pub self_adjointness_error: f64,
    pub samples: usize,
    /// Samples where `P + R ≤ 1` and `P ⊥ R` disagreed.
    pub mismatches: usize,
    pub passes: bool,
}

/// For `P ≤ Q`: `Q − P` is a projection, and on sampled `R`,
/// `P + R ≤ 1 ⇔ P ⊥ R`. Half the samples are drawn below `P'` so both
/// sides of the equivalence are exercised.
pub fn faithful_subeffect_check(
    p: &Projection,
    q: &Projection,
    samples: usize,
    seed: u64,
) -> Result<SubeffectReport, ContinuumError> {
    p.same_dim(q)?;
    let tol = p.tol.max(q.tol);
    let d = p.dim();
    let (pm, qm) = (p.matrix(), q.matrix());
    let diff = &qm - &pm;
    let lowest = min_eigenvalue(&diff);
    if lowest < -threshold(tol) {
        return Err(ContinuumError::NotDominated {
            min_eigenvalue: lowest,
        });
    }
    let idempotence_error = op_norm(&(&diff * &diff - &diff));
    let self_adjointness_error = op_norm(&(&diff - diff.adjoint()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = CMatrix::identity(d, d);
    let pc = p.complement();
    let mut mismatches = 0;
    for s in 0..samples {
        let r = if s % 2 == 0 {
            let k = rng.random_range(0..=pc.rank());
            let vs: Vec<CVector> = (0..k)
                .map(|_| &pc.range * gaussian_vector(pc.rank(), &mut rng))
                .collect();
            Projection::from_span(d, &vs, tol)?
        } else {
            let k = rng.random_range(0..=d);
            random_projection(d, k, tol, &mut rng)?
        };
        let below_one = min_eigenvalue(&(&id - &pm - r.matrix())) >= -threshold(tol);
        if below_one != p.perp(&r)? {
            mismatches += 1;
        }
    }
    let passes = idempotence_error <= tol && self_adjointness_error <= tol && mismatches == 0;
    Ok(SubeffectReport {
        idempotence_error,
        self_adjointness_error,
        samples,
        mismatches,
        passes,
    })
}

/// A random chain `P ≤ Q = P ⊕ R` in `ℂᵈ` from one random orthonormal basis.
pub fn random_chain<R: Rng>(
    d: usize,
    tol: f64,
    rng: &mut R,
) -> Result<(Projection, Projection), ContinuumError> {
    let u = random_unitary(d, rng);
    let r1 = rng.random_range(0..=d);
    let r2 = rng.random_range(0..=d - r1);
    let cols = |range: std::ops::Range<usize>| -> Vec<CVector> {
        range.map(|j| u.column(j).into_owned()).collect()
    };
    let p = Projection::from_span(d, &cols(0..r1), tol)?;
    let r = Projection::from_span(d, &cols(r1..r1 + r2), tol)?;
    let q = p.oplus(&r)?;
    Ok((p, q))
}

/// `f(P) = ⟨Px, x⟩` for a unit vector `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorState {
    x: CVector,
}

impl VectorState {
    pub fn new(x: CVector, tol: f64) -> Result<Self, ContinuumError> {
        let norm = x.norm();
        if (norm - 1.0).abs() > threshold(tol) {
            return Err(ContinuumError::NotUnit { norm });
        }
        Ok(VectorState { x })
    }

    pub fn from_real(x: &[f64], tol: f64) -> Result<Self, ContinuumError> {
        Self::new(
            CVector::from_iterator(x.len(), x.iter().map(|&v| Complex64::new(v, 0.0))),
            tol,
        )
    }

    pub fn eval(&self, p: &Projection) -> Result<f64, ContinuumError> {
        if p.dim() != self.x.len() {
            return Err(ContinuumError::DimensionMismatch {
                expected: self.x.len(),
                got: p.dim(),
            });
        }
        // ⟨Px, x⟩ = ‖R*x‖² for P = R R*.
        Ok((p.range.adjoint() * &self.x).norm_squared())
    }
}

/// `count` seeded random unit vectors plus the standard basis.
pub fn random_frame(
    d: usize,
    count: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<VectorState>, ContinuumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut frame = Vec::with_capacity(d + count);
    for i in 0..d {
        let mut e = CVector::zeros(d);
        e[i] = Complex64::new(1.0, 0.0);
        frame.push(VectorState::new(e, tol)?);
    }
    for _ in 0..count {
        let g = gaussian_vector(d, &mut rng);
        frame.push(VectorState::new(g.unscale(g.norm()), tol)?);
    }
    Ok(frame)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub pairs: usize,
    pub comparable: usize,
    /// Pairs with `f(P) ≤ f(Q)` for every frame state but `P ≰ Q`.
    pub failures: usize,
}

/// Checks on sampled pairs that `f(P) ≤ f(Q)` for all frame states implies
/// `P ≤ Q`. Half the pairs are chains, so the implication is exercised
/// from both sides.
pub fn frame_order_check(
    d: usize,
    frame: &[VectorState],
    pairs: usize,
    seed: u64,
    tol: f64,
) -> Result<FrameReport, ContinuumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comparable = 0;
    let mut failures = 0;
    for s in 0..pairs {
        let (p, q) = if s % 2 == 0 {
            random_chain(d, tol, &mut rng)?
        } else {
            let r1 = rng.random_range(0..=d);
            let r2 = rng.random_range(0..=d);
            (
                random_projection(d, r1, tol, &mut rng)?,
                random_projection(d, r2, tol, &mut rng)?,
            )
        };
        let mut dominated = true;
        for f in frame {
            if f.eval(&p)? > f.eval(&q)? + threshold(tol) {
                dominated = false;
                break;
            }
        }
        let leq = p.leq(&q)?;
        if leq {
            comparable += 1;
        }
        if dominated && !leq {
            failures += 1;
        }
    }
    Ok(FrameReport {
        pairs,
        comparable,
        failures,
    })
}
