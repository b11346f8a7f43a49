//! Slice pencils of boundary-shape tensors and the rank-p pipeline.
//!
//! An n x (m-1)n x m tensor T with nonsingular flattening H(T) (its first
//! m-1 slices stacked) contracts to an l-tuple Y = (Y_1..Y_l), l = m-1, of
//! n x n matrices: the slices of T times H(T)^(-1). Everything rank-related
//! then lives on the determinant hypersurface of the pencil
//!
//! ```text
//! M(a, Y) = a_1 Y_1 + ... + a_l Y_l - a_m E_n .
//! ```
//!
//! Real points (a, v) with M(a, Y) v = 0 supply rank-one directions; p
//! independent ones decompose the canonical tensor X(Y) at rank exactly
//! p = l*n, and pull back to T. If no direction of the a-sphere ever meets
//! the hypersurface, det M keeps one sign and the rank provably exceeds p;
//! `classify` reports which situation the sampler saw.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Mat};
use crate::rng::{derive_seed, GaussianStream};
use crate::tensor::{canonical_tensor, relative_residual, Decomposition, RankOneTerm, Tensor3};
use crate::tol;

/// The coefficient tuple (Y_1..Y_l) of a slice pencil, all n x n.
#[derive(Debug, Clone)]
pub struct Pencil {
    slices: Vec<Mat>,
    /// The H(T)^(-1) used to produce this pencil, when it came from a
    /// contraction (kept for provenance/diagnostics).
    h_inv: Option<Mat>,
}

impl Pencil {
    pub fn new(slices: Vec<Mat>) -> Result<Pencil> {
        if slices.len() < 2 {
            return Err(Error::Dimension("a pencil needs at least two slices".into()));
        }
        let n = slices[0].rows();
        if slices.iter().any(|s| s.rows() != n || s.cols() != n) {
            return Err(Error::Dimension("pencil slices must be square of equal size".into()));
        }
        Ok(Pencil { slices, h_inv: None })
    }

    /// Contracts a boundary-shape tensor (d2 = (d3-1) * d1, d3 >= 3) to its
    /// pencil: (Y_1 ... Y_l) = X_m * H(X)^(-1), split into n x n blocks.
    /// A singular flattening means the input is not generic.
    pub fn from_tensor(x: &Tensor3) -> Result<Pencil> {
        let (n, p, m) = x.dims();
        if m < 3 || p != (m - 1) * n {
            return Err(Error::Dimension(format!(
                "contraction needs shape n x (m-1)n x m with m >= 3, got {n}x{p}x{m}"
            )));
        }
        let l = m - 1;
        let h = x.slice_stack(l)?;
        let h_inv = match h.inverse() {
            Ok(inv) => inv,
            Err(Error::Singular { rcond }) => return Err(Error::NotGeneric { rcond }),
            Err(e) => return Err(e),
        };
        let prod = x.slice(l).matmul(&h_inv);
        let slices = (0..l).map(|k| Mat::from_fn(n, n, |i, j| prod.get(i, k * n + j))).collect();
        Ok(Pencil { slices, h_inv: Some(h_inv) })
    }

    /// Side length n of the slices.
    pub fn order(&self) -> usize {
        self.slices[0].rows()
    }

    /// Number of slices l = m - 1.
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction a pencil has at least two slices
    }

    pub fn slices(&self) -> &[Mat] {
        &self.slices
    }

    pub fn h_inverse(&self) -> Option<&Mat> {
        self.h_inv.as_ref()
    }

    /// Width p = l * n of the canonical tensor.
    pub fn width(&self) -> usize {
        self.len() * self.order()
    }

    /// Evaluates M(a, Y) = a_1 Y_1 + ... + a_l Y_l - a_m E for a of length
    /// l + 1 (the last coordinate multiplies the identity).
    pub fn eval(&self, a: &[f64]) -> Result<Mat> {
        if a.len() != self.len() + 1 {
            return Err(Error::Dimension(format!(
                "pencil evaluation needs {} coefficients, got {}",
                self.len() + 1,
                a.len()
            )));
        }
        let n = self.order();
        let mut m = Mat::zeros(n, n);
        for (coef, slice) in a.iter().zip(&self.slices) {
            if *coef != 0.0 {
                m = m.add(&slice.scaled(*coef));
            }
        }
        let am = a[self.len()];
        for i in 0..n {
            m.set(i, i, m.get(i, i) - am);
        }
        Ok(m)
    }

    /// The canonical tensor X(Y) of this pencil (see `tensor::canonical_tensor`).
    pub fn canonical(&self) -> Tensor3 {
        canonical_tensor(&self.slices).expect("pencil slices are valid")
    }

    /// Combination of the slices along a unit direction of the a-sphere's
    /// first l coordinates.
    fn direction_matrix(&self, dir: &[f64]) -> Mat {
        let n = self.order();
        let mut m = Mat::zeros(n, n);
        for (coef, slice) in dir.iter().zip(&self.slices) {
            if *coef != 0.0 {
                m = m.add(&slice.scaled(*coef));
            }
        }
        m
    }

    /// Samples the determinant hypersurface: for each of `directions`
    /// pseudo-random unit vectors of R^l (direction i drawn from the stream
    /// seeded `derive_seed(seed, i)`, so the point list for a larger budget
    /// extends the list for a smaller one), collects one certified point per
    /// real eigenvalue of the direction matrix. Points are ordered by
    /// (direction index, eigenvalue); each satisfies the `tol::PT` residual
    /// contracts.
    pub fn sample_points(&self, directions: usize, seed: u64) -> Vec<HypersurfacePoint> {
        let mut out = Vec::new();
        self.sample_range(0, directions, seed, &mut out);
        out
    }

    fn sample_range(&self, from: usize, to: usize, seed: u64, out: &mut Vec<HypersurfacePoint>) {
        let n = self.order();
        for idx in from..to {
            let mut g = GaussianStream::new(derive_seed(seed, idx as u64));
            let dir = g.next_unit_vector(self.len());
            let s = self.direction_matrix(&dir);
            let Ok(pairs) = s.real_eigenpairs(tol::PT) else { continue };
            for (lambda, v) in pairs {
                let mut m = s.clone();
                for i in 0..n {
                    m.set(i, i, m.get(i, i) - lambda);
                }
                let m_norm = m.frobenius_norm();
                let eig_residual = norm2(&m.matvec(&v));
                let det_residual = m.det().expect("square").abs();
                let det_scale = m_norm.max(1.0).powi(n as i32);
                if eig_residual <= tol::PT * m_norm.max(tol::EPS_FLOOR)
                    && det_residual <= tol::PT * det_scale
                {
                    out.push(HypersurfacePoint {
                        direction: dir.clone(),
                        eigenvalue: lambda,
                        vector: v,
                        det_residual,
                    });
                }
            }
        }
    }

    /// Decides the sign behavior of det M(a, Y) by sampling. Returns the
    /// first strictly negative determinant value found (probing a_m on a
    /// geometric epsilon ladder around each sampled eigenvalue, verified by
    /// an independent re-evaluation), or reports that every direction missed
    /// the hypersurface, or that points exist but no negative value was seen.
    pub fn classify(&self, directions: usize, seed: u64) -> Classification {
        let n = self.order();
        let mut points = Vec::new();
        for idx in 0..directions {
            let mut g = GaussianStream::new(derive_seed(seed, idx as u64));
            let dir = g.next_unit_vector(self.len());
            let s = self.direction_matrix(&dir);
            let Ok(pairs) = s.real_eigenpairs(tol::PT) else { continue };
            for (lambda, v) in &pairs {
                for exp in 2..=8 {
                    let eps = 10f64.powi(-exp) * (1.0 + lambda.abs());
                    for sign in [1.0, -1.0] {
                        let am = lambda + sign * eps;
                        let mut m = s.clone();
                        for i in 0..n {
                            m.set(i, i, m.get(i, i) - am);
                        }
                        let det = m.det().expect("square");
                        if det < 0.0 {
                            let mut a = dir.clone();
                            a.push(am);
                            // Independent re-evaluation through the public
                            // pencil path before reporting the witness.
                            let check = self.eval(&a).and_then(|mm| mm.det()).unwrap_or(0.0);
                            if check < 0.0 {
                                return Classification {
                                    verdict: Verdict::NegativeWitness { a, det: check },
                                    directions_tried: directions,
                                    seed,
                                };
                            }
                        }
                    }
                }
                // Retain the point for the no-witness verdict.
                let mut m = s.clone();
                for i in 0..n {
                    m.set(i, i, m.get(i, i) - lambda);
                }
                points.push(HypersurfacePoint {
                    direction: dir.clone(),
                    eigenvalue: *lambda,
                    vector: v.clone(),
                    det_residual: m.det().expect("square").abs(),
                });
            }
        }
        let verdict = if points.is_empty() {
            Verdict::NoRealPointFound
        } else {
            Verdict::RealPointsButNoNegativeWitness { points }
        };
        Classification { verdict, directions_tried: directions, seed }
    }

    /// Rank-p decomposition of the canonical tensor X(Y): samples
    /// hypersurface points with an escalating direction count (starting at
    /// 8p, doubling up to `budget`), selects p well-conditioned candidate
    /// columns, and verifies the reconstruction. On exhaustion, returns
    /// `NoDecomposition` carrying a classification of the pencil.
    pub fn decompose_canonical(
        &self,
        budget: usize,
        seed: u64,
        tol_rec: f64,
    ) -> Result<Decomposition> {
        let p = self.width();
        let target = self.canonical();
        let mut points = Vec::new();
        let mut sampled = 0;
        let mut round = (tol::FIRST_ROUND_DIRECTIONS_PER_P * p).min(budget).max(1);
        loop {
            self.sample_range(sampled, round, seed, &mut points);
            sampled = round;
            if points.len() >= p {
                if let Ok((b, chosen)) = assemble_candidate_basis(&points, p) {
                    if let Ok(q) = b.inverse() {
                        let decomp = decomposition_from_points(&chosen, &q, self.len());
                        let residual = relative_residual(&target, &decomp)?;
                        if residual <= tol_rec {
                            return Ok(decomp);
                        }
                    }
                }
            }
            if sampled >= budget {
                break;
            }
            round = (round * 2).min(budget);
        }
        Err(Error::NoDecomposition(Box::new(self.classify(sampled.max(1), seed))))
    }
}

/// A certified point of the determinant hypersurface: a unit direction in
/// the first l coordinates, the eigenvalue giving the last coordinate, a
/// unit kernel vector, and the leftover |det M(a, Y)|.
#[derive(Debug, Clone)]
pub struct HypersurfacePoint {
    pub direction: Vec<f64>,
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
    pub det_residual: f64,
}

impl HypersurfacePoint {
    /// The stacked candidate column (a_1 v; ...; a_l v) of R^p. Unit norm,
    /// since both the direction and the kernel vector are unit.
    fn candidate_column(&self) -> Vec<f64> {
        let mut col = Vec::with_capacity(self.direction.len() * self.vector.len());
        for a in &self.direction {
            for v in &self.vector {
                col.push(a * v);
            }
        }
        col
    }
}

/// What the sampler concluded about the sign of det M(a, Y).
#[derive(Debug, Clone)]
pub enum Verdict {
    /// A coefficient vector with strictly negative determinant (re-verified
    /// before being returned). The pencil's tensor can reach rank p on an
    /// open neighborhood.
    NegativeWitness { a: Vec<f64>, det: f64 },
    /// Every sampled direction missed the hypersurface: strong evidence the
    /// determinant never vanishes off the origin and the rank exceeds p.
    NoRealPointFound,
    /// Points exist but the determinant never went negative nearby
    /// (nonnegative-determinant boundary behavior).
    RealPointsButNoNegativeWitness { points: Vec<HypersurfacePoint> },
}

/// Outcome of `Pencil::classify`, remembering the sampling effort.
#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    pub directions_tried: usize,
    pub seed: u64,
}

impl Classification {
    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::NegativeWitness { .. } => "negative-witness",
            Verdict::NoRealPointFound => "no-real-point-found",
            Verdict::RealPointsButNoNegativeWitness { .. } => "real-points-but-no-negative-witness",
        }
    }
}

/// Greedy pivoted column selection (modified Gram-Schmidt, largest residual
/// norm first, lowest index on ties): picks p of the candidate columns and
/// returns them as an invertible p x p matrix together with the points that
/// produced them. Fails with `RankDeficient` when the candidates span fewer
/// than p dimensions within the pivot screen `tol::B_PIVOT_RATIO`.
pub fn assemble_candidate_basis(
    points: &[HypersurfacePoint],
    p: usize,
) -> Result<(Mat, Vec<HypersurfacePoint>)> {
    if points.len() < p {
        return Err(Error::RankDeficient { achieved: points.len(), required: p });
    }
    let columns: Vec<Vec<f64>> = points.iter().map(|pt| pt.candidate_column()).collect();
    if columns.iter().any(|c| c.len() != p) {
        return Err(Error::Dimension(format!(
            "candidate columns must have length {p} (pencil width mismatch)"
        )));
    }
    let mut residuals = columns.clone();
    let mut chosen: Vec<usize> = Vec::with_capacity(p);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(p);
    let mut first_pivot = 0.0;
    for step in 0..p {
        let mut best = usize::MAX;
        let mut best_norm = -1.0;
        for (idx, r) in residuals.iter().enumerate() {
            if chosen.contains(&idx) {
                continue;
            }
            let nrm = norm2(r);
            if nrm > best_norm {
                best_norm = nrm;
                best = idx;
            }
        }
        if step == 0 {
            first_pivot = best_norm;
        }
        if best == usize::MAX || best_norm <= tol::B_PIVOT_RATIO * first_pivot.max(tol::EPS_FLOOR) {
            return Err(Error::RankDeficient { achieved: step, required: p });
        }
        chosen.push(best);
        let q: Vec<f64> = residuals[best].iter().map(|x| x / best_norm).collect();
        for (idx, r) in residuals.iter_mut().enumerate() {
            if chosen.contains(&idx) {
                continue;
            }
            let coef = dot(&q, r);
            for (ri, qi) in r.iter_mut().zip(&q) {
                *ri -= coef * qi;
            }
        }
        basis.push(q);
    }
    let mut b = Mat::zeros(p, p);
    for (c, &idx) in chosen.iter().enumerate() {
        b.set_col(c, &columns[idx]);
    }
    let chosen_points = chosen.iter().map(|&idx| points[idx].clone()).collect();
    Ok((b, chosen_points))
}

/// Terms of the canonical decomposition: column j of the kernel-vector
/// matrix, row j of B^(-1), and the coefficient profile (a_1..a_l, lambda).
fn decomposition_from_points(chosen: &[HypersurfacePoint], q: &Mat, l: usize) -> Decomposition {
    let n = chosen[0].vector.len();
    let p = l * n;
    let terms = chosen
        .iter()
        .enumerate()
        .map(|(j, pt)| {
            let mut w = pt.direction.clone();
            w.push(pt.eigenvalue);
            RankOneTerm { u: pt.vector.clone(), v: q.row(j).to_vec(), w }
        })
        .collect();
    Decomposition { shape: (n, p, l + 1), terms }
}

/// Result of `decompose_generic` on a boundary-shape tensor.
#[derive(Debug, Clone)]
pub enum GenericOutcome {
    /// A rank-p decomposition with its verified relative residual.
    RankP { decomposition: Decomposition, residual: f64 },
    /// No decomposition at rank p, and the sampler never found a real
    /// hypersurface point: probabilistic evidence that rank >= p + 1.
    RankExceedsP(Classification),
}

/// Default direction budget for a pencil of width p.
pub fn default_budget(p: usize) -> usize {
    tol::MAX_DIRECTIONS_PER_P * p
}

fn term_factor(term: &RankOneTerm, mode: usize) -> &[f64] {
    match mode {
        0 => &term.u,
        1 => &term.v,
        _ => &term.w,
    }
}

/// Re-fits every factor of one mode of `d` to `t` by least squares, keeping
/// the other two modes fixed. Returns `None` when the fixed factors span a
/// degenerate design (rank-deficient rank-one basis).
fn refit_mode(t: &Tensor3, d: &Decomposition, mode: usize) -> Option<Decomposition> {
    let (n, p, m) = t.dims();
    let dims = [n, p, m];
    let k = d.terms.len();
    let (o1, o2) = match mode {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let rows = dims[o1] * dims[o2];
    if rows < k {
        return None;
    }
    // Column j of the design is the outer product of term j's two fixed
    // factors; every coordinate of the refitted mode shares that design.
    let mut design = Mat::zeros(rows, k);
    for (j, term) in d.terms.iter().enumerate() {
        let f1 = term_factor(term, o1);
        let f2 = term_factor(term, o2);
        for a in 0..dims[o1] {
            for b in 0..dims[o2] {
                design.set(a * dims[o2] + b, j, f1[a] * f2[b]);
            }
        }
    }
    let mut rhs = Mat::zeros(rows, dims[mode]);
    for c in 0..dims[mode] {
        for a in 0..dims[o1] {
            for b in 0..dims[o2] {
                let mut idx = [0usize; 3];
                idx[mode] = c;
                idx[o1] = a;
                idx[o2] = b;
                rhs.set(a * dims[o2] + b, c, t.get(idx[0], idx[1], idx[2]));
            }
        }
    }
    let x = design.least_squares(&rhs).ok()?;
    let terms = d
        .terms
        .iter()
        .enumerate()
        .map(|(j, term)| {
            let fitted: Vec<f64> = (0..dims[mode]).map(|c| x.get(j, c)).collect();
            let mut new = term.clone();
            match mode {
                0 => new.u = fitted,
                1 => new.v = fitted,
                _ => new.w = fitted,
            }
            new
        })
        .collect();
    Some(Decomposition { shape: t.dims(), terms })
}

/// Alternating least-squares sweeps over the three modes, accepting only
/// refits that lower the relative residual. Used to polish a decomposition
/// whose factors inherited roundoff from an ill-conditioned contraction;
/// each mode refit is optimal given the other two, so the residual is
/// non-increasing. Stops early once the residual reaches `target` or a
/// full sweep makes no progress.
fn als_polish(
    t: &Tensor3,
    d: Decomposition,
    sweeps: usize,
    target: f64,
) -> Result<(Decomposition, f64)> {
    let mut best = relative_residual(t, &d)?;
    let mut cur = d;
    for _ in 0..sweeps {
        let at_sweep_start = best;
        for mode in [1usize, 0, 2] {
            let Some(next) = refit_mode(t, &cur, mode) else { continue };
            let r = relative_residual(t, &next)?;
            if r < best {
                best = r;
                cur = next;
            }
        }
        if best <= target || best >= at_sweep_start {
            break;
        }
    }
    Ok((cur, best))
}

/// Full rank-p pipeline for a generic n x (m-1)n x m tensor: contract to the
/// pencil, decompose the canonical tensor, pull the second-mode rows back
/// through the flattening H(T), and verify the residual against `tol_rec`.
/// An ill-conditioned H can inflate the pullback error, so a residual miss
/// triggers an alternating least-squares polish (each mode refit in turn
/// with the other two fixed; the H-pullback is a feasible point of the
/// first refit, so the polish can only tighten the residual) before the
/// final gate.
///
/// Failure modes: a singular flattening or an unverifiable pullback residual
/// is `NotGeneric`; budget exhaustion with real points seen propagates as
/// `NoDecomposition`; budget exhaustion with no real point at all becomes
/// the `RankExceedsP` outcome.
pub fn decompose_generic(
    t: &Tensor3,
    budget: usize,
    seed: u64,
    tol_rec: f64,
) -> Result<GenericOutcome> {
    let pencil = Pencil::from_tensor(t)?;
    let (_, p, m) = t.dims();
    match pencil.decompose_canonical(budget, seed, tol_rec) {
        Ok(canonical_decomp) => {
            let h = t.slice_stack(m - 1)?;
            let terms = canonical_decomp
                .terms
                .iter()
                .map(|term| {
                    let mut v = vec![0.0; p];
                    for (r, coef) in term.v.iter().enumerate() {
                        if *coef != 0.0 {
                            for (c, slot) in v.iter_mut().enumerate() {
                                *slot += coef * h.get(r, c);
                            }
                        }
                    }
                    RankOneTerm { u: term.u.clone(), v, w: term.w.clone() }
                })
                .collect();
            let mut decomposition = Decomposition { shape: t.dims(), terms };
            let mut residual = relative_residual(t, &decomposition)?;
            if residual > tol_rec {
                let (polished, polished_residual) = als_polish(t, decomposition, 16, tol_rec)?;
                decomposition = polished;
                residual = polished_residual;
            }
            if residual > tol_rec {
                let rcond = match pencil.h_inverse() {
                    Some(hi) => {
                        1.0 / (h.frobenius_norm() * hi.frobenius_norm()).max(tol::EPS_FLOOR)
                    }
                    None => 0.0,
                };
                return Err(Error::NotGeneric { rcond });
            }
            Ok(GenericOutcome::RankP { decomposition, residual })
        }
        Err(Error::NoDecomposition(classification)) => {
            if matches!(classification.verdict, Verdict::NoRealPointFound) {
                Ok(GenericOutcome::RankExceedsP(*classification))
            } else {
                Err(Error::NoDecomposition(classification))
            }
        }
        Err(e) => Err(e),
    }
}
