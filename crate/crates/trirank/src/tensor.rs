//! Order-3 tensors over f64, rank-one decompositions, and the tensor-level
//! operations shared by every construction in the crate: slice flattening,
//! reconstruction and residuals, the GL(d1) x GL(d2) x GL(d3) action, mode
//! permutation, and seeded Gaussian sampling.
//!
//! Layout: entry (i, j, k) of a d1 x d2 x d3 tensor lives at linear index
//! `k*d1*d2 + i*d2 + j` (slice-major, row-major within each frontal slice),
//! so slice k is a contiguous d1 x d2 block and stacking the first few slices
//! vertically is a plain reshape.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rng::GaussianStream;
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    d1: usize,
    d2: usize,
    d3: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(d1: usize, d2: usize, d3: usize) -> Tensor3 {
        Tensor3 { d1, d2, d3, data: vec![0.0; d1 * d2 * d3] }
    }

    /// Builds a tensor from linear data in the crate layout, validating
    /// length and finiteness.
    pub fn new(d1: usize, d2: usize, d3: usize, data: Vec<f64>) -> Result<Tensor3> {
        if data.len() != d1 * d2 * d3 {
            return Err(Error::Dimension(format!(
                "tensor data has {} entries, expected {}x{}x{}={}",
                data.len(),
                d1,
                d2,
                d3,
                d1 * d2 * d3
            )));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::Validation("tensor entries must be finite".into()));
        }
        Ok(Tensor3 { d1, d2, d3, data })
    }

    pub fn from_slices(slices: &[Mat]) -> Result<Tensor3> {
        let first = slices
            .first()
            .ok_or_else(|| Error::Dimension("a tensor needs at least one slice".into()))?;
        let (d1, d2) = (first.rows(), first.cols());
        if slices.iter().any(|s| s.rows() != d1 || s.cols() != d2) {
            return Err(Error::Dimension("slices must share a common shape".into()));
        }
        let mut data = Vec::with_capacity(d1 * d2 * slices.len());
        for s in slices {
            data.extend_from_slice(s.data());
        }
        Tensor3::new(d1, d2, slices.len(), data)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d1, self.d2, self.d3)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[k * self.d1 * self.d2 + i * self.d2 + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[k * self.d1 * self.d2 + i * self.d2 + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Frontal slice k as a d1 x d2 matrix.
    pub fn slice(&self, k: usize) -> Mat {
        assert!(k < self.d3, "slice index out of range");
        let block = self.d1 * self.d2;
        Mat::new(self.d1, self.d2, self.data[k * block..(k + 1) * block].to_vec())
            .expect("slice of a valid tensor is valid")
    }

    /// The first `count` slices stacked vertically: a (count*d1) x d2 matrix.
    /// With this crate's layout that is literally a reshape of a data prefix.
    pub fn slice_stack(&self, count: usize) -> Result<Mat> {
        if count > self.d3 {
            return Err(Error::Dimension(format!(
                "cannot stack {count} slices of a tensor with {} slices",
                self.d3
            )));
        }
        let block = self.d1 * self.d2;
        Mat::new(count * self.d1, self.d2, self.data[..count * block].to_vec())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Seeded i.i.d. standard Gaussian tensor; identical bytes for identical
    /// seeds on every platform (see `rng` for the generator contract).
    pub fn random_gaussian(d1: usize, d2: usize, d3: usize, seed: u64) -> Tensor3 {
        let mut g = GaussianStream::new(seed);
        let data = (0..d1 * d2 * d3).map(|_| g.next()).collect();
        Tensor3 { d1, d2, d3, data }
    }

    /// The action of (P, Q, R) on the slices: result slice w is
    /// sum_u R[w,u] * P * (slice u) * Q^T. All three factors must be square,
    /// matching their mode, and nonsingular.
    pub fn gl_action(&self, p: &Mat, q: &Mat, r: &Mat) -> Result<Tensor3> {
        if p.rows() != self.d1 || p.cols() != self.d1 {
            return Err(Error::Dimension(format!(
                "first factor must be {0}x{0}, got {1}x{2}",
                self.d1,
                p.rows(),
                p.cols()
            )));
        }
        if q.rows() != self.d2 || q.cols() != self.d2 {
            return Err(Error::Dimension(format!(
                "second factor must be {0}x{0}, got {1}x{2}",
                self.d2,
                q.rows(),
                q.cols()
            )));
        }
        if r.rows() != self.d3 || r.cols() != self.d3 {
            return Err(Error::Dimension(format!(
                "third factor must be {0}x{0}, got {1}x{2}",
                self.d3,
                r.rows(),
                r.cols()
            )));
        }
        for factor in [p, q, r] {
            factor.inverse()?; // nonsingularity screen
        }
        let qt = q.transpose();
        let transformed: Vec<Mat> =
            (0..self.d3).map(|u| p.matmul(&self.slice(u)).matmul(&qt)).collect();
        let mut slices = Vec::with_capacity(self.d3);
        for w in 0..self.d3 {
            let mut acc = Mat::zeros(self.d1, self.d2);
            for (u, t) in transformed.iter().enumerate() {
                let c = r.get(w, u);
                if c != 0.0 {
                    acc = acc.add(&t.scaled(c));
                }
            }
            slices.push(acc);
        }
        Tensor3::from_slices(&slices)
    }

    /// Reorders modes: `perm[a]` names the source mode that becomes mode `a`
    /// of the result, so the new dims are (dims[perm[0]], dims[perm[1]],
    /// dims[perm[2]]).
    pub fn permute_modes(&self, perm: [usize; 3]) -> Result<Tensor3> {
        let mut seen = [false; 3];
        for &m in &perm {
            if m > 2 || seen[m] {
                return Err(Error::Argument(format!("{perm:?} is not a permutation of modes")));
            }
            seen[m] = true;
        }
        let dims = [self.d1, self.d2, self.d3];
        let mut out = Tensor3::zeros(dims[perm[0]], dims[perm[1]], dims[perm[2]]);
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                for k in 0..self.d3 {
                    let old = [i, j, k];
                    out.set(old[perm[0]], old[perm[1]], old[perm[2]], self.get(i, j, k));
                }
            }
        }
        Ok(out)
    }
}

/// Reorders the vectors of a rank-one term the same way `permute_modes`
/// reorders tensor modes.
pub fn permute_term(term: &RankOneTerm, perm: [usize; 3]) -> RankOneTerm {
    let vecs = [&term.u, &term.v, &term.w];
    RankOneTerm { u: vecs[perm[0]].clone(), v: vecs[perm[1]].clone(), w: vecs[perm[2]].clone() }
}

/// One rank-one term u (x) v (x) w of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTerm {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// A sum of rank-one terms claimed to reconstruct a tensor of `shape`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub shape: (usize, usize, usize),
    pub terms: Vec<RankOneTerm>,
}

impl Decomposition {
    pub fn new(shape: (usize, usize, usize), terms: Vec<RankOneTerm>) -> Result<Decomposition> {
        let d = Decomposition { shape, terms };
        d.check_shapes()?;
        Ok(d)
    }

    fn check_shapes(&self) -> Result<()> {
        let (d1, d2, d3) = self.shape;
        for (idx, t) in self.terms.iter().enumerate() {
            if t.u.len() != d1 || t.v.len() != d2 || t.w.len() != d3 {
                return Err(Error::Dimension(format!(
                    "term {idx} has lengths ({}, {}, {}), expected ({d1}, {d2}, {d3})",
                    t.u.len(),
                    t.v.len(),
                    t.w.len()
                )));
            }
        }
        Ok(())
    }

    /// Number of rank-one terms (an upper bound for the tensor's rank).
    pub fn rank_bound(&self) -> usize {
        self.terms.len()
    }

    /// Sums the rank-one terms into a dense tensor.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        self.check_shapes()?;
        let (d1, d2, d3) = self.shape;
        let mut out = Tensor3::zeros(d1, d2, d3);
        for t in &self.terms {
            for k in 0..d3 {
                let wk = t.w[k];
                if wk == 0.0 {
                    continue;
                }
                for i in 0..d1 {
                    let uw = t.u[i] * wk;
                    if uw == 0.0 {
                        continue;
                    }
                    for j in 0..d2 {
                        let v = out.get(i, j, k) + uw * t.v[j];
                        out.set(i, j, k, v);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Relative reconstruction residual ||T - reconstruct(D)||_F / ||T||_F, with
/// the denominator floored so a zero tensor with an exactly-zero
/// reconstruction reports 0.
pub fn relative_residual(t: &Tensor3, d: &Decomposition) -> Result<f64> {
    if t.dims() != d.shape {
        return Err(Error::Dimension(format!(
            "tensor has shape {:?} but decomposition claims {:?}",
            t.dims(),
            d.shape
        )));
    }
    let rec = d.reconstruct()?;
    let mut err = 0.0;
    for (a, b) in t.data.iter().zip(&rec.data) {
        err += (a - b) * (a - b);
    }
    Ok(err.sqrt() / t.frobenius_norm().max(tol::EPS_FLOOR))
}

/// The canonical n x (l*n) x (l+1) tensor attached to an l-tuple of n x n
/// slices Y_1..Y_l: the first l slices are the block rows of the (l*n)
/// identity, and the last slice is the horizontal concatenation
/// (Y_1 ... Y_l). Stacking its first l slices gives the identity exactly.
pub fn canonical_tensor(ys: &[Mat]) -> Result<Tensor3> {
    if ys.len() < 2 {
        return Err(Error::Dimension("need at least two slices".into()));
    }
    let n = ys[0].rows();
    if ys.iter().any(|y| y.rows() != n || y.cols() != n) {
        return Err(Error::Dimension("slices must be square and of equal size".into()));
    }
    let l = ys.len();
    let p = l * n;
    let mut t = Tensor3::zeros(n, p, l + 1);
    for k in 0..l {
        for i in 0..n {
            t.set(i, k * n + i, k, 1.0);
        }
        for i in 0..n {
            for j in 0..n {
                t.set(i, k * n + j, l, ys[k].get(i, j));
            }
        }
    }
    Ok(t)
}

/// Builds the tensor with slices P * diag(d_k) * Q (k-th diagonal from
/// `diags`) together with its explicit rank-one decomposition: term j is
/// (column j of P) (x) (row j of Q) (x) (diags[0][j], ..., diags[d3-1][j]).
pub fn from_diagonal_factors(
    p: &Mat,
    diags: &[Vec<f64>],
    q: &Mat,
) -> Result<(Tensor3, Decomposition)> {
    let r = p.cols();
    if q.rows() != r {
        return Err(Error::Dimension(format!("P has {r} columns but Q has {} rows", q.rows())));
    }
    if diags.is_empty() {
        return Err(Error::Dimension("need at least one diagonal".into()));
    }
    if diags.iter().any(|d| d.len() != r) {
        return Err(Error::Dimension(format!("every diagonal must have length {r}")));
    }
    let shape = (p.rows(), q.cols(), diags.len());
    let mut slices = Vec::with_capacity(diags.len());
    for d in diags {
        let mut scaled = q.clone();
        for j in 0..r {
            for c in 0..q.cols() {
                scaled.set(j, c, d[j] * q.get(j, c));
            }
        }
        slices.push(p.matmul(&scaled));
    }
    let tensor = Tensor3::from_slices(&slices)?;
    let terms = (0..r)
        .map(|j| RankOneTerm {
            u: p.col(j),
            v: q.row(j).to_vec(),
            w: diags.iter().map(|d| d[j]).collect(),
        })
        .collect();
    let decomp = Decomposition::new(shape, terms)?;
    Ok((tensor, decomp))
}
