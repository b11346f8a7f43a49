//! Dense real matrices and the exact-style kernels the constructions need:
//! determinants, inverses, signed cofactor vectors, numerical kernels, and a
//! deterministic real eigensolver (characteristic polynomial + Sturm chains).
//!
//! Everything is plain f64 with row-major storage. Matrices here are tiny
//! (sides bounded by a few dozen), so O(n^3)/O(n^4) algorithms chosen for
//! determinism and reproducibility beat any tuned library path.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::RealPoly;
use crate::tol;

/// Row-major dense matrix of finite f64 entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row-major data, validating length and finiteness
    /// (no NaN or infinity is ever admitted into a `Mat`).
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "matrix data has {} entries, expected {}x{}={}",
                data.len(),
                rows,
                cols,
                rows * cols
            )));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::Validation("matrix entries must be finite".into()));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Mat::new(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[f64]) {
        for i in 0..self.rows {
            self.set(i, j, v[i]);
        }
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions must agree");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, s: f64) -> Mat {
        let data = self.data.iter().map(|a| a * s).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Vertical stack: all blocks must share a column count.
    pub fn vstack(blocks: &[&Mat]) -> Mat {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        Mat { rows, cols, data }
    }

    /// Horizontal concatenation: all blocks must share a row count.
    pub fn hstack(blocks: &[&Mat]) -> Mat {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, offset + j, b.get(i, j));
                }
            }
            offset += b.cols;
        }
        out
    }

    pub fn remove_col(&self, j: usize) -> Mat {
        assert!(j < self.cols);
        Mat::from_fn(self.rows, self.cols - 1, |r, c| self.get(r, if c < j { c } else { c + 1 }))
    }

    pub fn remove_row_col(&self, i: usize, j: usize) -> Mat {
        assert!(i < self.rows && j < self.cols);
        Mat::from_fn(self.rows - 1, self.cols - 1, |r, c| {
            self.get(if r < i { r } else { r + 1 }, if c < j { c } else { c + 1 })
        })
    }

    /// Determinant: closed-form cofactor expansion up to 3x3 (exact for
    /// integer-valued entries), Gaussian elimination with partial pivoting
    /// beyond. The empty 0x0 matrix has determinant 1 by convention.
    pub fn det(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        match n {
            1 => return Ok(self.data[0]),
            2 => return Ok(self.data[0] * self.data[3] - self.data[1] * self.data[2]),
            3 => {
                let d = &self.data;
                return Ok(d[0] * (d[4] * d[8] - d[5] * d[7]) - d[1] * (d[3] * d[8] - d[5] * d[6])
                    + d[2] * (d[3] * d[7] - d[4] * d[6]));
            }
            _ => {}
        }
        let mut a = self.data.clone();
        let mut sign = 1.0;
        let mut det = 1.0;
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_abs = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = i;
                }
            }
            if pivot_abs == 0.0 {
                return Ok(0.0);
            }
            if pivot_row != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot_row * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                if f == 0.0 {
                    continue;
                }
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        Ok(sign * det)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting, rejecting
    /// pivots below `tol::LIN` relative to the largest entry, followed by one
    /// Newton-Schulz refinement step.
    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "inverse requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Mat::zeros(0, 0));
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(Error::Singular { rcond: 0.0 });
        }
        let mut a = self.clone();
        let mut x = Mat::identity(n);
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_abs = a.get(k, k).abs();
            for i in k + 1..n {
                let v = a.get(i, k).abs();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = i;
                }
            }
            if pivot_abs <= tol::LIN * scale {
                return Err(Error::Singular { rcond: pivot_abs / scale });
            }
            if pivot_row != k {
                for j in 0..n {
                    let t = a.get(k, j);
                    a.set(k, j, a.get(pivot_row, j));
                    a.set(pivot_row, j, t);
                    let t = x.get(k, j);
                    x.set(k, j, x.get(pivot_row, j));
                    x.set(pivot_row, j, t);
                }
            }
            let pivot = a.get(k, k);
            for j in 0..n {
                a.set(k, j, a.get(k, j) / pivot);
                x.set(k, j, x.get(k, j) / pivot);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a.get(i, k);
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - f * a.get(k, j));
                    x.set(i, j, x.get(i, j) - f * x.get(k, j));
                }
            }
        }
        // One Newton-Schulz step: X <- X + X(E - AX). Roughly doubles the
        // correct digits when X is already close, at trivial cost here.
        let residual = Mat::identity(n).sub(&self.matmul(&x));
        Ok(x.add(&x.matmul(&residual)))
    }

    /// Characteristic polynomial det(lambda*E - M) via the Faddeev-LeVerrier
    /// recurrence (monic, ascending coefficients).
    pub fn char_poly(&self) -> Result<RealPoly> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "characteristic polynomial requires a square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let mut bk = Mat::identity(n);
        for k in 1..=n {
            let prod = self.matmul(&bk);
            let ak = -prod.trace() / k as f64;
            coeffs[n - k] = ak;
            bk = prod;
            for i in 0..n {
                bk.set(i, i, bk.get(i, i) + ak);
            }
        }
        Ok(RealPoly::new(coeffs))
    }

    /// For an (n-1) x n matrix, the vector of signed maximal minors: component
    /// j (1-based) is (-1)^(n+j) times the determinant of the matrix with
    /// column j removed. The result is orthogonal to every row, and vanishes
    /// exactly when the rows are linearly dependent.
    pub fn perp_vector(&self) -> Result<Vec<f64>> {
        if self.rows + 1 != self.cols {
            return Err(Error::Dimension(format!(
                "perp vector needs shape (n-1)xn, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.cols;
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let minor = self.remove_col(j).det()?;
            let sign = if (n + j + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            out.push(sign * minor);
        }
        Ok(out)
    }

    /// Cofactors along the last row: component j (1-based) is (-1)^(n+j)
    /// times the minor deleting row n and column j. Satisfies the adjugate
    /// identity M * psi = det(M) * e_n, so psi spans the kernel when M is
    /// singular with nonsingular top (n-1) rows.
    pub fn last_row_cofactors(&self) -> Result<Vec<f64>> {
        if !self.is_square() || self.rows < 2 {
            return Err(Error::Dimension(format!(
                "last-row cofactors need a square matrix with n >= 2, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let minor = self.remove_row_col(n - 1, j).det()?;
            let sign = if (n + j + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            out.push(sign * minor);
        }
        Ok(out)
    }

    /// Best-effort unit kernel vector of a square matrix: the singular
    /// direction of smallest singular value, with a deterministic sign
    /// convention. Returns the vector and the residual ||M v||.
    pub fn kernel_vector(&self) -> Result<(Vec<f64>, f64)> {
        if !self.is_square() {
            return Err(Error::Dimension("kernel vector requires a square matrix".into()));
        }
        Ok(smallest_singular_direction(self))
    }

    /// All distinct real eigenvalues with one unit eigenvector each, sorted
    /// ascending by eigenvalue. Pairs are certified against
    /// ||M v - lambda v|| <= tol * ||M||_F before being returned.
    ///
    /// Roots come from the characteristic polynomial (matrix pre-scaled to
    /// unit max entry) isolated by Sturm sequences and bisected to 1e-12
    /// relative width; eigenvectors come from the numerical kernel of
    /// M - lambda E with a guarded Rayleigh-quotient refinement.
    pub fn real_eigenpairs(&self, tol: f64) -> Result<Vec<(f64, Vec<f64>)>> {
        if !self.is_square() {
            return Err(Error::Dimension("eigenpairs require a square matrix".into()));
        }
        let n = self.rows;
        if n > tol::MAX_EIGEN_SIDE {
            return Err(Error::Argument(format!(
                "eigen solver is limited to side {} (got {n})",
                tol::MAX_EIGEN_SIDE
            )));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let scale = self.max_abs().max(1.0);
        let scaled = self.scaled(1.0 / scale);
        let poly = scaled.char_poly()?;
        let norm = self.frobenius_norm().max(tol::EPS_FLOOR);
        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::new();
        for root in poly.real_roots() {
            let mut lambda = root * scale;
            let shifted = shift_diag(self, lambda);
            let (mut v, _) = smallest_singular_direction(&shifted);
            // Guarded Rayleigh refinement: keep the quotient only if it
            // shrinks the eigen residual.
            for _ in 0..2 {
                let mv = self.matvec(&v);
                let current = sub_scaled_norm(&mv, &v, lambda);
                let rayleigh = dot(&v, &mv) / dot(&v, &v);
                if sub_scaled_norm(&mv, &v, rayleigh) < current {
                    lambda = rayleigh;
                    let (v2, _) = smallest_singular_direction(&shift_diag(self, lambda));
                    v = v2;
                } else {
                    break;
                }
            }
            let mv = self.matvec(&v);
            if sub_scaled_norm(&mv, &v, lambda) <= tol * norm {
                if let Some(prev) = pairs.last() {
                    if (prev.0 - lambda).abs() <= 1e-10 * lambda.abs().max(1.0) {
                        continue;
                    }
                }
                pairs.push((lambda, v));
            }
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(pairs)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>12.5e}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

fn shift_diag(m: &Mat, lambda: f64) -> Mat {
    let mut out = m.clone();
    for i in 0..m.rows() {
        out.set(i, i, out.get(i, i) - lambda);
    }
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn sub_scaled_norm(mv: &[f64], v: &[f64], lambda: f64) -> f64 {
    mv.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt()
}

impl Mat {
    /// Least-squares solve: the X minimizing ||self * X - rhs|| column by
    /// column, via Householder QR. Needs rows >= cols and full column rank;
    /// a collapsed R diagonal reports `Singular` with the diagonal ratio.
    pub fn least_squares(&self, rhs: &Mat) -> Result<Mat> {
        let (r, c) = (self.rows, self.cols);
        if rhs.rows() != r {
            return Err(Error::Dimension(format!(
                "least squares needs matching row counts, got {r} vs {}",
                rhs.rows()
            )));
        }
        if r < c {
            return Err(Error::Dimension(format!(
                "least squares needs an overdetermined system, got {r}x{c}"
            )));
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        let nrhs = b.cols();
        for k in 0..c {
            let alpha = (k..r).map(|i| a.get(i, k).powi(2)).sum::<f64>().sqrt();
            if alpha == 0.0 {
                return Err(Error::Singular { rcond: 0.0 });
            }
            let sign = if a.get(k, k) >= 0.0 { 1.0 } else { -1.0 };
            let mut v: Vec<f64> = (k..r).map(|i| a.get(i, k)).collect();
            v[0] += sign * alpha;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            for j in k..c {
                let s = 2.0 / vnorm2 * (0..v.len()).map(|i| v[i] * a.get(k + i, j)).sum::<f64>();
                for (i, vi) in v.iter().enumerate() {
                    let cur = a.get(k + i, j);
                    a.set(k + i, j, cur - s * vi);
                }
            }
            for j in 0..nrhs {
                let s = 2.0 / vnorm2 * (0..v.len()).map(|i| v[i] * b.get(k + i, j)).sum::<f64>();
                for (i, vi) in v.iter().enumerate() {
                    let cur = b.get(k + i, j);
                    b.set(k + i, j, cur - s * vi);
                }
            }
        }
        let dmax = (0..c).map(|k| a.get(k, k).abs()).fold(0.0f64, f64::max);
        let dmin = (0..c).map(|k| a.get(k, k).abs()).fold(f64::INFINITY, f64::min);
        if dmin <= 1e-13 * dmax {
            return Err(Error::Singular { rcond: dmin / dmax.max(tol::EPS_FLOOR) });
        }
        let mut x = Mat::zeros(c, nrhs);
        for j in 0..nrhs {
            for k in (0..c).rev() {
                let mut s = b.get(k, j);
                for t in k + 1..c {
                    s -= a.get(k, t) * x.get(t, j);
                }
                x.set(k, j, s / a.get(k, k));
            }
        }
        Ok(x)
    }
}

/// Unit vector v minimizing ||M v|| (any rectangular M), plus that residual.
/// Computed by cyclic Jacobi on M^T M; deterministic, with the sign fixed so
/// the largest-magnitude component (lowest index on ties) is positive. A zero
/// matrix yields e_1.
pub fn smallest_singular_direction(m: &Mat) -> (Vec<f64>, f64) {
    let n = m.cols();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let gram = m.transpose().matmul(m);
    let (values, vectors) = jacobi_symmetric(&gram);
    let mut idx = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[idx] {
            idx = i;
        }
    }
    let mut v = vectors.col(idx);
    let norm = norm2(&v);
    if norm > 0.0 {
        for x in &mut v {
            *x /= norm;
        }
    } else {
        v = vec![0.0; n];
        v[0] = 1.0;
    }
    fix_sign(&mut v);
    let residual = norm2(&m.matvec(&v));
    (v, residual)
}

/// Deterministic sign convention: the entry of largest magnitude (lowest
/// index on ties) is made positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let mut idx = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v.get(idx).copied().unwrap_or(0.0) < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix: returns the
/// diagonal (eigenvalues, unsorted) and the accumulated orthogonal matrix
/// whose columns are eigenvectors. Fixed sweep order keeps it deterministic.
fn jacobi_symmetric(g: &Mat) -> (Vec<f64>, Mat) {
    let n = g.rows();
    let mut a = g.clone();
    let mut v = Mat::identity(n);
    let scale = g.frobenius_norm().max(tol::EPS_FLOOR);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a.get(p, q) * a.get(p, q);
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol::EPS_FLOOR {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, c * aip - s * aiq);
                    a.set(i, q, s * aip + c * aiq);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, c * apj - s * aqj);
                    a.set(q, j, s * apj + c * aqj);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, c * vip - s * viq);
                    v.set(i, q, s * vip + c * viq);
                }
            }
        }
    }
    ((0..n).map(|i| a.get(i, i)).collect(), v)
}

/// The n x n matrix whose (i, k) entry (1-based) is the elementary symmetric
/// polynomial of degree i-1 in the values `alpha` with alpha_k omitted. Its
/// determinant is the Vandermonde-style product of all pairwise differences
/// alpha_i - alpha_j over i < j.
pub fn elementary_symmetric_matrix(alpha: &[f64]) -> Mat {
    let n = alpha.len();
    let mut m = Mat::zeros(n, n);
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        for (j, &val) in alpha.iter().enumerate() {
            if j == k {
                continue;
            }
            for d in (1..n).rev() {
                e[d] += val * e[d - 1];
            }
        }
        for i in 0..n {
            m.set(i, k, e[i]);
        }
    }
    m
}
