//! Closed-form minimal decompositions for tall tensors: shapes n x u x m
//! with 3 <= m <= n and (m-1)n < u < mn, where the typical rank is exactly u.
//!
//! The construction works node by node. For each node t_j (defaults: t_j = j)
//! it assembles a (u-1) x u constraint matrix whose kernel is generically one
//! dimensional; the kernel directions, collected as columns, form a
//! simultaneous diagonalizer H of the slices: A_k * H = A_1 * H * D_k with
//! D_k = diag(t_j^(k-1)). The decomposition P = A_1 * H, Q = H^(-1) then
//! exhibits rank at most u with third-mode vectors (1, t_j, ..., t_j^(m-1)).

use crate::error::{Error, Result};
use crate::linalg::{norm2, smallest_singular_direction, Mat};
use crate::tensor::{from_diagonal_factors, relative_residual, Decomposition, Tensor3};
use crate::tol;

/// Above this side length, exact cofactor minors give way to a numerical
/// kernel when extracting the one-dimensional kernel of a constraint matrix.
const COFACTOR_LIMIT: usize = 10;

/// A validated tall shape n x u x m with its derived quantities p = (m-1)n
/// (the boundary width) and q = u - p - 1 (the number of extra constraints).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TallShape {
    pub m: usize,
    pub n: usize,
    pub u: usize,
    pub p: usize,
    pub q: usize,
}

impl TallShape {
    pub fn new(m: usize, n: usize, u: usize) -> Result<TallShape> {
        if m < 3 || n < m {
            return Err(Error::Dimension(format!(
                "tall shapes need 3 <= m <= n, got m={m}, n={n}"
            )));
        }
        let p = (m - 1) * n;
        if u <= p || u >= m * n {
            return Err(Error::Dimension(format!(
                "tall shapes need (m-1)n < u < mn, got u={u} with (m-1)n={p}, mn={}",
                m * n
            )));
        }
        Ok(TallShape { m, n, u, p, q: u - p - 1 })
    }

    /// Interprets tensor dims (d1, d2, d3) as (n, u, m).
    pub fn from_dims(dims: (usize, usize, usize)) -> Result<TallShape> {
        TallShape::new(dims.2, dims.0, dims.1)
    }
}

/// The default node sequence 1, 2, ..., u.
pub fn default_nodes(u: usize) -> Vec<f64> {
    (1..=u).map(|j| j as f64).collect()
}

/// Equispaced nodes in [-1, 1]; better conditioned than 1..u at larger u.
pub fn equispaced_nodes(u: usize) -> Vec<f64> {
    if u == 1 {
        return vec![0.0];
    }
    (0..u).map(|j| -1.0 + 2.0 * j as f64 / (u - 1) as f64).collect()
}

/// The (u-1) x u constraint matrix of node j (1-based) for a tall tensor
/// with slices A_1..A_m: the top p rows stack A_(k+1) - t_j^k * A_1 for
/// k = 1..m-1, and the bottom q rows pin the tail coordinates: unit rows
/// covering columns p+1..u except column max(j, p+1).
pub fn constraint_matrix(a: &Tensor3, j: usize) -> Result<Mat> {
    let shape = TallShape::from_dims(a.dims())?;
    let nodes = default_nodes(shape.u);
    constraint_matrix_at(a, &shape, &nodes, j)
}

fn constraint_matrix_at(a: &Tensor3, shape: &TallShape, nodes: &[f64], j: usize) -> Result<Mat> {
    let &TallShape { m, n, u, p, q } = shape;
    if j < 1 || j > u {
        return Err(Error::Argument(format!("node index {j} out of range 1..={u}")));
    }
    let t = nodes[j - 1];
    let a1 = a.slice(0);
    let mut rows = Mat::zeros(u - 1, u);
    for k in 1..m {
        let tk = t.powi(k as i32);
        let ak = a.slice(k);
        for i in 0..n {
            for c in 0..u {
                rows.set((k - 1) * n + i, c, ak.get(i, c) - tk * a1.get(i, c));
            }
        }
    }
    if q > 0 {
        if j <= p + 1 {
            // (O, E_q): unit rows at columns p+2..u (1-based).
            for i in 0..q {
                rows.set(p + i, p + 1 + i, 1.0);
            }
        } else {
            // (O, e_(j-p-1), diag(E_(j-p-2), 0, E_(u-j))): the special row
            // z carries column p+1, the rest cover the tail minus column j.
            let z = j - p - 2;
            rows.set(p + z, p, 1.0);
            for i in 0..q {
                if i != z {
                    rows.set(p + i, p + 1 + i, 1.0);
                }
            }
        }
    }
    Ok(rows)
}

/// Kernel direction of one constraint matrix: exact signed cofactor minors
/// for small widths, numerical smallest-singular direction beyond that.
fn kernel_column(y: &Mat) -> Result<Vec<f64>> {
    if y.cols() <= COFACTOR_LIMIT {
        y.perp_vector()
    } else {
        Ok(smallest_singular_direction(y).0)
    }
}

/// The u x u diagonalizer whose column j is the (unit-normalized) kernel
/// direction of the node-j constraint matrix. Columns coming from a
/// rank-deficient constraint matrix stay zero.
pub fn diagonalizer(a: &Tensor3) -> Result<Mat> {
    let shape = TallShape::from_dims(a.dims())?;
    let nodes = default_nodes(shape.u);
    diagonalizer_at(a, &shape, &nodes)
}

fn diagonalizer_at(a: &Tensor3, shape: &TallShape, nodes: &[f64]) -> Result<Mat> {
    let u = shape.u;
    let mut h = Mat::zeros(u, u);
    for j in 1..=u {
        let y = constraint_matrix_at(a, shape, nodes, j)?;
        let mut col = kernel_column(&y)?;
        let norm = norm2(&col);
        if norm > 0.0 {
            for x in &mut col {
                *x /= norm;
            }
        }
        h.set_col(j - 1, &col);
    }
    Ok(h)
}

/// Rank-u decomposition of a generic tall tensor.
///
/// Tries the textbook nodes 1..u first; when those fail the `tol::REC`
/// residual contract it retries with equispaced nodes in [-1, 1] before
/// giving up. The two node families give mathematically equivalent
/// decompositions (any pairwise-distinct nodes work), but the diagonalizer's
/// columns for nodes 1..u all drift toward the common direction
/// ker(A_1) n ker(A_2) as the node grows, so its conditioning degrades
/// quickly with u; the spread-out nodes stay well-conditioned. `NotGeneric`
/// from both attempts means the input genuinely sits near the measure-zero
/// degenerate set.
pub fn decompose(a: &Tensor3) -> Result<Decomposition> {
    let shape = TallShape::from_dims(a.dims())?;
    match decompose_at(a, &shape, &default_nodes(shape.u)) {
        Ok(d) => Ok(d),
        Err(Error::NotGeneric { .. }) => decompose_at(a, &shape, &equispaced_nodes(shape.u)),
        Err(e) => Err(e),
    }
}

/// Same construction with caller-chosen pairwise-distinct nodes (for example
/// `equispaced_nodes`, which conditions better at larger u).
pub fn decompose_with_nodes(a: &Tensor3, nodes: &[f64]) -> Result<Decomposition> {
    let shape = TallShape::from_dims(a.dims())?;
    if nodes.len() != shape.u {
        return Err(Error::Argument(format!("need {} nodes, got {}", shape.u, nodes.len())));
    }
    let scale = nodes.iter().fold(1.0f64, |s, t| s.max(t.abs()));
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if (nodes[i] - nodes[j]).abs() <= 1e-12 * scale {
                return Err(Error::Argument("nodes must be pairwise distinct".into()));
            }
        }
    }
    decompose_at(a, &shape, nodes)
}

fn decompose_at(a: &Tensor3, shape: &TallShape, nodes: &[f64]) -> Result<Decomposition> {
    let h = diagonalizer_at(a, shape, nodes)?;
    let h_inv = match h.inverse() {
        Ok(inv) => inv,
        Err(Error::Singular { rcond }) => return Err(Error::NotGeneric { rcond }),
        Err(e) => return Err(e),
    };
    let p_factor = a.slice(0).matmul(&h);
    let diags: Vec<Vec<f64>> =
        (0..shape.m).map(|k| nodes.iter().map(|t| t.powi(k as i32)).collect()).collect();
    let (_, decomp) = from_diagonal_factors(&p_factor, &diags, &h_inv)?;
    let residual = relative_residual(a, &decomp)?;
    if residual > tol::REC {
        let rcond = 1.0 / (h.frobenius_norm() * h_inv.frobenius_norm()).max(tol::EPS_FLOOR);
        return Err(Error::NotGeneric { rcond });
    }
    Ok(decomp)
}

/// The canonical witness tensor of a tall shape: first slice
/// (E_n ... E_n 1 O) — m-1 identity blocks, an all-ones column, q zero
/// columns — and slice s+1 obtained by scaling column j by j^s. Its node-j
/// constraint matrix has kernel direction exactly e_j, so the diagonalizer
/// is diagonal and every construction step is exact.
pub fn canonical_witness(shape: &TallShape) -> Tensor3 {
    let &TallShape { m, n, u, p, .. } = shape;
    let mut a1 = Mat::zeros(n, u);
    for b in 0..m - 1 {
        for i in 0..n {
            a1.set(i, b * n + i, 1.0);
        }
    }
    for i in 0..n {
        a1.set(i, p, 1.0);
    }
    let slices: Vec<Mat> = (0..m)
        .map(|s| Mat::from_fn(n, u, |i, j| a1.get(i, j) * ((j + 1) as f64).powi(s as i32)))
        .collect();
    Tensor3::from_slices(&slices).expect("witness slices share a shape")
}
