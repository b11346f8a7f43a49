//! Small gallery of hand-picked pencils with known determinant behavior.
//!
//! These are the fixtures used throughout the tests and the CLI examples:
//! one absolutely nonsingular pair (determinant positive definite, so the
//! associated 4 x 8 x 3 tensor has rank strictly above 8) and one boundary
//! pair on 6 x 6 whose determinant vanishes along real curves but never
//! goes negative.

use crate::linalg::Mat;

/// Left-multiplication by the quaternion units i and j on R^4: a pair
/// (Y_1, Y_2) with det(a_1 Y_1 + a_2 Y_2 - a_3 E) = (a_1^2 + a_2^2 + a_3^2)^2,
/// strictly positive away from the origin. No direction of the a-sphere
/// meets the determinant hypersurface.
pub fn absolutely_nonsingular_4x4() -> Vec<Mat> {
    let li = Mat::from_rows(&[
        vec![0.0, -1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap();
    let lj = Mat::from_rows(&[
        vec![0.0, 0.0, -1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, -1.0, 0.0, 0.0],
    ])
    .unwrap();
    vec![li, lj]
}

/// Left-multiplication by all three quaternion units i, j, k on R^4: a
/// triple (Y_1, Y_2, Y_3) with
/// det(a_1 Y_1 + a_2 Y_2 + a_3 Y_3 - a_4 E) = (a_1^2 + a_2^2 + a_3^2 + a_4^2)^2,
/// so the associated 4 x 12 x 4 tensor has rank strictly above 12.
pub fn absolutely_nonsingular_4x4_triple() -> Vec<Mat> {
    let mut units = absolutely_nonsingular_4x4();
    let lk = units[0].matmul(&units[1]);
    units.push(lk);
    units
}

/// A 6 x 6 pair (A_1, A_2) with
///
/// ```text
/// det(a_1 A_1 + a_2 A_2 - a_3 E)
///     = a_3^2 (a_1 a_2 - a_3^2)^2 + (a_1^3 + a_2^3)^2 :
/// ```
///
/// the determinant is a sum of squares (nonnegative everywhere) yet
/// vanishes on real curves, e.g. a = (1, -1, 0). The matching 6 x 12 x 3
/// tensor sits on the boundary: real hypersurface points exist, but none
/// with a sign change.
pub fn nonnegative_boundary_6x6() -> Vec<Mat> {
    let a1 = Mat::from_rows(&[
        vec![0.0, 0.0, 0.0, 0.0, 0.0, -1.0],
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap();
    let a2 = Mat::from_rows(&[
        vec![0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, -1.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        vec![-1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ])
    .unwrap();
    vec![a1, a2]
}
