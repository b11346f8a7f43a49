//! Typical ranks of real order-3 tensor formats.
//!
//! The centerpiece is the boundary format n x (m-1)n x m (after sorting the
//! dimensions), where the set of typical ranks is decided by comparing m with
//! the Hurwitz-Radon function of n: it is {p} when m > rho(n) and {p, p+1}
//! when m <= rho(n), with p = (m-1)n. The remaining covered formats follow
//! the classical tables for matrices and two-slice tensors, the tall range
//! (m-1)n < p < mn, and the saturation p >= mn.

use std::fmt;

use crate::error::{Error, Result};

/// The Hurwitz-Radon function: writing n = (2a+1) * 2^(4c+b) with 0 <= b < 4,
/// rho(n) = 2^b + 8c. Equals the maximal number of linearly independent
/// skew-ish orthogonal designs on R^n; what matters here is the comparison
/// with the slice count m.
pub fn hurwitz_radon(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Argument("hurwitz_radon is defined for n >= 1".into()));
    }
    let e = n.trailing_zeros() as u64;
    let b = e % 4;
    let c = e / 4;
    Ok((1u64 << b) + 8 * c)
}

/// Answer of `typical_ranks`: either the (always contiguous) set of typical
/// ranks with a short tag naming the case that decided it, or Unknown for
/// formats the theory does not cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypicalRankAnswer {
    Ranks { lo: u64, hi: u64, case: &'static str },
    Unknown,
}

impl TypicalRankAnswer {
    fn single(r: u64, case: &'static str) -> Self {
        TypicalRankAnswer::Ranks { lo: r, hi: r, case }
    }

    fn pair(r: u64, case: &'static str) -> Self {
        TypicalRankAnswer::Ranks { lo: r, hi: r + 1, case }
    }

    /// The set as an explicit list, or None for Unknown.
    pub fn as_set(&self) -> Option<Vec<u64>> {
        match self {
            TypicalRankAnswer::Ranks { lo, hi, .. } => Some((*lo..=*hi).collect()),
            TypicalRankAnswer::Unknown => None,
        }
    }
}

impl fmt::Display for TypicalRankAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypicalRankAnswer::Ranks { lo, hi, case } => {
                let set: Vec<String> = (*lo..=*hi).map(|r| r.to_string()).collect();
                write!(f, "{{{}}} ({case})", set.join(", "))
            }
            TypicalRankAnswer::Unknown => write!(f, "unknown (format not covered)"),
        }
    }
}

/// Set of typical ranks of a real d1 x d2 x d3 format, invariant under
/// permuting the dimensions. Every dimension must be positive.
pub fn typical_ranks(d1: u64, d2: u64, d3: u64) -> Result<TypicalRankAnswer> {
    if d1 == 0 || d2 == 0 || d3 == 0 {
        return Err(Error::Argument("tensor dimensions must be positive".into()));
    }
    let mut dims = [d1, d2, d3];
    dims.sort_unstable();
    let [m, n, p] = dims;

    if m == 1 {
        // A 1 x n x p tensor is an n x p matrix.
        return Ok(TypicalRankAnswer::single(n, "matrix format"));
    }
    if m == 2 {
        return Ok(if p == n {
            // n >= 2 holds because n >= m = 2.
            TypicalRankAnswer::pair(p, "square two-slice pencil")
        } else if p <= 2 * n {
            TypicalRankAnswer::single(p, "two-slice format, n < p <= 2n")
        } else {
            TypicalRankAnswer::single(2 * n, "two-slice format, p > 2n")
        });
    }
    // From here on 3 <= m <= n <= p.
    let boundary = (m - 1) * n;
    if p >= m * n {
        return Ok(TypicalRankAnswer::single(m * n, "saturated format, p >= mn"));
    }
    if p > boundary {
        return Ok(TypicalRankAnswer::single(p, "tall format, (m-1)n < p < mn"));
    }
    if p == boundary {
        let rho = hurwitz_radon(n)?;
        return Ok(if m > rho {
            TypicalRankAnswer::single(p, "boundary format p = (m-1)n, m > rho(n)")
        } else {
            TypicalRankAnswer::pair(p, "boundary format p = (m-1)n, m <= rho(n)")
        });
    }
    Ok(TypicalRankAnswer::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_radon_table() {
        let table = [
            (1, 1),
            (2, 2),
            (3, 1),
            (4, 4),
            (5, 1),
            (6, 2),
            (8, 8),
            (12, 4),
            (16, 9),
            (32, 10),
            (64, 12),
            (128, 16),
        ];
        for (n, expected) in table {
            assert_eq!(hurwitz_radon(n).unwrap(), expected, "n = {n}");
        }
        assert!(hurwitz_radon(0).is_err());
    }

    #[test]
    fn hurwitz_radon_odd_is_one() {
        for k in 0..200 {
            assert_eq!(hurwitz_radon(2 * k + 1).unwrap(), 1);
        }
    }

    #[test]
    fn hurwitz_radon_grows_with_16_power() {
        for k in 0..=3u32 {
            for odd in [1u64, 3, 5, 7] {
                let n = odd << (4 * k);
                assert!(hurwitz_radon(n).unwrap() >= 8 * k as u64);
            }
        }
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn typical_ranks_quoted_cases() {
        let cases: [(u64, u64, u64, Option<(u64, u64)>); 6] = [
            (3, 4, 8, Some((8, 9))),
            (3, 3, 6, Some((6, 6))),
            (2, 3, 3, Some((3, 4))),
            (3, 4, 10, Some((10, 10))),
            (3, 3, 20, Some((9, 9))),
            (4, 5, 7, None),
        ];
        for (a, b, c, expected) in cases {
            let got = typical_ranks(a, b, c).unwrap();
            match expected {
                Some((lo, hi)) => match got {
                    TypicalRankAnswer::Ranks { lo: gl, hi: gh, .. } => {
                        assert_eq!((gl, gh), (lo, hi), "({a},{b},{c})")
                    }
                    TypicalRankAnswer::Unknown => panic!("({a},{b},{c}) unexpectedly unknown"),
                },
                None => assert_eq!(got, TypicalRankAnswer::Unknown, "({a},{b},{c})"),
            }
        }
    }

    #[test]
    fn typical_ranks_permutation_invariant() {
        let mut idx = 0u64;
        for a in 1..=8 {
            for b in 1..=8 {
                for c in 1..=8 {
                    idx += 1;
                    let base = typical_ranks(a, b, c).unwrap();
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        assert_eq!(base, typical_ranks(x, y, z).unwrap(), "case {idx}");
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_answer_is_p_or_p_and_p_plus_one() {
        for m in 3..=6u64 {
            for n in m..=12 {
                let p = (m - 1) * n;
                match typical_ranks(m, n, p).unwrap() {
                    TypicalRankAnswer::Ranks { lo, hi, .. } => {
                        assert_eq!(lo, p);
                        assert!(hi == p || hi == p + 1);
                        let expect_pair = m <= hurwitz_radon(n).unwrap();
                        assert_eq!(hi == p + 1, expect_pair, "m={m} n={n}");
                    }
                    TypicalRankAnswer::Unknown => panic!("boundary format must be covered"),
                }
            }
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(typical_ranks(0, 2, 2).is_err());
    }

    #[test]
    fn display_formats_sets() {
        assert_eq!(
            typical_ranks(3, 4, 8).unwrap().to_string(),
            "{8, 9} (boundary format p = (m-1)n, m <= rho(n))"
        );
        assert_eq!(typical_ranks(4, 5, 7).unwrap().to_string(), "unknown (format not covered)");
    }
}
