// Index loops here mirror the row/column arithmetic of the underlying
// math; iterator rewrites hide the index relations the code is about.
#![allow(clippy::needless_range_loop)]

//! Typical ranks and explicit low-rank decompositions of real 3-way tensors.
//!
//! Over the reals, the rank a randomly drawn n x p x m tensor takes is not
//! a single number: for some shapes there are two ranks that each occur
//! with positive probability. This crate covers the shapes where the
//! question is settled and makes the answers computable:
//!
//! * [`ranks::typical_ranks`] reports the typical rank set of a shape,
//!   including the boundary shapes n x (m-1)n x m where the answer is
//!   governed by the Hurwitz-Radon function [`ranks::hurwitz_radon`]: one
//!   typical rank when m > rho(n), two when m <= rho(n);
//! * [`tall::decompose`] builds an explicit minimal decomposition of a
//!   generic tall tensor (n x u x m with (m-1)n < u < mn) by simultaneous
//!   diagonalization, in exact arithmetic up to roundoff;
//! * [`pencil`] handles the boundary shape itself: contract to a slice
//!   pencil, sample the determinant hypersurface for real points, and
//!   either assemble a verified rank-p decomposition or certify that every
//!   sampled direction misses the hypersurface (the rank > p regime);
//! * [`census::run`] repeats the boundary pipeline over many random draws
//!   and tallies the split, reproducing the dichotomy empirically;
//! * [`files`] reads and writes the JSON formats used by the CLI.
//!
//! Everything is deterministic: all randomness flows from explicit seeds
//! through the crate's own [`rng`] generator, so results reproduce across
//! runs and platforms.
//!
//! # Example
//!
//! ```
//! use trirank::{census, ranks, tall, tensor};
//!
//! // rho(4) = 4 >= 3, so 4 x 8 x 3 has two typical ranks: {8, 9}.
//! let answer = ranks::typical_ranks(4, 8, 3).unwrap();
//! assert_eq!(answer.as_set(), Some(vec![8, 9]));
//!
//! // A generic tall 3 x 7 x 3 tensor decomposes at rank 7 exactly.
//! let t = tensor::Tensor3::random_gaussian(3, 7, 3, 42);
//! let d = tall::decompose(&t).unwrap();
//! assert_eq!(d.rank_bound(), 7);
//! assert!(tensor::relative_residual(&t, &d).unwrap() <= 1e-8);
//!
//! // A tiny census over 3 x 6 x 3: rho(3) = 1 < 3, single typical rank.
//! let report = census::run(&census::CensusConfig::new(3, 3, 4, 0)).unwrap();
//! assert_eq!(report.fraction(census::TrialOutcome::RankP), 1.0);
//! ```

pub mod census;
pub mod error;
pub mod files;
pub mod gallery;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod ranks;
pub mod rng;
pub mod tall;
pub mod tensor;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::Mat;
pub use tensor::{Decomposition, RankOneTerm, Tensor3};
