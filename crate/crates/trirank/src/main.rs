//! Command-line front end: typical-rank lookups, tensor generation, explicit
//! decompositions, pencil classification, and the Monte Carlo census.
//!
//! Exit codes: 0 for success (including "the answer is yes"), 1 when the
//! computation ran but reached a negative mathematical outcome (rank exceeds
//! p, verification failed, input not generic), 2 for usage and input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use trirank::census::{self, CensusConfig};
use trirank::error::{Error, Result};
use trirank::files;
use trirank::pencil::{self, GenericOutcome, Pencil, Verdict};
use trirank::ranks;
use trirank::tall::{self, TallShape};
use trirank::tensor::{permute_term, relative_residual, Decomposition, Tensor3};
use trirank::tol;

#[derive(Parser)]
#[command(
    name = "trirank",
    version,
    about = "Typical ranks and explicit decompositions of real 3-way tensors",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Pick by shape: boundary pipeline if p = (m-1)n, tall construction if
    /// (m-1)n < u < mn.
    Auto,
    /// Simultaneous-diagonalization construction for tall shapes.
    Tall,
    /// Hypersurface-sampling pipeline for boundary shapes.
    Generic,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Orientation {
    /// Search mode permutations for one that fits the requested pipeline
    /// (identity first).
    Auto,
    /// Use the tensor exactly as stored.
    AsIs,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hurwitz-Radon value rho(n).
    Rho { n: u64 },
    /// Print the set of typical ranks of an m x n x p format.
    TypicalRanks { m: u64, n: u64, p: u64 },
    /// Generate a seeded Gaussian random tensor and write it as JSON.
    Gen {
        /// Tensor dimensions, e.g. --dims 3 8 4.
        #[arg(long, num_args = 3, value_names = ["D1", "D2", "D3"])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path for the tensor JSON.
        #[arg(long)]
        output: PathBuf,
    },
    /// Compute an explicit minimal-rank decomposition of a tensor.
    Decompose {
        /// Tensor JSON produced by `gen` (or compatible).
        #[arg(long)]
        input: PathBuf,
        /// Where to write the decomposition JSON.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Orientation::Auto)]
        orientation: Orientation,
        /// Seed for hypersurface sampling (boundary pipeline only).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total direction budget (boundary pipeline only; default 64 p).
        #[arg(long)]
        budget: Option<usize>,
        /// Relative residual the result must reach.
        #[arg(long, default_value_t = tol::REC)]
        tol: f64,
    },
    /// Classify the slice pencil of a boundary-shape tensor by the sign
    /// behavior of det M(a, Y).
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled directions (default 64 p).
        #[arg(long)]
        directions: Option<usize>,
        #[arg(long, value_enum, default_value_t = Orientation::Auto)]
        orientation: Orientation,
    },
    /// Monte Carlo census over random n x (m-1)n x m tensors.
    Census {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Direction budget per trial (default 64 p).
        #[arg(long)]
        budget: Option<usize>,
        /// Write the full report as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recompute the residual of a stored decomposition against a tensor.
    Verify {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        decomposition: PathBuf,
        /// Relative residual bound for a PASS.
        #[arg(long, default_value_t = tol::REC)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NotGeneric { .. }
                | Error::NoDecomposition(_)
                | Error::RankDeficient { .. }
                | Error::Singular { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Rho { n } => {
            println!("{}", ranks::hurwitz_radon(n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::TypicalRanks { m, n, p } => {
            println!("{}", ranks::typical_ranks(m, n, p)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { dims, seed, output } => {
            let [d1, d2, d3]: [usize; 3] = dims
                .try_into()
                .map_err(|_| Error::Argument("--dims takes exactly three values".into()))?;
            let t = Tensor3::random_gaussian(d1, d2, d3, seed);
            files::save_tensor(&output, &t)?;
            println!("wrote {d1}x{d2}x{d3} tensor (seed {seed}) to {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { input, output, mode, orientation, seed, budget, tol } => {
            decompose_cmd(&input, output.as_deref(), mode, orientation, seed, budget, tol)
        }
        Command::Classify { input, seed, directions, orientation } => {
            classify_cmd(&input, seed, directions, orientation)
        }
        Command::Census { m, n, trials, seed, budget, output } => {
            let mut config = CensusConfig::new(m, n, trials, seed);
            config.budget = budget;
            let report = census::run(&config)?;
            print!("{report}");
            if let Some(path) = output {
                let text =
                    serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
                std::fs::write(&path, text + "\n")?;
                println!("wrote full report to {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { tensor, decomposition, tol } => {
            let t = files::load_tensor(&tensor)?;
            let d = files::load_decomposition(&decomposition)?;
            if d.shape != t.dims() {
                return Err(Error::Validation(format!(
                    "decomposition shape {:?} does not match tensor dims {:?}",
                    d.shape,
                    t.dims()
                )));
            }
            let residual = relative_residual(&t, &d)?;
            println!("rank bound: {}", d.rank_bound());
            println!("relative residual: {residual:.3e} (tolerance {tol:.1e})");
            if residual <= tol {
                println!("PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL");
                Ok(ExitCode::from(1))
            }
        }
    }
}

/// All mode permutations, identity first; `perm[a]` is the source mode that
/// becomes mode `a`.
const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn permuted_dims(dims: (usize, usize, usize), perm: [usize; 3]) -> (usize, usize, usize) {
    let d = [dims.0, dims.1, dims.2];
    (d[perm[0]], d[perm[1]], d[perm[2]])
}

fn inverse_perm(perm: [usize; 3]) -> [usize; 3] {
    let mut inv = [0usize; 3];
    for (a, &src) in perm.iter().enumerate() {
        inv[src] = a;
    }
    inv
}

fn fits_boundary(dims: (usize, usize, usize)) -> bool {
    let (n, p, m) = dims;
    m >= 3 && n >= 1 && p == (m - 1) * n
}

fn fits_tall(dims: (usize, usize, usize)) -> bool {
    TallShape::from_dims(dims).is_ok()
}

/// Picks the pipeline and mode permutation for a decompose/classify request.
fn resolve_orientation(
    dims: (usize, usize, usize),
    mode: Mode,
    orientation: Orientation,
) -> Result<(Mode, [usize; 3])> {
    let perms: &[[usize; 3]] = match orientation {
        Orientation::AsIs => &PERMS[..1],
        Orientation::Auto => &PERMS[..],
    };
    let find = |pred: fn((usize, usize, usize)) -> bool| {
        perms.iter().copied().find(|&perm| pred(permuted_dims(dims, perm)))
    };
    let chosen = match mode {
        Mode::Generic => find(fits_boundary).map(|perm| (Mode::Generic, perm)),
        Mode::Tall => find(fits_tall).map(|perm| (Mode::Tall, perm)),
        Mode::Auto => find(fits_boundary)
            .map(|perm| (Mode::Generic, perm))
            .or_else(|| find(fits_tall).map(|perm| (Mode::Tall, perm))),
    };
    chosen.ok_or_else(|| {
        let (d1, d2, d3) = dims;
        let hint = match orientation {
            Orientation::AsIs => " (try --orientation auto)",
            Orientation::Auto => "",
        };
        Error::Argument(format!(
            "{d1}x{d2}x{d3} fits no supported pipeline: need p = (m-1)n (boundary) or \
             (m-1)n < u < mn with 3 <= m <= n (tall){hint}"
        ))
    })
}

fn orientation_note(perm: [usize; 3]) -> String {
    if perm == [0, 1, 2] {
        "as stored".to_string()
    } else {
        format!("modes reordered as {:?}", perm)
    }
}

fn decompose_cmd(
    input: &std::path::Path,
    output: Option<&std::path::Path>,
    mode: Mode,
    orientation: Orientation,
    seed: u64,
    budget: Option<usize>,
    tol: f64,
) -> Result<ExitCode> {
    let t = files::load_tensor(input)?;
    let (chosen, perm) = resolve_orientation(t.dims(), mode, orientation)?;
    let oriented = t.permute_modes(perm)?;
    let (n, w, m) = oriented.dims();

    let decomp_oriented = match chosen {
        Mode::Tall => {
            println!("pipeline: tall ({n}x{w}x{m}, {})", orientation_note(perm));
            tall::decompose(&oriented)?
        }
        Mode::Generic | Mode::Auto => {
            println!("pipeline: boundary ({n}x{w}x{m}, {})", orientation_note(perm));
            let budget = budget.unwrap_or_else(|| pencil::default_budget(w));
            match pencil::decompose_generic(&oriented, budget, seed, tol)? {
                GenericOutcome::RankP { decomposition, residual } => {
                    println!("relative residual: {residual:.3e}");
                    decomposition
                }
                GenericOutcome::RankExceedsP(c) => {
                    println!(
                        "no real hypersurface point in {} sampled directions: \
                         rank >= {} (probabilistic evidence)",
                        c.directions_tried,
                        w + 1
                    );
                    return Ok(ExitCode::from(1));
                }
            }
        }
    };

    // Map the oriented decomposition back to the stored mode order.
    let inv = inverse_perm(perm);
    let terms = decomp_oriented.terms.iter().map(|term| permute_term(term, inv)).collect();
    let decomp = Decomposition::new(t.dims(), terms)?;
    let residual = relative_residual(&t, &decomp)?;
    println!("rank: {}", decomp.rank_bound());
    if let Some(path) = output {
        files::save_decomposition(path, &decomp)?;
        println!("wrote decomposition to {}", path.display());
    }
    println!("verified against input: residual {residual:.3e} (tolerance {tol:.1e})");
    if residual > tol {
        eprintln!("error: residual exceeds the requested tolerance");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn classify_cmd(
    input: &std::path::Path,
    seed: u64,
    directions: Option<usize>,
    orientation: Orientation,
) -> Result<ExitCode> {
    let t = files::load_tensor(input)?;
    let (_, perm) = resolve_orientation(t.dims(), Mode::Generic, orientation)?;
    let oriented = t.permute_modes(perm)?;
    let (n, p, m) = oriented.dims();
    println!("pencil of {n}x{p}x{m} tensor ({})", orientation_note(perm));
    let pencil = Pencil::from_tensor(&oriented)?;
    let directions = directions.unwrap_or_else(|| pencil::default_budget(p));
    let c = pencil.classify(directions, seed);
    match &c.verdict {
        Verdict::NegativeWitness { a, det } => {
            let coords: Vec<String> = a.iter().map(|x| format!("{x:.6}")).collect();
            println!("verdict: negative determinant witness");
            println!("  det M(a, Y) = {det:.6e} at a = [{}]", coords.join(", "));
            println!("  the determinant changes sign: rank {p} on an open set");
            Ok(ExitCode::SUCCESS)
        }
        Verdict::NoRealPointFound => {
            println!("verdict: no real hypersurface point in {} directions", c.directions_tried);
            println!(
                "  det M(a, Y) appears to keep one sign: rank >= {} (probabilistic evidence)",
                p + 1
            );
            Ok(ExitCode::from(1))
        }
        Verdict::RealPointsButNoNegativeWitness { points } => {
            println!(
                "verdict: {} real hypersurface points, but no negative determinant nearby",
                points.len()
            );
            println!("  boundary behavior (nonnegative determinant)");
            Ok(ExitCode::from(1))
        }
    }
}
