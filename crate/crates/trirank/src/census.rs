//! Monte Carlo census over random boundary-shape tensors.
//!
//! Draws `trials` independent Gaussian n x (m-1)n x m tensors and runs the
//! full rank-p pipeline on each, tallying how often the rank lands at
//! p = (m-1)n versus provably above it. The split mirrors the dichotomy
//! governed by the Hurwitz-Radon function rho: for m > rho(n) essentially
//! every trial decomposes at rank p, while for m <= rho(n) the complementary
//! class (no real hypersurface point, hence rank >= p + 1) is a nonempty open
//! set as well. Note that openness says nothing about mass: at the smallest
//! eligible shapes the exceeding class occupies so little Gaussian volume
//! that raw sampling virtually never lands in it, even over thousands of
//! draws; it is exhibited instead by perturbing a known witness (see
//! `gallery`).
//!
//! Seeding contract: trial i draws its tensor with seed
//! `derive_seed(seed, i)` and its sampling directions with
//! `derive_seed(derive_seed(seed, i), 1)`, so any prefix of a census is
//! reproducible independently of the total trial count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::{decompose_generic, default_budget, GenericOutcome};
use crate::ranks::{hurwitz_radon, typical_ranks};
use crate::rng::derive_seed;
use crate::tensor::Tensor3;
use crate::tol;

/// Parameters of a census run over the boundary shape n x (m-1)n x m.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusConfig {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Total direction budget per trial; `None` means the default 64 p.
    pub budget: Option<usize>,
}

impl CensusConfig {
    pub fn new(m: usize, n: usize, trials: usize, seed: u64) -> CensusConfig {
        CensusConfig { m, n, trials, seed, budget: None }
    }

    fn width(&self) -> usize {
        (self.m - 1) * self.n
    }
}

/// How a single trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrialOutcome {
    /// Verified rank-p decomposition (relative residual in the record).
    RankP,
    /// No real hypersurface point in the whole budget: rank >= p + 1.
    RankExceedsP,
    /// The draw failed a genericity gate (singular flattening).
    NotGeneric,
    /// Real points were seen but never spanned a full-rank basis within
    /// the budget.
    RankDeficient,
}

impl TrialOutcome {
    pub const ALL: [TrialOutcome; 4] = [
        TrialOutcome::RankP,
        TrialOutcome::RankExceedsP,
        TrialOutcome::NotGeneric,
        TrialOutcome::RankDeficient,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TrialOutcome::RankP => "RankP",
            TrialOutcome::RankExceedsP => "RankExceedsP",
            TrialOutcome::NotGeneric => "NotGeneric",
            TrialOutcome::RankDeficient => "RankDeficient",
        }
    }
}

/// One row of the census. The direction seed for the trial is
/// `derive_seed(seed, 1)` of the recorded tensor seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// The trial's tensor seed, `derive_seed(census seed, trial index)`.
    pub seed: u64,
    pub outcome: TrialOutcome,
    /// Relative reconstruction residual; present exactly for `RankP` trials.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

/// Numerical gates under which the census outcomes were judged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusTolerances {
    /// Relative residual a decomposition must reach to count as `RankP`.
    pub residual: f64,
    /// Pivot-ratio floor for accepting a candidate basis as full rank.
    #[serde(rename = "basisPivotRatio")]
    pub basis_pivot_ratio: f64,
}

/// Aggregated census results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusReport {
    pub m: usize,
    pub n: usize,
    /// p = (m - 1) n, the rank the pipeline certifies on success.
    pub p: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerances: CensusTolerances,
    #[serde(rename = "perTrial")]
    pub per_trial: Vec<TrialRecord>,
    /// Fraction of trials per outcome name; keys cover all four outcomes
    /// and the values sum to 1.
    pub fractions: BTreeMap<String, f64>,
}

impl CensusReport {
    pub fn count(&self, outcome: TrialOutcome) -> usize {
        self.per_trial.iter().filter(|r| r.outcome == outcome).count()
    }

    pub fn fraction(&self, outcome: TrialOutcome) -> f64 {
        self.fractions.get(outcome.name()).copied().unwrap_or(0.0)
    }

    /// Hurwitz-Radon value rho(n) governing the expected dichotomy.
    pub fn hurwitz_radon(&self) -> u64 {
        hurwitz_radon(self.n as u64).expect("report n is positive")
    }

    /// The predicted typical ranks for this shape.
    pub fn expected_ranks(&self) -> Vec<usize> {
        typical_ranks(self.n as u64, self.p as u64, self.m as u64)
            .ok()
            .and_then(|a| a.as_set())
            .unwrap_or_default()
            .into_iter()
            .map(|r| r as usize)
            .collect()
    }
}

impl std::fmt::Display for CensusReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (m, n, p) = (self.m, self.n, self.p);
        writeln!(f, "census over {n}x{p}x{m} (p = (m-1)n = {p})")?;
        writeln!(
            f,
            "  rho({n}) = {}, predicted typical ranks {{{}}}",
            self.hurwitz_radon(),
            self.expected_ranks().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
        )?;
        writeln!(f, "  trials = {}, seed = {}", self.trials, self.seed)?;
        for outcome in TrialOutcome::ALL {
            let count = self.count(outcome);
            if count > 0 || matches!(outcome, TrialOutcome::RankP | TrialOutcome::RankExceedsP) {
                writeln!(
                    f,
                    "  {:<14} {:>7.3}%  ({count} trials)",
                    outcome.name(),
                    100.0 * self.fraction(outcome)
                )?;
            }
        }
        Ok(())
    }
}

/// Runs the census described by `config`.
pub fn run(config: &CensusConfig) -> Result<CensusReport> {
    if config.n == 0 || config.m < 3 || config.m > config.n {
        return Err(Error::Argument(format!(
            "census needs 3 <= m <= n, got m = {}, n = {}",
            config.m, config.n
        )));
    }
    if config.trials == 0 {
        return Err(Error::Argument("census needs at least one trial".into()));
    }
    let (n, m) = (config.n, config.m);
    let p = config.width();
    let budget = config.budget.unwrap_or_else(|| default_budget(p));
    let mut per_trial = Vec::with_capacity(config.trials);
    for index in 0..config.trials {
        let tensor_seed = derive_seed(config.seed, index as u64);
        let direction_seed = derive_seed(tensor_seed, 1);
        let t = Tensor3::random_gaussian(n, p, m, tensor_seed);
        let (outcome, residual) = match decompose_generic(&t, budget, direction_seed, tol::REC) {
            Ok(GenericOutcome::RankP { residual, .. }) => (TrialOutcome::RankP, Some(residual)),
            Ok(GenericOutcome::RankExceedsP(_)) => (TrialOutcome::RankExceedsP, None),
            Err(Error::NotGeneric { .. }) => (TrialOutcome::NotGeneric, None),
            Err(Error::NoDecomposition(_)) => (TrialOutcome::RankDeficient, None),
            Err(e) => return Err(e),
        };
        per_trial.push(TrialRecord { seed: tensor_seed, outcome, residual });
    }
    let total = per_trial.len() as f64;
    let mut fractions = BTreeMap::new();
    for outcome in TrialOutcome::ALL {
        let count = per_trial.iter().filter(|r| r.outcome == outcome).count();
        fractions.insert(outcome.name().to_string(), count as f64 / total);
    }
    Ok(CensusReport {
        m,
        n,
        p,
        trials: config.trials,
        seed: config.seed,
        tolerances: CensusTolerances { residual: tol::REC, basis_pivot_ratio: tol::B_PIVOT_RATIO },
        per_trial,
        fractions,
    })
}
