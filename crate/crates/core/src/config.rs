//! Run-wide settings shared by the command line and the acceptance suite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::SolveConfig;

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "CFUNC_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// C-function and biunimodularity predicates.
    pub predicate: f64,
    /// Relative singular-value cutoff for tangent ranks.
    pub rank: f64,
    /// Endpoint clustering radius.
    pub cluster: f64,
    /// Newton corrector and refinement.
    pub newton: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { predicate: 1e-10, rank: 1e-8, cluster: 1e-4, newton: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "table" => Ok(Self::Table),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: Tolerances,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: 0, tol: Tolerances::default(), workers: None, format: Format::Json }
    }
}

impl RunConfig {
    /// Seed from [`SEED_ENV`] when set, else 0.
    pub fn default_seed() -> Result<u64> {
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{SEED_ENV}={v:?} is not an integer"))),
            Err(_) => Ok(0),
        }
    }

    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig { seed: self.seed, cluster_radius: self.tol.cluster, ..SolveConfig::default() }
    }
}
