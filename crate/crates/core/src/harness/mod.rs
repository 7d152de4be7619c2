//! Seeded experiment runner: trials, aggregation, CSV and SVG output, and the
//! relative-score metric.

mod config;
mod output;
mod plot;
mod runner;
mod stats;

use std::fmt;

use thiserror::Error;

use crate::agents::AgentError;
use crate::envs::EnvError;
use crate::oracle::OracleError;
use crate::replay::ReplayError;

pub use config::{AgentKind, EnvName, ExperimentConfig, RandomMdpSpec};
pub use output::{
    emit_csv, emit_replay_stats_csv, emit_summary_csv, parse_csv, read_csv, write_csv,
    write_run_outputs,
};
pub use plot::{emit_svg_plot, render_svg_plot};
pub use runner::{
    random_policy_return, run_experiment, run_trial, run_trial_with_stats, stream_rng, CurvePoint,
    ExperimentResult, Stream, TrialResult,
};
pub use stats::{mean_std, normalized_auc, welch_t_test, Summary, WelchTest};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("relative score undefined: uniform and random scores are equal ({0})")]
    DivisionByZero(f64),
    #[error("nothing to plot: {0}")]
    EmptyPlot(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("seed {seed}: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Identifies the configuration a curve came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunLabel {
    pub env: String,
    pub sampler: String,
    pub agent: String,
}

impl RunLabel {
    pub fn new(env: &str, sampler: &str, agent: &str) -> Self {
        Self {
            env: env.to_string(),
            sampler: sampler.to_string(),
            agent: agent.to_string(),
        }
    }

    pub fn of(config: &ExperimentConfig) -> Self {
        Self::new(config.env.as_str(), config.sampler.as_str(), config.agent.as_str())
    }
}

impl fmt::Display for RunLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.env, self.sampler, self.agent)
    }
}

/// `100 * (stratified - random) / (uniform - random)`.
pub fn relative_score(stratified: f64, uniform: f64, random: f64) -> Result<f64, HarnessError> {
    let denom = uniform - random;
    if denom == 0.0 {
        return Err(HarnessError::DivisionByZero(uniform));
    }
    Ok(100.0 * (stratified - random) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_score_cases() {
        assert_eq!(relative_score(7.0, 7.0, 1.0).unwrap(), 100.0);
        assert_eq!(relative_score(1.0, 7.0, 1.0).unwrap(), 0.0);
        let (u, r) = (7.0, 1.0);
        assert_eq!(relative_score(2.0 * u - r, u, r).unwrap(), 200.0);
        assert!(matches!(
            relative_score(3.0, 2.0, 2.0),
            Err(HarnessError::DivisionByZero(_))
        ));
    }
}
