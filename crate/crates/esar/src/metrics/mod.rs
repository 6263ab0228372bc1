//! Episode scoring: optimal victim assignment, success and discovery rates,
//! and the composite rescue score.

mod episode;
mod hungarian;
mod scores;

pub use episode::{score_episode, MetricsResult};
pub use hungarian::hungarian;
pub use scores::{
    clue_discovery, rescue_score, success_rate, time_credit, time_discounted_success,
    CdsOutcome, MatchPair, MetricConfig, RsWeights, SrOutcome,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("invalid cost matrix: {0}")]
    InvalidCost(String),
    #[error("denominator is empty: {0}")]
    Denominator(String),
    #[error("invalid metric input: {0}")]
    InvalidInput(String),
}
