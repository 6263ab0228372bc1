//! Episode and suite orchestration: run policies on tasks, persist logs,
//! score them, and emit per-tier reports.

mod config;
mod episode_log;
mod generate;
mod report;
mod runner;
mod suite;

pub use config::{load_file_config, FileConfig};
pub use episode_log::{EpisodeLog, Pose, StepRecord};
pub use generate::{generate_benchmark, GenParams, GenSummary};
pub use report::{
    aggregate_by_tier, emit_report, render_csv, render_markdown, ReportFormat, ReportRow,
};
pub use runner::{run_episode, run_episode_on, RunConfig};
pub use suite::{
    build_matcher, load_results, load_tasks, run_suite, score_logs, write_results, EpisodeRecord,
    SuiteConfig, SuiteResults, RESULTS_FILE,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad episode log: {0}")]
    Log(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    World(#[from] crate::world::WorldError),
    #[error(transparent)]
    Terrain(#[from] crate::terrain::TerrainError),
    #[error(transparent)]
    TaskGen(#[from] crate::taskgen::TaskGenError),
    #[error(transparent)]
    Metrics(#[from] crate::metrics::MetricsError),
    #[error(transparent)]
    Matcher(#[from] crate::matcher::MatcherError),
}
