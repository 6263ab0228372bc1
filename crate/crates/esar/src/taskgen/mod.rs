//! Benchmark construction: continuous incident events, their static
//! snapshots, sampled task specs with difficulty tiers, and the Monte Carlo
//! check that static snapshots are a sound stand-in for moving victims.

mod difficulty;
mod event;
mod snapshot;
mod task;
mod validity;

pub use difficulty::{
    difficulty_of_task, difficulty_score, DifficultyScore, Tier, DIST_TIER_1, DIST_TIER_2,
    DIST_TIER_3,
};
pub use event::{load_event, save_event, ClueDrop, Event, TerrainRef, Trajectory, Waypoint};
pub use snapshot::{discretize_event, CluePlacement, Snapshot};
pub use task::{
    allowed_weather, load_task, render_prompt, sample_tasks, save_task, SampleParams, TaskSpec,
};
pub use validity::{validate_snapshot, KinematicParams, SlipThroughEstimate};

use thiserror::Error;

/// Version stamp written into every event, task, and log artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TaskGenError {
    #[error("out of range: {0}")]
    Range(String),
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("schema version {found} unsupported (expected {SCHEMA_VERSION})")]
    SchemaVersion { found: u32 },
    #[error(transparent)]
    Terrain(#[from] crate::terrain::TerrainError),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
