//! Episode world: environment conditions, entities, the UAV flight model, and
//! the sensing stack.

mod action;
mod entity;
mod env;
mod sense;
mod state;

pub use action::{ActionCommand, ClueReport, MOTION_VERBS};
pub use entity::{ClueType, Entity, EntityKind};
pub use env::{
    effective_detection_radius, EnvConditions, LightBand, Weather, WeatherSeverity,
};
pub use sense::{Detection, DepthRay, ObservationBundle, SensorParams};
pub use state::{
    default_t_max, init_world, Termination, UavState, WorldParams, WorldState,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("spawn rejected: {0}")]
    Spawn(String),
    #[error("placement rejected: {0}")]
    Placement(String),
    #[error("episode already terminated: {0:?}")]
    State(Termination),
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error(transparent)]
    Terrain(#[from] crate::terrain::TerrainError),
}
