//! Baseline search policies and their planning substrate.
//!
//! Policies consume one [`ObservationBundle`] per step and emit exactly one
//! action plus any clue reports. All baselines report greedily: the first
//! sighting of each distinct clue becomes a report, and each newly seen
//! victim becomes a `ReportVictim` action. Policies are deterministic given
//! the observation sequence and seed.

mod bev;
mod fmm;
mod frontier;
mod random;
mod reporter;

pub use bev::{BevGrid, CellState, Frontier};
pub use fmm::{fmm_distance_field, DistField, DIAGONAL_COST};
pub use frontier::{select_goal, ClueDensityValue, FrontierKind, FrontierPolicy, ValueProvider};
pub use random::RandomPolicy;
pub use reporter::Reporter;

use std::str::FromStr;

use thiserror::Error;

use crate::world::{ActionCommand, ClueReport, ObservationBundle};

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("pose outside the occupancy grid: ({0}, {1})")]
    OutOfBounds(f64, f64),
    #[error("distance-field source must be a free cell")]
    InvalidSource,
    #[error("no frontiers remain")]
    NoFrontier,
    #[error("unknown policy '{0}', expected random | fbe | value-frontier")]
    UnknownPolicy(String),
}

/// Joint output of one decision step.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyDecision {
    pub action: ActionCommand,
    pub clue_reports: Vec<ClueReport>,
}

/// A search policy. Implementations carry their own internal state (maps,
/// histories, queues) and must be total: `act` always yields a decision.
pub trait Policy: Send {
    fn act(&mut self, obs: &ObservationBundle, prompt: &str) -> PolicyDecision;
    fn name(&self) -> &'static str;
}

/// Baseline selector, parsed from CLI names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    Random,
    Fbe,
    ValueFrontier,
}

impl PolicyKind {
    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Random => "random",
            PolicyKind::Fbe => "fbe",
            PolicyKind::ValueFrontier => "value-frontier",
        }
    }
}

impl FromStr for PolicyKind {
    type Err = AgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "random" => Ok(PolicyKind::Random),
            "fbe" => Ok(PolicyKind::Fbe),
            "value-frontier" | "value_frontier" | "valuefrontier" => Ok(PolicyKind::ValueFrontier),
            other => Err(AgentError::UnknownPolicy(other.into())),
        }
    }
}

/// Shared policy hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyParams {
    /// Occupancy-grid cell edge, meters.
    pub bev_resolution: f64,
    /// Above-ground altitude the planar policies hold, meters.
    pub target_agl: f64,
    /// Half-width of the altitude hold band, meters.
    pub agl_tolerance: f64,
    /// A goal counts as reached within this many cells of its centroid.
    pub goal_tolerance_cells: f64,
    /// Steps between forced replans.
    pub replan_interval: u32,
    /// Repeat sightings within this radius of an already-reported entity
    /// are suppressed, meters.
    pub report_dedup_radius: f64,
}

impl Default for PolicyParams {
    fn default() -> Self {
        Self {
            bev_resolution: 10.0,
            target_agl: 30.0,
            agl_tolerance: 6.0,
            goal_tolerance_cells: 1.5,
            replan_interval: 20,
            report_dedup_radius: 10.0,
        }
    }
}

/// Instantiates a policy by kind. `map_extent` sizes the occupancy grid for
/// the frontier policies; the random baseline ignores it.
pub fn build_policy(
    kind: PolicyKind,
    params: &PolicyParams,
    seed: u64,
    map_extent: (f64, f64),
) -> Box<dyn Policy> {
    match kind {
        PolicyKind::Random => Box::new(RandomPolicy::new(seed, params)),
        PolicyKind::Fbe => {
            Box::new(FrontierPolicy::new(FrontierKind::Nearest, params, map_extent))
        }
        PolicyKind::ValueFrontier => {
            Box::new(FrontierPolicy::new(FrontierKind::ValueRanked, params, map_extent))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_names_round_trip() {
        for kind in [PolicyKind::Random, PolicyKind::Fbe, PolicyKind::ValueFrontier] {
            assert_eq!(kind.name().parse::<PolicyKind>().unwrap(), kind);
        }
        assert!("greedy".parse::<PolicyKind>().is_err());
    }

    #[test]
    fn build_produces_the_requested_policy() {
        let p = PolicyParams::default();
        assert_eq!(build_policy(PolicyKind::Random, &p, 1, (100.0, 100.0)).name(), "random");
        assert_eq!(build_policy(PolicyKind::Fbe, &p, 1, (100.0, 100.0)).name(), "fbe");
        assert_eq!(
            build_policy(PolicyKind::ValueFrontier, &p, 1, (100.0, 100.0)).name(),
            "value-frontier"
        );
    }
}
