//! Continuous search-and-rescue incidents: victim movement over hours, clue
//! drops along the way, and the narrative brief handed to agents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geom::Point3;
use crate::terrain::{generate_archetype, load_ascii_grid, Archetype, Heightmap};
use crate::world::ClueType;

use super::{TaskGenError, SCHEMA_VERSION};

/// How to obtain the heightmap an event plays out on. Carrying the recipe
/// instead of the raster keeps events and tasks small and lets any consumer
/// rebuild the identical map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TerrainRef {
    Generated {
        archetype: Archetype,
        seed: u64,
        side_length: f64,
        cell_size: f64,
    },
    File { path: String },
}

impl TerrainRef {
    pub fn build(&self) -> Result<Heightmap, TaskGenError> {
        match self {
            TerrainRef::Generated { archetype, seed, side_length, cell_size } => {
                Ok(generate_archetype(*archetype, *seed, *side_length, *cell_size)?)
            }
            TerrainRef::File { path } => Ok(load_ascii_grid(path)?),
        }
    }

    /// Stable text key for map caching.
    pub fn cache_key(&self) -> String {
        match self {
            TerrainRef::Generated { archetype, seed, side_length, cell_size } => {
                format!("gen:{archetype:?}:{seed}:{side_length}:{cell_size}")
            }
            TerrainRef::File { path } => format!("file:{path}"),
        }
    }
}

/// One timestamped position along a victim's path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    /// Hours since the incident began.
    pub time_h: f64,
    pub position: Point3,
}

/// A victim's continuous path as piecewise-linear waypoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub waypoints: Vec<Waypoint>,
}

impl Trajectory {
    /// Linear interpolation at `time_h`, clamped to the endpoints.
    pub fn position_at(&self, time_h: f64) -> Point3 {
        let wps = &self.waypoints;
        if time_h <= wps[0].time_h {
            return wps[0].position;
        }
        if time_h >= wps[wps.len() - 1].time_h {
            return wps[wps.len() - 1].position;
        }
        let seg = wps.windows(2).find(|w| time_h <= w[1].time_h).expect("covered above");
        let (a, b) = (&seg[0], &seg[1]);
        let t = (time_h - a.time_h) / (b.time_h - a.time_h);
        Point3::new(
            a.position.x + (b.position.x - a.position.x) * t,
            a.position.y + (b.position.y - a.position.y) * t,
            a.position.z + (b.position.z - a.position.z) * t,
        )
    }

    pub fn start_time(&self) -> f64 {
        self.waypoints[0].time_h
    }

    pub fn end_time(&self) -> f64 {
        self.waypoints[self.waypoints.len() - 1].time_h
    }
}

/// A clue object left on the ground at a known moment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClueDrop {
    pub clue_type: ClueType,
    pub position: Point3,
    /// Hours since the incident began.
    pub drop_time_h: f64,
}

/// A complete longitudinal incident: who moved where and when, what they
/// left behind, and the text brief describing the situation.
///
/// The narrative may contain `{weather}` and `{time}` placeholders; task
/// sampling substitutes the drawn conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub schema_version: u32,
    pub id: String,
    pub terrain: TerrainRef,
    pub victim_trajectories: Vec<Trajectory>,
    pub clue_drops: Vec<ClueDrop>,
    pub narrative: String,
}

impl Event {
    /// Start and end of the covered time range, hours.
    pub fn time_span(&self) -> (f64, f64) {
        let t0 = self
            .victim_trajectories
            .iter()
            .map(Trajectory::start_time)
            .fold(f64::INFINITY, f64::min);
        let t1 = self
            .victim_trajectories
            .iter()
            .map(Trajectory::end_time)
            .fold(f64::NEG_INFINITY, f64::max);
        (t0, t1)
    }

    /// Checks every structural invariant; call after deserialization.
    pub fn validate(&self) -> Result<(), TaskGenError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(TaskGenError::SchemaVersion { found: self.schema_version });
        }
        if self.id.is_empty() || !self.id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(TaskGenError::InvalidEvent(format!(
                "id {:?} must be non-empty and limited to alphanumerics, '-', '_'",
                self.id
            )));
        }
        if self.victim_trajectories.is_empty() {
            return Err(TaskGenError::InvalidEvent("no victim trajectories".into()));
        }
        for (i, tr) in self.victim_trajectories.iter().enumerate() {
            if tr.waypoints.is_empty() {
                return Err(TaskGenError::InvalidEvent(format!(
                    "trajectory {i} has no waypoints"
                )));
            }
            for w in &tr.waypoints {
                if !(w.time_h.is_finite() && w.position.is_finite()) {
                    return Err(TaskGenError::InvalidEvent(format!(
                        "trajectory {i} has a non-finite waypoint"
                    )));
                }
            }
            if tr.waypoints.windows(2).any(|w| w[1].time_h <= w[0].time_h) {
                return Err(TaskGenError::InvalidEvent(format!(
                    "trajectory {i} waypoint times must be strictly increasing"
                )));
            }
        }
        if self.clue_drops.is_empty() {
            return Err(TaskGenError::InvalidEvent("no clue drops".into()));
        }
        let (t0, t1) = self.time_span();
        for (i, d) in self.clue_drops.iter().enumerate() {
            if !(d.drop_time_h.is_finite() && d.position.is_finite()) {
                return Err(TaskGenError::InvalidEvent(format!(
                    "clue drop {i} has a non-finite field"
                )));
            }
            if d.drop_time_h < t0 || d.drop_time_h > t1 {
                return Err(TaskGenError::InvalidEvent(format!(
                    "clue drop {i} at {} h falls outside the event span [{t0}, {t1}] h",
                    d.drop_time_h
                )));
            }
        }
        Ok(())
    }
}

pub fn load_event(path: impl AsRef<Path>) -> Result<Event, TaskGenError> {
    let text = std::fs::read_to_string(path)?;
    let event: Event = serde_json::from_str(&text)?;
    event.validate()?;
    Ok(event)
}

pub fn save_event(event: &Event, path: impl AsRef<Path>) -> Result<(), TaskGenError> {
    event.validate()?;
    let text = serde_json::to_string_pretty(event)?;
    std::fs::write(path, text)?;
    Ok(())
}
