//! Mutable episode state and the fixed-step flight model.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geom::{wrap_angle, Point3};
use crate::terrain::Heightmap;

use super::{ActionCommand, Entity, EnvConditions, WorldError};

/// Why (or whether) an episode has ended. `Crashed` and `Completed` and
/// `TimedOut` are absorbing: once set, `step` refuses further calls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Running,
    /// Policy declared the mission finished.
    Completed,
    /// Mission clock reached the time budget.
    TimedOut,
    /// UAV descended below the terrain safety margin.
    Crashed,
}

/// UAV pose and bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UavState {
    pub position: Point3,
    /// Heading in radians, `[0, 2*PI)`, measured from east, counterclockwise.
    pub yaw: f64,
    pub alive: bool,
    /// Total path length flown, meters.
    pub distance_flown: f64,
}

/// Flight-model constants. Defaults: 5 m/s translation, 30-degree yaw steps,
/// crash when closer than 0.5 m to the surface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldParams {
    pub speed: f64,
    pub yaw_step: f64,
    pub collision_margin: f64,
    /// Mission time budget in seconds; `None` derives it from map area.
    pub t_max: Option<f64>,
}

impl Default for WorldParams {
    fn default() -> Self {
        Self {
            speed: 5.0,
            yaw_step: 30.0_f64.to_radians(),
            collision_margin: 0.5,
            t_max: None,
        }
    }
}

/// Nominal time budget: map area divided by the area a sweep at `sweep_speed`
/// with sensing radius `r_s` covers per second.
pub fn default_t_max(map: &Heightmap, r_s: f64, sweep_speed: f64) -> f64 {
    let (ex, ey) = map.extent();
    ex * ey / (2.0 * r_s * sweep_speed)
}

/// Full mutable state of one episode.
#[derive(Clone, Debug)]
pub struct WorldState {
    pub map: Arc<Heightmap>,
    pub uav: UavState,
    pub entities: Vec<Entity>,
    pub env: EnvConditions,
    pub step_count: u64,
    /// Mission clock in seconds. With a uniform `dt` this is exactly
    /// `step_count * dt`.
    pub elapsed: f64,
    pub terminated: Termination,
    pub t_max: f64,
    params: WorldParams,
    /// `dt` of the first step; a NaN sentinel marks mixed step sizes, which
    /// fall back to plain accumulation.
    dt_ref: f64,
}

/// Builds the initial world for an episode.
///
/// The start pose must be inside the map extent and above the terrain by at
/// least the collision margin; every entity must sit inside the extent, and
/// at least one victim and one clue must be present.
pub fn init_world(
    map: Arc<Heightmap>,
    entities: Vec<Entity>,
    env: EnvConditions,
    start: Point3,
    start_yaw: f64,
    params: WorldParams,
) -> Result<WorldState, WorldError> {
    if !map.contains(start.x, start.y) {
        return Err(WorldError::Spawn(format!(
            "start ({}, {}) is outside the map extent",
            start.x, start.y
        )));
    }
    let ground = map.elevation_at(start.x, start.y)?;
    if start.z < ground + params.collision_margin {
        return Err(WorldError::Spawn(format!(
            "start altitude {} is below terrain {} plus margin {}",
            start.z, ground, params.collision_margin
        )));
    }
    for e in &entities {
        if !map.contains(e.position.x, e.position.y) {
            return Err(WorldError::Placement(format!(
                "entity {} at ({}, {}) is outside the map extent",
                e.id, e.position.x, e.position.y
            )));
        }
    }
    if !entities.iter().any(|e| e.is_victim()) {
        return Err(WorldError::Placement("no victims placed".into()));
    }
    if !entities.iter().any(|e| !e.is_victim()) {
        return Err(WorldError::Placement("no clues placed".into()));
    }
    let t_max = params
        .t_max
        .unwrap_or_else(|| default_t_max(&map, 100.0, params.speed));
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(WorldError::InvalidStep(format!(
            "time budget must be positive, got {t_max}"
        )));
    }
    Ok(WorldState {
        map,
        uav: UavState {
            position: start,
            yaw: wrap_angle(start_yaw),
            alive: true,
            distance_flown: 0.0,
        },
        entities,
        env,
        step_count: 0,
        elapsed: 0.0,
        terminated: Termination::Running,
        t_max,
        params,
        dt_ref: 0.0,
    })
}

impl WorldState {
    pub fn params(&self) -> &WorldParams {
        &self.params
    }

    /// Advances the world one step. Order of effects: apply the action, then
    /// check terrain collision, then check the time budget. `DeclareDone`
    /// completes before the budget check, and a crash overrides both.
    pub fn step(&mut self, action: &ActionCommand, dt: f64) -> Result<(), WorldError> {
        if self.terminated != Termination::Running {
            return Err(WorldError::State(self.terminated));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(WorldError::InvalidStep(format!(
                "dt must be positive and finite, got {dt}"
            )));
        }

        match action {
            ActionCommand::Forward => self.translate(self.uav.yaw.cos(), self.uav.yaw.sin(), 0.0, dt),
            ActionCommand::Backward => {
                self.translate(-self.uav.yaw.cos(), -self.uav.yaw.sin(), 0.0, dt)
            }
            ActionCommand::StrafeLeft => {
                self.translate(-self.uav.yaw.sin(), self.uav.yaw.cos(), 0.0, dt)
            }
            ActionCommand::StrafeRight => {
                self.translate(self.uav.yaw.sin(), -self.uav.yaw.cos(), 0.0, dt)
            }
            ActionCommand::Ascend => self.translate(0.0, 0.0, 1.0, dt),
            ActionCommand::Descend => self.translate(0.0, 0.0, -1.0, dt),
            ActionCommand::YawLeft => self.uav.yaw = wrap_angle(self.uav.yaw + self.params.yaw_step),
            ActionCommand::YawRight => {
                self.uav.yaw = wrap_angle(self.uav.yaw - self.params.yaw_step)
            }
            ActionCommand::Hover
            | ActionCommand::ReportClue { .. }
            | ActionCommand::ReportVictim { .. } => {}
            ActionCommand::DeclareDone => self.terminated = Termination::Completed,
        }

        self.step_count += 1;
        if self.step_count == 1 {
            self.dt_ref = dt;
        }
        if dt == self.dt_ref {
            // Uniform stepping: derive the clock from the step count so it is
            // exact, with no accumulated rounding.
            self.elapsed = self.step_count as f64 * dt;
        } else {
            self.dt_ref = f64::NAN;
            self.elapsed += dt;
        }

        // Collision beats every other outcome.
        let ground = self
            .map
            .elevation_at_clamped(self.uav.position.x, self.uav.position.y);
        if self.uav.position.z < ground + self.params.collision_margin {
            self.uav.alive = false;
            self.terminated = Termination::Crashed;
            return Ok(());
        }
        if self.terminated == Termination::Running && self.elapsed >= self.t_max {
            self.terminated = Termination::TimedOut;
        }
        Ok(())
    }

    fn translate(&mut self, dx: f64, dy: f64, dz: f64, dt: f64) {
        let step_len = self.params.speed * dt;
        let from = self.uav.position;
        let mut to = Point3::new(
            from.x + dx * step_len,
            from.y + dy * step_len,
            from.z + dz * step_len,
        );
        // The horizontal extent is a hard boundary; motion clamps against it.
        let (ex, ey) = self.map.extent();
        let origin = self.map.origin();
        to.x = to.x.clamp(origin.0, origin.0 + ex);
        to.y = to.y.clamp(origin.1, origin.1 + ey);
        self.uav.distance_flown += from.distance(&to);
        self.uav.position = to;
    }
}
