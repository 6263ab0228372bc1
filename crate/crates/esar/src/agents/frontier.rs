//! Frontier-driven exploration baselines.
//!
//! Both variants map depth rays into the occupancy grid, pick a frontier
//! goal, and follow the goal's distance field. The nearest variant takes the
//! closest frontier by travel distance; the value-ranked variant scores each
//! frontier by (value at centroid) / (1 + travel distance), where value
//! comes from a clue-density heuristic unless an external provider is
//! plugged in. Altitude holds a fixed above-ground band so the planar grid
//! stays meaningful over relief.

use std::f64::consts::{PI, TAU};

use crate::geom::wrap_angle;
use crate::world::{ActionCommand, ObservationBundle};

use super::{
    fmm::{fmm_distance_field, DistField},
    AgentError, BevGrid, Frontier, Policy, PolicyDecision, PolicyParams, Reporter,
};

/// Goal-ranking flavor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontierKind {
    /// Classic frontier exploration: closest frontier wins.
    Nearest,
    /// Frontier with the best value-to-distance ratio wins.
    ValueRanked,
}

/// Supplies the scalar value surface the value-ranked variant maximizes.
pub trait ValueProvider: Send {
    fn value_at(&self, x: f64, y: f64) -> f64;
}

/// Default value surface: a small exploration prior plus a Gaussian bump at
/// every clue reported so far, so the search thickens around found evidence.
pub struct ClueDensityValue {
    deposits: Vec<(f64, f64)>,
    sigma: f64,
}

impl ClueDensityValue {
    pub fn new(sigma: f64) -> Self {
        Self { deposits: Vec::new(), sigma }
    }

    pub fn deposit(&mut self, x: f64, y: f64) {
        self.deposits.push((x, y));
    }
}

impl Default for ClueDensityValue {
    fn default() -> Self {
        Self::new(100.0)
    }
}

impl ValueProvider for ClueDensityValue {
    fn value_at(&self, x: f64, y: f64) -> f64 {
        let bumps: f64 = self
            .deposits
            .iter()
            .map(|(dx, dy)| {
                let d2 = (x - dx) * (x - dx) + (y - dy) * (y - dy);
                (-d2 / (2.0 * self.sigma * self.sigma)).exp()
            })
            .sum();
        0.01 + bumps
    }
}

/// Picks the goal frontier index, or None when no frontier has a finite
/// travel distance. `values` is required for the value-ranked kind and
/// ignored otherwise. Ties break toward the lowest index.
pub fn select_goal(
    kind: FrontierKind,
    frontiers: &[Frontier],
    distances: &[f64],
    values: Option<&[f64]>,
) -> Option<usize> {
    assert_eq!(frontiers.len(), distances.len());
    let mut best: Option<(usize, f64)> = None;
    for (idx, d) in distances.iter().enumerate() {
        if !d.is_finite() {
            continue;
        }
        // Higher key wins; nearest = negated distance so closer is higher.
        let key = match kind {
            FrontierKind::Nearest => -d,
            FrontierKind::ValueRanked => {
                let v = values.expect("value-ranked selection needs values")[idx];
                v / (1.0 + d)
            }
        };
        if best.map_or(true, |(_, bk)| key > bk) {
            best = Some((idx, key));
        }
    }
    best.map(|(i, _)| i)
}

struct GoalState {
    centroid: (f64, f64),
    /// Distance field from the goal cell; None means the goal was picked by
    /// straight-line fallback and is flown directly.
    field: Option<DistField>,
}

pub struct FrontierPolicy {
    kind: FrontierKind,
    params: PolicyParams,
    grid: BevGrid,
    reporter: Reporter,
    clue_value: ClueDensityValue,
    external_value: Option<Box<dyn ValueProvider>>,
    goal: Option<GoalState>,
    steps_since_plan: u32,
    done: bool,
}

impl FrontierPolicy {
    pub fn new(kind: FrontierKind, params: &PolicyParams, map_extent: (f64, f64)) -> Self {
        Self {
            kind,
            params: *params,
            grid: BevGrid::new(map_extent, params.bev_resolution),
            reporter: Reporter::new(params.report_dedup_radius),
            clue_value: ClueDensityValue::default(),
            external_value: None,
            goal: None,
            steps_since_plan: 0,
            done: false,
        }
    }

    /// Replaces the clue-density heuristic with an external value surface.
    pub fn with_value_provider(mut self, provider: Box<dyn ValueProvider>) -> Self {
        self.external_value = Some(provider);
        self
    }

    pub fn grid(&self) -> &BevGrid {
        &self.grid
    }

    fn value_at(&self, x: f64, y: f64) -> f64 {
        match &self.external_value {
            Some(p) => p.value_at(x, y),
            None => self.clue_value.value_at(x, y),
        }
    }

    /// Picks a new goal and its approach field. Returns false when nothing
    /// is left to explore.
    fn replan(&mut self, uav_cell: (usize, usize)) -> bool {
        self.steps_since_plan = 0;
        let frontiers = self.grid.extract_frontiers();
        if frontiers.is_empty() {
            return false;
        }
        // Goal cell per frontier: the member cell nearest the centroid, so
        // the target is always free space.
        let goal_cells: Vec<(usize, usize)> = frontiers
            .iter()
            .map(|f| {
                *f.cells
                    .iter()
                    .min_by(|a, b| {
                        let da = cell_center_dist2(&self.grid, **a, f.centroid);
                        let db = cell_center_dist2(&self.grid, **b, f.centroid);
                        da.total_cmp(&db)
                    })
                    .expect("frontier components are nonempty")
            })
            .collect();

        let from_uav = fmm_distance_field(&self.grid, uav_cell).ok();
        let distances: Vec<f64> = goal_cells
            .iter()
            .map(|&(i, j)| from_uav.as_ref().map_or(f64::INFINITY, |f| f.get(i, j)))
            .collect();
        let values: Option<Vec<f64>> = match self.kind {
            FrontierKind::Nearest => None,
            FrontierKind::ValueRanked => Some(
                frontiers.iter().map(|f| self.value_at(f.centroid.0, f.centroid.1)).collect(),
            ),
        };

        let chosen = select_goal(self.kind, &frontiers, &distances, values.as_deref());
        let (idx, field) = match chosen {
            Some(idx) => {
                let field = fmm_distance_field(&self.grid, goal_cells[idx]).ok();
                (idx, field)
            }
            None => {
                // Every frontier is walled off in the grid; fly straight at
                // the nearest one and let altitude control clear the relief.
                let (ux, uy) = self.grid.center_of(uav_cell.0, uav_cell.1);
                let idx = (0..frontiers.len())
                    .min_by(|&a, &b| {
                        let fa = frontiers[a].centroid;
                        let fb = frontiers[b].centroid;
                        let da = (fa.0 - ux).powi(2) + (fa.1 - uy).powi(2);
                        let db = (fb.0 - ux).powi(2) + (fb.1 - uy).powi(2);
                        da.total_cmp(&db)
                    })
                    .expect("frontiers are nonempty here");
                (idx, None)
            }
        };
        self.goal = Some(GoalState { centroid: frontiers[idx].centroid, field });
        true
    }

    /// Motion verb that best advances toward `target` from the current pose:
    /// forward when roughly facing it, otherwise turn the shorter way.
    fn steer_toward(&self, obs: &ObservationBundle, target: (f64, f64)) -> ActionCommand {
        let dx = target.0 - obs.pose.position.x;
        let dy = target.1 - obs.pose.position.y;
        if dx == 0.0 && dy == 0.0 {
            return ActionCommand::Hover;
        }
        let desired = dy.atan2(dx);
        let mut err = wrap_angle(desired - obs.pose.yaw);
        if err > PI {
            err -= TAU;
        }
        // Yaw is quantized, so the best reachable heading is within half a
        // yaw step; beyond that, turn.
        if err.abs() <= PI / 12.0 + 1e-9 {
            ActionCommand::Forward
        } else if err > 0.0 {
            ActionCommand::YawLeft
        } else {
            ActionCommand::YawRight
        }
    }

    fn navigate(&mut self, obs: &ObservationBundle) -> ActionCommand {
        let uav_cell = match self.grid.cell_of(obs.pose.position.x, obs.pose.position.y) {
            Some(c) => c,
            None => return ActionCommand::Hover,
        };

        let tolerance = self.params.goal_tolerance_cells * self.params.bev_resolution;
        if let Some(goal) = &self.goal {
            let dx = goal.centroid.0 - obs.pose.position.x;
            let dy = goal.centroid.1 - obs.pose.position.y;
            if (dx * dx + dy * dy).sqrt() <= tolerance {
                self.goal = None;
            }
        }
        if self.goal.is_none() || self.steps_since_plan >= self.params.replan_interval {
            if !self.replan(uav_cell) {
                self.done = true;
                return ActionCommand::DeclareDone;
            }
        }

        let goal = self.goal.as_ref().expect("replan just set a goal");
        let target = match &goal.field {
            Some(field) if field.get(uav_cell.0, uav_cell.1).is_finite() => {
                match field.next_step_toward(uav_cell) {
                    Some((ni, nj)) => self.grid.center_of(ni, nj),
                    None => goal.centroid,
                }
            }
            _ => goal.centroid,
        };
        self.steer_toward(obs, target)
    }
}

fn cell_center_dist2(grid: &BevGrid, cell: (usize, usize), point: (f64, f64)) -> f64 {
    let (cx, cy) = grid.center_of(cell.0, cell.1);
    (cx - point.0).powi(2) + (cy - point.1).powi(2)
}

impl Policy for FrontierPolicy {
    fn act(&mut self, obs: &ObservationBundle, _prompt: &str) -> PolicyDecision {
        let clue_reports = self.reporter.observe(obs);
        if self.kind == FrontierKind::ValueRanked {
            for r in &clue_reports {
                self.clue_value.deposit(r.position.x, r.position.y);
            }
        }

        let action = if let Some(report) = self.reporter.next_victim_action() {
            report
        } else if self.done {
            ActionCommand::DeclareDone
        } else {
            match self.grid.update_from_observation(obs) {
                Ok(()) => {}
                Err(AgentError::OutOfBounds(_, _)) => {
                    // The world clamps motion to the map, so this only
                    // happens on a misconfigured grid; hold position.
                    self.reporter.advance_step();
                    return PolicyDecision { action: ActionCommand::Hover, clue_reports };
                }
                Err(_) => unreachable!("update only reports out-of-bounds"),
            }
            let agl = obs.down_range;
            if agl < self.params.target_agl - self.params.agl_tolerance {
                ActionCommand::Ascend
            } else if agl > self.params.target_agl + self.params.agl_tolerance {
                ActionCommand::Descend
            } else {
                let a = self.navigate(obs);
                self.steps_since_plan += 1;
                a
            }
        };
        self.reporter.advance_step();
        PolicyDecision { action, clue_reports }
    }

    fn name(&self) -> &'static str {
        match self.kind {
            FrontierKind::Nearest => "fbe",
            FrontierKind::ValueRanked => "value-frontier",
        }
    }
}
