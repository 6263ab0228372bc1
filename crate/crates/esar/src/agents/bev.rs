//! Top-down occupancy grid built from depth rays.

use std::collections::VecDeque;

use crate::world::ObservationBundle;

use super::AgentError;

/// Knowledge state of one grid cell. Occupied is sticky: once a depth ray
/// hits terrain in a cell, later free-space evidence cannot clear it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellState {
    Unknown,
    Free,
    Occupied,
}

/// A connected group of frontier cells: free cells bordering unexplored
/// space. `centroid` is the mean of the member cell centers, in meters.
#[derive(Clone, Debug, PartialEq)]
pub struct Frontier {
    pub cells: Vec<(usize, usize)>,
    pub centroid: (f64, f64),
}

/// Grid over the map footprint. Cell (0, 0) sits at the map origin corner;
/// `i` grows east, `j` grows north.
#[derive(Clone, Debug, PartialEq)]
pub struct BevGrid {
    width: usize,
    height: usize,
    resolution: f64,
    cells: Vec<CellState>,
}

impl BevGrid {
    /// Sizes a grid covering `extent` meters at `resolution` meters/cell.
    /// All cells start Unknown.
    pub fn new(extent: (f64, f64), resolution: f64) -> Self {
        assert!(resolution > 0.0, "resolution must be positive");
        assert!(extent.0 > 0.0 && extent.1 > 0.0, "extent must be positive");
        let width = (extent.0 / resolution).ceil().max(1.0) as usize;
        let height = (extent.1 / resolution).ceil().max(1.0) as usize;
        Self { width, height, resolution, cells: vec![CellState::Unknown; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn state(&self, i: usize, j: usize) -> CellState {
        self.cells[j * self.width + i]
    }

    /// Overwrites one cell. Intended for seeding known obstacles or building
    /// grids from external occupancy sources; depth-ray fusion should go
    /// through `update_from_observation`.
    pub fn set_state(&mut self, i: usize, j: usize, state: CellState) {
        self.cells[j * self.width + i] = state;
    }

    /// Cell containing the point, or None outside the grid. Points exactly
    /// on the far edge belong to the last cell.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let max_x = self.width as f64 * self.resolution;
        let max_y = self.height as f64 * self.resolution;
        if !(0.0..=max_x).contains(&x) || !(0.0..=max_y).contains(&y) {
            return None;
        }
        let i = ((x / self.resolution) as usize).min(self.width - 1);
        let j = ((y / self.resolution) as usize).min(self.height - 1);
        Some((i, j))
    }

    /// Center of cell (i, j) in meters.
    pub fn center_of(&self, i: usize, j: usize) -> (f64, f64) {
        ((i as f64 + 0.5) * self.resolution, (j as f64 + 0.5) * self.resolution)
    }

    fn set_free(&mut self, i: usize, j: usize) {
        let c = &mut self.cells[j * self.width + i];
        if *c != CellState::Occupied {
            *c = CellState::Free;
        }
    }

    fn set_occupied(&mut self, i: usize, j: usize) {
        self.cells[j * self.width + i] = CellState::Occupied;
    }

    /// Folds one observation into the grid: cells traversed by each depth
    /// ray up to its hit become Free, the hit cell becomes Occupied when the
    /// ray stopped short of the scan maximum, and the UAV's own cell is
    /// Free. Applying the same observation twice is a no-op.
    pub fn update_from_observation(&mut self, obs: &ObservationBundle) -> Result<(), AgentError> {
        let (px, py) = (obs.pose.position.x, obs.pose.position.y);
        let (pi, pj) = self.cell_of(px, py).ok_or(AgentError::OutOfBounds(px, py))?;
        self.set_free(pi, pj);

        let step = self.resolution / 2.0;
        for ray in &obs.depth_rays {
            let (dx, dy) = (ray.bearing.cos(), ray.bearing.sin());
            let mut t = 0.0;
            while t < ray.range {
                if let Some((i, j)) = self.cell_of(px + t * dx, py + t * dy) {
                    self.set_free(i, j);
                }
                t += step;
            }
            if ray.range < obs.depth_max_range {
                if let Some((i, j)) = self.cell_of(px + ray.range * dx, py + ray.range * dy) {
                    self.set_occupied(i, j);
                }
            }
        }
        Ok(())
    }

    /// True when the cell is Free and at least one 4-neighbor is Unknown.
    pub fn is_frontier_cell(&self, i: usize, j: usize) -> bool {
        if self.state(i, j) != CellState::Free {
            return false;
        }
        let (i, j) = (i as isize, j as isize);
        [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)].iter().any(|&(ni, nj)| {
            ni >= 0
                && nj >= 0
                && (ni as usize) < self.width
                && (nj as usize) < self.height
                && self.state(ni as usize, nj as usize) == CellState::Unknown
        })
    }

    /// Groups frontier cells into 8-connected components, in row-major
    /// discovery order. Empty once nothing borders Unknown space.
    pub fn extract_frontiers(&self) -> Vec<Frontier> {
        let mut mask = vec![false; self.cells.len()];
        for j in 0..self.height {
            for i in 0..self.width {
                mask[j * self.width + i] = self.is_frontier_cell(i, j);
            }
        }

        let mut visited = vec![false; self.cells.len()];
        let mut frontiers = Vec::new();
        for j in 0..self.height {
            for i in 0..self.width {
                let idx = j * self.width + i;
                if !mask[idx] || visited[idx] {
                    continue;
                }
                let mut cells = Vec::new();
                let mut queue = VecDeque::from([(i, j)]);
                visited[idx] = true;
                while let Some((ci, cj)) = queue.pop_front() {
                    cells.push((ci, cj));
                    for dj in -1i32..=1 {
                        for di in -1i32..=1 {
                            if di == 0 && dj == 0 {
                                continue;
                            }
                            let ni = ci as i32 + di;
                            let nj = cj as i32 + dj;
                            if ni < 0
                                || nj < 0
                                || ni as usize >= self.width
                                || nj as usize >= self.height
                            {
                                continue;
                            }
                            let nidx = nj as usize * self.width + ni as usize;
                            if mask[nidx] && !visited[nidx] {
                                visited[nidx] = true;
                                queue.push_back((ni as usize, nj as usize));
                            }
                        }
                    }
                }
                cells.sort_unstable_by_key(|&(ci, cj)| (cj, ci));
                let n = cells.len() as f64;
                let (sx, sy) = cells.iter().fold((0.0, 0.0), |(sx, sy), &(ci, cj)| {
                    let (cx, cy) = self.center_of(ci, cj);
                    (sx + cx, sy + cy)
                });
                frontiers.push(Frontier { cells, centroid: (sx / n, sy / n) });
            }
        }
        frontiers
    }

    /// Fraction of cells no longer Unknown.
    pub fn explored_fraction(&self) -> f64 {
        let known = self.cells.iter().filter(|c| **c != CellState::Unknown).count();
        known as f64 / self.cells.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point3;
    use crate::world::{DepthRay, EnvConditions, UavState, Weather};

    fn obs_at(x: f64, y: f64, rays: Vec<DepthRay>, max_range: f64) -> ObservationBundle {
        ObservationBundle {
            pose: UavState {
                position: Point3::new(x, y, 30.0),
                yaw: 0.0,
                alive: true,
                distance_flown: 0.0,
            },
            detections: vec![],
            depth_rays: rays,
            down_range: 30.0,
            depth_max_range: max_range,
            env: EnvConditions::new(Weather::Sunny, 12.0),
            elapsed: 0.0,
        }
    }

    #[test]
    fn single_hit_ray_frees_five_cells_and_occupies_the_sixth() {
        let mut g = BevGrid::new((100.0, 100.0), 10.0);
        let obs = obs_at(5.0, 5.0, vec![DepthRay { bearing: 0.0, range: 50.0 }], 100.0);
        g.update_from_observation(&obs).unwrap();
        for i in 0..5 {
            assert_eq!(g.state(i, 0), CellState::Free, "cell {i} should be free");
        }
        assert_eq!(g.state(5, 0), CellState::Occupied);
        assert_eq!(g.state(6, 0), CellState::Unknown);
    }

    #[test]
    fn max_range_ray_occupies_nothing() {
        let mut g = BevGrid::new((200.0, 200.0), 10.0);
        let obs = obs_at(5.0, 5.0, vec![DepthRay { bearing: 0.0, range: 100.0 }], 100.0);
        g.update_from_observation(&obs).unwrap();
        let occupied =
            (0..g.width()).flat_map(|i| (0..g.height()).map(move |j| (i, j))).filter(
                |&(i, j)| g.state(i, j) == CellState::Occupied,
            );
        assert_eq!(occupied.count(), 0);
        assert_eq!(g.state(9, 0), CellState::Free);
    }

    #[test]
    fn identical_updates_are_idempotent() {
        let mut g = BevGrid::new((100.0, 100.0), 10.0);
        let obs = obs_at(
            55.0,
            55.0,
            vec![
                DepthRay { bearing: 0.0, range: 30.0 },
                DepthRay { bearing: std::f64::consts::FRAC_PI_2, range: 100.0 },
            ],
            100.0,
        );
        g.update_from_observation(&obs).unwrap();
        let once = g.clone();
        g.update_from_observation(&obs).unwrap();
        assert_eq!(g, once);
    }

    #[test]
    fn occupied_cells_never_revert() {
        let mut g = BevGrid::new((100.0, 100.0), 10.0);
        let hit = obs_at(5.0, 5.0, vec![DepthRay { bearing: 0.0, range: 30.0 }], 100.0);
        g.update_from_observation(&hit).unwrap();
        assert_eq!(g.state(3, 0), CellState::Occupied);
        // A later clear ray through that cell must not clear the hit.
        let clear = obs_at(5.0, 5.0, vec![DepthRay { bearing: 0.0, range: 100.0 }], 100.0);
        g.update_from_observation(&clear).unwrap();
        assert_eq!(g.state(3, 0), CellState::Occupied);
    }

    #[test]
    fn pose_outside_the_grid_is_an_error() {
        let mut g = BevGrid::new((100.0, 100.0), 10.0);
        let obs = obs_at(150.0, 5.0, vec![], 100.0);
        assert!(matches!(g.update_from_observation(&obs), Err(AgentError::OutOfBounds(_, _))));
    }

    #[test]
    fn lone_free_cell_is_its_own_frontier() {
        let mut g = BevGrid::new((100.0, 100.0), 10.0);
        let obs = obs_at(55.0, 55.0, vec![], 100.0);
        g.update_from_observation(&obs).unwrap();
        let f = g.extract_frontiers();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].cells, vec![(5, 5)]);
        assert_eq!(f[0].centroid, (55.0, 55.0));
    }

    #[test]
    fn fully_explored_grid_has_no_frontiers() {
        let mut g = BevGrid::new((50.0, 50.0), 10.0);
        for j in 0..5 {
            for i in 0..5 {
                g.set_free(i, j);
            }
        }
        assert!(g.extract_frontiers().is_empty());
        assert_eq!(g.explored_fraction(), 1.0);
    }

    #[test]
    fn half_explored_grid_yields_one_dividing_frontier() {
        let mut g = BevGrid::new((100.0, 100.0), 10.0);
        for j in 0..10 {
            for i in 0..5 {
                g.set_free(i, j);
            }
        }
        let f = g.extract_frontiers();
        assert_eq!(f.len(), 1);
        let expected: Vec<(usize, usize)> = (0..10).map(|j| (4, j)).collect();
        assert_eq!(f[0].cells, expected);
        assert_eq!(f[0].centroid, (45.0, 50.0));
    }

    #[test]
    fn frontier_components_split_across_gaps() {
        let mut g = BevGrid::new((100.0, 100.0), 10.0);
        // Two free cells far apart, each bordering unknown space.
        g.set_free(1, 1);
        g.set_free(8, 8);
        let f = g.extract_frontiers();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].cells, vec![(1, 1)]);
        assert_eq!(f[1].cells, vec![(8, 8)]);
    }

    #[test]
    fn far_edge_points_belong_to_the_last_cell() {
        let g = BevGrid::new((100.0, 100.0), 10.0);
        assert_eq!(g.cell_of(100.0, 100.0), Some((9, 9)));
        assert_eq!(g.cell_of(0.0, 0.0), Some((0, 0)));
        assert_eq!(g.cell_of(-0.1, 50.0), None);
    }
}
