//! Geodesic distance fields over the occupancy grid.
//!
//! Fast-marching solver for unit-speed travel on Free cells. The update
//! stencil combines the first-order upwind quadratic over the two axes with
//! direct diagonal-neighbor candidates, so every cell's value lies between
//! the straight-line distance and the 8-connected shortest-path distance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{AgentError, BevGrid, CellState};

/// Cost multiplier for a diagonal step, in cell edges.
pub const DIAGONAL_COST: f64 = std::f64::consts::SQRT_2;

/// Travel distance from a source cell to every Free cell, meters.
/// Occupied and Unknown cells are impassable and stay infinite.
#[derive(Clone, Debug)]
pub struct DistField {
    width: usize,
    height: usize,
    resolution: f64,
    dist: Vec<f64>,
}

impl DistField {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[j * self.width + i]
    }

    /// Neighbor with the smallest distance, stepping toward the source.
    /// None when the cell is the source, unreachable, or a local minimum.
    pub fn next_step_toward(&self, cell: (usize, usize)) -> Option<(usize, usize)> {
        let (i, j) = cell;
        let here = self.get(i, j);
        if !here.is_finite() || here == 0.0 {
            return None;
        }
        let mut best: Option<((usize, usize), f64)> = None;
        // Fixed scan order makes ties deterministic: lowest (j, i) wins.
        for dj in -1i32..=1 {
            for di in -1i32..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let ni = i as i32 + di;
                let nj = j as i32 + dj;
                if ni < 0 || nj < 0 || ni as usize >= self.width || nj as usize >= self.height {
                    continue;
                }
                let d = self.get(ni as usize, nj as usize);
                if d < here && best.map_or(true, |(_, bd)| d < bd) {
                    best = Some(((ni as usize, nj as usize), d));
                }
            }
        }
        best.map(|(c, _)| c)
    }

    /// Steepest-descent cell path from `start` to the source, inclusive.
    /// Empty when `start` is unreachable.
    pub fn descend_path(&self, start: (usize, usize)) -> Vec<(usize, usize)> {
        if !self.get(start.0, start.1).is_finite() {
            return Vec::new();
        }
        let mut path = vec![start];
        let mut cur = start;
        let budget = self.width * self.height;
        while self.get(cur.0, cur.1) > 0.0 {
            match self.next_step_toward(cur) {
                Some(next) => {
                    path.push(next);
                    cur = next;
                }
                None => break,
            }
            if path.len() > budget {
                break;
            }
        }
        path
    }
}

/// Heap entry ordered so the smallest tentative distance pops first.
struct Candidate {
    dist: f64,
    idx: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.idx == other.idx
    }
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Solves the distance field from `source`, which must be a Free cell.
pub fn fmm_distance_field(
    grid: &BevGrid,
    source: (usize, usize),
) -> Result<DistField, AgentError> {
    let (w, h) = (grid.width(), grid.height());
    if source.0 >= w || source.1 >= h || grid.state(source.0, source.1) != CellState::Free {
        return Err(AgentError::InvalidSource);
    }
    let res = grid.resolution();
    let mut dist = vec![f64::INFINITY; w * h];
    let mut done = vec![false; w * h];
    let src_idx = source.1 * w + source.0;
    dist[src_idx] = 0.0;

    let mut heap = BinaryHeap::new();
    heap.push(Candidate { dist: 0.0, idx: src_idx });

    let solve = |dist: &[f64], i: usize, j: usize| -> f64 {
        let at = |ni: i32, nj: i32| -> f64 {
            if ni < 0 || nj < 0 || ni as usize >= w || nj as usize >= h {
                f64::INFINITY
            } else {
                dist[nj as usize * w + ni as usize]
            }
        };
        let (i, j) = (i as i32, j as i32);
        let a = at(i - 1, j).min(at(i + 1, j));
        let b = at(i, j - 1).min(at(i, j + 1));
        let axis = if a.is_infinite() && b.is_infinite() {
            f64::INFINITY
        } else if (a - b).abs() >= res {
            a.min(b) + res
        } else {
            let d = a - b;
            (a + b + (2.0 * res * res - d * d).sqrt()) / 2.0
        };
        let diag = [(-1, -1), (-1, 1), (1, -1), (1, 1)]
            .iter()
            .map(|&(di, dj)| at(i + di, j + dj) + DIAGONAL_COST * res)
            .fold(f64::INFINITY, f64::min);
        axis.min(diag)
    };

    while let Some(Candidate { idx, .. }) = heap.pop() {
        if done[idx] {
            continue;
        }
        done[idx] = true;
        let (ci, cj) = (idx % w, idx / w);
        for dj in -1i32..=1 {
            for di in -1i32..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let ni = ci as i32 + di;
                let nj = cj as i32 + dj;
                if ni < 0 || nj < 0 || ni as usize >= w || nj as usize >= h {
                    continue;
                }
                let (nu, nv) = (ni as usize, nj as usize);
                let nidx = nv * w + nu;
                if done[nidx] || grid.state(nu, nv) != CellState::Free {
                    continue;
                }
                let cand = solve(&dist, nu, nv);
                if cand < dist[nidx] {
                    dist[nidx] = cand;
                    heap.push(Candidate { dist: cand, idx: nidx });
                }
            }
        }
    }

    Ok(DistField { width: w, height: h, resolution: res, dist })
}
