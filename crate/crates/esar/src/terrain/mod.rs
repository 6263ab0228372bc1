//! Raster heightmap terrain: import/export, procedural generation, and
//! elevation / line-of-sight queries.
//!
//! A [`Heightmap`] is a rectangular grid of elevation samples. Cell `(col,
//! row)` (row 0 = northernmost) samples the terrain at the cell center; the
//! world extent is exactly `width * cell_size` by `height * cell_size` meters
//! with the origin at the southwest corner. Continuous elevation between
//! centers comes from bilinear interpolation, held constant over the half-cell
//! border band so every point of the extent has a defined elevation.

mod ascii_grid;
mod generate;
mod los;

pub use ascii_grid::{format_ascii_grid, load_ascii_grid, parse_ascii_grid, write_ascii_grid};
pub use generate::generate_archetype;
pub use los::{line_of_sight, LOS_CLEARANCE};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Terrain family. Controls procedural relief and, downstream, which weather
/// conditions a task generator will draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Archetype {
    Alpine,
    Desert,
    SnowPeak,
    Coastal,
    /// Loaded from a file rather than generated.
    Imported,
}

impl Archetype {
    pub const ALL_GENERATED: [Archetype; 4] = [
        Archetype::Alpine,
        Archetype::Desert,
        Archetype::SnowPeak,
        Archetype::Coastal,
    ];

    /// Default square side length in meters when generating this archetype.
    pub fn default_side_length(&self) -> f64 {
        match self {
            Archetype::Desert => 5000.0,
            _ => 2000.0,
        }
    }
}

/// Default grid spacing in meters, matching common spaceborne DEM products.
pub const DEFAULT_CELL_SIZE: f64 = 12.0;

/// Smallest side length accepted by the procedural generator, meters.
pub const MIN_SIDE_LENGTH: f64 = 100.0;

#[derive(Debug, Error)]
pub enum TerrainError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("point ({x}, {y}) lies outside the map extent")]
    OutOfBounds { x: f64, y: f64 },
    #[error("side length {0} m is below the {MIN_SIDE_LENGTH} m minimum")]
    SideLengthRange(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Regular elevation raster over a rectangular world extent.
#[derive(Clone, Debug, PartialEq)]
pub struct Heightmap {
    width: usize,
    height: usize,
    cell_size: f64,
    /// World coordinates of the southwest corner of the extent.
    origin: (f64, f64),
    /// Row-major samples, row 0 = northernmost row.
    elevations: Vec<f64>,
    archetype: Archetype,
}

impl Heightmap {
    /// Builds a heightmap from raw parts, validating every grid invariant.
    pub fn from_elevations(
        width: usize,
        height: usize,
        cell_size: f64,
        origin: (f64, f64),
        elevations: Vec<f64>,
        archetype: Archetype,
    ) -> Result<Self, TerrainError> {
        if width < 2 || height < 2 {
            return Err(TerrainError::Dimension(format!(
                "grid must be at least 2x2, got {width}x{height}"
            )));
        }
        if elevations.len() != width * height {
            return Err(TerrainError::Dimension(format!(
                "expected {} samples for a {width}x{height} grid, got {}",
                width * height,
                elevations.len()
            )));
        }
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(TerrainError::InvalidGrid(format!(
                "cell size must be positive and finite, got {cell_size}"
            )));
        }
        if !(origin.0.is_finite() && origin.1.is_finite()) {
            return Err(TerrainError::InvalidGrid("origin must be finite".into()));
        }
        if let Some(bad) = elevations.iter().position(|e| !e.is_finite()) {
            return Err(TerrainError::InvalidGrid(format!(
                "non-finite elevation at flat index {bad}"
            )));
        }
        Ok(Self {
            width,
            height,
            cell_size,
            origin,
            elevations,
            archetype,
        })
    }

    /// Constant-elevation map, handy for fixtures.
    pub fn flat(width: usize, height: usize, cell_size: f64, elevation: f64) -> Self {
        Self::from_elevations(
            width,
            height,
            cell_size,
            (0.0, 0.0),
            vec![elevation; width * height],
            Archetype::Imported,
        )
        .expect("flat map parameters are valid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn archetype(&self) -> Archetype {
        self.archetype
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    /// World-extent size `(east-west, north-south)` in meters.
    pub fn extent(&self) -> (f64, f64) {
        (
            self.width as f64 * self.cell_size,
            self.height as f64 * self.cell_size,
        )
    }

    /// True when `(x, y)` lies inside the extent, borders included.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (ex, ey) = self.extent();
        x >= self.origin.0 && x <= self.origin.0 + ex && y >= self.origin.1 && y <= self.origin.1 + ey
    }

    /// Stored sample at `(col, row)`; row 0 is the northernmost row.
    pub fn value_at_cell(&self, col: usize, row: usize) -> f64 {
        assert!(col < self.width && row < self.height, "cell out of range");
        self.elevations[row * self.width + col]
    }

    /// Overwrites one sample, preserving the finite-value invariant.
    pub fn set_value_at_cell(&mut self, col: usize, row: usize, value: f64) {
        assert!(col < self.width && row < self.height, "cell out of range");
        assert!(value.is_finite(), "elevation must be finite");
        self.elevations[row * self.width + col] = value;
    }

    /// World coordinates of the center of cell `(col, row)`.
    pub fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            self.origin.0 + (col as f64 + 0.5) * self.cell_size,
            self.origin.1 + (self.height - 1 - row) as f64 * self.cell_size + 0.5 * self.cell_size,
        )
    }

    pub fn min_max_elevation(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &e in &self.elevations {
            lo = lo.min(e);
            hi = hi.max(e);
        }
        (lo, hi)
    }

    /// Elevation span `max - min` in meters.
    pub fn relief(&self) -> f64 {
        let (lo, hi) = self.min_max_elevation();
        hi - lo
    }

    /// Continuous elevation query. Bilinear between the four surrounding cell
    /// centers; within half a cell of the border the query clamps onto the
    /// outermost centers, so the surface is defined and continuous on the
    /// whole extent and exact at every cell center.
    pub fn elevation_at(&self, x: f64, y: f64) -> Result<f64, TerrainError> {
        if !self.contains(x, y) {
            return Err(TerrainError::OutOfBounds { x, y });
        }
        Ok(self.elevation_at_clamped(x, y))
    }

    /// Same surface as [`elevation_at`](Self::elevation_at) but clamps points
    /// outside the extent onto the border instead of failing.
    pub fn elevation_at_clamped(&self, x: f64, y: f64) -> f64 {
        // Continuous coordinates in cell-center units, measured from the
        // southwest-most center.
        let gx = ((x - self.origin.0) / self.cell_size - 0.5)
            .clamp(0.0, (self.width - 1) as f64);
        let gy = ((y - self.origin.1) / self.cell_size - 0.5)
            .clamp(0.0, (self.height - 1) as f64);
        let i0 = (gx.floor() as usize).min(self.width - 2);
        let j0 = (gy.floor() as usize).min(self.height - 2);
        let tx = gx - i0 as f64;
        let ty = gy - j0 as f64;
        // gy counts rows from the south; storage row 0 is the north edge.
        let v = |i: usize, j_south: usize| {
            self.elevations[(self.height - 1 - j_south) * self.width + i]
        };
        let e00 = v(i0, j0);
        let e10 = v(i0 + 1, j0);
        let e01 = v(i0, j0 + 1);
        let e11 = v(i0 + 1, j0 + 1);
        e00 * (1.0 - tx) * (1.0 - ty)
            + e10 * tx * (1.0 - ty)
            + e01 * (1.0 - tx) * ty
            + e11 * tx * ty
    }
}
