//! Terrain occlusion test along a 3D segment.

use crate::geom::Point3;

use super::{Heightmap, TerrainError};

/// Minimum height a sample must clear the surface by, meters.
pub const LOS_CLEARANCE: f64 = 0.1;

/// True when the straight segment `a -> b` stays at least [`LOS_CLEARANCE`]
/// above the terrain surface at every sample point. Samples are spaced at
/// most half a cell apart, endpoints included.
///
/// The test is exactly symmetric: the segment is canonicalized before
/// sampling, so `line_of_sight(m, a, b) == line_of_sight(m, b, a)` bit for
/// bit.
pub fn line_of_sight(map: &Heightmap, a: Point3, b: Point3) -> Result<bool, TerrainError> {
    if !map.contains(a.x, a.y) {
        return Err(TerrainError::OutOfBounds { x: a.x, y: a.y });
    }
    if !map.contains(b.x, b.y) {
        return Err(TerrainError::OutOfBounds { x: b.x, y: b.y });
    }
    // Canonical endpoint order makes the sample set direction-independent.
    let swap = (b.x, b.y, b.z) < (a.x, a.y, a.z);
    let (p, q) = if swap { (b, a) } else { (a, b) };

    let length = p.distance(&q);
    let samples = ((length / (map.cell_size() * 0.5)).ceil() as usize).max(1);
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        let x = p.x + (q.x - p.x) * t;
        let y = p.y + (q.y - p.y) * t;
        let z = p.z + (q.z - p.z) * t;
        // Interior points are inside the extent up to rounding; clamp the
        // epsilon overshoot rather than failing at the border.
        if z - map.elevation_at_clamped(x, y) < LOS_CLEARANCE {
            return Ok(false);
        }
    }
    Ok(true)
}
