//! Freezing a continuous event into static scene snapshots.

use serde::{Deserialize, Serialize};

use crate::geom::Point3;
use crate::terrain::Heightmap;
use crate::world::ClueType;

use super::{Event, TaskGenError, TerrainRef};

/// Height above ground at which frozen entities rest.
pub const ENTITY_AGL: f64 = 1.0;

/// One ground-truth clue in a frozen scene.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CluePlacement {
    pub clue_type: ClueType,
    pub position: Point3,
}

/// A static scene: where every victim and clue sits at one moment. Carries
/// the terrain recipe and narrative so a snapshot is self-contained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub event_id: String,
    /// Hours since the incident began.
    pub snapshot_time_h: f64,
    pub victims: Vec<Point3>,
    pub clues: Vec<CluePlacement>,
    pub terrain: TerrainRef,
    pub narrative: String,
}

/// Freezes `event` into `k` snapshots at the midpoints of `k` equal time
/// bins. Victim positions interpolate their trajectories; a clue appears in
/// every snapshot at or after its drop time. All positions are re-seated
/// onto the terrain surface (plus [`ENTITY_AGL`]) and clamped into the map
/// extent, so downstream placement checks cannot fail.
pub fn discretize_event(
    event: &Event,
    k: usize,
    map: &Heightmap,
) -> Result<Vec<Snapshot>, TaskGenError> {
    event.validate()?;
    if k == 0 {
        return Err(TaskGenError::Range("snapshot count must be at least 1".into()));
    }
    let (t0, t1) = event.time_span();
    if !(t1 - t0 > 0.0) {
        return Err(TaskGenError::Range(format!(
            "event time span [{t0}, {t1}] h must be positive"
        )));
    }
    let span = t1 - t0;
    let mut snapshots = Vec::with_capacity(k);
    for i in 0..k {
        let t = t0 + (i as f64 + 0.5) * span / k as f64;
        let victims = event
            .victim_trajectories
            .iter()
            .map(|tr| seat_on_terrain(tr.position_at(t), map))
            .collect();
        let clues = event
            .clue_drops
            .iter()
            .filter(|d| d.drop_time_h <= t)
            .map(|d| CluePlacement {
                clue_type: d.clue_type,
                position: seat_on_terrain(d.position, map),
            })
            .collect();
        snapshots.push(Snapshot {
            event_id: event.id.clone(),
            snapshot_time_h: t,
            victims,
            clues,
            terrain: event.terrain.clone(),
            narrative: event.narrative.clone(),
        });
    }
    Ok(snapshots)
}

/// Clamps `(x, y)` into the map extent and sets `z` to ground level plus
/// [`ENTITY_AGL`]. The input `z` is advisory only.
fn seat_on_terrain(p: Point3, map: &Heightmap) -> Point3 {
    let (ex, ey) = map.extent();
    let origin = map.origin();
    let x = p.x.clamp(origin.0, origin.0 + ex);
    let y = p.y.clamp(origin.1, origin.1 + ey);
    Point3::new(x, y, map.elevation_at_clamped(x, y) + ENTITY_AGL)
}
