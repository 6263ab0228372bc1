//! Sampling executable tasks from a frozen snapshot.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::Point3;
use crate::seeds::{mix64, stable_hash};
use crate::terrain::{Archetype, Heightmap};
use crate::world::{EnvConditions, Weather};

use super::{
    difficulty_score, DifficultyScore, Snapshot, TaskGenError, Tier, SCHEMA_VERSION,
};

/// One runnable benchmark task: a frozen scene plus sampled conditions and
/// start pose.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub schema_version: u32,
    pub task_id: String,
    pub snapshot: Snapshot,
    pub env: EnvConditions,
    pub start: Point3,
    /// Initial heading, radians.
    pub start_yaw: f64,
    /// Mission brief with conditions substituted in.
    pub prompt: String,
    pub tier: Tier,
    pub difficulty: DifficultyScore,
}

/// Knobs for task sampling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleParams {
    /// Start altitude above ground, meters.
    pub start_agl: f64,
}

impl Default for SampleParams {
    fn default() -> Self {
        Self { start_agl: 30.0 }
    }
}

/// Weather conditions that plausibly occur on each terrain archetype.
/// Imported maps accept the full set.
pub fn allowed_weather(archetype: Archetype) -> &'static [Weather] {
    match archetype {
        Archetype::Alpine => &[
            Weather::Sunny,
            Weather::Cloudy,
            Weather::Overcast,
            Weather::LightRain,
            Weather::HeavyRain,
            Weather::Thunderstorm,
            Weather::LightSnow,
            Weather::HeavySnow,
            Weather::Blizzard,
            Weather::Fog,
            Weather::DenseFog,
        ],
        Archetype::Desert => &[
            Weather::Sunny,
            Weather::Cloudy,
            Weather::Overcast,
            Weather::LightRain,
            Weather::Sandstorm,
            Weather::DustHaze,
        ],
        Archetype::SnowPeak => &[
            Weather::Sunny,
            Weather::Cloudy,
            Weather::Overcast,
            Weather::LightSnow,
            Weather::HeavySnow,
            Weather::Blizzard,
            Weather::Fog,
            Weather::DenseFog,
        ],
        Archetype::Coastal => &[
            Weather::Sunny,
            Weather::Cloudy,
            Weather::Overcast,
            Weather::LightRain,
            Weather::HeavyRain,
            Weather::Thunderstorm,
            Weather::Fog,
            Weather::DenseFog,
        ],
        Archetype::Imported => &Weather::ALL,
    }
}

/// Substitutes `{weather}` and `{time}` placeholders in a narrative.
pub fn render_prompt(template: &str, env: &EnvConditions) -> String {
    template
        .replace("{weather}", env.weather.name())
        .replace("{time}", &env.clock_hhmm())
}

/// Draws `n` tasks from one snapshot.
///
/// Deterministic under `(snapshot identity, n-independent draw order, seed)`:
/// the RNG stream is derived from the seed plus the snapshot's event id and
/// time, and each task consumes a fixed number of draws, so the first `n`
/// tasks of a larger request match a smaller request exactly. Weather is
/// uniform over the archetype's allowed subset, the clock uniform over
/// `[0, 24)` hours, and the start pose uniform over the extent at a fixed
/// height above ground.
pub fn sample_tasks(
    snapshot: &Snapshot,
    map: &Heightmap,
    n: usize,
    seed: u64,
    params: &SampleParams,
) -> Result<Vec<TaskSpec>, TaskGenError> {
    if n == 0 {
        return Err(TaskGenError::Range("task count must be at least 1".into()));
    }
    if snapshot.victims.is_empty() || snapshot.clues.is_empty() {
        return Err(TaskGenError::InvalidEvent(
            "snapshot needs at least one victim and one clue".into(),
        ));
    }
    let stream = mix64(
        seed ^ stable_hash(&snapshot.event_id) ^ snapshot.snapshot_time_h.to_bits(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let weathers = allowed_weather(map.archetype());
    let (ex, ey) = map.extent();
    let origin = map.origin();
    let clue_types: Vec<_> = snapshot.clues.iter().map(|c| c.clue_type).collect();

    let mut tasks = Vec::with_capacity(n);
    for i in 0..n {
        let weather = weathers[rng.random_range(0..weathers.len())];
        let clock: f64 = rng.random_range(0.0..24.0);
        let env = EnvConditions::new(weather, clock);
        let x = origin.0 + rng.random_range(0.0..=ex);
        let y = origin.1 + rng.random_range(0.0..=ey);
        let z = map.elevation_at_clamped(x, y) + params.start_agl;
        let start = Point3::new(x, y, z);
        let start_yaw = rng.random_range(0.0..std::f64::consts::TAU);
        let difficulty = difficulty_score(start, &snapshot.victims, &clue_types, &env);
        let task_id = format!(
            "{}_s{}_{:03}",
            snapshot.event_id,
            (snapshot.snapshot_time_h * 10.0).round() as i64,
            i
        );
        tasks.push(TaskSpec {
            schema_version: SCHEMA_VERSION,
            task_id,
            snapshot: snapshot.clone(),
            env,
            start,
            start_yaw,
            prompt: render_prompt(&snapshot.narrative, &env),
            tier: Tier::from_total(difficulty.total),
            difficulty,
        });
    }
    Ok(tasks)
}

pub fn load_task(path: impl AsRef<Path>) -> Result<TaskSpec, TaskGenError> {
    let text = std::fs::read_to_string(path)?;
    let task: TaskSpec = serde_json::from_str(&text)?;
    if task.schema_version != SCHEMA_VERSION {
        return Err(TaskGenError::SchemaVersion { found: task.schema_version });
    }
    Ok(task)
}

pub fn save_task(task: &TaskSpec, path: impl AsRef<Path>) -> Result<(), TaskGenError> {
    let text = serde_json::to_string_pretty(task)?;
    std::fs::write(path, text)?;
    Ok(())
}
