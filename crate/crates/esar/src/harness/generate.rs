//! Benchmark generation: events directory in, task files out.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use crate::taskgen::{discretize_event, load_event, sample_tasks, save_task, SampleParams};
use crate::terrain::Heightmap;

use super::HarnessError;

#[derive(Clone, Debug)]
pub struct GenParams {
    /// Directory of event JSON files.
    pub events_dir: PathBuf,
    /// Time slices per event.
    pub snapshots_per_event: usize,
    /// Sampled tasks per snapshot.
    pub tasks_per_snapshot: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub sample: SampleParams,
}

impl GenParams {
    pub fn new(events_dir: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            events_dir: events_dir.into(),
            snapshots_per_event: 3,
            tasks_per_snapshot: 2,
            seed: 0,
            out_dir: out_dir.into(),
            sample: SampleParams::default(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct GenSummary {
    pub events: usize,
    pub snapshots: usize,
    pub tasks: usize,
    pub task_paths: Vec<PathBuf>,
    pub errors: Vec<String>,
}

/// Expands every event under `events_dir` into snapshots and sampled task
/// files named `<task_id>.json` under `out_dir`. A bad event file is
/// recorded and skipped, never fatal.
pub fn generate_benchmark(p: &GenParams) -> Result<GenSummary, HarnessError> {
    let mut event_paths: Vec<PathBuf> = fs::read_dir(&p.events_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|path| path.extension().is_some_and(|x| x == "json"))
        .collect();
    event_paths.sort();
    if event_paths.is_empty() {
        return Err(HarnessError::Config(format!(
            "no event files under {}",
            p.events_dir.display()
        )));
    }

    fs::create_dir_all(&p.out_dir)?;
    let mut summary = GenSummary::default();
    let mut maps: HashMap<String, Arc<Heightmap>> = HashMap::new();

    for path in event_paths {
        let attempt = (|| -> Result<(), HarnessError> {
            let event = load_event(&path)?;
            let key = event.terrain.cache_key();
            let map = match maps.get(&key) {
                Some(m) => m.clone(),
                None => {
                    let m = Arc::new(event.terrain.build()?);
                    maps.insert(key, m.clone());
                    m
                }
            };
            let snapshots = discretize_event(&event, p.snapshots_per_event, &map)?;
            summary.events += 1;
            summary.snapshots += snapshots.len();
            for snapshot in &snapshots {
                // A snapshot can be unusable on its own (e.g. taken before
                // any clue was dropped); skip it without losing the rest.
                let tasks =
                    match sample_tasks(snapshot, &map, p.tasks_per_snapshot, p.seed, &p.sample) {
                        Ok(t) => t,
                        Err(e) => {
                            summary.errors.push(format!(
                                "{}: snapshot at {} h: {e}",
                                path.display(),
                                snapshot.snapshot_time_h
                            ));
                            continue;
                        }
                    };
                for task in tasks {
                    let out = p.out_dir.join(format!("{}.json", task.task_id));
                    save_task(&task, &out)?;
                    summary.tasks += 1;
                    summary.task_paths.push(out);
                }
            }
            Ok(())
        })();
        if let Err(e) = attempt {
            summary.errors.push(format!("{}: {e}", path.display()));
        }
    }
    Ok(summary)
}
