//! Suite execution: many (task, seed) episodes, scored and persisted.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::PolicyKind;
use crate::matcher::{CueMatcher, LlmMatcher, MatcherChoice, SynonymMatcher};
use crate::metrics::{score_episode, MetricConfig, MetricsResult};
use crate::taskgen::{load_task, TaskSpec, Tier};
use crate::terrain::Heightmap;

use super::episode_log::EpisodeLog;
use super::runner::{run_episode_on, RunConfig};
use super::HarnessError;

/// File name of the canonical sorted results inside an output directory.
pub const RESULTS_FILE: &str = "results.json";

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Glob matching task JSON files.
    pub tasks: String,
    pub policy: PolicyKind,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    pub parallelism: usize,
    pub run: RunConfig,
    pub metrics: MetricConfig,
    pub matcher: MatcherChoice,
    /// Persist one log file per episode under `out_dir/logs`.
    pub write_logs: bool,
}

impl SuiteConfig {
    pub fn new(tasks: impl Into<String>, policy: PolicyKind, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            tasks: tasks.into(),
            policy,
            seeds: vec![0],
            out_dir: out_dir.into(),
            parallelism: 1,
            run: RunConfig::default(),
            metrics: MetricConfig::default(),
            matcher: MatcherChoice::Synonyms,
            write_logs: true,
        }
    }
}

/// One scored episode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub task_id: String,
    pub policy: String,
    pub seed: u64,
    pub tier: Tier,
    pub metrics: MetricsResult,
}

/// Scored records plus isolated per-episode failures.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteResults {
    pub records: Vec<EpisodeRecord>,
    pub errors: Vec<String>,
}

/// Loads every task matching the glob, isolating per-file failures.
/// Paths are visited in sorted order.
pub fn load_tasks(pattern: &str) -> Result<(Vec<TaskSpec>, Vec<String>), HarnessError> {
    let paths = glob::glob(pattern)
        .map_err(|e| HarnessError::Config(format!("bad task glob '{pattern}': {e}")))?;
    let mut tasks = Vec::new();
    let mut errors = Vec::new();
    let mut sorted: Vec<PathBuf> = Vec::new();
    for entry in paths {
        match entry {
            Ok(p) => sorted.push(p),
            Err(e) => errors.push(format!("glob: {e}")),
        }
    }
    sorted.sort();
    for path in sorted {
        match load_task(&path) {
            Ok(t) => tasks.push(t),
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    Ok((tasks, errors))
}

pub fn build_matcher(choice: MatcherChoice) -> Result<Box<dyn CueMatcher>, HarnessError> {
    match choice {
        MatcherChoice::Synonyms => Ok(Box::new(SynonymMatcher::default())),
        MatcherChoice::Llm => Ok(Box::new(LlmMatcher::from_env()?)),
    }
}

/// Builds each distinct terrain once, keyed by the task's terrain reference.
fn build_map_cache(
    tasks: &[TaskSpec],
    errors: &mut Vec<String>,
) -> HashMap<String, Arc<Heightmap>> {
    let mut cache = HashMap::new();
    for task in tasks {
        let key = task.snapshot.terrain.cache_key();
        if cache.contains_key(&key) {
            continue;
        }
        match task.snapshot.terrain.build() {
            Ok(map) => {
                cache.insert(key, Arc::new(map));
            }
            Err(e) => errors.push(format!("terrain for {}: {e}", task.task_id)),
        }
    }
    cache
}

/// Runs every (task, seed) episode, scores it, and persists everything
/// under `out_dir`: per-episode logs, an incremental `episodes.jsonl`, and
/// the sorted `results.json`. One failing episode never aborts the suite.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteResults, HarnessError> {
    if cfg.seeds.is_empty() {
        return Err(HarnessError::Config("seed list is empty".into()));
    }
    if cfg.parallelism == 0 {
        return Err(HarnessError::Config("parallelism must be at least 1".into()));
    }
    let (tasks, mut errors) = load_tasks(&cfg.tasks)?;
    if tasks.is_empty() {
        return Err(HarnessError::Config(format!(
            "no tasks matched '{}'",
            cfg.tasks
        )));
    }
    let matcher = build_matcher(cfg.matcher)?;

    fs::create_dir_all(&cfg.out_dir)?;
    let logs_dir = cfg.out_dir.join("logs");
    if cfg.write_logs {
        fs::create_dir_all(&logs_dir)?;
    }

    let cache = build_map_cache(&tasks, &mut errors);
    let mut jobs: Vec<(&TaskSpec, u64)> = Vec::new();
    for task in &tasks {
        if !cache.contains_key(&task.snapshot.terrain.cache_key()) {
            continue;
        }
        for &seed in &cfg.seeds {
            jobs.push((task, seed));
        }
    }

    let sink = Mutex::new(File::create(cfg.out_dir.join("episodes.jsonl"))?);
    let matcher_ref: &dyn CueMatcher = matcher.as_ref();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let outcomes: Vec<Result<EpisodeRecord, String>> = pool.install(|| {
        jobs.par_iter()
            .map(|(task, seed)| {
                let map = cache
                    .get(&task.snapshot.terrain.cache_key())
                    .expect("jobs only reference cached maps")
                    .clone();
                episode_job(map, task, *seed, cfg, matcher_ref, &logs_dir, &sink)
                    .map_err(|e| format!("{}/{} seed {seed}: {e}", task.task_id, cfg.policy.name()))
            })
            .collect()
    });

    let mut records = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => errors.push(e),
        }
    }
    records.sort_by(|a, b| (&a.task_id, a.seed).cmp(&(&b.task_id, b.seed)));
    errors.sort();

    let results = SuiteResults { records, errors };
    write_results(&results, &cfg.out_dir)?;
    Ok(results)
}

fn episode_job(
    map: Arc<Heightmap>,
    task: &TaskSpec,
    seed: u64,
    cfg: &SuiteConfig,
    matcher: &dyn CueMatcher,
    logs_dir: &Path,
    sink: &Mutex<File>,
) -> Result<EpisodeRecord, HarnessError> {
    let log = run_episode_on(map, task, cfg.policy, seed, &cfg.run)?;
    if cfg.write_logs {
        log.save(logs_dir.join(log.file_name()))?;
    }
    let metrics = score_episode(&log, task, &cfg.metrics, matcher)?;
    let record = EpisodeRecord {
        task_id: task.task_id.clone(),
        policy: log.policy.clone(),
        seed,
        tier: task.tier,
        metrics,
    };
    let line = serde_json::to_string(&record)
        .map_err(|e| HarnessError::Log(format!("record serialization: {e}")))?;
    {
        let mut file = sink.lock().expect("sink lock");
        writeln!(file, "{line}")?;
        file.flush()?;
    }
    Ok(record)
}

/// Writes the canonical sorted results file.
pub fn write_results(results: &SuiteResults, out_dir: &Path) -> Result<PathBuf, HarnessError> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(RESULTS_FILE);
    let text = serde_json::to_string_pretty(results)
        .map_err(|e| HarnessError::Log(format!("results serialization: {e}")))?;
    fs::write(&path, text)?;
    Ok(path)
}

/// Loads a results file written by `run_suite` or `score_logs`.
pub fn load_results(out_dir: &Path) -> Result<SuiteResults, HarnessError> {
    let path = out_dir.join(RESULTS_FILE);
    let text = fs::read_to_string(&path)?;
    serde_json::from_str(&text)
        .map_err(|e| HarnessError::Log(format!("{}: {e}", path.display())))
}

/// Re-scores persisted logs against their tasks without re-simulating.
/// Logs whose task id has no matching task are reported as errors.
pub fn score_logs(
    logs_dir: &Path,
    tasks_glob: &str,
    metrics: &MetricConfig,
    matcher_choice: MatcherChoice,
) -> Result<SuiteResults, HarnessError> {
    let (tasks, mut errors) = load_tasks(tasks_glob)?;
    let by_id: HashMap<&str, &TaskSpec> =
        tasks.iter().map(|t| (t.task_id.as_str(), t)).collect();
    let matcher = build_matcher(matcher_choice)?;

    let mut log_paths: Vec<PathBuf> = fs::read_dir(logs_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "log"))
        .collect();
    log_paths.sort();
    if log_paths.is_empty() {
        return Err(HarnessError::Config(format!(
            "no .log files under {}",
            logs_dir.display()
        )));
    }

    let mut records = Vec::new();
    for path in log_paths {
        let attempt = (|| -> Result<EpisodeRecord, HarnessError> {
            let log = EpisodeLog::load(&path)?;
            let task = by_id.get(log.task_id.as_str()).ok_or_else(|| {
                HarnessError::Config(format!("no task named '{}' in the task set", log.task_id))
            })?;
            let metrics = score_episode(&log, task, metrics, matcher.as_ref())?;
            Ok(EpisodeRecord {
                task_id: log.task_id.clone(),
                policy: log.policy.clone(),
                seed: log.seed,
                tier: task.tier,
                metrics,
            })
        })();
        match attempt {
            Ok(r) => records.push(r),
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    records.sort_by(|a, b| (&a.task_id, a.seed).cmp(&(&b.task_id, b.seed)));
    errors.sort();
    Ok(SuiteResults { records, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point3;
    use crate::taskgen::{save_task, CluePlacement, Snapshot, TerrainRef, SCHEMA_VERSION};
    use crate::terrain::Archetype;
    use crate::world::{ClueType, EnvConditions, Weather};

    fn small_task(id: &str, terrain_seed: u64) -> TaskSpec {
        let victims = vec![Point3::new(60.0, 80.0, 1.0)];
        let clues = vec![CluePlacement {
            clue_type: ClueType::Backpack,
            position: Point3::new(90.0, 80.0, 1.0),
        }];
        let env = EnvConditions::new(Weather::Sunny, 12.0);
        let start = Point3::new(100.0, 100.0, 1000.0);
        let clue_types: Vec<_> = clues.iter().map(|c| c.clue_type).collect();
        let difficulty = crate::taskgen::difficulty_score(start, &victims, &clue_types, &env);
        TaskSpec {
            schema_version: SCHEMA_VERSION,
            task_id: id.into(),
            snapshot: Snapshot {
                event_id: "suitefix".into(),
                snapshot_time_h: 1.0,
                victims,
                clues,
                terrain: TerrainRef::Generated {
                    archetype: Archetype::Desert,
                    seed: terrain_seed,
                    side_length: 200.0,
                    cell_size: 10.0,
                },
                narrative: "suite fixture".into(),
            },
            env,
            start,
            start_yaw: 0.0,
            prompt: "sweep".into(),
            tier: crate::taskgen::Tier::from_total(difficulty.total),
            difficulty,
        }
    }

    fn write_fixture_tasks(dir: &Path) -> Vec<TaskSpec> {
        // Desert terrain sits near 1050 m elevation; restate start altitude
        // so the spawn clears the ground.
        let mut tasks = vec![small_task("suitefix_s10_000", 4), small_task("suitefix_s10_001", 4)];
        for t in &mut tasks {
            let map = t.snapshot.terrain.build().unwrap();
            let ground = map.elevation_at_clamped(t.start.x, t.start.y);
            t.start.z = ground + 30.0;
            for v in &mut t.snapshot.victims {
                v.z = map.elevation_at_clamped(v.x, v.y) + 1.0;
            }
            for c in &mut t.snapshot.clues {
                c.position.z = map.elevation_at_clamped(c.position.x, c.position.y) + 1.0;
            }
            save_task(t, dir.join(format!("{}.json", t.task_id))).unwrap();
        }
        tasks
    }

    fn suite_config(tasks_dir: &Path, out: &Path) -> SuiteConfig {
        let mut cfg = SuiteConfig::new(
            format!("{}/*.json", tasks_dir.display()),
            PolicyKind::Random,
            out,
        );
        cfg.seeds = vec![1, 2];
        cfg.run.world.t_max = Some(30.0);
        cfg
    }

    #[test]
    fn tasks_times_seeds_episodes_with_logs_and_records() {
        let dir = tempfile::tempdir().unwrap();
        let tasks_dir = dir.path().join("tasks");
        fs::create_dir_all(&tasks_dir).unwrap();
        write_fixture_tasks(&tasks_dir);
        let out = dir.path().join("out");
        let results = run_suite(&suite_config(&tasks_dir, &out)).unwrap();

        assert_eq!(results.records.len(), 4, "2 tasks x 2 seeds");
        assert!(results.errors.is_empty(), "errors: {:?}", results.errors);
        let logs: Vec<_> = fs::read_dir(out.join("logs")).unwrap().collect();
        assert_eq!(logs.len(), 4);
        assert!(out.join("episodes.jsonl").exists());
        assert!(out.join(RESULTS_FILE).exists());
        // Sorted by (task_id, seed).
        let keys: Vec<_> =
            results.records.iter().map(|r| (r.task_id.clone(), r.seed)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn corrupted_task_file_is_isolated() {
        let dir = tempfile::tempdir().unwrap();
        let tasks_dir = dir.path().join("tasks");
        fs::create_dir_all(&tasks_dir).unwrap();
        write_fixture_tasks(&tasks_dir);
        fs::write(tasks_dir.join("broken.json"), "{ not json").unwrap();
        let out = dir.path().join("out");
        let results = run_suite(&suite_config(&tasks_dir, &out)).unwrap();
        assert_eq!(results.records.len(), 4);
        assert_eq!(results.errors.len(), 1);
        assert!(results.errors[0].contains("broken.json"));
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let dir = tempfile::tempdir().unwrap();
        let tasks_dir = dir.path().join("tasks");
        fs::create_dir_all(&tasks_dir).unwrap();
        write_fixture_tasks(&tasks_dir);

        let mut one = suite_config(&tasks_dir, &dir.path().join("p1"));
        one.parallelism = 1;
        let mut eight = suite_config(&tasks_dir, &dir.path().join("p8"));
        eight.parallelism = 8;
        let a = run_suite(&one).unwrap();
        let b = run_suite(&eight).unwrap();
        assert_eq!(a, b);
        let ra = fs::read_to_string(dir.path().join("p1").join(RESULTS_FILE)).unwrap();
        let rb = fs::read_to_string(dir.path().join("p8").join(RESULTS_FILE)).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn rescoring_saved_logs_reproduces_the_records() {
        let dir = tempfile::tempdir().unwrap();
        let tasks_dir = dir.path().join("tasks");
        fs::create_dir_all(&tasks_dir).unwrap();
        write_fixture_tasks(&tasks_dir);
        let out = dir.path().join("out");
        let cfg = suite_config(&tasks_dir, &out);
        let live = run_suite(&cfg).unwrap();
        let rescored = score_logs(
            &out.join("logs"),
            &cfg.tasks,
            &cfg.metrics,
            MatcherChoice::Synonyms,
        )
        .unwrap();
        assert_eq!(live.records, rescored.records);
    }

    #[test]
    fn empty_seeds_and_empty_globs_are_config_errors() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = suite_config(dir.path(), &dir.path().join("out"));
        cfg.seeds.clear();
        assert!(matches!(run_suite(&cfg), Err(HarnessError::Config(_))));

        let mut cfg = suite_config(dir.path(), &dir.path().join("out"));
        cfg.tasks = format!("{}/nothing-*.json", dir.path().display());
        assert!(matches!(run_suite(&cfg), Err(HarnessError::Config(_))));
    }
}
