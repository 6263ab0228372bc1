//! Episode logs: the durable record of one mission.
//!
//! A log is line-delimited JSON: one meta line, one line per step, one end
//! line. Scoring consumes logs without re-running the simulation, so the
//! meta line carries everything scoring needs (task id, policy, seed, dt,
//! time budget).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geom::Point3;
use crate::world::{ActionCommand, ClueReport, Termination};

use super::HarnessError;

/// UAV pose at the moment the step's action was chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Point3,
    pub yaw: f64,
}

/// One simulation step: the pose and clock when the action was chosen, the
/// action taken, and any clue reports emitted alongside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u64,
    pub elapsed: f64,
    pub pose: Pose,
    pub action: ActionCommand,
    pub reports: Vec<ClueReport>,
}

/// Full record of one mission.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub task_id: String,
    pub policy: String,
    pub seed: u64,
    pub dt: f64,
    pub t_max: f64,
    pub steps: Vec<StepRecord>,
    pub outcome: Termination,
    /// Total elapsed mission time in seconds.
    pub task_time: f64,
    /// Distance flown excluding any final crashing displacement.
    pub safe_flight_distance: f64,
}

/// Wire format: one tagged line per record.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum LogLine {
    Meta { task_id: String, policy: String, seed: u64, dt: f64, t_max: f64 },
    Step(StepRecord),
    End { outcome: Termination, task_time: f64, safe_flight_distance: f64 },
}

impl EpisodeLog {
    /// Victim coordinate predictions, in report order.
    pub fn victim_predictions(&self) -> Vec<Point3> {
        self.steps
            .iter()
            .filter_map(|s| match &s.action {
                ActionCommand::ReportVictim { position, .. } => Some(*position),
                _ => None,
            })
            .collect()
    }

    /// All clue reports across the episode, in emission order.
    pub fn clue_reports(&self) -> Vec<ClueReport> {
        self.steps.iter().flat_map(|s| s.reports.iter().cloned()).collect()
    }

    /// Canonical log file name for this episode.
    pub fn file_name(&self) -> String {
        format!("{}_{}_{}.log", self.task_id, self.policy, self.seed)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let meta = LogLine::Meta {
            task_id: self.task_id.clone(),
            policy: self.policy.clone(),
            seed: self.seed,
            dt: self.dt,
            t_max: self.t_max,
        };
        out.push_str(&serde_json::to_string(&meta).expect("log line serializes"));
        out.push('\n');
        for step in &self.steps {
            let line = LogLine::Step(step.clone());
            out.push_str(&serde_json::to_string(&line).expect("log line serializes"));
            out.push('\n');
        }
        let end = LogLine::End {
            outcome: self.outcome,
            task_time: self.task_time,
            safe_flight_distance: self.safe_flight_distance,
        };
        out.push_str(&serde_json::to_string(&end).expect("log line serializes"));
        out.push('\n');
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), HarnessError> {
        let mut w = BufWriter::new(File::create(path.as_ref())?);
        w.write_all(self.to_jsonl().as_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let reader = BufReader::new(File::open(path)?);
        let mut meta: Option<(String, String, u64, f64, f64)> = None;
        let mut steps = Vec::new();
        let mut end: Option<(Termination, f64, f64)> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: LogLine = serde_json::from_str(&line).map_err(|e| {
                HarnessError::Log(format!("{}:{}: {e}", path.display(), idx + 1))
            })?;
            match parsed {
                LogLine::Meta { task_id, policy, seed, dt, t_max } => {
                    if meta.is_some() {
                        return Err(HarnessError::Log(format!(
                            "{}: duplicate meta line",
                            path.display()
                        )));
                    }
                    meta = Some((task_id, policy, seed, dt, t_max));
                }
                LogLine::Step(s) => {
                    if end.is_some() {
                        return Err(HarnessError::Log(format!(
                            "{}: step after end line",
                            path.display()
                        )));
                    }
                    steps.push(s);
                }
                LogLine::End { outcome, task_time, safe_flight_distance } => {
                    end = Some((outcome, task_time, safe_flight_distance));
                }
            }
        }
        let (task_id, policy, seed, dt, t_max) = meta
            .ok_or_else(|| HarnessError::Log(format!("{}: missing meta line", path.display())))?;
        let (outcome, task_time, safe_flight_distance) = end
            .ok_or_else(|| HarnessError::Log(format!("{}: missing end line", path.display())))?;
        let log = Self {
            task_id,
            policy,
            seed,
            dt,
            t_max,
            steps,
            outcome,
            task_time,
            safe_flight_distance,
        };
        for pair in log.steps.windows(2) {
            if pair[1].elapsed < pair[0].elapsed {
                return Err(HarnessError::Log(format!(
                    "{}: steps out of order at step {}",
                    path.display(),
                    pair[1].step
                )));
            }
        }
        Ok(log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_log() -> EpisodeLog {
        EpisodeLog {
            task_id: "ev_s15_000".into(),
            policy: "fbe".into(),
            seed: 7,
            dt: 1.0,
            t_max: 400.0,
            steps: vec![
                StepRecord {
                    step: 0,
                    elapsed: 0.0,
                    pose: Pose { position: Point3::new(10.0, 20.0, 30.0), yaw: 0.25 },
                    action: ActionCommand::Forward,
                    reports: vec![ClueReport {
                        label: "tent".into(),
                        position: Point3::new(11.0, 21.0, 1.0),
                        step: 0,
                    }],
                },
                StepRecord {
                    step: 1,
                    elapsed: 1.0,
                    pose: Pose { position: Point3::new(15.0, 20.0, 30.0), yaw: 0.25 },
                    action: ActionCommand::ReportVictim {
                        label: "victim".into(),
                        position: Point3::new(40.0, 41.0, 2.0),
                    },
                    reports: vec![],
                },
                StepRecord {
                    step: 2,
                    elapsed: 2.0,
                    pose: Pose { position: Point3::new(15.0, 20.0, 30.0), yaw: 0.25 },
                    action: ActionCommand::DeclareDone,
                    reports: vec![],
                },
            ],
            outcome: Termination::Completed,
            task_time: 3.0,
            safe_flight_distance: 5.0,
        }
    }

    #[test]
    fn round_trips_through_jsonl_bit_identically() {
        let log = sample_log();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(log.file_name());
        log.save(&path).unwrap();
        let loaded = EpisodeLog::load(&path).unwrap();
        assert_eq!(loaded, log);
        // Serializing the reload reproduces the original bytes.
        assert_eq!(loaded.to_jsonl(), log.to_jsonl());
    }

    #[test]
    fn extracts_predictions_and_reports() {
        let log = sample_log();
        assert_eq!(log.victim_predictions(), vec![Point3::new(40.0, 41.0, 2.0)]);
        let reports = log.clue_reports();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].label, "tent");
    }

    #[test]
    fn file_name_is_task_policy_seed() {
        assert_eq!(sample_log().file_name(), "ev_s15_000_fbe_7.log");
    }

    #[test]
    fn float_fidelity_survives_the_text_format() {
        let mut log = sample_log();
        log.steps[0].pose.yaw = 2.718281828459045_f64.sin().atan();
        log.task_time = 0.1 + 0.2;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("float.log");
        log.save(&path).unwrap();
        let loaded = EpisodeLog::load(&path).unwrap();
        assert_eq!(loaded.steps[0].pose.yaw.to_bits(), log.steps[0].pose.yaw.to_bits());
        assert_eq!(loaded.task_time.to_bits(), log.task_time.to_bits());
    }

    #[test]
    fn missing_meta_or_end_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let no_meta = dir.path().join("a.log");
        std::fs::write(
            &no_meta,
            "{\"type\":\"end\",\"outcome\":\"Completed\",\"task_time\":1.0,\"safe_flight_distance\":0.0}\n",
        )
        .unwrap();
        assert!(EpisodeLog::load(&no_meta).is_err());

        let no_end = dir.path().join("b.log");
        std::fs::write(
            &no_end,
            "{\"type\":\"meta\",\"task_id\":\"t\",\"policy\":\"p\",\"seed\":1,\"dt\":1.0,\"t_max\":10.0}\n",
        )
        .unwrap();
        assert!(EpisodeLog::load(&no_end).is_err());
    }

    #[test]
    fn garbled_line_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.log");
        std::fs::write(&path, "not json\n").unwrap();
        let err = EpisodeLog::load(&path).unwrap_err();
        assert!(matches!(err, HarnessError::Log(_)));
    }
}
