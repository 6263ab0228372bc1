//! Optional TOML configuration file mirroring the CLI flags.
//!
//! Every table and key is optional; command-line flags always win over file
//! values, which win over built-in defaults.

use std::path::Path;

use serde::Deserialize;

use crate::agents::PolicyParams;
use crate::world::{SensorParams, WorldParams};

use super::HarnessError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub gen: GenSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub score: ScoreSection,
    #[serde(default)]
    pub report: ReportSection,
    #[serde(default)]
    pub validate: ValidateSection,
    #[serde(default)]
    pub sensor: SensorSection,
    #[serde(default)]
    pub policy: PolicySection,
    #[serde(default)]
    pub world: WorldSection,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GenSection {
    pub events: Option<String>,
    pub per_snapshot: Option<usize>,
    pub snapshots: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub start_agl: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub tasks: Option<String>,
    pub policy: Option<String>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<String>,
    pub dt: Option<f64>,
    pub parallelism: Option<usize>,
    pub t_max: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScoreSection {
    pub logs: Option<String>,
    pub tasks: Option<String>,
    pub threshold: Option<f64>,
    pub matcher: Option<String>,
    pub out: Option<String>,
    pub t_max: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportSection {
    pub results: Option<String>,
    pub format: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ValidateSection {
    pub vd: Option<f64>,
    pub vh: Option<f64>,
    pub theta_degrees: Option<f64>,
    pub rs: Option<f64>,
    pub lb: Option<f64>,
    pub lambda: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SensorSection {
    pub detection_radius: Option<f64>,
    pub noise_sigma_per_meter: Option<f64>,
    pub depth_rays: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub bev_resolution: Option<f64>,
    pub target_agl: Option<f64>,
    pub agl_tolerance: Option<f64>,
    pub goal_tolerance_cells: Option<f64>,
    pub replan_interval: Option<u32>,
    pub report_dedup_radius: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WorldSection {
    pub speed: Option<f64>,
    pub yaw_step_degrees: Option<f64>,
    pub collision_margin: Option<f64>,
}

impl FileConfig {
    /// Sensor parameters with file overrides applied to the defaults.
    pub fn sensor_params(&self) -> SensorParams {
        let mut p = SensorParams::default();
        if let Some(v) = self.sensor.detection_radius {
            p.detection_radius = v;
        }
        if let Some(v) = self.sensor.noise_sigma_per_meter {
            p.noise_sigma_per_meter = v;
        }
        if let Some(v) = self.sensor.depth_rays {
            p.depth_ray_count = v;
        }
        p
    }

    pub fn policy_params(&self) -> PolicyParams {
        let mut p = PolicyParams::default();
        if let Some(v) = self.policy.bev_resolution {
            p.bev_resolution = v;
        }
        if let Some(v) = self.policy.target_agl {
            p.target_agl = v;
        }
        if let Some(v) = self.policy.agl_tolerance {
            p.agl_tolerance = v;
        }
        if let Some(v) = self.policy.goal_tolerance_cells {
            p.goal_tolerance_cells = v;
        }
        if let Some(v) = self.policy.replan_interval {
            p.replan_interval = v;
        }
        if let Some(v) = self.policy.report_dedup_radius {
            p.report_dedup_radius = v;
        }
        p
    }

    pub fn world_params(&self) -> WorldParams {
        let mut p = WorldParams::default();
        if let Some(v) = self.world.speed {
            p.speed = v;
        }
        if let Some(v) = self.world.yaw_step_degrees {
            p.yaw_step = v.to_radians();
        }
        if let Some(v) = self.world.collision_margin {
            p.collision_margin = v;
        }
        p
    }
}

/// Loads an explicit config path, or `esar.toml` in the working directory
/// when present, or the all-defaults config.
pub fn load_file_config(path: Option<&Path>) -> Result<FileConfig, HarnessError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", p.display())))?,
        None => match std::fs::read_to_string("esar.toml") {
            Ok(t) => t,
            Err(_) => return Ok(FileConfig::default()),
        },
    };
    toml::from_str(&text).map_err(|e| HarnessError::Config(format!("config: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file_parses_and_overrides_defaults() {
        let text = r#"
            [run]
            tasks = "tasks/*.json"
            policy = "fbe"
            seeds = [1, 2, 3]
            dt = 0.5
            parallelism = 4

            [sensor]
            detection_radius = 80.0

            [policy]
            bev_resolution = 20.0

            [world]
            yaw_step_degrees = 45.0
        "#;
        let cfg: FileConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.run.policy.as_deref(), Some("fbe"));
        assert_eq!(cfg.run.seeds, Some(vec![1, 2, 3]));
        assert_eq!(cfg.sensor_params().detection_radius, 80.0);
        // Untouched fields keep their defaults.
        assert_eq!(cfg.sensor_params().depth_ray_count, 16);
        assert_eq!(cfg.policy_params().bev_resolution, 20.0);
        assert!((cfg.world_params().yaw_step - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = "[run]\nspeling = 1\n";
        assert!(toml::from_str::<FileConfig>(text).is_err());
    }

    #[test]
    fn missing_explicit_path_errors_missing_default_does_not() {
        let err = load_file_config(Some(Path::new("/nonexistent/esar.toml")));
        assert!(err.is_err());
        let dir = tempfile::tempdir().unwrap();
        let prev = std::env::current_dir().unwrap();
        std::env::set_current_dir(dir.path()).unwrap();
        let cfg = load_file_config(None).unwrap();
        std::env::set_current_dir(prev).unwrap();
        assert_eq!(cfg, FileConfig::default());
    }

    #[test]
    fn explicit_path_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "[score]\nthreshold = 35.0\n").unwrap();
        let cfg = load_file_config(Some(&path)).unwrap();
        assert_eq!(cfg.score.threshold, Some(35.0));
    }
}
