//! Scores one finished episode against its task.

use serde::{Deserialize, Serialize};

use crate::harness::EpisodeLog;
use crate::matcher::CueMatcher;
use crate::taskgen::TaskSpec;
use crate::world::Termination;

use super::scores::{clue_discovery, rescue_score, success_rate, time_credit, MetricConfig};
use super::MetricsError;

/// Full metric set for one episode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsResult {
    pub sr: f64,
    pub tsr: f64,
    pub cds: f64,
    pub rs: f64,
    pub crr: f64,
    pub n_found: usize,
    pub n_total: usize,
    pub c_loc: usize,
    pub c_exact: usize,
    pub c_total: usize,
    /// Remaining-time credit, `max(0, 1 - task_time / t_max)`.
    pub e_t: f64,
    /// 1 when the mission ended without a crash, else 0.
    pub i_safe: u8,
    pub crash: bool,
    pub task_time: f64,
    pub t_max: f64,
    pub safe_flight_distance: f64,
    /// True when the semantic matcher fell back to the offline table.
    pub matcher_fallback: bool,
}

/// Computes every metric for `log` against the ground truth in `task`.
///
/// The time budget comes from the log unless the config overrides it, so a
/// suite can re-score persisted logs under a different budget without
/// re-simulating.
pub fn score_episode(
    log: &EpisodeLog,
    task: &TaskSpec,
    cfg: &MetricConfig,
    matcher: &dyn CueMatcher,
) -> Result<MetricsResult, MetricsError> {
    let t_max = cfg.t_max_override.unwrap_or(log.t_max);
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(MetricsError::InvalidInput(format!(
            "time budget must be positive, got {t_max}"
        )));
    }
    let w = &cfg.weights;
    let weight_sum = w.w_safe + w.w_base + w.w_time + w.w_clue;
    if (weight_sum - 1.0).abs() > 1e-9
        || [w.w_safe, w.w_base, w.w_time, w.w_clue].iter().any(|x| *x <= 0.0)
    {
        return Err(MetricsError::InvalidInput(
            "rescue-score weights must be positive and sum to 1".into(),
        ));
    }

    let preds = log.victim_predictions();
    let sr_out = success_rate(&preds, &task.snapshot.victims, cfg.error_threshold)?;
    let e_t = time_credit(log.task_time, t_max);
    let tsr = (sr_out.sr * e_t).max(0.0);

    let reports = log.clue_reports();
    let cds_out = clue_discovery(&reports, &task.snapshot.clues, cfg.error_threshold, matcher)?;

    let crash = log.outcome == Termination::Crashed;
    let safe = matches!(log.outcome, Termination::Completed | Termination::TimedOut);
    let rs = rescue_score(sr_out.sr, e_t, safe, cds_out.cds, w);

    Ok(MetricsResult {
        sr: sr_out.sr,
        tsr,
        cds: cds_out.cds,
        rs,
        crr: cds_out.crr,
        n_found: sr_out.n_found,
        n_total: sr_out.n_total,
        c_loc: cds_out.c_loc,
        c_exact: cds_out.c_exact,
        c_total: cds_out.c_total,
        e_t,
        i_safe: safe as u8,
        crash,
        task_time: log.task_time,
        t_max,
        safe_flight_distance: log.safe_flight_distance,
        matcher_fallback: cds_out.fallback,
    })
}
