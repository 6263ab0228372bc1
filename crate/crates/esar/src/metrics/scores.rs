//! The score formulas: victim success, time discounting, clue discovery, and
//! the composite rescue score.

use serde::{Deserialize, Serialize};

use crate::geom::Point3;
use crate::matcher::CueMatcher;
use crate::taskgen::CluePlacement;
use crate::world::ClueReport;

use super::{hungarian, MetricsError};

/// Weights of the composite rescue score. Defaults: safety 0.1, victim base
/// 0.3, time bonus 0.3, clue discovery 0.3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsWeights {
    pub w_safe: f64,
    pub w_base: f64,
    pub w_time: f64,
    pub w_clue: f64,
}

impl Default for RsWeights {
    fn default() -> Self {
        Self { w_safe: 0.1, w_base: 0.3, w_time: 0.3, w_clue: 0.3 }
    }
}

/// Scoring configuration shared across a suite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Localization threshold E, meters. Predictions count only when closer
    /// than this to their assigned ground truth.
    pub error_threshold: f64,
    /// Overrides the per-task time budget when set.
    pub t_max_override: Option<f64>,
    pub weights: RsWeights,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self { error_threshold: 20.0, t_max_override: None, weights: RsWeights::default() }
    }
}

/// One optimal prediction-to-victim pairing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub pred_index: usize,
    pub gt_index: usize,
    pub distance: f64,
}

/// Victim success outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrOutcome {
    /// Found fraction in `[0, 1]`.
    pub sr: f64,
    pub n_found: usize,
    pub n_total: usize,
    /// The optimal assignment, including pairs beyond the threshold.
    pub pairs: Vec<MatchPair>,
}

/// Fraction of ground-truth victims matched by a prediction strictly closer
/// than `error_threshold` under the optimal (minimum total distance)
/// one-to-one assignment. Surplus predictions are ignored; an empty
/// prediction list scores zero; an empty ground-truth list is an error.
pub fn success_rate(
    preds: &[Point3],
    gts: &[Point3],
    error_threshold: f64,
) -> Result<SrOutcome, MetricsError> {
    if gts.is_empty() {
        return Err(MetricsError::Denominator("no ground-truth victims".into()));
    }
    if !(error_threshold.is_finite() && error_threshold > 0.0) {
        return Err(MetricsError::InvalidInput(format!(
            "error threshold must be positive, got {error_threshold}"
        )));
    }
    let n_total = gts.len();
    if preds.is_empty() {
        return Ok(SrOutcome { sr: 0.0, n_found: 0, n_total, pairs: Vec::new() });
    }
    let cost: Vec<Vec<f64>> = preds
        .iter()
        .map(|p| gts.iter().map(|g| p.distance(g)).collect())
        .collect();
    let pairs: Vec<MatchPair> = hungarian(&cost)?
        .into_iter()
        .map(|(pred_index, gt_index)| MatchPair {
            pred_index,
            gt_index,
            distance: cost[pred_index][gt_index],
        })
        .collect();
    let n_found = pairs.iter().filter(|p| p.distance < error_threshold).count();
    Ok(SrOutcome { sr: n_found as f64 / n_total as f64, n_found, n_total, pairs })
}

/// Unused-time fraction `max(0, 1 - task_time / t_max)`.
pub fn time_credit(task_time: f64, t_max: f64) -> f64 {
    (1.0 - task_time / t_max).max(0.0)
}

/// Success rate discounted by elapsed mission time:
/// `max(0, sr * (1 - task_time / t_max))`.
pub fn time_discounted_success(sr: f64, task_time: f64, t_max: f64) -> f64 {
    (sr * (1.0 - task_time / t_max)).max(0.0)
}

/// Clue discovery outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdsOutcome {
    /// `0.5 * c_loc / c_total + 0.5 * c_exact / c_total`.
    pub cds: f64,
    /// Ground-truth clues with a report strictly within the threshold.
    pub c_loc: usize,
    /// Localized clues whose report label also matches semantically.
    pub c_exact: usize,
    pub c_total: usize,
    /// `c_exact / c_total`: the exact-recovery recall.
    pub crr: f64,
    /// `(report index, gt index, distance)` of the spatial pairing.
    pub localized_pairs: Vec<(usize, usize, f64)>,
    /// True when any semantic decision came from the fallback matcher.
    pub fallback: bool,
}

/// Two-stage clue discovery score.
///
/// Stage one pairs reports to ground-truth clues greedily by ascending
/// distance, one-to-one, keeping only pairs strictly closer than
/// `error_threshold`; the pair count is `c_loc`. Stage two asks the matcher
/// whether each localized pair's report label names the ground-truth type;
/// confirmed pairs count toward `c_exact`. Matcher calls are batched per
/// distinct `(label, type)` combination, so each ground-truth instance is
/// judged exactly once.
pub fn clue_discovery(
    reports: &[ClueReport],
    gt_clues: &[CluePlacement],
    error_threshold: f64,
    matcher: &dyn CueMatcher,
) -> Result<CdsOutcome, MetricsError> {
    if gt_clues.is_empty() {
        return Err(MetricsError::Denominator("no ground-truth clues".into()));
    }
    let c_total = gt_clues.len();

    // Candidate pairs within threshold, nearest first; ties resolve by
    // report then clue index so the pairing is deterministic.
    let mut candidates: Vec<(usize, usize, f64)> = Vec::new();
    for (r, report) in reports.iter().enumerate() {
        for (g, clue) in gt_clues.iter().enumerate() {
            let d = report.position.distance(&clue.position);
            if d < error_threshold {
                candidates.push((r, g, d));
            }
        }
    }
    candidates.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));

    let mut report_used = vec![false; reports.len()];
    let mut clue_used = vec![false; c_total];
    let mut localized_pairs: Vec<(usize, usize, f64)> = Vec::new();
    for (r, g, d) in candidates {
        if !report_used[r] && !clue_used[g] {
            report_used[r] = true;
            clue_used[g] = true;
            localized_pairs.push((r, g, d));
        }
    }
    let c_loc = localized_pairs.len();

    // Semantic stage: one matcher call per distinct (label, type) combo.
    let mut combos: Vec<(String, String)> = localized_pairs
        .iter()
        .map(|&(r, g, _)| {
            (
                reports[r].label.trim().to_lowercase(),
                gt_clues[g].clue_type.canonical_name().to_string(),
            )
        })
        .collect();
    combos.sort();
    combos.dedup();
    let mut fallback = false;
    let mut confirmed: Vec<(String, String)> = Vec::new();
    for (label, gt_name) in combos {
        let result = matcher.match_cues(&[label.clone()], &[gt_name.clone()]);
        fallback |= result.fallback;
        if result.matched_gt_count >= 1 {
            confirmed.push((label, gt_name));
        }
    }
    let c_exact = localized_pairs
        .iter()
        .filter(|&&(r, g, _)| {
            let key = (
                reports[r].label.trim().to_lowercase(),
                gt_clues[g].clue_type.canonical_name().to_string(),
            );
            confirmed.contains(&key)
        })
        .count();

    let cds = 0.5 * c_loc as f64 / c_total as f64 + 0.5 * c_exact as f64 / c_total as f64;
    Ok(CdsOutcome {
        cds,
        c_loc,
        c_exact,
        c_total,
        crr: c_exact as f64 / c_total as f64,
        localized_pairs,
        fallback,
    })
}

/// Composite rescue score:
/// `w_safe * safe + sr * (w_base + w_time * time_credit) + w_clue * cds`.
pub fn rescue_score(sr: f64, time_credit: f64, safe: bool, cds: f64, w: &RsWeights) -> f64 {
    let i_safe = if safe { 1.0 } else { 0.0 };
    w.w_safe * i_safe + sr * (w.w_base + w.w_time * time_credit) + w.w_clue * cds
}
