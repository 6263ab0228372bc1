//! Greedy report bookkeeping shared by every baseline policy.
//!
//! First sighting of each distinct clue becomes a report; repeat sightings
//! within the dedup radius are suppressed. Victim sightings queue up and
//! drain one `ReportVictim` action per step.

use std::collections::VecDeque;

use crate::geom::Point3;
use crate::world::{ActionCommand, ClueReport, ObservationBundle};

#[derive(Clone, Debug)]
pub struct Reporter {
    dedup_radius: f64,
    seen_clues: Vec<(String, Point3)>,
    seen_victims: Vec<Point3>,
    pending_victims: VecDeque<Point3>,
    step: u64,
}

impl Reporter {
    pub fn new(dedup_radius: f64) -> Self {
        Self {
            dedup_radius,
            seen_clues: Vec::new(),
            seen_victims: Vec::new(),
            pending_victims: VecDeque::new(),
            step: 0,
        }
    }

    /// Ingests one observation: returns clue reports for newly seen clues
    /// and queues newly seen victims.
    pub fn observe(&mut self, obs: &ObservationBundle) -> Vec<ClueReport> {
        let mut reports = Vec::new();
        for det in &obs.detections {
            if det.label == "victim" {
                let near_known = self
                    .seen_victims
                    .iter()
                    .chain(self.pending_victims.iter())
                    .any(|p| p.distance(&det.position) <= self.dedup_radius);
                if !near_known {
                    self.pending_victims.push_back(det.position);
                }
                continue;
            }
            let label = det.label.to_lowercase();
            let near_known = self
                .seen_clues
                .iter()
                .any(|(l, p)| *l == label && p.distance(&det.position) <= self.dedup_radius);
            if !near_known {
                self.seen_clues.push((label.clone(), det.position));
                reports.push(ClueReport { label, position: det.position, step: self.step });
            }
        }
        reports
    }

    /// Pops the next queued victim as a report action, if any.
    pub fn next_victim_action(&mut self) -> Option<ActionCommand> {
        let position = self.pending_victims.pop_front()?;
        self.seen_victims.push(position);
        Some(ActionCommand::ReportVictim { label: "victim".into(), position })
    }

    pub fn has_pending_victim(&self) -> bool {
        !self.pending_victims.is_empty()
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn advance_step(&mut self) {
        self.step += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{Detection, DepthRay, EnvConditions, UavState, Weather};

    fn obs_with(detections: Vec<Detection>) -> ObservationBundle {
        ObservationBundle {
            pose: UavState {
                position: Point3::new(50.0, 50.0, 30.0),
                yaw: 0.0,
                alive: true,
                distance_flown: 0.0,
            },
            detections,
            depth_rays: vec![DepthRay { bearing: 0.0, range: 100.0 }],
            down_range: 30.0,
            depth_max_range: 100.0,
            env: EnvConditions::new(Weather::Sunny, 12.0),
            elapsed: 0.0,
        }
    }

    fn det(label: &str, x: f64, y: f64) -> Detection {
        Detection { label: label.into(), position: Point3::new(x, y, 1.0), distance: 30.0 }
    }

    #[test]
    fn first_sighting_reports_lowercased_repeat_is_silent() {
        let mut r = Reporter::new(10.0);
        let first = r.observe(&obs_with(vec![det("Tent", 60.0, 50.0)]));
        assert_eq!(first.len(), 1);
        assert_eq!(first[0].label, "tent");
        r.advance_step();
        // Same tent, slightly different noisy position.
        let repeat = r.observe(&obs_with(vec![det("Tent", 61.0, 50.5)]));
        assert!(repeat.is_empty());
    }

    #[test]
    fn distinct_instances_of_one_type_both_report() {
        let mut r = Reporter::new(10.0);
        let reports = r.observe(&obs_with(vec![
            det("Campfire", 60.0, 50.0),
            det("Campfire", 90.0, 50.0),
        ]));
        assert_eq!(reports.len(), 2);
    }

    #[test]
    fn same_spot_different_labels_both_report() {
        let mut r = Reporter::new(10.0);
        let reports = r.observe(&obs_with(vec![
            det("Tent", 60.0, 50.0),
            det("Backpack", 61.0, 50.0),
        ]));
        assert_eq!(reports.len(), 2);
    }

    #[test]
    fn victims_queue_and_drain_one_per_call() {
        let mut r = Reporter::new(10.0);
        let reports = r.observe(&obs_with(vec![
            det("victim", 60.0, 50.0),
            det("victim", 90.0, 50.0),
        ]));
        assert!(reports.is_empty(), "victims are actions, not clue reports");
        let a1 = r.next_victim_action().unwrap();
        match &a1 {
            ActionCommand::ReportVictim { position, .. } => {
                assert_eq!(position.x, 60.0);
            }
            other => panic!("unexpected action {other:?}"),
        }
        assert!(r.has_pending_victim());
        assert!(r.next_victim_action().is_some());
        assert!(r.next_victim_action().is_none());
    }

    #[test]
    fn reported_victims_are_not_requeued() {
        let mut r = Reporter::new(10.0);
        r.observe(&obs_with(vec![det("victim", 60.0, 50.0)]));
        r.next_victim_action().unwrap();
        r.observe(&obs_with(vec![det("victim", 60.5, 50.0)]));
        assert!(!r.has_pending_victim());
    }

    #[test]
    fn report_step_tracks_advances() {
        let mut r = Reporter::new(10.0);
        r.advance_step();
        r.advance_step();
        let reports = r.observe(&obs_with(vec![det("Flare", 70.0, 50.0)]));
        assert_eq!(reports[0].step, 2);
    }
}
