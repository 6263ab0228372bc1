//! The action vocabulary a policy can emit each step.

use serde::{Deserialize, Serialize};

use crate::geom::Point3;

/// One command per simulation step. Motion verbs move or rotate the UAV;
/// report verbs carry their payload so a report can never be emitted without
/// a label and position; `DeclareDone` ends the episode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verb")]
pub enum ActionCommand {
    Forward,
    Backward,
    StrafeLeft,
    StrafeRight,
    Ascend,
    Descend,
    YawLeft,
    YawRight,
    Hover,
    ReportClue { label: String, position: Point3 },
    ReportVictim { label: String, position: Point3 },
    DeclareDone,
}

/// A clue sighting communicated alongside an action. `step` records when the
/// report was made.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClueReport {
    pub label: String,
    pub position: Point3,
    pub step: u64,
}

/// The nine verbs that affect pose (including holding it).
pub const MOTION_VERBS: [ActionCommand; 9] = [
    ActionCommand::Forward,
    ActionCommand::Backward,
    ActionCommand::StrafeLeft,
    ActionCommand::StrafeRight,
    ActionCommand::Ascend,
    ActionCommand::Descend,
    ActionCommand::YawLeft,
    ActionCommand::YawRight,
    ActionCommand::Hover,
];

impl ActionCommand {
    pub fn is_motion(&self) -> bool {
        MOTION_VERBS.contains(self)
    }

    pub fn is_report(&self) -> bool {
        matches!(
            self,
            ActionCommand::ReportClue { .. } | ActionCommand::ReportVictim { .. }
        )
    }

    /// Short name for logs and summaries.
    pub fn verb_name(&self) -> &'static str {
        match self {
            ActionCommand::Forward => "Forward",
            ActionCommand::Backward => "Backward",
            ActionCommand::StrafeLeft => "StrafeLeft",
            ActionCommand::StrafeRight => "StrafeRight",
            ActionCommand::Ascend => "Ascend",
            ActionCommand::Descend => "Descend",
            ActionCommand::YawLeft => "YawLeft",
            ActionCommand::YawRight => "YawRight",
            ActionCommand::Hover => "Hover",
            ActionCommand::ReportClue { .. } => "ReportClue",
            ActionCommand::ReportVictim { .. } => "ReportVictim",
            ActionCommand::DeclareDone => "DeclareDone",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_actions_always_carry_payload() {
        let a = ActionCommand::ReportVictim {
            label: "victim".into(),
            position: Point3::new(1.0, 2.0, 3.0),
        };
        assert!(a.is_report());
        assert!(!a.is_motion());
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"verb\":\"ReportVictim\""));
        assert!(json.contains("position"));
        let back: ActionCommand = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn motion_constant_is_complete_and_disjoint_from_reports() {
        assert_eq!(MOTION_VERBS.len(), 9);
        for v in &MOTION_VERBS {
            assert!(v.is_motion());
            assert!(!v.is_report());
        }
        assert!(!ActionCommand::DeclareDone.is_motion());
    }
}
