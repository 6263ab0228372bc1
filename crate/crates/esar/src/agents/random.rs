//! Uniform-random baseline: motion verbs drawn uniformly, greedy reporting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::world::MOTION_VERBS;

use super::{Policy, PolicyDecision, PolicyParams, Reporter};

pub struct RandomPolicy {
    rng: ChaCha8Rng,
    reporter: Reporter,
}

impl RandomPolicy {
    pub fn new(seed: u64, params: &PolicyParams) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            reporter: Reporter::new(params.report_dedup_radius),
        }
    }
}

impl Policy for RandomPolicy {
    fn act(
        &mut self,
        obs: &crate::world::ObservationBundle,
        _prompt: &str,
    ) -> PolicyDecision {
        let clue_reports = self.reporter.observe(obs);
        let action = match self.reporter.next_victim_action() {
            Some(report) => report,
            None => MOTION_VERBS[self.rng.random_range(0..MOTION_VERBS.len())].clone(),
        };
        self.reporter.advance_step();
        PolicyDecision { action, clue_reports }
    }

    fn name(&self) -> &'static str {
        "random"
    }
}
