//! Additive difficulty scoring and tier stratification.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geom::Point3;
use crate::world::{ClueType, EnvConditions};

use super::TaskSpec;

/// Mean start-to-victim distance boundaries, meters. A distance at or below
/// a boundary scores that band (boundaries are inclusive).
pub const DIST_TIER_1: f64 = 116.6;
pub const DIST_TIER_2: f64 = 230.3;
pub const DIST_TIER_3: f64 = 373.6;

/// Per-component difficulty breakdown. `total` is always the plain sum of
/// the five components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifficultyScore {
    /// 1-4 from mean start-to-victim distance.
    pub s_dist: i32,
    /// 0, 1, or 3 from the weather severity group.
    pub s_weather: i32,
    /// 0, 1, or 2 from the illumination band.
    pub s_light: i32,
    /// Victim count.
    pub s_count: i32,
    /// 0 down to -6 from strong survival clues present.
    pub s_clue: i32,
    pub total: i32,
}

/// Difficulty stratum. Boundaries: Simple at total <= 3, Medium <= 5,
/// Hard <= 7, Extreme above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tier {
    Simple,
    Medium,
    Hard,
    Extreme,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::Simple, Tier::Medium, Tier::Hard, Tier::Extreme];

    pub fn from_total(total: i32) -> Tier {
        if total <= 3 {
            Tier::Simple
        } else if total <= 5 {
            Tier::Medium
        } else if total <= 7 {
            Tier::Hard
        } else {
            Tier::Extreme
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Tier::Simple => "Simple",
            Tier::Medium => "Medium",
            Tier::Hard => "Hard",
            Tier::Extreme => "Extreme",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tier::ALL
            .iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| format!("unknown tier {s:?}"))
    }
}

fn distance_points(mean_distance: f64) -> i32 {
    if mean_distance <= DIST_TIER_1 {
        1
    } else if mean_distance <= DIST_TIER_2 {
        2
    } else if mean_distance <= DIST_TIER_3 {
        3
    } else {
        4
    }
}

/// Scores a scene from its raw ingredients.
///
/// Components: distance band of the mean 3D start-to-victim distance,
/// weather severity, illumination band, victim count, and credits for strong
/// survival clues. Each strong clue type (Tent -1, Campfire -2, Flare -3)
/// counts once regardless of how many instances are present, so `s_clue`
/// stays within `[-6, 0]`.
pub fn difficulty_score(
    start: Point3,
    victims: &[Point3],
    clues: &[ClueType],
    env: &EnvConditions,
) -> DifficultyScore {
    let mean_distance = if victims.is_empty() {
        0.0
    } else {
        victims.iter().map(|v| start.distance(v)).sum::<f64>() / victims.len() as f64
    };
    let s_dist = distance_points(mean_distance);
    let s_weather = env.weather.difficulty_points();
    let s_light = env.light_band().difficulty_points();
    let s_count = victims.len() as i32;
    let present: BTreeSet<&str> = clues.iter().map(|c| c.canonical_name()).collect();
    let s_clue: i32 = [ClueType::Tent, ClueType::Campfire, ClueType::Flare]
        .iter()
        .filter(|c| present.contains(c.canonical_name()))
        .map(|c| c.difficulty_credit())
        .sum();
    let total = s_dist + s_weather + s_light + s_count + s_clue;
    DifficultyScore { s_dist, s_weather, s_light, s_count, s_clue, total }
}

/// Recomputes the difficulty of a finished task spec.
pub fn difficulty_of_task(task: &TaskSpec) -> DifficultyScore {
    let clue_types: Vec<ClueType> =
        task.snapshot.clues.iter().map(|c| c.clue_type).collect();
    difficulty_score(task.start, &task.snapshot.victims, &clue_types, &task.env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::Weather;

    fn victims_at(start: Point3, distance: f64, n: usize) -> Vec<Point3> {
        (0..n)
            .map(|_| Point3::new(start.x + distance, start.y, start.z))
            .collect()
    }

    #[test]
    fn near_noon_single_victim_is_simple() {
        let start = Point3::new(0.0, 0.0, 0.0);
        let s = difficulty_score(
            start,
            &victims_at(start, 100.0, 1),
            &[],
            &EnvConditions::new(Weather::Sunny, 12.0),
        );
        assert_eq!(
            s,
            DifficultyScore { s_dist: 1, s_weather: 0, s_light: 0, s_count: 1, s_clue: 0, total: 2 }
        );
        assert_eq!(Tier::from_total(s.total), Tier::Simple);
    }

    #[test]
    fn far_foggy_night_pair_with_flare_is_extreme() {
        let start = Point3::new(0.0, 0.0, 0.0);
        let s = difficulty_score(
            start,
            &victims_at(start, 400.0, 2),
            &[ClueType::Flare],
            &EnvConditions::new(Weather::Fog, 22.0),
        );
        assert_eq!(
            s,
            DifficultyScore { s_dist: 4, s_weather: 3, s_light: 2, s_count: 2, s_clue: -3, total: 8 }
        );
        assert_eq!(Tier::from_total(s.total), Tier::Extreme);
    }

    #[test]
    fn distance_boundaries_are_inclusive() {
        let start = Point3::new(0.0, 0.0, 0.0);
        for (d, want) in [
            (DIST_TIER_1, 1),
            (DIST_TIER_1 + 0.001, 2),
            (DIST_TIER_2, 2),
            (DIST_TIER_2 + 0.001, 3),
            (DIST_TIER_3, 3),
            (DIST_TIER_3 + 0.001, 4),
        ] {
            let s = difficulty_score(
                start,
                &victims_at(start, d, 1),
                &[],
                &EnvConditions::new(Weather::Sunny, 12.0),
            );
            assert_eq!(s.s_dist, want, "distance {d}");
        }
    }

    #[test]
    fn strong_clues_stack_but_duplicates_do_not() {
        let start = Point3::new(0.0, 0.0, 0.0);
        let env = EnvConditions::new(Weather::Sunny, 12.0);
        let vs = victims_at(start, 50.0, 1);
        let s = difficulty_score(start, &vs, &[ClueType::Tent, ClueType::Campfire, ClueType::Flare], &env);
        assert_eq!(s.s_clue, -6);
        let dup = difficulty_score(start, &vs, &[ClueType::Flare, ClueType::Flare], &env);
        assert_eq!(dup.s_clue, -3);
        let weak = difficulty_score(start, &vs, &[ClueType::Backpack, ClueType::Rope], &env);
        assert_eq!(weak.s_clue, 0);
    }

    #[test]
    fn total_is_componentwise_sum_everywhere() {
        let start = Point3::new(0.0, 0.0, 0.0);
        for weather in Weather::ALL {
            for clock in [2.0, 6.5, 12.0, 17.5] {
                for n in 1..4usize {
                    for d in [50.0, 200.0, 300.0, 500.0] {
                        let s = difficulty_score(
                            start,
                            &victims_at(start, d, n),
                            &[ClueType::Campfire],
                            &EnvConditions::new(weather, clock),
                        );
                        assert_eq!(
                            s.total,
                            s.s_dist + s.s_weather + s.s_light + s.s_count + s.s_clue
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn every_total_maps_to_exactly_one_monotone_tier() {
        let mut last = Tier::Simple;
        for total in -6..=15 {
            let tier = Tier::from_total(total);
            assert!(tier >= last, "tier regressed at {total}");
            last = tier;
        }
        assert_eq!(Tier::from_total(3), Tier::Simple);
        assert_eq!(Tier::from_total(4), Tier::Medium);
        assert_eq!(Tier::from_total(5), Tier::Medium);
        assert_eq!(Tier::from_total(6), Tier::Hard);
        assert_eq!(Tier::from_total(7), Tier::Hard);
        assert_eq!(Tier::from_total(8), Tier::Extreme);
    }
}
