//! Deterministic offline cue matching from a curated synonym table.

use std::collections::HashMap;
use std::path::Path;

use super::{CueMatch, CueMatcher, MatchResult, MatcherError};

/// Synonym table bundled with the crate.
const BUILTIN_TABLE: &str = include_str!("../../assets/clue_synonyms.json");

/// Matches agent cue text against ground-truth names using normalized
/// equality and word-boundary phrase containment over a synonym table.
///
/// A ground-truth cue accepts an agent cue when the agent text equals the
/// canonical name or any synonym, or when a synonym phrase appears as a
/// whole-word subsequence inside the agent text ("a red bag on the scree"
/// names a Backpack). Matching is case-insensitive and one-to-one: the
/// reported count is maximal over possible pairings.
pub struct SynonymMatcher {
    /// canonical name (normalized) -> all accepted phrases (normalized).
    table: HashMap<String, Vec<String>>,
}

impl Default for SynonymMatcher {
    fn default() -> Self {
        Self::from_json(BUILTIN_TABLE).expect("bundled synonym table is valid")
    }
}

impl SynonymMatcher {
    pub fn from_json(json: &str) -> Result<Self, MatcherError> {
        let raw: HashMap<String, Vec<String>> =
            serde_json::from_str(json).map_err(|e| MatcherError::Table(e.to_string()))?;
        if raw.is_empty() {
            return Err(MatcherError::Table("synonym table is empty".into()));
        }
        let mut table = HashMap::new();
        for (canonical, synonyms) in raw {
            let key = normalize(&canonical);
            if key.is_empty() {
                return Err(MatcherError::Table("blank canonical name".into()));
            }
            let mut phrases: Vec<String> = synonyms.iter().map(|s| normalize(s)).collect();
            phrases.push(key.clone());
            phrases.retain(|p| !p.is_empty());
            phrases.sort();
            phrases.dedup();
            table.insert(key, phrases);
        }
        Ok(Self { table })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, MatcherError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MatcherError::Table(format!("cannot read table: {e}")))?;
        Self::from_json(&text)
    }

    /// Accepted phrases for a ground-truth cue; unknown cues accept only
    /// themselves.
    fn phrases_for(&self, gt_cue: &str) -> Vec<String> {
        let key = normalize(gt_cue);
        if let Some(phrases) = self.table.get(&key) {
            return phrases.clone();
        }
        // The cue may itself be a synonym of a canonical entry.
        for phrases in self.table.values() {
            if phrases.contains(&key) {
                return phrases.clone();
            }
        }
        vec![key]
    }

    fn accepts(&self, agent_cue: &str, gt_cue: &str) -> bool {
        let agent = normalize(agent_cue);
        if agent.is_empty() {
            return false;
        }
        let agent_words: Vec<&str> = agent.split(' ').collect();
        self.phrases_for(gt_cue).iter().any(|phrase| {
            agent == *phrase || contains_phrase(&agent_words, phrase)
        })
    }
}

/// Lowercase, trim, and collapse every non-alphanumeric run into one space.
fn normalize(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_space = false;
    for c in s.chars() {
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(c.to_lowercase());
        } else {
            pending_space = true;
        }
    }
    out
}

/// Whole-word contiguous containment of `phrase` in `words`.
fn contains_phrase(words: &[&str], phrase: &str) -> bool {
    let phrase_words: Vec<&str> = phrase.split(' ').collect();
    if phrase_words.is_empty() || phrase_words.len() > words.len() {
        return false;
    }
    words
        .windows(phrase_words.len())
        .any(|w| w == phrase_words.as_slice())
}

impl CueMatcher for SynonymMatcher {
    fn match_cues(&self, agent_cues: &[String], gt_cues: &[String]) -> MatchResult {
        // Maximum bipartite matching (augmenting paths) so the count does not
        // depend on input order.
        let mut gt_owner: Vec<Option<usize>> = vec![None; gt_cues.len()];

        fn try_assign(
            agent: usize,
            edges: &[Vec<usize>],
            gt_owner: &mut [Option<usize>],
            visited: &mut [bool],
        ) -> bool {
            for &g in &edges[agent] {
                if visited[g] {
                    continue;
                }
                visited[g] = true;
                if gt_owner[g].is_none()
                    || try_assign(gt_owner[g].unwrap(), edges, gt_owner, visited)
                {
                    gt_owner[g] = Some(agent);
                    return true;
                }
            }
            false
        }

        let edges: Vec<Vec<usize>> = agent_cues
            .iter()
            .map(|a| {
                gt_cues
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| self.accepts(a, g))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        for agent in 0..agent_cues.len() {
            let mut visited = vec![false; gt_cues.len()];
            try_assign(agent, &edges, &mut gt_owner, &mut visited);
        }

        let mut matches: Vec<CueMatch> = gt_owner
            .iter()
            .enumerate()
            .filter_map(|(g, owner)| {
                owner.map(|a| CueMatch {
                    agent_cue: agent_cues[a].clone(),
                    gt_cue: gt_cues[g].clone(),
                })
            })
            .collect();
        matches.sort_by(|a, b| a.gt_cue.cmp(&b.gt_cue).then(a.agent_cue.cmp(&b.agent_cue)));
        let matched_gt_count = MatchResult::distinct_gt_count(&matches);
        MatchResult { matches, matched_gt_count, fallback: false }
    }

    fn name(&self) -> &'static str {
        "synonyms"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::ClueType;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn canonical_names_match_themselves() {
        let m = SynonymMatcher::default();
        for c in ClueType::ALL {
            let r = m.match_cues(
                &strs(&[c.canonical_name()]),
                &strs(&[c.canonical_name()]),
            );
            assert_eq!(r.matched_gt_count, 1, "{}", c.canonical_name());
        }
    }

    #[test]
    fn red_bag_names_backpack_and_fire_names_campfire() {
        let m = SynonymMatcher::default();
        let r = m.match_cues(&strs(&["red bag"]), &strs(&["Backpack"]));
        assert_eq!(r.matched_gt_count, 1);
        let r = m.match_cues(&strs(&["fire"]), &strs(&["Campfire"]));
        assert_eq!(r.matched_gt_count, 1);
        assert_eq!(r.matches[0].agent_cue, "fire");
        assert_eq!(r.matches[0].gt_cue, "Campfire");
    }

    #[test]
    fn verbose_descriptions_match_by_phrase_containment() {
        let m = SynonymMatcher::default();
        let r = m.match_cues(
            &strs(&["a red bag lying on the scree", "smoldering fire pit near the creek"]),
            &strs(&["Backpack", "Campfire"]),
        );
        assert_eq!(r.matched_gt_count, 2);
    }

    #[test]
    fn unrelated_labels_do_not_match() {
        let m = SynonymMatcher::default();
        let r = m.match_cues(
            &strs(&["weather balloon", "rowboat"]),
            &strs(&["Tent", "Flare"]),
        );
        assert_eq!(r.matched_gt_count, 0);
        assert!(r.matches.is_empty());
        assert!(!r.fallback);
    }

    #[test]
    fn case_and_punctuation_are_ignored() {
        let m = SynonymMatcher::default();
        let r = m.match_cues(&strs(&["RED-BAG!"]), &strs(&["backpack"]));
        assert_eq!(r.matched_gt_count, 1);
    }

    #[test]
    fn duplicate_gt_values_count_once() {
        let m = SynonymMatcher::default();
        let r = m.match_cues(
            &strs(&["tent", "orange tent"]),
            &strs(&["Tent", "Tent"]),
        );
        // Both instances pair, but the distinct ground-truth value count
        // stays one.
        assert_eq!(r.matches.len(), 2);
        assert_eq!(r.matched_gt_count, 1);
    }

    #[test]
    fn count_is_maximal_not_greedy() {
        // "bag" fits only Backpack; "pack" fits Backpack too. With gt
        // [Backpack, Rope] and agents [backpack, rope], both must pair
        // regardless of order.
        let m = SynonymMatcher::default();
        for agents in [["rope", "backpack"], ["backpack", "rope"]] {
            let r = m.match_cues(&strs(&agents), &strs(&["Backpack", "Rope"]));
            assert_eq!(r.matched_gt_count, 2);
        }
    }

    #[test]
    fn count_never_exceeds_either_side() {
        let m = SynonymMatcher::default();
        let r = m.match_cues(
            &strs(&["tent", "tent", "tent"]),
            &strs(&["Tent"]),
        );
        assert_eq!(r.matches.len(), 1);
        assert_eq!(r.matched_gt_count, 1);
    }

    #[test]
    fn custom_table_loads_from_json() {
        let m = SynonymMatcher::from_json(r#"{"Widget": ["gizmo", "doohickey"]}"#).unwrap();
        let r = m.match_cues(&strs(&["a shiny gizmo"]), &strs(&["Widget"]));
        assert_eq!(r.matched_gt_count, 1);
        assert!(SynonymMatcher::from_json("{}").is_err());
        assert!(SynonymMatcher::from_json("not json").is_err());
    }

    #[test]
    fn unknown_gt_cues_accept_exact_text_only() {
        let m = SynonymMatcher::default();
        let r = m.match_cues(&strs(&["satellite dish"]), &strs(&["Satellite Dish"]));
        assert_eq!(r.matched_gt_count, 1);
        let r = m.match_cues(&strs(&["antenna"]), &strs(&["Satellite Dish"]));
        assert_eq!(r.matched_gt_count, 0);
    }
}
