//! Semantic matching between free-text clue reports and ground-truth clue
//! names: an offline synonym matcher, a remote judge client, and the strict
//! response parser shared by both.

mod llm;
mod parse;
mod synonyms;

pub use llm::{render_judge_prompt, LlmMatcher, LlmMatcherConfig};
pub use parse::parse_match_response;
pub use synonyms::SynonymMatcher;

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One confirmed agent-to-ground-truth cue pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CueMatch {
    pub agent_cue: String,
    pub gt_cue: String,
}

/// Result of one matching call. `matched_gt_count` always equals the number
/// of distinct ground-truth cue values in `matches`, so a ground-truth cue
/// is never counted twice however many reports point at it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub matches: Vec<CueMatch>,
    pub matched_gt_count: usize,
    /// True when this result came from a fallback path rather than the
    /// requested matcher.
    #[serde(default)]
    pub fallback: bool,
}

impl MatchResult {
    pub fn empty() -> Self {
        Self { matches: Vec::new(), matched_gt_count: 0, fallback: false }
    }

    /// Number of distinct (case-insensitive) ground-truth cues in `matches`.
    pub fn distinct_gt_count(matches: &[CueMatch]) -> usize {
        let mut seen: Vec<String> = matches
            .iter()
            .map(|m| m.gt_cue.trim().to_lowercase())
            .collect();
        seen.sort();
        seen.dedup();
        seen.len()
    }
}

/// Decides which agent cues name which ground-truth cues.
pub trait CueMatcher: Send + Sync {
    fn match_cues(&self, agent_cues: &[String], gt_cues: &[String]) -> MatchResult;
    fn name(&self) -> &'static str;
}

/// Which matcher a suite uses for the semantic clue stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatcherChoice {
    #[default]
    Synonyms,
    Llm,
}

impl FromStr for MatcherChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "synonyms" | "synonym" => Ok(MatcherChoice::Synonyms),
            "llm" => Ok(MatcherChoice::Llm),
            other => Err(format!("unknown matcher {other:?} (expected synonyms or llm)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum MatcherError {
    #[error("no parseable match object in response: {0}")]
    Parse(String),
    #[error("judge endpoint error: {0}")]
    Http(String),
    #[error("missing configuration: {0}")]
    Config(String),
    #[error("invalid synonym table: {0}")]
    Table(String),
}
