//! Strict parsing of judge responses.
//!
//! Judges are asked for a single JSON object but often wrap it in code
//! fences or prose. The parser scans for balanced `{...}` candidates, takes
//! the first that deserializes into the match schema, and recomputes the
//! declared count from the match list, warning when they disagree.

use serde::Deserialize;

use super::{CueMatch, MatchResult, MatcherError};

#[derive(Deserialize)]
struct RawMatchResult {
    matches: Vec<CueMatch>,
    #[serde(default)]
    matched_gt_count: Option<i64>,
}

/// Extracts a [`MatchResult`] from free-form judge output.
///
/// The returned `matched_gt_count` is always the recomputed distinct
/// ground-truth count; a disagreeing declared count is logged and ignored.
pub fn parse_match_response(text: &str) -> Result<MatchResult, MatcherError> {
    for (start, _) in text.char_indices().filter(|&(_, c)| c == '{') {
        let Some(end) = balanced_object_end(text, start) else {
            continue;
        };
        let candidate = &text[start..=end];
        let Ok(raw) = serde_json::from_str::<RawMatchResult>(candidate) else {
            continue;
        };
        let recomputed = MatchResult::distinct_gt_count(&raw.matches);
        if let Some(declared) = raw.matched_gt_count {
            if declared != recomputed as i64 {
                log::warn!(
                    "judge declared matched_gt_count={declared} but matches imply {recomputed}; using {recomputed}"
                );
            }
        }
        return Ok(MatchResult {
            matches: raw.matches,
            matched_gt_count: recomputed,
            fallback: false,
        });
    }
    let preview: String = text.chars().take(120).collect();
    Err(MatcherError::Parse(preview))
}

/// Byte index of the `}` closing the object that opens at `start`, honoring
/// strings and escapes. `None` when unbalanced.
fn balanced_object_end(text: &str, start: usize) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}
