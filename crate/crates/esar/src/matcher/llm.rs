//! Remote judge client for semantic cue matching.
//!
//! Speaks a chat-completions wire shape: POST `{model, messages}` to the
//! endpoint, read `choices[0].message.content`, then parse the strict match
//! object out of the content. Transport or parse failures retry, then fall
//! back to the offline synonym matcher with the result flagged.

use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::{parse_match_response, CueMatcher, MatchResult, MatcherError, SynonymMatcher};

/// Connection settings for the judge endpoint.
#[derive(Clone, Debug)]
pub struct LlmMatcherConfig {
    pub endpoint: String,
    pub model: String,
    pub api_key: Option<String>,
    pub timeout_secs: u64,
    /// Concurrent in-flight requests allowed across all threads.
    pub max_in_flight: usize,
    /// Additional attempts after the first failure.
    pub max_retries: u32,
}

impl LlmMatcherConfig {
    /// Reads `ESAR_LLM_ENDPOINT`, `ESAR_LLM_MODEL`, and optional
    /// `ESAR_LLM_KEY` from the environment.
    pub fn from_env() -> Result<Self, MatcherError> {
        let endpoint = std::env::var("ESAR_LLM_ENDPOINT")
            .map_err(|_| MatcherError::Config("ESAR_LLM_ENDPOINT is not set".into()))?;
        let model = std::env::var("ESAR_LLM_MODEL")
            .map_err(|_| MatcherError::Config("ESAR_LLM_MODEL is not set".into()))?;
        Ok(Self {
            endpoint,
            model,
            api_key: std::env::var("ESAR_LLM_KEY").ok(),
            ..Self::defaults()
        })
    }

    fn defaults() -> Self {
        Self {
            endpoint: String::new(),
            model: String::new(),
            api_key: None,
            timeout_secs: 30,
            max_in_flight: 4,
            max_retries: 2,
        }
    }

    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        Self { endpoint: endpoint.into(), model: model.into(), ..Self::defaults() }
    }
}

/// Counting gate bounding concurrent requests.
struct ConcurrencyGate {
    in_flight: Mutex<usize>,
    freed: Condvar,
    max: usize,
}

impl ConcurrencyGate {
    fn new(max: usize) -> Self {
        Self { in_flight: Mutex::new(0), freed: Condvar::new(), max: max.max(1) }
    }

    fn acquire(&self) -> GatePermit<'_> {
        let mut count = self.in_flight.lock().expect("gate lock");
        while *count >= self.max {
            count = self.freed.wait(count).expect("gate wait");
        }
        *count += 1;
        GatePermit { gate: self }
    }
}

struct GatePermit<'a> {
    gate: &'a ConcurrencyGate,
}

impl Drop for GatePermit<'_> {
    fn drop(&mut self) {
        let mut count = self.gate.in_flight.lock().expect("gate lock");
        *count -= 1;
        self.gate.freed.notify_one();
    }
}

/// Renders the judge instructions for one matching call.
///
/// The prompt pins down the whole protocol: the two cue lists, semantic
/// equivalence with worked examples, one-to-one pairing, counting each
/// ground-truth cue at most once, and the exact JSON reply shape.
pub fn render_judge_prompt(agent_cues: &[String], gt_cues: &[String]) -> String {
    let gt = serde_json::to_string(gt_cues).expect("string list serializes");
    let agent = serde_json::to_string(agent_cues).expect("string list serializes");
    format!(
        "You are auditing clue reports from a search-and-rescue flight.\n\
         Ground-truth cues (objects actually present):\n{gt}\n\
         Agent-reported cues (what the searcher described):\n{agent}\n\
         Decide which reported cues refer to which ground-truth cues. Treat \
         semantic equivalence as a match: a reported \"red bag\" refers to a \
         ground-truth \"Backpack\", and a reported \"fire\" refers to a \
         ground-truth \"Campfire\". Pair each reported cue with at most one \
         ground-truth cue and each ground-truth cue with at most one reported \
         cue. Multiple reports may describe the same object; count every \
         ground-truth cue at most once.\n\
         Reply with exactly one JSON object and nothing else, shaped as:\n\
         {{\"matches\": [{{\"agent_cue\": \"<reported>\", \"gt_cue\": \
         \"<ground-truth>\"}}], \"matched_gt_count\": <number of distinct \
         ground-truth cues matched>}}"
    )
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatMessage,
}

#[derive(Deserialize)]
struct ChatMessage {
    content: String,
}

/// Cue matcher backed by a remote judge, with bounded concurrency, retries,
/// and a deterministic offline fallback.
pub struct LlmMatcher {
    config: LlmMatcherConfig,
    client: reqwest::blocking::Client,
    gate: ConcurrencyGate,
    fallback: SynonymMatcher,
}

impl LlmMatcher {
    pub fn new(config: LlmMatcherConfig) -> Result<Self, MatcherError> {
        if config.endpoint.is_empty() {
            return Err(MatcherError::Config("endpoint is empty".into()));
        }
        if config.model.is_empty() {
            return Err(MatcherError::Config("model is empty".into()));
        }
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| MatcherError::Http(e.to_string()))?;
        Ok(Self {
            gate: ConcurrencyGate::new(config.max_in_flight),
            config,
            client,
            fallback: SynonymMatcher::default(),
        })
    }

    pub fn from_env() -> Result<Self, MatcherError> {
        Self::new(LlmMatcherConfig::from_env()?)
    }

    fn request_once(&self, prompt: &str) -> Result<MatchResult, MatcherError> {
        let _permit = self.gate.acquire();
        let body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let mut req = self.client.post(&self.config.endpoint).json(&body);
        if let Some(key) = &self.config.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| MatcherError::Http(e.to_string()))?;
        let status = resp.status();
        let text = resp.text().map_err(|e| MatcherError::Http(e.to_string()))?;
        if !status.is_success() {
            return Err(MatcherError::Http(format!("status {status}: {text}")));
        }
        // Prefer the chat envelope; fall back to treating the whole body as
        // the judge's reply so plainer endpoints also work.
        let content = serde_json::from_str::<ChatResponse>(&text)
            .ok()
            .and_then(|r| r.choices.into_iter().next())
            .map(|c| c.message.content)
            .unwrap_or(text);
        parse_match_response(&content)
    }

    /// Drops matches naming ground-truth cues that were never offered and
    /// recomputes the count.
    fn sanitize(result: MatchResult, gt_cues: &[String]) -> MatchResult {
        let allowed: Vec<String> = gt_cues.iter().map(|g| g.trim().to_lowercase()).collect();
        let matches: Vec<_> = result
            .matches
            .into_iter()
            .filter(|m| allowed.contains(&m.gt_cue.trim().to_lowercase()))
            .collect();
        let matched_gt_count = MatchResult::distinct_gt_count(&matches);
        MatchResult { matches, matched_gt_count, fallback: false }
    }
}

impl CueMatcher for LlmMatcher {
    fn match_cues(&self, agent_cues: &[String], gt_cues: &[String]) -> MatchResult {
        if agent_cues.is_empty() || gt_cues.is_empty() {
            return MatchResult::empty();
        }
        let prompt = render_judge_prompt(agent_cues, gt_cues);
        let attempts = 1 + self.config.max_retries;
        for attempt in 1..=attempts {
            match self.request_once(&prompt) {
                Ok(result) => return Self::sanitize(result, gt_cues),
                Err(e) => {
                    log::warn!("judge attempt {attempt}/{attempts} failed: {e}");
                }
            }
        }
        log::warn!("judge unavailable; falling back to the synonym matcher");
        let mut result = self.fallback.match_cues(agent_cues, gt_cues);
        result.fallback = true;
        result
    }

    fn name(&self) -> &'static str {
        "llm"
    }
}


#[cfg(test)]
mod tests {
    use super::mock::{envelope, serve};
    use super::*;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn test_config(endpoint: String) -> LlmMatcherConfig {
        LlmMatcherConfig {
            timeout_secs: 5,
            max_retries: 2,
            ..LlmMatcherConfig::new(endpoint, "judge-model")
        }
    }

    #[test]
    fn prompt_carries_both_lists_and_the_schema() {
        let p = render_judge_prompt(&strs(&["red bag"]), &strs(&["Backpack", "Tent"]));
        assert!(p.contains("[\"Backpack\",\"Tent\"]"));
        assert!(p.contains("[\"red bag\"]"));
        assert!(p.contains("matched_gt_count"));
        assert!(p.contains("at most once"));
    }

    #[test]
    fn happy_path_parses_the_envelope() {
        let content = r#"{"matches": [{"agent_cue": "red bag", "gt_cue": "Backpack"}], "matched_gt_count": 1}"#;
        let (endpoint, server) = serve(vec![(200, envelope(content))]);
        let m = LlmMatcher::new(test_config(endpoint)).unwrap();
        let r = m.match_cues(&strs(&["red bag"]), &strs(&["Backpack"]));
        assert_eq!(r.matched_gt_count, 1);
        assert!(!r.fallback);
        let requests = server.join().unwrap();
        assert!(requests[0].contains("judge-model"));
        assert!(requests[0].contains("red bag"));
    }

    #[test]
    fn garbage_responses_retry_then_fall_back() {
        let bodies = vec![
            (200, envelope("I cannot answer that.")),
            (200, envelope("still chatting")),
            (200, envelope("no json")),
        ];
        let (endpoint, server) = serve(bodies);
        let m = LlmMatcher::new(test_config(endpoint)).unwrap();
        let r = m.match_cues(&strs(&["fire"]), &strs(&["Campfire"]));
        assert!(r.fallback, "must flag the fallback");
        // The synonym fallback still gets the answer right.
        assert_eq!(r.matched_gt_count, 1);
        assert_eq!(server.join().unwrap().len(), 3, "one try plus two retries");
    }

    #[test]
    fn http_errors_fall_back_too() {
        let bodies = vec![
            (500, "{\"error\": \"overloaded\"}".to_string()),
            (500, "{\"error\": \"overloaded\"}".to_string()),
            (500, "{\"error\": \"overloaded\"}".to_string()),
        ];
        let (endpoint, _server) = serve(bodies);
        let m = LlmMatcher::new(test_config(endpoint)).unwrap();
        let r = m.match_cues(&strs(&["tent"]), &strs(&["Tent"]));
        assert!(r.fallback);
        assert_eq!(r.matched_gt_count, 1);
    }

    #[test]
    fn hallucinated_ground_truth_is_dropped() {
        let content = r#"{"matches": [{"agent_cue": "tent", "gt_cue": "Spaceship"}], "matched_gt_count": 1}"#;
        let (endpoint, _server) = serve(vec![(200, envelope(content))]);
        let m = LlmMatcher::new(test_config(endpoint)).unwrap();
        let r = m.match_cues(&strs(&["tent"]), &strs(&["Tent"]));
        assert_eq!(r.matched_gt_count, 0);
        assert!(!r.fallback);
    }

    #[test]
    fn empty_lists_skip_the_network() {
        // No server at this endpoint: a request would error, empty lists
        // must not make one.
        let m = LlmMatcher::new(test_config("http://127.0.0.1:1/unused".into())).unwrap();
        let r = m.match_cues(&[], &strs(&["Tent"]));
        assert_eq!(r, MatchResult::empty());
    }

    #[test]
    fn config_requires_endpoint_and_model() {
        assert!(LlmMatcher::new(LlmMatcherConfig::new("", "m")).is_err());
        assert!(LlmMatcher::new(LlmMatcherConfig::new("http://x", "")).is_err());
    }

    #[test]
    fn plain_body_without_envelope_also_parses() {
        let content = r#"{"matches": [{"agent_cue": "rope", "gt_cue": "Rope"}], "matched_gt_count": 1}"#;
        let (endpoint, _server) = serve(vec![(200, content.to_string())]);
        let m = LlmMatcher::new(test_config(endpoint)).unwrap();
        let r = m.match_cues(&strs(&["rope"]), &strs(&["Rope"]));
        assert_eq!(r.matched_gt_count, 1);
    }
}
