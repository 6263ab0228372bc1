//! Semantic clue matching: the offline synonym matcher, the judge prompt an
//! LLM endpoint would receive, and the two-tier clue discovery score built
//! on top of either.
//!
//! Run with: cargo run --example clue_matching
//!
//! Set ESAR_JUDGE_ENDPOINT (and optionally ESAR_JUDGE_MODEL) to also route
//! matching through an OpenAI-style chat endpoint; without it the example
//! stays fully offline.

use esar::matcher::{render_judge_prompt, CueMatcher, LlmMatcher, LlmMatcherConfig, SynonymMatcher};
use esar::metrics::clue_discovery;
use esar::taskgen::CluePlacement;
use esar::world::{ClueReport, ClueType};
use esar::Point3;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let matcher = SynonymMatcher::default();

    // Free-text labels against canonical clue names.
    let agent_cues: Vec<String> =
        ["red bag", "fire", "some rocks", "a sleeping-bag"].map(String::from).into();
    let gt_cues: Vec<String> =
        ["Backpack", "Campfire", "Sleeping Bag"].map(String::from).into();
    let result = matcher.match_cues(&agent_cues, &gt_cues);
    println!("synonym matcher on {} labels:", agent_cues.len());
    for m in &result.matches {
        println!("  '{}' -> {}", m.agent_cue, m.gt_cue);
    }
    println!("  matched {} of {} ground-truth cues", result.matched_gt_count, gt_cues.len());

    // The exact prompt a remote judge sees for the same question.
    println!("\njudge prompt for one pairing:\n---");
    println!("{}", render_judge_prompt(&["red bag".into()], &["Backpack".into()]));
    println!("---");

    // Clue discovery blends localization with naming: a report within the
    // threshold counts as localized, and as exact only when the label
    // semantically matches the clue it landed on.
    let gt = vec![
        CluePlacement { clue_type: ClueType::Backpack, position: Point3::new(0.0, 0.0, 1.0) },
        CluePlacement { clue_type: ClueType::Campfire, position: Point3::new(80.0, 0.0, 1.0) },
        CluePlacement { clue_type: ClueType::Rope, position: Point3::new(160.0, 0.0, 1.0) },
    ];
    let reports = vec![
        ClueReport { label: "red bag".into(), position: Point3::new(3.0, 2.0, 1.0), step: 12 },
        ClueReport { label: "boulder".into(), position: Point3::new(82.0, 1.0, 1.0), step: 40 },
    ];
    let out = clue_discovery(&reports, &gt, 20.0, &matcher)?;
    println!(
        "\nclue discovery: {} localized, {} exact, of {} placed -> CDS {:.3}, CRR {:.3}",
        out.c_loc, out.c_exact, out.c_total, out.cds, out.crr
    );

    // Optional: the same computation through a live chat endpoint, with
    // automatic fallback to the synonym table when the endpoint misbehaves.
    if let Ok(endpoint) = std::env::var("ESAR_JUDGE_ENDPOINT") {
        let model =
            std::env::var("ESAR_JUDGE_MODEL").unwrap_or_else(|_| "gpt-4o-mini".into());
        let judge = LlmMatcher::new(LlmMatcherConfig::new(endpoint, model))?;
        let remote = clue_discovery(&reports, &gt, 20.0, &judge)?;
        println!(
            "remote judge: CDS {:.3} (fallback used: {})",
            remote.cds, remote.fallback
        );
    } else {
        println!("\nESAR_JUDGE_ENDPOINT not set; skipping the live-endpoint variant");
    }
    Ok(())
}
