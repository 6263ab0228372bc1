//! Generate a small benchmark from every shipped event and compare the three
//! baseline policies on it, tier by tier.
//!
//! Run with: cargo run --release --example policy_comparison

use std::path::Path;

use esar::agents::PolicyKind;
use esar::harness::{
    aggregate_by_tier, generate_benchmark, render_markdown, run_suite, GenParams, SuiteConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let events = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../events");
    let dir = tempfile::tempdir()?;

    // Two snapshots per event, one task each: eight tasks over four
    // archetypes.
    let mut gen = GenParams::new(events, dir.path().join("tasks"));
    gen.snapshots_per_event = 2;
    gen.tasks_per_snapshot = 1;
    gen.seed = 9;
    let summary = generate_benchmark(&gen)?;
    println!(
        "benchmark: {} tasks from {} events ({} snapshots)",
        summary.tasks, summary.events, summary.snapshots
    );

    let glob = dir.path().join("tasks/*.json").to_string_lossy().into_owned();
    for policy in [PolicyKind::Random, PolicyKind::Fbe, PolicyKind::ValueFrontier] {
        let mut cfg = SuiteConfig::new(&glob, policy, dir.path().join(policy.name()));
        cfg.seeds = vec![0, 1];
        cfg.parallelism = 4;
        cfg.write_logs = false;
        let results = run_suite(&cfg)?;

        let mean_sr = results.records.iter().map(|r| r.metrics.sr).sum::<f64>()
            / results.records.len() as f64;
        let mean_cds = results.records.iter().map(|r| r.metrics.cds).sum::<f64>()
            / results.records.len() as f64;
        println!(
            "\n{} ({} episodes, mean SR {:.3}, mean CDS {:.3}):",
            policy.name(),
            results.records.len(),
            mean_sr,
            mean_cds
        );
        print!("{}", render_markdown(&aggregate_by_tier(&results.records)));
    }
    Ok(())
}
