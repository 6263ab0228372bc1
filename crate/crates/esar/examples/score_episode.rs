//! Score a flown episode: Hungarian-matched success rate, time-discounted
//! success, two-tier clue discovery, and the composite rescue score.
//!
//! Run with: cargo run --example score_episode

use std::path::Path;

use esar::agents::PolicyKind;
use esar::harness::{run_episode, RunConfig};
use esar::matcher::SynonymMatcher;
use esar::metrics::{score_episode, MetricConfig};
use esar::taskgen::{discretize_event, load_event, sample_tasks, SampleParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let event_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../events/desert_wash.json");
    let event = load_event(&event_path)?;
    let map = event.terrain.build()?;
    let snapshot = &discretize_event(&event, 2, &map)?[1];
    let task = &sample_tasks(snapshot, &map, 1, 7, &SampleParams::default())?[0];

    // A 40 minute budget lets the sweep finish; the time-discounted score
    // then reflects how much of it was left over.
    let mut cfg_run = RunConfig::default();
    cfg_run.world.t_max = Some(2400.0);
    let log = run_episode(task, PolicyKind::Fbe, 0, &cfg_run)?;
    println!(
        "episode {} / fbe / seed 0: {:?} after {:.0} of {:.0} s",
        task.task_id, log.outcome, log.task_time, log.t_max
    );

    // Default scoring: 20 m localization threshold, offline synonym matcher.
    let cfg = MetricConfig::default();
    let m = score_episode(&log, task, &cfg, &SynonymMatcher::default())?;

    println!("\nvictim localization (threshold {} m):", cfg.error_threshold);
    println!("  SR  = {:.3}  ({} of {} victims matched)", m.sr, m.n_found, m.n_total);
    println!("  TSR = {:.3}  (time credit {:.3})", m.tsr, m.e_t);

    println!("\nclue discovery:");
    println!(
        "  CDS = {:.3}  ({} localized, {} exactly named, of {} placed)",
        m.cds, m.c_loc, m.c_exact, m.c_total
    );
    println!("  CRR = {:.3}", m.crr);

    println!("\ncomposite:");
    println!("  crash: {}  (i_safe = {})", m.crash, m.i_safe);
    println!("  safe flight distance: {:.0} m", m.safe_flight_distance);
    println!("  RS  = {:.3}", m.rs);
    Ok(())
}
