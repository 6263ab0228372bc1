//! Expand one incident event into time-sliced snapshots and concrete tasks,
//! showing the difficulty scorecard behind each tier assignment.
//!
//! Run with: cargo run --example task_generation

use std::path::Path;

use esar::taskgen::{discretize_event, load_event, sample_tasks, SampleParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let event_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../events/alpine_ridge.json");
    let event = load_event(&event_path)?;
    let map = event.terrain.build()?;
    let (t0, t1) = event.time_span();
    println!(
        "event '{}': {} victim trajectories, {} clue drops over {:.1} h",
        event.id,
        event.victim_trajectories.len(),
        event.clue_drops.len(),
        t1 - t0
    );

    // Freeze the unfolding incident at three moments.
    let snapshots = discretize_event(&event, 3, &map)?;
    for snapshot in &snapshots {
        println!(
            "\nsnapshot at {:.2} h: {} victims, {} clues dropped so far",
            snapshot.snapshot_time_h,
            snapshot.victims.len(),
            snapshot.clues.len()
        );
        for clue in &snapshot.clues {
            println!(
                "  clue {:?} at ({:.0}, {:.0})",
                clue.clue_type, clue.position.x, clue.position.y
            );
        }

        // Two concrete tasks per snapshot; each rolls weather, clock, and a
        // start pose, then scores difficulty from the resulting scene.
        for task in sample_tasks(snapshot, &map, 2, 7, &SampleParams::default())? {
            let d = &task.difficulty;
            println!(
                "  task {} -> {:?} (total {}: dist {} + weather {} + light {} + count {} + clue {})",
                task.task_id, task.tier, d.total, d.s_dist, d.s_weather, d.s_light, d.s_count,
                d.s_clue
            );
            println!(
                "    {:?} at {:04.1} h, start ({:.0}, {:.0}, {:.0})",
                task.env.weather, task.env.clock, task.start.x, task.start.y, task.start.z
            );
        }
    }

    // The mission brief hands the agent its conditions in plain language.
    let snapshot = &snapshots[0];
    let task = &sample_tasks(snapshot, &map, 1, 7, &SampleParams::default())?[0];
    println!("\nmission brief for {}:\n{}", task.task_id, task.prompt);
    Ok(())
}
