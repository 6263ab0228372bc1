//! Deterministic desk-scale engine for embodied UAV search-and-rescue
//! benchmarks.
//!
//! The crate covers the full loop: procedural or imported heightmap terrain,
//! event-driven task generation with difficulty tiers, a seeded episode
//! simulator with weather- and illumination-aware sensing, baseline search
//! policies (random walk, frontier exploration, value-ranked frontier
//! exploration), and episode scoring (success rate, time-discounted success,
//! clue discovery, composite rescue score) with optimal victim-to-prediction
//! assignment.
//!
//! Everything is reproducible: the same task and seed produce bit-identical
//! episode logs, and suite aggregates are independent of worker parallelism.
//!
//! The `examples/` directory is the front door; each example exercises one
//! capability end to end. A thin `esar` binary wraps the same library calls
//! for shell use.

pub mod agents;
pub mod geom;
pub mod harness;
pub mod matcher;
pub mod metrics;
pub mod seeds;
pub mod taskgen;
pub mod terrain;
pub mod world;

pub use geom::Point3;
