//! Thin shell wrapper over the `esar` library. All logic lives in the
//! library; this binary only merges flags with an optional config file
//! (flags win over file, file wins over built-in defaults) and prints
//! summaries.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use esar::harness::{
    aggregate_by_tier, emit_report, generate_benchmark, load_file_config, load_results,
    render_markdown, run_suite, score_logs, write_results, FileConfig, GenParams, ReportFormat,
    SuiteConfig,
};
use esar::matcher::MatcherChoice;
use esar::taskgen::{validate_snapshot, KinematicParams};

#[derive(Parser)]
#[command(
    name = "esar",
    version,
    about = "Deterministic embodied search-and-rescue benchmark engine"
)]
struct Cli {
    /// TOML config file supplying defaults for any flag. Without this flag,
    /// `esar.toml` in the working directory is used when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand incident event files into snapshot task files.
    Gen {
        /// Directory of event JSON files.
        #[arg(long)]
        events: Option<PathBuf>,
        /// Time slices taken per event.
        #[arg(long)]
        snapshots: Option<usize>,
        /// Tasks sampled per snapshot.
        #[arg(long)]
        per_snapshot: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for task files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// UAV start altitude above ground, meters.
        #[arg(long)]
        start_agl: Option<f64>,
    },
    /// Run a policy over a task suite, writing logs and scored results.
    Run {
        /// Glob matching task JSON files, e.g. 'bench/*.json'.
        #[arg(long)]
        tasks: Option<String>,
        /// random | fbe | value-frontier
        #[arg(long)]
        policy: Option<String>,
        /// Comma-separated seeds, e.g. '0,1,2'.
        #[arg(long)]
        seeds: Option<String>,
        /// Output directory (logs/, episodes.jsonl, results.json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Simulation step, seconds.
        #[arg(long)]
        dt: Option<f64>,
        /// Worker threads. Results are identical at any setting.
        #[arg(long)]
        parallelism: Option<usize>,
        /// Mission time budget override, seconds.
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Re-score persisted episode logs without re-simulating.
    Score {
        /// Directory of .log episode files.
        #[arg(long)]
        logs: Option<PathBuf>,
        /// Glob matching the task files the logs were produced from.
        #[arg(long)]
        tasks: Option<String>,
        /// Localization threshold, meters.
        #[arg(long)]
        threshold: Option<f64>,
        /// synonyms | llm
        #[arg(long)]
        matcher: Option<String>,
        /// Directory to write results.json into.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Mission time budget override, seconds.
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Aggregate a results file into a per-tier table.
    Report {
        /// Directory containing results.json.
        #[arg(long)]
        results: Option<PathBuf>,
        /// csv | md
        #[arg(long)]
        format: Option<String>,
    },
    /// Monte Carlo check that frozen victim positions are sound.
    ValidateSnapshot {
        /// UAV sweep speed, m/s.
        #[arg(long)]
        vd: Option<f64>,
        /// Victim walking speed, m/s.
        #[arg(long)]
        vh: Option<f64>,
        /// Victim heading relative to the sweep, degrees.
        #[arg(long)]
        theta: Option<f64>,
        /// Sensor radius, meters.
        #[arg(long)]
        rs: Option<f64>,
        /// Search region side, meters.
        #[arg(long)]
        lb: Option<f64>,
        /// Safety factor on the slip-through threshold.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    let file = load_file_config(cli.config.as_deref())?;
    match cli.command {
        Command::Gen { events, snapshots, per_snapshot, seed, out, start_agl } => {
            cmd_gen(&file, events, snapshots, per_snapshot, seed, out, start_agl)
        }
        Command::Run { tasks, policy, seeds, out, dt, parallelism, t_max } => {
            cmd_run(&file, tasks, policy, seeds, out, dt, parallelism, t_max)
        }
        Command::Score { logs, tasks, threshold, matcher, out, t_max } => {
            cmd_score(&file, logs, tasks, threshold, matcher, out, t_max)
        }
        Command::Report { results, format } => cmd_report(&file, results, format),
        Command::ValidateSnapshot { vd, vh, theta, rs, lb, lambda, trials, seed } => {
            cmd_validate(&file, vd, vh, theta, rs, lb, lambda, trials, seed)
        }
    }
}

fn cmd_gen(
    file: &FileConfig,
    events: Option<PathBuf>,
    snapshots: Option<usize>,
    per_snapshot: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    start_agl: Option<f64>,
) -> Result<()> {
    let events = events
        .or_else(|| file.gen.events.clone().map(PathBuf::from))
        .context("--events is required (flag or [gen].events)")?;
    let out = out.or_else(|| file.gen.out.clone().map(PathBuf::from)).unwrap_or_else(|| {
        PathBuf::from("bench")
    });
    let mut params = GenParams::new(events, out);
    if let Some(v) = snapshots.or(file.gen.snapshots) {
        params.snapshots_per_event = v;
    }
    if let Some(v) = per_snapshot.or(file.gen.per_snapshot) {
        params.tasks_per_snapshot = v;
    }
    params.seed = seed.or(file.gen.seed).unwrap_or(0);
    if let Some(v) = start_agl.or(file.gen.start_agl) {
        params.sample.start_agl = v;
    }
    let summary = generate_benchmark(&params)?;
    println!(
        "generated {} tasks from {} events ({} snapshots) into {}",
        summary.tasks,
        summary.events,
        summary.snapshots,
        params.out_dir.display()
    );
    warn_all(&summary.errors);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    file: &FileConfig,
    tasks: Option<String>,
    policy: Option<String>,
    seeds: Option<String>,
    out: Option<PathBuf>,
    dt: Option<f64>,
    parallelism: Option<usize>,
    t_max: Option<f64>,
) -> Result<()> {
    let tasks = tasks
        .or_else(|| file.run.tasks.clone())
        .context("--tasks is required (flag or [run].tasks)")?;
    let policy = policy.or_else(|| file.run.policy.clone()).unwrap_or_else(|| "fbe".into());
    let policy = policy.parse().map_err(anyhow::Error::msg)?;
    let out = out
        .or_else(|| file.run.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let mut cfg = SuiteConfig::new(tasks, policy, out);
    cfg.run.sensor = file.sensor_params();
    cfg.run.policy = file.policy_params();
    cfg.run.world = file.world_params();
    cfg.seeds = match seeds {
        Some(s) => parse_seeds(&s)?,
        None => file.run.seeds.clone().unwrap_or_else(|| vec![0]),
    };
    if let Some(v) = dt.or(file.run.dt) {
        cfg.run.dt = v;
    }
    if let Some(v) = parallelism.or(file.run.parallelism) {
        cfg.parallelism = v;
    }
    if let Some(v) = t_max.or(file.run.t_max) {
        cfg.run.world.t_max = Some(v);
    }

    let results = run_suite(&cfg)?;
    println!(
        "ran {} episodes ({} errors); results in {}",
        results.records.len(),
        results.errors.len(),
        cfg.out_dir.display()
    );
    warn_all(&results.errors);
    print!("{}", render_markdown(&aggregate_by_tier(&results.records)));
    Ok(())
}

fn cmd_score(
    file: &FileConfig,
    logs: Option<PathBuf>,
    tasks: Option<String>,
    threshold: Option<f64>,
    matcher: Option<String>,
    out: Option<PathBuf>,
    t_max: Option<f64>,
) -> Result<()> {
    let logs = logs
        .or_else(|| file.score.logs.clone().map(PathBuf::from))
        .context("--logs is required (flag or [score].logs)")?;
    let tasks = tasks
        .or_else(|| file.score.tasks.clone())
        .context("--tasks is required (flag or [score].tasks)")?;
    let matcher: MatcherChoice = match matcher.or_else(|| file.score.matcher.clone()) {
        Some(s) => s.parse().map_err(anyhow::Error::msg)?,
        None => MatcherChoice::Synonyms,
    };
    let mut metrics = esar::metrics::MetricConfig::default();
    if let Some(v) = threshold.or(file.score.threshold) {
        metrics.error_threshold = v;
    }
    metrics.t_max_override = t_max.or(file.score.t_max);
    let out = out
        .or_else(|| file.score.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let results = score_logs(&logs, &tasks, &metrics, matcher)?;
    let path = write_results(&results, &out)?;
    println!(
        "scored {} episodes ({} errors); results in {}",
        results.records.len(),
        results.errors.len(),
        path.display()
    );
    warn_all(&results.errors);
    Ok(())
}

fn cmd_report(
    file: &FileConfig,
    results: Option<PathBuf>,
    format: Option<String>,
) -> Result<()> {
    let dir = results
        .or_else(|| file.report.results.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let format: ReportFormat = match format.or_else(|| file.report.format.clone()) {
        Some(s) => s.parse().map_err(anyhow::Error::msg)?,
        None => ReportFormat::Markdown,
    };
    let loaded = load_results(&dir)?;
    let path = emit_report(&loaded.records, format, &dir)?;
    print!("{}", render_markdown(&aggregate_by_tier(&loaded.records)));
    println!("wrote {}", path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_validate(
    file: &FileConfig,
    vd: Option<f64>,
    vh: Option<f64>,
    theta: Option<f64>,
    rs: Option<f64>,
    lb: Option<f64>,
    lambda: Option<f64>,
    trials: Option<u64>,
    seed: Option<u64>,
) -> Result<()> {
    let mut params = KinematicParams::default();
    if let Some(v) = vd.or(file.validate.vd) {
        params.v_d = v;
    }
    if let Some(v) = vh.or(file.validate.vh) {
        params.v_h = v;
    }
    if let Some(v) = theta.or(file.validate.theta_degrees) {
        params.theta = v.to_radians();
    }
    if let Some(v) = rs.or(file.validate.rs) {
        params.r_s = v;
    }
    if let Some(v) = lb.or(file.validate.lb) {
        params.l_b = v;
    }
    if let Some(v) = lambda.or(file.validate.lambda) {
        params.lambda = v;
    }
    let trials = trials.or(file.validate.trials).unwrap_or(10_000) as usize;
    let seed = seed.or(file.validate.seed).unwrap_or(0);
    let estimate = validate_snapshot(&params, trials, seed)?;
    println!("{}", serde_json::to_string_pretty(&estimate)?);
    Ok(())
}

fn warn_all(errors: &[String]) {
    for e in errors {
        eprintln!("warning: {e}");
    }
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let seeds: Vec<u64> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().with_context(|| format!("bad seed {s:?}")))
        .collect::<Result<_>>()?;
    if seeds.is_empty() {
        bail!("seed list is empty");
    }
    Ok(seeds)
}
