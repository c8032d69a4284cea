//! Front end for the simulator: argument parsing and the `run`, `bench`
//! and `gen` commands. `main.rs` only maps [`execute`] to an exit code.

pub mod bench;
pub mod svg;
pub mod trajectory_csv;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use nspmr::world::BuiltinId;
use nspmr::{
    builtin_scenario, generate_world, parse_scenario, run_with, serialize_scenario, validate_scenario, Outcome,
    PlannerKind, RunConfig, Scenario, WorldSpec,
};

use bench::{run_jobs, Job};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_REACHED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nspmr", version, about = "Sensor-based robot navigation simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one scenario with one planner.
    Run(RunArgs),
    /// Run a suite of scenarios and print a comparison table.
    Bench(BenchArgs),
    /// Write a random scenario file.
    Gen(GenArgs),
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Scenario file, `builtin:NAME`, or `random`.
    #[arg(long)]
    pub scenario: String,
    #[arg(long, value_enum, default_value_t = PlannerArg::Nspmr)]
    pub planner: PlannerArg,
    /// Override the sensor range d (m).
    #[arg(long)]
    pub sensor_range: Option<f64>,
    /// Override the robot length δ (m).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<u64>,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
    /// Seed for `--scenario random`.
    #[arg(long, env = "NSPMR_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paper,
    Random,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::Paper)]
    pub suite: Suite,
    /// Number of generated worlds in the random suite.
    #[arg(long, default_value_t = 50)]
    pub seeds: u64,
    /// First seed of the random suite.
    #[arg(long, env = "NSPMR_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [PlannerArg::Nspmr, PlannerArg::Bug1, PlannerArg::Bug2])]
    pub planners: Vec<PlannerArg>,
    /// Sensor ranges to sweep; each scenario runs once per range.
    #[arg(long, value_delimiter = ',')]
    pub ranges: Vec<f64>,
    /// CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long, env = "NSPMR_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlannerArg {
    Nspmr,
    Bug1,
    Bug2,
}

impl From<PlannerArg> for PlannerKind {
    fn from(p: PlannerArg) -> Self {
        match p {
            PlannerArg::Nspmr => PlannerKind::Nspmr,
            PlannerArg::Bug1 => PlannerKind::Bug1,
            PlannerArg::Bug2 => PlannerKind::Bug2,
        }
    }
}

/// Error carrying the message printed before exiting with status 1.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

pub fn load_scenario(spec: &str, seed: u64) -> Result<Scenario, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok(builtin_scenario(name.parse::<BuiltinId>()?));
    }
    if spec == "random" {
        return Ok(generate_world(seed, &WorldSpec::default())?);
    }
    let text = fs::read_to_string(spec).map_err(|e| CliError(format!("cannot read scenario `{spec}`: {e}")))?;
    Ok(parse_scenario(&text)?)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError(format!("cannot write `{}`: {e}", path.display())))
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut s = load_scenario(&args.scenario, args.seed)?;
    if let Some(d) = args.sensor_range {
        s.sensor_range = d;
    }
    if let Some(delta) = args.delta {
        s.delta = delta;
    }
    let violations = validate_scenario(&s);
    if !violations.is_empty() {
        let msgs: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(CliError(format!("invalid scenario: {}", msgs.join("; "))));
    }
    let cfg = RunConfig {
        max_iters: args.max_iters,
        ..RunConfig::default()
    };
    let (traj, r) = run_with(&s, args.planner.into(), cfg)?;
    if let Some(path) = &args.out_csv {
        write_file(path, trajectory_csv::trajectory_to_string(&traj).as_bytes())?;
    }
    if let Some(path) = &args.out_svg {
        write_file(path, svg::render_svg(&s, &[&traj]).as_bytes())?;
    }
    writeln!(out, "{} {:.3} {:.3} {}", r.outcome, r.length, r.travel_time, r.iterations)?;
    Ok(match r.outcome {
        Outcome::GoalReached => EXIT_OK,
        Outcome::Stuck | Outcome::IterationLimit | Outcome::Unreachable => EXIT_NOT_REACHED,
    })
}

pub fn bench_jobs(args: &BenchArgs) -> Result<Vec<Job>, CliError> {
    if args.planners.is_empty() {
        return Err(CliError("no planners given".into()));
    }
    let scenarios: Vec<Scenario> = match args.suite {
        Suite::Paper => BuiltinId::ALL.into_iter().map(builtin_scenario).collect(),
        Suite::Random => {
            if args.seeds == 0 {
                return Err(CliError("random suite needs --seeds of at least 1".into()));
            }
            (args.seed..args.seed + args.seeds)
                .map(|seed| generate_world(seed, &WorldSpec::default()))
                .collect::<Result<_, _>>()?
        }
    };
    let ranges: Vec<Option<f64>> = if args.ranges.is_empty() {
        vec![None]
    } else {
        args.ranges.iter().map(|&d| Some(d)).collect()
    };
    let mut jobs = Vec::new();
    for s in &scenarios {
        for &range in &ranges {
            for &p in &args.planners {
                jobs.push(Job {
                    scenario: s.clone(),
                    range,
                    planner: p.into(),
                });
            }
        }
    }
    Ok(jobs)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (report, skipped) = run_jobs(bench_jobs(args)?)?;
    for (name, p) in skipped {
        writeln!(err, "note: {p} skipped on {name} (moving obstacles)")?;
    }
    if let Some(path) = &args.out {
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        write_file(path, &buf)?;
    }
    write!(out, "{}", report.to_table())?;
    Ok(EXIT_OK)
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = WorldSpec {
        count: args.count,
        ..WorldSpec::default()
    };
    let text = serialize_scenario(&generate_world(args.seed, &spec)?);
    match &args.out {
        Some(path) => write_file(path, text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command; errors are printed to `err` and map to status 1.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Gen(a) => cmd_gen(a, out),
    };
    result.unwrap_or_else(|CliError(msg)| {
        let _ = writeln!(err, "error: {msg}");
        EXIT_ERROR
    })
}
