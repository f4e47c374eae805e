use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use wolbachia_core::cost::ReleaseAccounting;
use wolbachia_core::optimize::{CapacityBoundMode, CapacityFunction};
use wolbachia_core::output::{run_optimize, run_pareto, run_simulate, table_experiments, RunOptions, TableExperiment};
use wolbachia_core::pareto::StartMode;
use wolbachia_core::release::ScheduleSpec;
use wolbachia_core::scenario::{load_scenario, Scenario};

/// Dengue and Wolbachia release simulation and optimization.
#[derive(Debug, Parser)]
#[command(name = "wolbachia", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one release schedule.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// zero | constant:R | linear:M | bump:M@DAY | piecewise:r1,r2,...
        #[arg(long, default_value = "zero")]
        schedule: ScheduleSpec,
    },
    /// Find the cost-minimizing piecewise-constant release policy.
    Optimize {
        #[command(flatten)]
        common: Common,
    },
    /// Trace the release-cost / societal-cost front.
    Pareto {
        #[command(flatten)]
        common: Common,
        /// Number of budget caps.
        #[arg(long, default_value_t = 100)]
        k: usize,
        /// Largest budget cap.
        #[arg(long, default_value_t = 5e8)]
        bmax: f64,
        /// Solve every cap independently instead of warm-starting.
        #[arg(long)]
        cold: bool,
        /// Re-solve this many random caps from cold starts as a check.
        #[arg(long, default_value_t = 0)]
        verify_cold: usize,
    },
    /// Run a named table experiment, or all of them.
    Tables {
        #[command(flatten)]
        common: Common,
        /// unit-price-1M | unit-price-500k | total-cost | capacity-ladder | release-schemes | all
        #[arg(default_value = "all")]
        name: String,
    },
    /// Check a scenario and print it fully resolved.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario document (TOML).
    #[arg(long, conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// paper-baseline | quezon-city | quezon-city-ramp
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Release budget (currency units); `inf` for none.
    #[arg(long)]
    budget: Option<f64>,
    /// Capacity ramp `P0,PMAX,PEAKDAY`, or a single constant value.
    #[arg(long)]
    capacity: Option<String>,
    #[arg(long)]
    pieces: Option<usize>,
    #[arg(long)]
    horizon: Option<u32>,
    /// Reject capacities that can push the state out of the invariant region.
    #[arg(long)]
    strict_domain: bool,
    /// Bound each piece by the smallest daily capacity it covers.
    #[arg(long)]
    min_over_piece: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cross-check the simulation against fixed-step RK4.
    #[arg(long)]
    oracle: bool,
    /// Charge every piece for ceil(T/N) days of release.
    #[arg(long)]
    compat_problem6: bool,
    /// Skip SVG charts.
    #[arg(long)]
    no_charts: bool,
}

impl Common {
    fn scenario(&self, default_preset: &str) -> anyhow::Result<Scenario> {
        let mut s = match (&self.scenario, &self.preset) {
            (Some(path), _) => Scenario::from_path(path)?,
            (None, Some(name)) => load_scenario(name)?,
            (None, None) => Scenario::preset(default_preset)?,
        };
        if let Some(b) = self.budget {
            s.budget = b;
        }
        if let Some(c) = &self.capacity {
            s.capacity = parse_capacity(c)?;
        }
        if let Some(n) = self.pieces {
            s.pieces = n;
        }
        if let Some(t) = self.horizon {
            s.horizon = t;
        }
        if self.strict_domain {
            s.strict_domain = true;
        }
        if self.min_over_piece {
            s.bound_mode = CapacityBoundMode::MinOverPiece;
        }
        if self.compat_problem6 {
            s.cost.accounting = ReleaseAccounting::UniformPieces;
        }
        for w in s.validate()? {
            eprintln!("warning: {w}");
        }
        Ok(s)
    }

    fn options(&self, command: &str) -> RunOptions {
        RunOptions {
            out_dir: self.out.clone(),
            command: command.to_string(),
            seed: self.seed,
            oracle: self.oracle,
            charts: !self.no_charts,
        }
    }
}

fn parse_capacity(text: &str) -> anyhow::Result<CapacityFunction> {
    let values: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad capacity value '{v}'")))
        .collect::<anyhow::Result<_>>()?;
    match values[..] {
        [value] => Ok(CapacityFunction::Constant { value }),
        [initial, peak, peak_day] => Ok(CapacityFunction::Ramp { initial, peak, peak_day }),
        _ => bail!("--capacity takes P or P0,PMAX,PEAKDAY"),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let command_line = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match cli.command {
        Command::Simulate { common, schedule } => {
            let s = common.scenario("quezon-city")?;
            let schedule = schedule.with_horizon(s.horizon)?;
            let record = run_simulate(&s, &schedule, &common.options(&command_line))?;
            report(&common.out, record.outputs.len());
        }
        Command::Optimize { common } => {
            let s = common.scenario("quezon-city")?;
            let record = run_optimize(&s, &common.options(&command_line))?;
            report(&common.out, record.outputs.len());
        }
        Command::Pareto { common, k, bmax, cold, verify_cold } => {
            let s = common.scenario("quezon-city-ramp")?;
            let mode = if cold { StartMode::Cold } else { StartMode::Warm };
            let record = run_pareto(&s, k, bmax, mode, verify_cold, &common.options(&command_line))?;
            report(&common.out, record.outputs.len());
        }
        Command::Tables { common, name } => {
            let s = common.scenario("quezon-city-ramp")?;
            let experiments = if name == "all" { TableExperiment::ALL.to_vec() } else { vec![name.parse()?] };
            for e in experiments {
                let mut opts = common.options(&command_line);
                opts.out_dir = common.out.join(e.name());
                let record = table_experiments(&s, e, &opts)?;
                report(&opts.out_dir, record.outputs.len());
            }
        }
        Command::Validate { common } => {
            let s = common.scenario("quezon-city")?;
            print!("{}", s.to_toml_string()?);
        }
    }
    Ok(())
}

fn report(dir: &std::path::Path, files: usize) {
    eprintln!("wrote {files} files to {}", dir.display());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<wolbachia_core::Error>().map_or(1, |e| e.exit_code());
            ExitCode::from(code as u8)
        }
    }
}
