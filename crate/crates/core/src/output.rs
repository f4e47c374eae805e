//! Result files: CSV, JSON and SVG emission, run manifests, and the
//! end-to-end runs behind each command.
//!
//! Floats are written in Rust's shortest round-trip form, so every CSV reads
//! back bit-for-bit. Files are written to a temporary sibling and renamed
//! into place.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{
    capacity_ladder, peak_hospitalized, reduction, release_schemes, simulate, unit_price_table, PolicyRow,
    CAPACITY_LADDER, SAME_PEAK_REFERENCE, UNIT_PRICES,
};
use crate::integrator::{integrate_adaptive, integrate_fixed_rk4, sample_daily};
use crate::model::{Compartment, StateVector, DIM};
use crate::optimize::{solve, ObjectiveKind};
use crate::pareto::{epsilon_constraint_sweep, verify_cold_start, ParetoFront, StartMode};
use crate::release::ReleaseSchedule;
use crate::scenario::Scenario;

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub const TRAJECTORY_AGGREGATES: [&str; 3] = ["N_h", "I_v", "I_v_w"];

/// Daily states as CSV: `t`, the 18 compartments in state order, then the
/// aggregates `N_h`, `I_v`, `I_v_w`.
pub fn trajectory_csv(daily: &[StateVector]) -> String {
    let mut out = String::from("t");
    for c in Compartment::ALL {
        out.push(',');
        out.push_str(c.name());
    }
    for a in TRAJECTORY_AGGREGATES {
        out.push(',');
        out.push_str(a);
    }
    out.push('\n');
    for (day, s) in daily.iter().enumerate() {
        let _ = write!(out, "{day}");
        for v in s.0 {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{},{},{}", s.human_total(), s.infected_vectors(), s.infected_vectors_wolbachia());
    }
    out
}

/// Parses the output of [`trajectory_csv`] back into `(t, state)` rows.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<(f64, StateVector)>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| Error::Parse("empty trajectory file".into()))?.split(',').collect();
    if header.len() < DIM + 1 || header[0] != "t" {
        return Err(Error::Parse("trajectory header must start with t and the 18 compartments".into()));
    }
    for (i, c) in Compartment::ALL.iter().enumerate() {
        if header[i + 1] != c.name() {
            return Err(Error::Parse(format!("column {} should be {}, found {}", i + 1, c.name(), header[i + 1])));
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(row, line)| {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {e}", row + 1))))
                .collect::<Result<_>>()?;
            if fields.len() != header.len() {
                return Err(Error::Parse(format!("row {} has {} fields, expected {}", row + 1, fields.len(), header.len())));
            }
            Ok((fields[0], StateVector(std::array::from_fn(|i| fields[i + 1]))))
        })
        .collect()
}

/// Per-day cost table.
pub fn cost_csv(schedule: &ReleaseSchedule, daily: &[StateVector], breakdown: &crate::cost::CostBreakdown) -> String {
    let mut out = String::from("day,release,release_cost,J_h,societal_cost,cumulative_cost\n");
    let rates = schedule.daily();
    let mut cumulative = 0.0;
    for d in 0..rates.len() {
        let (rc, sc) = (breakdown.daily_release_cost[d], breakdown.daily_societal_cost[d]);
        cumulative += rc + sc;
        let _ = writeln!(out, "{},{},{rc},{},{sc},{cumulative}", d + 1, rates[d], daily[d + 1][Compartment::Jh]);
    }
    out
}

/// Minimal line chart; one polyline per series over a shared x axis.
pub fn line_chart_svg(title: &str, x_label: &str, xs: &[f64], series: &[(&str, Vec<f64>)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let finite = |v: &f64| v.is_finite();
    let (x0, x1) = xs.iter().filter(|v| finite(v)).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let y1 = series.iter().flat_map(|(_, ys)| ys.iter()).filter(|v| finite(v)).fold(0.0f64, |m, v| m.max(*v));
    let y0 = series.iter().flat_map(|(_, ys)| ys.iter()).filter(|v| finite(v)).fold(0.0f64, |m, v| m.min(*v));
    let sx = |x: f64| M + (x - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0).max(f64::MIN_POSITIVE) * (H - 2.0 * M);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n\
         <line x1=\"{M}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{}\" stroke=\"black\"/>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n\
         <text x=\"{M}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{x0}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{x1}</text>\n\
         <text x=\"4\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{y1:.4e}</text>\n",
        W / 2.0,
        escape(title),
        H - M,
        W - M,
        H - M,
        H - M,
        W / 2.0,
        H - 8.0,
        escape(x_label),
        H - M + 16.0,
        W - M,
        H - M + 16.0,
        M - 6.0,
    );
    for (i, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| finite(x) && finite(y))
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(svg, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>", points.join(" "));
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" fill=\"{color}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            W - M,
            M + 14.0 * i as f64,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Provenance of one command: what ran, on which scenario, and digests of
/// everything it wrote.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub scenario: String,
    pub scenario_sha256: String,
    pub seed: u64,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<OutputEntry>,
}

pub const MANIFEST_NAME: &str = "run.json";

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Recorded verbatim in the manifest.
    pub command: String,
    pub seed: u64,
    /// Cross-check the main simulation against fixed-step RK4.
    pub oracle: bool,
    pub charts: bool,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>, command: impl Into<String>) -> Self {
        RunOptions { out_dir: out_dir.into(), command: command.into(), seed: 0, oracle: false, charts: true }
    }
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

/// Collects files for one run and writes the manifest last.
struct RunWriter<'a> {
    opts: &'a RunOptions,
    scenario: &'a Scenario,
    started: u128,
    outputs: Vec<OutputEntry>,
}

impl<'a> RunWriter<'a> {
    fn new(opts: &'a RunOptions, scenario: &'a Scenario) -> Result<Self> {
        std::fs::create_dir_all(&opts.out_dir).map_err(|e| Error::io(&opts.out_dir, e))?;
        let mut w = RunWriter { opts, scenario, started: now_ms(), outputs: Vec::new() };
        w.file("scenario.toml", scenario.to_toml_string()?)?;
        Ok(w)
    }

    fn file(&mut self, name: &str, contents: String) -> Result<()> {
        write_atomic(&self.opts.out_dir.join(name), contents.as_bytes())?;
        self.outputs.push(OutputEntry { path: name.to_string(), sha256: sha256_hex(contents.as_bytes()), bytes: contents.len() });
        Ok(())
    }

    fn chart(&mut self, name: &str, title: &str, x_label: &str, xs: &[f64], series: &[(&str, Vec<f64>)]) -> Result<()> {
        if self.opts.charts {
            self.file(name, line_chart_svg(title, x_label, xs, series))?;
        }
        Ok(())
    }

    fn finish(self) -> Result<RunRecord> {
        let doc = self.scenario.to_toml_string()?;
        let record = RunRecord {
            command: self.opts.command.clone(),
            scenario: self.scenario.name.clone(),
            scenario_sha256: sha256_hex(doc.as_bytes()),
            seed: self.opts.seed,
            started_unix_ms: self.started,
            finished_unix_ms: now_ms(),
            outputs: self.outputs,
        };
        write_atomic(&self.opts.out_dir.join(MANIFEST_NAME), to_json(&record)?.as_bytes())?;
        Ok(record)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub step: f64,
    /// Largest per-compartment relative difference over daily samples.
    pub max_relative_difference: f64,
    pub worst_compartment: &'static str,
    pub worst_day: usize,
}

/// Relative difference with an absolute floor scaled to the state size.
pub fn compare_daily(a: &[StateVector], b: &[StateVector]) -> (f64, &'static str, usize) {
    let mut worst = (0.0, Compartment::Sh.name(), 0);
    for (day, (x, y)) in a.iter().zip(b).enumerate() {
        let floor = 1e-9 * x.one_norm().max(y.one_norm());
        for c in Compartment::ALL {
            let d = (x[c] - y[c]).abs() / x[c].abs().max(y[c].abs()).max(floor).max(f64::MIN_POSITIVE);
            if d > worst.0 {
                worst = (d, c.name(), day);
            }
        }
    }
    worst
}

pub const ORACLE_STEP: f64 = 1e-3;

fn oracle_check(scenario: &Scenario, schedule: &ReleaseSchedule, adaptive: &[StateVector]) -> Result<OracleCheck> {
    let traj = integrate_fixed_rk4(&scenario.params, &scenario.initial(), scenario.horizon, schedule, ORACLE_STEP)?;
    let fixed = sample_daily(&traj, scenario.horizon)?;
    let (d, c, day) = compare_daily(adaptive, &fixed);
    Ok(OracleCheck { step: ORACLE_STEP, max_relative_difference: d, worst_compartment: c, worst_day: day })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub scenario: String,
    pub schedule: String,
    pub peak_hospitalized: f64,
    pub peak_day: u32,
    pub baseline_peak_hospitalized: f64,
    pub baseline_peak_day: u32,
    pub peak_reduction: f64,
    pub total_release: f64,
    pub release_cost: f64,
    pub societal_cost: f64,
    pub total_cost: f64,
    pub currency: String,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub diagnostics: Vec<String>,
    pub warnings: Vec<String>,
    pub oracle: Option<OracleCheck>,
}

pub fn run_simulate(scenario: &Scenario, schedule: &ReleaseSchedule, opts: &RunOptions) -> Result<RunRecord> {
    let warnings = scenario.validate()?;
    if schedule.horizon != scenario.horizon {
        return Err(Error::InvalidInput(format!(
            "schedule horizon {} differs from scenario horizon {}",
            schedule.horizon, scenario.horizon
        )));
    }
    let traj = integrate_adaptive(&scenario.params, &scenario.initial(), scenario.horizon, schedule, &scenario.integrator)?;
    let daily = sample_daily(&traj, scenario.horizon)?;
    let breakdown = crate::cost::objective_from_daily(&daily, schedule, &scenario.cost)?;
    let (peak, day) = peak_hospitalized(&daily);
    let baseline = simulate(scenario, &ReleaseSchedule::zero(scenario.horizon))?;
    let oracle = if opts.oracle { Some(oracle_check(scenario, schedule, &daily)?) } else { None };

    let mut w = RunWriter::new(opts, scenario)?;
    w.file("trajectory.csv", trajectory_csv(&daily))?;
    w.file("cost.csv", cost_csv(schedule, &daily, &breakdown))?;
    let report = SimulationReport {
        scenario: scenario.name.clone(),
        schedule: ScheduleLabel(schedule).to_string(),
        peak_hospitalized: peak,
        peak_day: day,
        baseline_peak_hospitalized: baseline.peak_hospitalized,
        baseline_peak_day: baseline.peak_day,
        peak_reduction: reduction(peak, baseline.peak_hospitalized),
        total_release: breakdown.total_release,
        release_cost: breakdown.release_cost,
        societal_cost: breakdown.societal_cost,
        total_cost: breakdown.total_cost,
        currency: scenario.cost.currency.clone(),
        accepted_steps: traj.stats.accepted,
        rejected_steps: traj.stats.rejected,
        diagnostics: traj.diagnostics.iter().map(|d| format!("{d:?}")).collect(),
        warnings,
        oracle,
    };
    w.file("summary.json", to_json(&report)?)?;
    let days: Vec<f64> = (0..daily.len()).map(|d| d as f64).collect();
    let jh: Vec<f64> = daily.iter().map(|s| s[Compartment::Jh]).collect();
    let base_jh: Vec<f64> = baseline.daily.iter().map(|s| s[Compartment::Jh]).collect();
    w.chart("hospitalized.svg", "Healthcare-seeking humans J_h(t)", "day", &days, &[("release", jh), ("no release", base_jh)])?;
    let rates: Vec<f64> = std::iter::once(schedule.evaluate(0.0).unwrap_or(0.0)).chain(schedule.daily()).collect();
    w.chart("release.svg", "Release rate r(t)", "day", &days, &[("r(t)", rates)])?;
    w.finish()
}

/// Schedule in command-line notation.
struct ScheduleLabel<'a>(&'a ReleaseSchedule);

impl std::fmt::Display for ScheduleLabel<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::release::ScheduleSpec(self.0.kind.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationReport {
    pub scenario: String,
    pub objective_kind: ObjectiveKind,
    pub values: Vec<f64>,
    pub upper_bounds: Vec<f64>,
    pub objective: f64,
    pub total_release: f64,
    pub release_cost: f64,
    pub societal_cost: f64,
    pub total_cost: f64,
    pub peak_hospitalized: f64,
    pub peak_day: u32,
    pub baseline_peak_hospitalized: f64,
    pub baseline_societal_cost: f64,
    pub peak_reduction: f64,
    pub diagnostics: crate::optimize::SolverDiagnostics,
    pub warnings: Vec<String>,
    pub oracle: Option<OracleCheck>,
}

pub fn run_optimize(scenario: &Scenario, opts: &RunOptions) -> Result<RunRecord> {
    let warnings = scenario.validate()?;
    let problem = scenario.problem(ObjectiveKind::Total);
    let policy = solve(&problem)?;
    let upper = problem.upper_bounds()?;
    let schedule = problem.schedule(&policy.values)?;
    let optimal = simulate(scenario, &schedule)?;
    let baseline = simulate(scenario, &ReleaseSchedule::zero(scenario.horizon))?;
    let oracle = if opts.oracle { Some(oracle_check(scenario, &schedule, &optimal.daily)?) } else { None };

    let mut w = RunWriter::new(opts, scenario)?;
    let mut pieces = String::from("piece,first_day,last_day,upper_bound,rate\n");
    let mut first = 1u32;
    for (i, count) in schedule.piece_day_counts().unwrap_or_default().iter().enumerate() {
        let last = first + count;
        let _ = writeln!(pieces, "{},{},{},{},{}", i + 1, first, last.saturating_sub(1), upper[i], policy.values[i]);
        first = last;
    }
    w.file("policy.csv", pieces)?;
    let report = OptimizationReport {
        scenario: scenario.name.clone(),
        objective_kind: ObjectiveKind::Total,
        values: policy.values.clone(),
        upper_bounds: upper,
        objective: policy.objective,
        total_release: policy.breakdown.total_release,
        release_cost: policy.breakdown.release_cost,
        societal_cost: policy.breakdown.societal_cost,
        total_cost: policy.breakdown.total_cost,
        peak_hospitalized: policy.peak_hospitalized,
        peak_day: policy.peak_day,
        baseline_peak_hospitalized: baseline.peak_hospitalized,
        baseline_societal_cost: baseline.breakdown.societal_cost,
        peak_reduction: reduction(policy.peak_hospitalized, baseline.peak_hospitalized),
        diagnostics: policy.diagnostics,
        warnings,
        oracle,
    };
    w.file("policy.json", to_json(&report)?)?;
    w.file("trajectory.csv", trajectory_csv(&optimal.daily))?;
    let days: Vec<f64> = (0..optimal.daily.len()).map(|d| d as f64).collect();
    let jh = |d: &[StateVector]| d.iter().map(|s| s[Compartment::Jh]).collect::<Vec<f64>>();
    w.chart("hospitalized.svg", "Healthcare-seeking humans J_h(t)", "day", &days, &[
        ("optimal release", jh(&optimal.daily)),
        ("no release", jh(&baseline.daily)),
    ])?;
    let rates: Vec<f64> = std::iter::once(schedule.evaluate(0.0).unwrap_or(0.0)).chain(schedule.daily()).collect();
    w.chart("release.svg", "Optimal release rate", "day", &days, &[("r(t)", rates)])?;
    w.finish()
}

/// Front as CSV: `k, budget_cap, release_cost, societal_cost, dominated,
/// failed, r_1..r_N`.
pub fn pareto_csv(front: &ParetoFront, pieces: usize) -> String {
    let mut out = String::from("k,budget_cap,release_cost,societal_cost,dominated,failed");
    for i in 1..=pieces {
        let _ = write!(out, ",r_{i}");
    }
    out.push('\n');
    for p in &front.points {
        let _ = write!(out, "{},{},{},{},{},{}", p.k, p.budget_cap, p.release_cost, p.societal_cost, p.dominated, !p.solved());
        for i in 0..pieces {
            let _ = write!(out, ",{}", p.values.get(i).copied().unwrap_or(f64::NAN));
        }
        out.push('\n');
    }
    out
}

pub fn run_pareto(
    scenario: &Scenario,
    points: usize,
    b_max: f64,
    mode: StartMode,
    verify_samples: usize,
    opts: &RunOptions,
) -> Result<RunRecord> {
    scenario.validate()?;
    let base = scenario.problem(ObjectiveKind::Societal);
    let front = epsilon_constraint_sweep(&base, points, b_max, mode)?;
    let mut w = RunWriter::new(opts, scenario)?;
    w.file("pareto.csv", pareto_csv(&front, scenario.pieces))?;
    w.file("pareto.json", to_json(&front)?)?;
    if verify_samples > 0 {
        let checks = verify_cold_start(&base, &front, verify_samples, opts.seed)?;
        w.file("cold_check.json", to_json(&checks)?)?;
    }
    let kept = front.nondominated();
    let xs: Vec<f64> = kept.iter().map(|p| p.release_cost).collect();
    w.chart("pareto.svg", "Pareto front", "release cost", &xs, &[("societal cost", kept.iter().map(|p| p.societal_cost).collect())])?;
    w.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableExperiment {
    UnitPrice1M,
    UnitPrice500k,
    TotalCost,
    CapacityLadder,
    ReleaseSchemes,
}

impl TableExperiment {
    pub const ALL: [TableExperiment; 5] = [
        TableExperiment::UnitPrice1M,
        TableExperiment::UnitPrice500k,
        TableExperiment::TotalCost,
        TableExperiment::CapacityLadder,
        TableExperiment::ReleaseSchemes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableExperiment::UnitPrice1M => "unit-price-1M",
            TableExperiment::UnitPrice500k => "unit-price-500k",
            TableExperiment::TotalCost => "total-cost",
            TableExperiment::CapacityLadder => "capacity-ladder",
            TableExperiment::ReleaseSchemes => "release-schemes",
        }
    }
}

impl std::str::FromStr for TableExperiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TableExperiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<&str> = TableExperiment::ALL.iter().map(|e| e.name()).collect();
            Error::InvalidInput(format!("unknown experiment '{s}' (known: {})", names.join(", ")))
        })
    }
}

fn policy_rows_csv(rows: &[PolicyRow]) -> String {
    let mut out = String::from(
        "initial_capacity,unit_price,total_release,release_cost,societal_cost,total_cost,peak_hospitalized,peak_day,peak_reduction\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.initial_capacity,
            r.unit_price,
            r.total_release,
            r.release_cost,
            r.societal_cost,
            r.total_cost,
            r.peak_hospitalized,
            r.peak_day,
            r.peak_reduction
        );
    }
    out
}

/// Runs one named experiment. Unit-price and ladder experiments restart the
/// scenario's capacity ramp at each initial capacity.
pub fn table_experiments(scenario: &Scenario, experiment: TableExperiment, opts: &RunOptions) -> Result<RunRecord> {
    scenario.validate()?;
    let name = experiment.name();
    let rows = match experiment {
        TableExperiment::UnitPrice1M => Some(unit_price_table(scenario, 1_000_000.0, &UNIT_PRICES)?),
        TableExperiment::UnitPrice500k => Some(unit_price_table(scenario, 500_000.0, &UNIT_PRICES)?),
        TableExperiment::TotalCost => {
            let mut rows = unit_price_table(scenario, 1_000_000.0, &UNIT_PRICES)?;
            rows.extend(unit_price_table(scenario, 500_000.0, &UNIT_PRICES)?);
            Some(rows)
        }
        TableExperiment::CapacityLadder => Some(capacity_ladder(scenario, &CAPACITY_LADDER)?),
        TableExperiment::ReleaseSchemes => None,
    };
    let mut w = RunWriter::new(opts, scenario)?;
    match rows {
        Some(rows) => {
            w.file(&format!("{name}.csv"), policy_rows_csv(&rows))?;
            w.file(&format!("{name}.json"), to_json(&rows)?)?;
        }
        None => {
            let cmp = release_schemes(scenario, SAME_PEAK_REFERENCE * scenario.scale)?;
            let mut csv = String::from("normalization,scheme,peak_rate,total_release,peak_hospitalized,peak_day,peak_reduction\n");
            for r in cmp.same_peak.iter().chain(&cmp.same_total) {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    r.normalization, r.label, r.peak_rate, r.total_release, r.peak_hospitalized, r.peak_day, r.peak_reduction
                );
            }
            w.file(&format!("{name}.csv"), csv)?;
            w.file(&format!("{name}.json"), to_json(&cmp)?)?;
        }
    }
    w.finish()
}
