//! Optimal piecewise-constant release policies under a budget and a
//! time-varying production capacity.
//!
//! The decision vector holds one release rate per piece. Feasible policies
//! satisfy `0 <= r_i <= P_i` and a single linear budget constraint
//! `sum_i w_i r_i <= B`, where `w_i` is the cost of releasing one mosquito per
//! day throughout piece `i`. The solver is a projected spectral-gradient
//! method with a monotone Armijo line search; gradients come from forward
//! differences of the simulated objective, one ODE integration per
//! component, evaluated in parallel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{objective_from_daily, piece_length, CostBreakdown, CostConfig, ReleaseAccounting};
use crate::error::{Error, Result};
use crate::integrator::{integrate_adaptive, sample_daily, IntegratorConfig};
use crate::model::{ModelParameters, StateVector};
use crate::release::ReleaseSchedule;

/// Maximum daily production of Wolbachia-infected mosquitoes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CapacityFunction {
    Constant { value: f64 },
    /// `initial` on day 1, rising linearly to `peak` on `peak_day`, flat after.
    Ramp { initial: f64, peak: f64, peak_day: f64 },
    /// Values for days `1, 2, ...`, linearly interpolated in between.
    Tabulated { values: Vec<f64> },
}

impl CapacityFunction {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        let problem = match self {
            CapacityFunction::Constant { value } if !ok(*value) => Some(format!("capacity {value} must be non-negative")),
            CapacityFunction::Ramp { initial, peak, peak_day } => {
                if !ok(*initial) || !ok(*peak) {
                    Some(format!("ramp capacities must be non-negative (got {initial}, {peak})"))
                } else if peak < initial {
                    Some(format!("ramp peak {peak} is below its initial value {initial}"))
                } else if !(*peak_day >= 1.0) {
                    Some(format!("ramp peak day must be at least 1 (got {peak_day})"))
                } else {
                    None
                }
            }
            CapacityFunction::Tabulated { values } if values.is_empty() || !values.iter().all(|v| ok(*v)) => {
                Some("tabulated capacity needs at least one non-negative value".into())
            }
            _ => None,
        };
        match problem {
            Some(p) => Err(Error::Validation(vec![p])),
            None => Ok(()),
        }
    }

    /// Capacity on (possibly fractional) day `t >= 1`.
    pub fn at(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::InvalidInput(format!("capacity is defined from day 1, got t = {t}")));
        }
        Ok(match self {
            CapacityFunction::Constant { value } => *value,
            CapacityFunction::Ramp { initial, peak, peak_day } => {
                let frac = if *peak_day <= 1.0 { 1.0 } else { ((t - 1.0) / (peak_day - 1.0)).min(1.0) };
                initial + (peak - initial) * frac
            }
            CapacityFunction::Tabulated { values } => {
                let last = values.len() as f64;
                if t > last {
                    return Err(Error::InvalidInput(format!("tabulated capacity covers days 1..{last}, got t = {t}")));
                }
                let i = (t.floor() as usize).min(values.len()) - 1;
                let frac = t - t.floor();
                if frac == 0.0 || i + 1 >= values.len() {
                    values[i]
                } else {
                    values[i] + frac * (values[i + 1] - values[i])
                }
            }
        })
    }

    pub fn max_value(&self) -> f64 {
        match self {
            CapacityFunction::Constant { value } => *value,
            CapacityFunction::Ramp { peak, .. } => *peak,
            CapacityFunction::Tabulated { values } => values.iter().copied().fold(0.0, f64::max),
        }
    }
}

/// Free function form of [`CapacityFunction::at`], checked against a horizon.
pub fn capacity_at(capacity: &CapacityFunction, t: f64, horizon: u32) -> Result<f64> {
    if t > horizon as f64 {
        return Err(Error::InvalidInput(format!("t = {t} is beyond the horizon {horizon}")));
    }
    capacity.at(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Release cost plus societal cost.
    #[default]
    Total,
    /// Societal cost alone; release spending only enters via the budget.
    Societal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityBoundMode {
    /// `r_i <= P(l (i - 1) + 1)` with `l = ceil(T/N)`.
    #[default]
    PieceStart,
    /// `r_i <= min P(t)` over the integer days the piece actually covers.
    MinOverPiece,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Projected-gradient tolerance, relative to the objective and to each
    /// variable's capacity range.
    pub gtol: f64,
    /// Relative objective change between accepted iterates.
    pub ftol: f64,
    pub max_iterations: usize,
    /// Finite-difference step as a fraction of the piece capacity.
    pub fd_relative_step: f64,
    /// Smallest finite-difference step (mosquitoes/day).
    pub fd_min_step: f64,
    /// Run the standard multistart set; otherwise only the first start.
    pub multistart: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            gtol: 1e-6,
            ftol: 1e-9,
            max_iterations: 200,
            fd_relative_step: 1e-3,
            fd_min_step: 1.0,
            multistart: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleObjectiveProblem {
    pub params: ModelParameters,
    pub initial: StateVector,
    pub horizon: u32,
    pub pieces: usize,
    pub cost: CostConfig,
    pub capacity: CapacityFunction,
    /// Release budget; `f64::INFINITY` for none.
    pub budget: f64,
    pub objective: ObjectiveKind,
    pub bound_mode: CapacityBoundMode,
    pub integrator: IntegratorConfig,
    pub settings: SolverSettings,
}

/// Objective value together with its cost components.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub breakdown: CostBreakdown,
    pub peak_hospitalized: f64,
    pub peak_day: u32,
}

impl SingleObjectiveProblem {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.horizon == 0 {
            problems.push("horizon must be at least one day".to_string());
        }
        if self.pieces == 0 {
            problems.push("at least one piece is required".to_string());
        }
        if !(self.budget >= 0.0) {
            problems.push(format!("budget must be non-negative (got {})", self.budget));
        }
        for check in [self.params.validate(), self.cost.validate(), self.capacity.validate(), self.integrator.validate()] {
            if let Err(Error::Validation(p)) = check {
                problems.extend(p);
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Per-piece capacity bounds.
    pub fn upper_bounds(&self) -> Result<Vec<f64>> {
        let ell = piece_length(self.horizon, self.pieces);
        match self.bound_mode {
            CapacityBoundMode::PieceStart => (0..self.pieces)
                .map(|i| self.capacity.at(((ell * i as u32) + 1).min(self.horizon) as f64))
                .collect(),
            CapacityBoundMode::MinOverPiece => {
                let probe = self.schedule(&vec![0.0; self.pieces])?;
                let mut bounds = vec![f64::INFINITY; self.pieces];
                for t in 1..=self.horizon {
                    let i = probe.piece_index(t as f64).expect("piecewise") - 1;
                    bounds[i] = bounds[i].min(self.capacity.at(t as f64)?);
                }
                // A piece with no integer day keeps its start-of-piece bound.
                for (i, b) in bounds.iter_mut().enumerate() {
                    if !b.is_finite() {
                        *b = self.capacity.at(((ell * i as u32) + 1).min(self.horizon) as f64)?;
                    }
                }
                Ok(bounds)
            }
        }
    }

    /// Budget cost of one mosquito per day in each piece.
    pub fn budget_weights(&self) -> Vec<f64> {
        let c = self.cost.release_unit_cost;
        match self.cost.accounting {
            ReleaseAccounting::UniformPieces => vec![c * piece_length(self.horizon, self.pieces) as f64; self.pieces],
            ReleaseAccounting::Daily => {
                let probe = ReleaseSchedule { kind: crate::release::ScheduleKind::Piecewise { values: vec![0.0; self.pieces] }, horizon: self.horizon };
                probe.piece_day_counts().expect("piecewise").into_iter().map(|d| c * d as f64).collect()
            }
        }
    }

    pub fn schedule(&self, values: &[f64]) -> Result<ReleaseSchedule> {
        if values.len() != self.pieces {
            return Err(Error::InvalidInput(format!("expected {} piece values, got {}", self.pieces, values.len())));
        }
        ReleaseSchedule::piecewise(values.to_vec(), self.horizon)
    }

    /// Simulates the policy and evaluates the objective.
    pub fn evaluate(&self, values: &[f64]) -> Result<Evaluation> {
        let schedule = self.schedule(values)?;
        let traj = integrate_adaptive(&self.params, &self.initial, self.horizon, &schedule, &self.integrator)?;
        let daily = sample_daily(&traj, self.horizon)?;
        let breakdown = objective_from_daily(&daily, &schedule, &self.cost)?;
        let value = match self.objective {
            ObjectiveKind::Total => breakdown.total_cost,
            ObjectiveKind::Societal => breakdown.societal_cost,
        };
        let (peak_day, peak_hospitalized) = daily
            .iter()
            .enumerate()
            .map(|(d, s)| (d as u32, s[crate::model::Compartment::Jh]))
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        Ok(Evaluation { value, breakdown, peak_hospitalized, peak_day })
    }

    /// Box and budget feasibility with relative tolerance `tol`.
    pub fn is_feasible(&self, values: &[f64], tol: f64) -> Result<bool> {
        let ub = self.upper_bounds()?;
        let boxed = values.iter().zip(&ub).all(|(v, u)| *v >= -tol * u.max(1.0) && *v <= u * (1.0 + tol) + tol);
        let spend: f64 = values.iter().zip(self.budget_weights()).map(|(v, w)| v * w).sum();
        Ok(boxed && spend <= self.budget * (1.0 + tol) + tol)
    }

    /// The standard starting points: zero, capacity-saturating, front-loaded
    /// and budget-uniform policies, each projected onto the feasible set.
    /// The front-loaded start matters because small, spread-out releases sit
    /// below the invasion threshold, which makes the zero policy a local
    /// minimum under tight budgets.
    pub fn default_starts(&self) -> Result<Vec<Vec<f64>>> {
        let ub = self.upper_bounds()?;
        let w = self.budget_weights();
        let feasible = FeasibleSet::new(ub.clone(), &w, self.budget);
        let zero = vec![0.0; self.pieces];
        let saturating = feasible.to_rates(&feasible.project(&vec![1.0; self.pieces]));
        let uniform = if self.budget.is_finite() {
            uniform_level_policy(&ub, &w, self.budget)
        } else {
            ub.iter().map(|u| 0.5 * u).collect()
        };
        let front_loaded = front_loaded_policy(&ub, &w, self.budget);
        let mut starts = vec![
            zero,
            saturating,
            front_loaded,
            feasible.to_rates(&feasible.project(&feasible.to_unit(&uniform))),
        ];
        starts.dedup();
        Ok(starts)
    }
}

/// Fills pieces in order up to capacity until the budget runs out.
fn front_loaded_policy(ub: &[f64], w: &[f64], budget: f64) -> Vec<f64> {
    let mut left = budget;
    ub.iter()
        .zip(w)
        .map(|(u, wi)| {
            let r = if *wi > 0.0 { u.min(left / wi).max(0.0) } else { *u };
            left -= r * wi;
            r
        })
        .collect()
}

/// Same rate `rho` in every piece (clipped at capacity), with `rho` chosen so
/// that spending meets the budget.
fn uniform_level_policy(ub: &[f64], w: &[f64], budget: f64) -> Vec<f64> {
    let spend = |rho: f64| ub.iter().zip(w).map(|(u, wi)| rho.min(*u) * wi).sum::<f64>();
    let top = ub.iter().copied().fold(0.0, f64::max);
    if spend(top) <= budget {
        return ub.to_vec();
    }
    let (mut lo, mut hi) = (0.0, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if spend(mid) > budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    ub.iter().map(|u| lo.min(*u)).collect()
}

/// Box `[0, 1]^N` in capacity-scaled coordinates intersected with the budget
/// half-space.
#[derive(Debug, Clone)]
struct FeasibleSet {
    ub: Vec<f64>,
    /// Budget weights in scaled coordinates (`w_i * ub_i`).
    a: Vec<f64>,
    budget: f64,
}

impl FeasibleSet {
    fn new(ub: Vec<f64>, w: &[f64], budget: f64) -> Self {
        let a = ub.iter().zip(w).map(|(u, wi)| u * wi).collect();
        FeasibleSet { ub, a, budget }
    }

    fn to_rates(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.ub).map(|(ui, b)| ui * b).collect()
    }

    fn to_unit(&self, r: &[f64]) -> Vec<f64> {
        r.iter().zip(&self.ub).map(|(ri, b)| if *b > 0.0 { ri / b } else { 0.0 }).collect()
    }

    fn spend(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.a).map(|(ui, ai)| ui * ai).sum()
    }

    /// Euclidean projection.
    fn project(&self, u: &[f64]) -> Vec<f64> {
        let clip = |lambda: f64| -> Vec<f64> {
            u.iter()
                .zip(&self.a)
                .zip(&self.ub)
                .map(|((ui, ai), b)| if *b > 0.0 { (ui - lambda * ai).clamp(0.0, 1.0) } else { 0.0 })
                .collect()
        };
        let boxed = clip(0.0);
        if self.spend(&boxed) <= self.budget {
            return boxed;
        }
        // spend(clip(lambda)) is non-increasing in lambda and reaches 0.
        let mut hi = u
            .iter()
            .zip(&self.a)
            .filter(|(_, ai)| **ai > 0.0)
            .map(|(ui, ai)| ui.max(0.0) / ai)
            .fold(0.0, f64::max);
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.spend(&clip(mid)) > self.budget {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        clip(hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ProjectedGradient,
    FunctionChange,
    /// No sufficient-decrease step could be found; the iterate is at the
    /// objective's noise floor.
    LineSearchStall,
    IterationLimit,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub evaluations: usize,
    pub projected_gradient_norm: f64,
    pub termination: Termination,
    /// 0-based piece indices resting on their lower / upper bound.
    pub active_lower: Vec<usize>,
    pub active_upper: Vec<usize>,
    pub budget_active: bool,
    /// Objective at every accepted iterate.
    pub history: Vec<f64>,
    /// Which starting point produced the reported policy.
    pub start_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalPolicy {
    /// Release rate per piece (mosquitoes/day).
    pub values: Vec<f64>,
    pub objective: f64,
    pub breakdown: CostBreakdown,
    pub peak_hospitalized: f64,
    pub peak_day: u32,
    pub diagnostics: SolverDiagnostics,
}

/// Solves from the standard multistart set and returns the best policy.
pub fn solve(problem: &SingleObjectiveProblem) -> Result<OptimalPolicy> {
    problem.validate()?;
    let mut starts = problem.default_starts()?;
    if !problem.settings.multistart {
        starts.truncate(1);
    }
    solve_from(problem, &starts)
}

/// Solves from each of `starts` (projected onto the feasible set) and
/// returns the best result. Ties go to the earliest start.
pub fn solve_from(problem: &SingleObjectiveProblem, starts: &[Vec<f64>]) -> Result<OptimalPolicy> {
    if starts.is_empty() {
        return Err(Error::InvalidInput("at least one starting point is required".into()));
    }
    let results: Vec<Result<OptimalPolicy>> = starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut p = run_spg(problem, s)?;
            p.diagnostics.start_index = i;
            Ok(p)
        })
        .collect();
    let mut best: Option<OptimalPolicy> = None;
    let mut first_err = None;
    for r in results {
        match r {
            Ok(p) => {
                if best.as_ref().map_or(true, |b| p.objective < b.objective) {
                    best = Some(p);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.expect("no results and no errors"))
}

struct Evaluator<'a> {
    problem: &'a SingleObjectiveProblem,
    set: FeasibleSet,
    fd_steps: Vec<f64>,
    evaluations: std::sync::atomic::AtomicUsize,
}

impl<'a> Evaluator<'a> {
    fn value(&self, u: &[f64]) -> Result<Evaluation> {
        self.evaluations.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        self.problem.evaluate(&self.set.to_rates(u))
    }

    /// Forward-difference gradient with respect to the scaled variables.
    fn gradient(&self, u: &[f64], f0: f64) -> Result<Vec<f64>> {
        (0..u.len())
            .into_par_iter()
            .map(|i| {
                let b = self.set.ub[i];
                if b <= 0.0 {
                    return Ok(0.0);
                }
                let h = self.fd_steps[i] / b;
                // Step backward when a forward step would leave the box.
                let h = if u[i] + h > 1.0 { -h } else { h };
                let mut probe = u.to_vec();
                probe[i] += h;
                let f = self.value(&probe)?.value;
                Ok((f - f0) / h)
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn run_spg(problem: &SingleObjectiveProblem, start: &[f64]) -> Result<OptimalPolicy> {
    let settings = problem.settings;
    let ub = problem.upper_bounds()?;
    let set = FeasibleSet::new(ub.clone(), &problem.budget_weights(), problem.budget);
    let fd_steps = ub.iter().map(|p| (settings.fd_relative_step * p).max(settings.fd_min_step)).collect();
    let ev = Evaluator { problem, set: set.clone(), fd_steps, evaluations: 0.into() };

    let mut u = set.project(&set.to_unit(start));
    let mut current = ev.value(&u)?;
    let mut g = ev.gradient(&u, current.value)?;
    let mut history = vec![current.value];
    let mut alpha = 1.0 / inf_norm(&g).max(f64::MIN_POSITIVE);
    let mut iterations = 0;

    let pg_norm = |u: &[f64], g: &[f64], f: f64| {
        let scale = f.abs().max(1.0);
        let moved: Vec<f64> = u.iter().zip(g).map(|(ui, gi)| ui - gi / scale).collect();
        let p = set.project(&moved);
        p.iter().zip(u).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    };

    let termination = loop {
        if pg_norm(&u, &g, current.value) < settings.gtol {
            break Termination::ProjectedGradient;
        }
        if iterations >= settings.max_iterations {
            break Termination::IterationLimit;
        }
        iterations += 1;

        // Try the spectral step first, then plain steepest descent.
        let steepest = 1.0 / inf_norm(&g).max(f64::MIN_POSITIVE);
        let mut accepted = None;
        for step in [alpha, steepest] {
            let target: Vec<f64> = u.iter().zip(&g).map(|(ui, gi)| ui - step * gi).collect();
            let d: Vec<f64> = set.project(&target).iter().zip(&u).map(|(p, ui)| p - ui).collect();
            let slope = dot(&g, &d);
            if inf_norm(&d) < 1e-14 || slope >= 0.0 {
                continue;
            }
            let mut lambda = 1.0;
            while lambda >= 1e-8 {
                let trial: Vec<f64> = u.iter().zip(&d).map(|(ui, di)| (ui + lambda * di).clamp(0.0, 1.0)).collect();
                let e = ev.value(&trial)?;
                if e.value <= current.value + 1e-4 * lambda * slope {
                    accepted = Some((trial, e));
                    break;
                }
                lambda *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
        }
        let Some((u_new, e_new)) = accepted else {
            break Termination::LineSearchStall;
        };
        let g_new = ev.gradient(&u_new, e_new.value)?;
        let s: Vec<f64> = u_new.iter().zip(&u).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let gmax = inf_norm(&g_new).max(f64::MIN_POSITIVE);
        alpha = if sy > 0.0 { (dot(&s, &s) / sy).clamp(1e-12 / gmax, 1e6 / gmax) } else { 1e3 / gmax };

        let change = (current.value - e_new.value).abs();
        let scale = current.value.abs().max(1.0);
        u = u_new;
        current = e_new;
        g = g_new;
        history.push(current.value);
        if change <= settings.ftol * scale {
            break Termination::FunctionChange;
        }
    };

    let values = set.to_rates(&u);
    let active_lower = u.iter().enumerate().filter(|(_, v)| **v <= 1e-9).map(|(i, _)| i).collect();
    let active_upper = u
        .iter()
        .enumerate()
        .filter(|(i, v)| **v >= 1.0 - 1e-9 && ub[*i] > 0.0)
        .map(|(i, _)| i)
        .collect();
    let budget_active = problem.budget.is_finite() && set.spend(&u) >= problem.budget * (1.0 - 1e-6);
    Ok(OptimalPolicy {
        values,
        objective: current.value,
        peak_hospitalized: current.peak_hospitalized,
        peak_day: current.peak_day,
        breakdown: current.breakdown,
        diagnostics: SolverDiagnostics {
            iterations,
            evaluations: ev.evaluations.into_inner(),
            projected_gradient_norm: pg_norm(&u, &g, current.value),
            termination,
            active_lower,
            active_upper,
            budget_active,
            history,
            start_index: 0,
        },
    })
}

/// Exhaustive search over a regular grid of `grid_points_per_dim` levels in
/// each piece's `[0, P_i]`. Limited to three pieces.
pub fn brute_force_oracle(problem: &SingleObjectiveProblem, grid_points_per_dim: usize) -> Result<OptimalPolicy> {
    problem.validate()?;
    if problem.pieces > 3 {
        return Err(Error::InvalidInput(format!("grid search supports at most 3 pieces, got {}", problem.pieces)));
    }
    if grid_points_per_dim < 2 {
        return Err(Error::InvalidInput("grid search needs at least 2 points per dimension".into()));
    }
    let ub = problem.upper_bounds()?;
    let n = problem.pieces;
    let g = grid_points_per_dim;
    let total = g.pow(n as u32);
    let candidates: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|i| {
                    let k = idx % g;
                    idx /= g;
                    ub[i] * k as f64 / (g - 1) as f64
                })
                .collect()
        })
        .filter(|v: &Vec<f64>| problem.is_feasible(v, 0.0).unwrap_or(false))
        .collect();
    let evaluated: Vec<Result<Evaluation>> = candidates.par_iter().map(|v| problem.evaluate(v)).collect();
    let mut best: Option<(usize, Evaluation)> = None;
    for (i, e) in evaluated.into_iter().enumerate() {
        let e = e?;
        if best.as_ref().map_or(true, |(_, b)| e.value < b.value) {
            best = Some((i, e));
        }
    }
    let (i, e) = best.ok_or_else(|| Error::Solver("no feasible grid point".into()))?;
    Ok(OptimalPolicy {
        values: candidates[i].clone(),
        objective: e.value,
        peak_hospitalized: e.peak_hospitalized,
        peak_day: e.peak_day,
        breakdown: e.breakdown,
        diagnostics: SolverDiagnostics {
            iterations: 0,
            evaluations: candidates.len(),
            projected_gradient_norm: f64::NAN,
            termination: Termination::Exhaustive,
            active_lower: Vec::new(),
            active_upper: Vec::new(),
            budget_active: false,
            history: vec![e.value],
            start_index: 0,
        },
    })
}
