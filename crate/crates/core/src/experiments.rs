//! Scripted comparisons: release schemes, capacity ladders and unit-price
//! sensitivity.

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{objective_from_daily, CostBreakdown};
use crate::error::{Error, Result};
use crate::integrator::{integrate_adaptive, sample_daily};
use crate::model::{Compartment, StateVector};
use crate::optimize::{solve, CapacityFunction, ObjectiveKind, OptimalPolicy};
use crate::release::{normalize_same_peak, normalize_same_total, total_release, ReleaseSchedule};
use crate::scenario::Scenario;

/// Same-peak release magnitude for an unscaled population; multiplied by the
/// scenario scale.
pub const SAME_PEAK_REFERENCE: f64 = 1.1e7;

pub const UNIT_PRICES: [f64; 4] = [4.85, 4.00, 3.00, 2.00];
pub const CAPACITY_LADDER: [f64; 4] = [200_000.0, 500_000.0, 700_000.0, 1_000_000.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub label: String,
    pub peak_hospitalized: f64,
    pub peak_day: u32,
    pub total_release: f64,
    pub breakdown: CostBreakdown,
    #[serde(skip)]
    pub daily: Vec<StateVector>,
}

/// Peak of `J_h` over the daily samples and the day it occurs (first on ties).
pub fn peak_hospitalized(daily: &[StateVector]) -> (f64, u32) {
    daily
        .iter()
        .enumerate()
        .fold((f64::NEG_INFINITY, 0), |best, (d, s)| if s[Compartment::Jh] > best.0 { (s[Compartment::Jh], d as u32) } else { best })
}

pub fn simulate(scenario: &Scenario, schedule: &ReleaseSchedule) -> Result<SimulationSummary> {
    let traj = integrate_adaptive(&scenario.params, &scenario.initial(), scenario.horizon, schedule, &scenario.integrator)?;
    let daily = sample_daily(&traj, scenario.horizon)?;
    let breakdown = objective_from_daily(&daily, schedule, &scenario.cost)?;
    let (peak, day) = peak_hospitalized(&daily);
    Ok(SimulationSummary {
        label: schedule.label(),
        peak_hospitalized: peak,
        peak_day: day,
        total_release: total_release(schedule),
        breakdown,
        daily,
    })
}

/// Fractional reduction of `value` relative to `baseline`.
pub fn reduction(value: f64, baseline: f64) -> f64 {
    1.0 - value / baseline
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeResult {
    pub label: String,
    pub normalization: &'static str,
    pub peak_rate: f64,
    pub total_release: f64,
    pub peak_hospitalized: f64,
    pub peak_day: u32,
    pub peak_reduction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeComparison {
    pub baseline_peak: f64,
    pub baseline_peak_day: u32,
    pub same_peak: Vec<SchemeResult>,
    pub same_total: Vec<SchemeResult>,
}

/// The four reference shapes (constant, linear, bump at day 50, bump at day
/// 100), compared at equal peak rate `peak` and at equal total `365 peak`.
pub fn release_schemes(scenario: &Scenario, peak: f64) -> Result<SchemeComparison> {
    let t = scenario.horizon;
    let shapes = vec![
        ReleaseSchedule::constant(1.0, t)?,
        ReleaseSchedule::linear(1.0, t)?,
        ReleaseSchedule::bump(1.0, 50.0, t)?,
        ReleaseSchedule::bump(1.0, 100.0, t)?,
    ];
    let baseline = simulate(scenario, &ReleaseSchedule::zero(t))?;
    let run = |schedules: Vec<ReleaseSchedule>, normalization: &'static str| -> Result<Vec<SchemeResult>> {
        schedules
            .par_iter()
            .map(|s| {
                let r = simulate(scenario, s)?;
                Ok(SchemeResult {
                    label: r.label,
                    normalization,
                    peak_rate: s.peak(),
                    total_release: r.total_release,
                    peak_hospitalized: r.peak_hospitalized,
                    peak_day: r.peak_day,
                    peak_reduction: reduction(r.peak_hospitalized, baseline.peak_hospitalized),
                })
            })
            .collect()
    };
    Ok(SchemeComparison {
        baseline_peak: baseline.peak_hospitalized,
        baseline_peak_day: baseline.peak_day,
        same_peak: run(normalize_same_peak(&shapes, peak)?, "same_peak")?,
        same_total: run(normalize_same_total(&shapes, peak * t as f64)?, "same_total")?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyRow {
    pub initial_capacity: f64,
    pub unit_price: f64,
    pub values: Vec<f64>,
    pub total_release: f64,
    pub release_cost: f64,
    pub societal_cost: f64,
    pub total_cost: f64,
    pub peak_hospitalized: f64,
    pub peak_day: u32,
    pub peak_reduction: f64,
}

/// `scenario` with its capacity ramp restarted at `initial` (the peak and peak
/// day are kept; a non-ramp capacity is replaced by a constant).
pub fn with_initial_capacity(scenario: &Scenario, initial: f64) -> Scenario {
    let capacity = match scenario.capacity {
        CapacityFunction::Ramp { peak, peak_day, .. } => CapacityFunction::Ramp { initial, peak: peak.max(initial), peak_day },
        _ => CapacityFunction::Constant { value: initial },
    };
    Scenario { capacity, ..scenario.clone() }
}

fn policy_row(scenario: &Scenario, baseline_peak: f64, policy: OptimalPolicy) -> PolicyRow {
    PolicyRow {
        initial_capacity: scenario.capacity.at(1.0).unwrap_or(f64::NAN),
        unit_price: scenario.cost.release_unit_cost,
        total_release: policy.breakdown.total_release,
        release_cost: policy.breakdown.release_cost,
        societal_cost: policy.breakdown.societal_cost,
        total_cost: policy.breakdown.total_cost,
        peak_hospitalized: policy.peak_hospitalized,
        peak_day: policy.peak_day,
        peak_reduction: reduction(policy.peak_hospitalized, baseline_peak),
        values: policy.values,
    }
}

fn solve_grid(cells: Vec<Scenario>) -> Result<Vec<PolicyRow>> {
    let first = cells.first().ok_or_else(|| Error::InvalidInput("empty experiment grid".into()))?;
    let baseline = simulate(first, &ReleaseSchedule::zero(first.horizon))?.peak_hospitalized;
    cells
        .par_iter()
        .map(|s| Ok(policy_row(s, baseline, solve(&s.problem(ObjectiveKind::Total))?)))
        .collect()
}

/// Optimal policies for each initial capacity in `ladder`.
pub fn capacity_ladder(scenario: &Scenario, ladder: &[f64]) -> Result<Vec<PolicyRow>> {
    solve_grid(ladder.iter().map(|c| with_initial_capacity(scenario, *c)).collect())
}

/// Optimal policies at each unit price for one initial capacity.
pub fn unit_price_table(scenario: &Scenario, initial_capacity: f64, prices: &[f64]) -> Result<Vec<PolicyRow>> {
    let base = with_initial_capacity(scenario, initial_capacity);
    solve_grid(
        prices
            .iter()
            .map(|p| {
                let mut s = base.clone();
                s.cost.release_unit_cost = *p;
                s
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_ties_go_to_first_day() {
        let mut a = StateVector::ZERO;
        a[Compartment::Jh] = 2.0;
        assert_eq!(peak_hospitalized(&[StateVector::ZERO, a, a]), (2.0, 1));
    }

    #[test]
    fn ramp_restart_keeps_shape() {
        let s = Scenario::preset("quezon-city-ramp").unwrap();
        let r = with_initial_capacity(&s, 500_000.0);
        assert_eq!(r.capacity, CapacityFunction::Ramp { initial: 500_000.0, peak: 3_500_000.0, peak_day: 94.0 });
        let q = with_initial_capacity(&Scenario::preset("quezon-city").unwrap(), 7.0);
        assert_eq!(q.capacity, CapacityFunction::Constant { value: 7.0 });
    }
}
