//! Economic cost of a release policy: what the releases cost and what the
//! resulting hospital occupancy costs society.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{sample_daily, Trajectory};
use crate::model::{Compartment, StateVector};
use crate::release::{ReleaseSchedule, ScheduleKind};

/// How release spending is counted for piecewise schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReleaseAccounting {
    /// Sum of `C_r r(t)` over every day `t = 1..T`.
    #[default]
    Daily,
    /// Every piece is charged for `ceil(T/N)` days, regardless of how many
    /// days it actually covers.
    UniformPieces,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostConfig {
    /// Cost per released mosquito.
    pub release_unit_cost: f64,
    /// Cost per healthcare-seeking person per day.
    pub hospitalization_daily_cost: f64,
    pub currency: String,
    #[serde(default)]
    pub accounting: ReleaseAccounting,
}

impl Default for CostConfig {
    fn default() -> Self {
        CostConfig {
            release_unit_cost: 4.85,
            hospitalization_daily_cost: 3401.52,
            currency: "PHP".into(),
            accounting: ReleaseAccounting::Daily,
        }
    }
}

impl CostConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.release_unit_cost >= 0.0 && self.release_unit_cost.is_finite()) {
            problems.push(format!("release_unit_cost must be finite and non-negative (got {})", self.release_unit_cost));
        }
        if !(self.hospitalization_daily_cost >= 0.0 && self.hospitalization_daily_cost.is_finite()) {
            problems.push(format!(
                "hospitalization_daily_cost must be finite and non-negative (got {})",
                self.hospitalization_daily_cost
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub release_cost: f64,
    pub societal_cost: f64,
    pub total_cost: f64,
    /// Mosquitoes released, counted under the active accounting.
    pub total_release: f64,
    /// Per-day release cost for days `1..=T`.
    pub daily_release_cost: Vec<f64>,
    /// Per-day societal cost for days `1..=T`.
    pub daily_societal_cost: Vec<f64>,
}

/// Cost of `schedule` given daily states for days `0..=T` (day 0 is not charged).
pub fn objective_from_daily(daily: &[StateVector], schedule: &ReleaseSchedule, cc: &CostConfig) -> Result<CostBreakdown> {
    let horizon = schedule.horizon as usize;
    if daily.len() != horizon + 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} daily states for a {horizon}-day horizon, got {}",
            horizon + 1,
            daily.len()
        )));
    }
    let releases = schedule.daily();
    let daily_release_cost: Vec<f64> = releases.iter().map(|r| cc.release_unit_cost * r).collect();
    let daily_societal_cost: Vec<f64> =
        daily[1..].iter().map(|s| cc.hospitalization_daily_cost * s[Compartment::Jh]).collect();

    let (release_cost, total_release) = match (&schedule.kind, cc.accounting) {
        (ScheduleKind::Piecewise { values }, ReleaseAccounting::UniformPieces) => {
            let ell = piece_length(horizon as u32, values.len()) as f64;
            let total: f64 = values.iter().map(|v| ell * v).sum();
            (cc.release_unit_cost * total, total)
        }
        _ => (daily_release_cost.iter().sum(), releases.iter().sum()),
    };
    let societal_cost: f64 = daily_societal_cost.iter().sum();
    Ok(CostBreakdown {
        release_cost,
        societal_cost,
        total_cost: release_cost + societal_cost,
        total_release,
        daily_release_cost,
        daily_societal_cost,
    })
}

/// Cost of `schedule` along `traj` over `t = 1..=horizon`.
pub fn objective(traj: &Trajectory, schedule: &ReleaseSchedule, cc: &CostConfig, horizon: u32) -> Result<CostBreakdown> {
    if schedule.horizon != horizon {
        return Err(Error::InvalidInput(format!(
            "schedule horizon {} does not match the requested horizon {horizon}",
            schedule.horizon
        )));
    }
    let daily = sample_daily(traj, horizon)?;
    objective_from_daily(&daily, schedule, cc)
}

/// `ceil(T / N)`.
pub fn piece_length(horizon: u32, pieces: usize) -> u32 {
    horizon.div_ceil(pieces as u32)
}

/// Per-mosquito cost of a program with annual cost `total_program_cost`
/// releasing `weekly_release` mosquitoes each week, converted with `fx`.
pub fn unit_cost_from_program(total_program_cost: f64, weekly_release: f64, fx: f64) -> Result<f64> {
    if !(weekly_release > 0.0) {
        return Err(Error::InvalidInput(format!("weekly release must be positive, got {weekly_release}")));
    }
    Ok(total_program_cost * fx / (weekly_release * 52.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn flat_days(n: usize, jh: f64) -> Vec<StateVector> {
        let mut s = StateVector::ZERO;
        s[Compartment::Sh] = 1.0;
        s[Compartment::Jh] = jh;
        vec![s; n]
    }

    #[test]
    fn zero_everything() {
        let b = objective_from_daily(&flat_days(366, 0.0), &ReleaseSchedule::zero(365), &CostConfig::default()).unwrap();
        assert_eq!((b.release_cost, b.societal_cost, b.total_cost), (0.0, 0.0, 0.0));
    }

    #[test]
    fn constant_release_cost() {
        let s = ReleaseSchedule::constant(1_000_000.0, 365).unwrap();
        let b = objective_from_daily(&flat_days(366, 0.0), &s, &CostConfig::default()).unwrap();
        assert_relative_eq!(b.release_cost, 1_770_250_000.0, max_relative = 1e-12);
    }

    #[test]
    fn day_zero_is_not_charged() {
        let mut days = flat_days(11, 0.0);
        days[0][Compartment::Jh] = 1e9;
        days[10][Compartment::Jh] = 2.0;
        let cc = CostConfig { hospitalization_daily_cost: 3.0, ..CostConfig::default() };
        let b = objective_from_daily(&days, &ReleaseSchedule::zero(10), &cc).unwrap();
        assert_eq!(b.societal_cost, 6.0);
        assert_eq!(b.daily_societal_cost.len(), 10);
    }

    #[test]
    fn horizon_mismatch() {
        assert!(objective_from_daily(&flat_days(10, 0.0), &ReleaseSchedule::zero(365), &CostConfig::default()).is_err());
    }

    #[test]
    fn uniform_piece_accounting() {
        let s = ReleaseSchedule::piecewise(vec![1.0; 12], 365).unwrap();
        let cc = CostConfig { release_unit_cost: 1.0, accounting: ReleaseAccounting::UniformPieces, ..CostConfig::default() };
        let b = objective_from_daily(&flat_days(366, 0.0), &s, &cc).unwrap();
        assert_eq!(b.release_cost, 372.0);
        let daily = objective_from_daily(&flat_days(366, 0.0), &s, &CostConfig { accounting: ReleaseAccounting::Daily, ..cc })
            .unwrap();
        assert_eq!(daily.release_cost, 365.0);
    }

    #[test]
    fn program_unit_cost() {
        assert_eq!(unit_cost_from_program(364.0, 7.0, 1.0).unwrap(), 1.0);
        let fx = 4.85 * 7_000_000.0 * 52.0 / 40_000_000.0;
        assert_relative_eq!(unit_cost_from_program(40_000_000.0, 7_000_000.0, fx).unwrap(), 4.85, max_relative = 1e-12);
        let a = unit_cost_from_program(1e6, 1e3, 2.0).unwrap();
        let b = unit_cost_from_program(1e6, 2e3, 2.0).unwrap();
        assert_relative_eq!(a, 2.0 * b, max_relative = 1e-15);
        assert!(unit_cost_from_program(1.0, 0.0, 1.0).is_err());
    }
}
