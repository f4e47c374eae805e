//! Time integration of the model under a release schedule.
//!
//! [`integrate_adaptive`] is a Dormand-Prince 5(4) pair with proportional
//! step control and its order-4 continuous extension. [`integrate_fixed_rk4`]
//! is the classical fixed-step method, kept as an independent reference.
//! Both restart exactly at every discontinuity of the schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, IntegrationFailure, Result};
use crate::model::{self, Compartment, ModelParameters, StateVector, DIM};
use crate::release::ReleaseSchedule;

/// Negative values smaller than this fraction of the state's one-norm are
/// treated as round-off and clamped to zero.
pub const ROUNDOFF_CLAMP: f64 = 1e-9;

/// Relative excess of `A + A_w` over `K_a` that triggers a diagnostic.
pub const CAPACITY_EXCESS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Days.
    pub max_step: f64,
    /// Days.
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { rel_tol: 1e-6, abs_tol: 1e-8, max_step: 1.0, initial_step: 0.01, max_steps: 1_000_000 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.rel_tol > 0.0) {
            problems.push(format!("rel_tol must be positive (got {})", self.rel_tol));
        }
        if !(self.abs_tol > 0.0) {
            problems.push(format!("abs_tol must be positive (got {})", self.abs_tol));
        }
        if !(self.max_step > 0.0) {
            problems.push(format!("max_step must be positive (got {})", self.max_step));
        }
        if !(self.initial_step > 0.0) {
            problems.push(format!("initial_step must be positive (got {})", self.initial_step));
        }
        if self.max_steps == 0 {
            problems.push("max_steps must be at least 1".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Same settings with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        IntegratorConfig { rel_tol: self.rel_tol / factor, abs_tol: self.abs_tol / factor, ..*self }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
    pub clamped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Diagnostic {
    /// `A + A_w` exceeded the carrying capacity; reported once, at the first
    /// accepted step where it happens.
    CapacityExceeded { t: f64, aquatic: f64, k_a: f64 },
}

/// One accepted step's continuous extension.
#[derive(Debug, Clone, PartialEq)]
struct DenseStep {
    t0: f64,
    h: f64,
    coeffs: [StateVector; 5],
}

impl DenseStep {
    fn eval(&self, t: f64) -> StateVector {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        let mut out = [0.0; DIM];
        for i in 0..DIM {
            out[i] = r1.0[i] + s * (r2.0[i] + s1 * (r3.0[i] + s * (r4.0[i] + s1 * r5.0[i])));
        }
        StateVector(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Accepted (or landed) states, strictly increasing in time, from 0 to T.
    pub nodes: Vec<(f64, StateVector)>,
    pub stats: StepStats,
    pub diagnostics: Vec<Diagnostic>,
    pub horizon: u32,
    dense: Vec<DenseStep>,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        &self.nodes.last().expect("trajectory always holds the initial state").1
    }

    pub fn has_dense_output(&self) -> bool {
        !self.dense.is_empty()
    }

    /// State at time `t`, either a landed node or the continuous extension.
    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        if let Ok(i) = self.nodes.binary_search_by(|(tn, _)| tn.total_cmp(&t)) {
            return Ok(self.nodes[i].1);
        }
        let i = self.dense.partition_point(|d| d.t0 + d.h < t);
        match self.dense.get(i) {
            Some(d) if d.t0 <= t && t <= d.t0 + d.h => Ok(d.eval(t)),
            _ => Err(Error::InvalidInput(format!("trajectory has no sample or dense output covering t = {t}"))),
        }
    }
}

/// States at integer days `0..=horizon`.
pub fn sample_daily(traj: &Trajectory, horizon: u32) -> Result<Vec<StateVector>> {
    let end = traj.nodes.last().map(|n| n.0).unwrap_or(0.0);
    if end < horizon as f64 {
        return Err(Error::InvalidInput(format!("trajectory ends at t = {end}, shorter than the horizon {horizon}")));
    }
    (0..=horizon).map(|d| traj.state_at(d as f64)).collect()
}

// Dormand-Prince 5(4) coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

fn combine(y: &StateVector, h: f64, terms: &[(f64, &StateVector)]) -> StateVector {
    let mut out = y.0;
    for i in 0..DIM {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k.0[i];
        }
        out[i] += h * acc;
    }
    StateVector(out)
}

/// Shared bookkeeping for both integrators: evaluating the right-hand side,
/// the round-off clamp and diagnostics.
struct Rhs<'a> {
    params: &'a ModelParameters,
    schedule: &'a ReleaseSchedule,
    stats: StepStats,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Rhs<'a> {
    fn eval(&mut self, t: f64, y: &StateVector, lo: f64, hi: f64) -> Result<StateVector> {
        self.stats.rhs_evaluations += 1;
        let release = self.schedule.rate_in_segment(t, lo, hi);
        model::rhs(t, y, self.params, release)
            .map_err(|e| Error::Integration { t, reason: IntegrationFailure::Rhs(e.to_string()) })
    }

    /// Clamps round-off negatives, rejects genuine ones, records diagnostics.
    fn settle(&mut self, t: f64, y: &mut StateVector) -> Result<()> {
        if !y.is_finite() {
            return Err(Error::Integration { t, reason: IntegrationFailure::NonFinite });
        }
        let floor = ROUNDOFF_CLAMP * y.one_norm();
        for c in Compartment::ALL {
            let v = y[c];
            if v < 0.0 {
                if -v <= floor {
                    y[c] = 0.0;
                    self.stats.clamped += 1;
                } else {
                    return Err(Error::Integration {
                        t,
                        reason: IntegrationFailure::Positivity { compartment: c.name(), value: v },
                    });
                }
            }
        }
        let aquatic = y.aquatic_total();
        let k_a = self.params.k_a;
        if aquatic > k_a * (1.0 + CAPACITY_EXCESS_TOL)
            && !self.diagnostics.iter().any(|d| matches!(d, Diagnostic::CapacityExceeded { .. }))
        {
            self.diagnostics.push(Diagnostic::CapacityExceeded { t, aquatic, k_a });
        }
        Ok(())
    }
}

/// Segment boundaries `0 = b_0 < b_1 < ... < b_m = T`.
fn segments(schedule: &ReleaseSchedule, horizon: u32) -> Vec<f64> {
    let end = horizon as f64;
    let mut out = vec![0.0];
    out.extend(schedule.breakpoints().into_iter().filter(|b| *b > 0.0 && *b < end));
    out.push(end);
    out.dedup();
    out
}

fn check_inputs(initial: &StateVector, schedule: &ReleaseSchedule, horizon: u32) -> Result<()> {
    if !initial.is_finite() || initial.0.iter().any(|v| *v < 0.0) {
        return Err(Error::InvalidInput("initial state must be finite and non-negative".into()));
    }
    if schedule.horizon < horizon {
        return Err(Error::InvalidInput(format!(
            "schedule covers {} days but the horizon is {horizon}",
            schedule.horizon
        )));
    }
    schedule.validate()
}

/// Adaptive Dormand-Prince integration over `[0, horizon]`.
pub fn integrate_adaptive(
    params: &ModelParameters,
    initial: &StateVector,
    horizon: u32,
    schedule: &ReleaseSchedule,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    check_inputs(initial, schedule, horizon)?;
    let mut f = Rhs { params, schedule, stats: StepStats::default(), diagnostics: Vec::new() };
    let mut y = *initial;
    f.settle(0.0, &mut y)?;
    let mut nodes = vec![(0.0, y)];
    let mut dense = Vec::new();
    let mut h = config.initial_step.min(config.max_step);
    let bounds = segments(schedule, horizon);

    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut t = lo;
        // Restart: no first-same-as-last reuse across a breakpoint.
        let mut k1 = f.eval(t, &y, lo, hi)?;
        while t < hi {
            if f.stats.accepted + f.stats.rejected >= config.max_steps {
                return Err(Error::Integration { t, reason: IntegrationFailure::StepLimit(config.max_steps) });
            }
            h = h.min(config.max_step);
            let remaining = hi - t;
            let landing = h >= remaining * (1.0 - 1e-12) || remaining - h < 1e-9 * hi.max(1.0);
            if landing {
                h = remaining;
            }
            if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::Integration { t, reason: IntegrationFailure::StepUnderflow(h) });
            }

            let y2 = combine(&y, h, &[(A21, &k1)]);
            let k2 = f.eval(t + C2 * h, &y2, lo, hi)?;
            let y3 = combine(&y, h, &[(A31, &k1), (A32, &k2)]);
            let k3 = f.eval(t + C3 * h, &y3, lo, hi)?;
            let y4 = combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k4 = f.eval(t + C4 * h, &y4, lo, hi)?;
            let y5 = combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k5 = f.eval(t + C5 * h, &y5, lo, hi)?;
            let y6 = combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let k6 = f.eval(t + h, &y6, lo, hi)?;
            let y_new = combine(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let t_new = if landing { hi } else { t + h };
            let k7 = f.eval(t_new, &y_new, lo, hi)?;

            let mut err = 0.0f64;
            for i in 0..DIM {
                let e = h * (E1 * k1.0[i] + E3 * k3.0[i] + E4 * k4.0[i] + E5 * k5.0[i] + E6 * k6.0[i] + E7 * k7.0[i]);
                let scale = config.abs_tol + config.rel_tol * y.0[i].abs().max(y_new.0[i].abs());
                err = err.max(e.abs() / scale);
            }
            if !err.is_finite() {
                f.stats.rejected += 1;
                h *= MIN_FACTOR;
                continue;
            }

            if err <= 1.0 {
                let mut coeffs = [StateVector::ZERO; 5];
                for i in 0..DIM {
                    let dy = y_new.0[i] - y.0[i];
                    let bspl = h * k1.0[i] - dy;
                    coeffs[0].0[i] = y.0[i];
                    coeffs[1].0[i] = dy;
                    coeffs[2].0[i] = bspl;
                    coeffs[3].0[i] = dy - h * k7.0[i] - bspl;
                    coeffs[4].0[i] = h
                        * (D1 * k1.0[i] + D3 * k3.0[i] + D4 * k4.0[i] + D5 * k5.0[i] + D6 * k6.0[i] + D7 * k7.0[i]);
                }
                dense.push(DenseStep { t0: t, h: t_new - t, coeffs });
                let mut accepted = y_new;
                f.settle(t_new, &mut accepted)?;
                k1 = if accepted == y_new { k7 } else { f.eval(t_new, &accepted, lo, hi)? };
                y = accepted;
                t = t_new;
                nodes.push((t, y));
                f.stats.accepted += 1;
                let factor = if err == 0.0 { MAX_FACTOR } else { (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR) };
                // A landing step may be artificially short; do not let it shrink the next one.
                h = if landing { h.max(config.initial_step) * factor } else { h * factor };
            } else {
                f.stats.rejected += 1;
                h *= (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            }
        }
    }

    Ok(Trajectory { nodes, stats: f.stats, diagnostics: f.diagnostics, horizon, dense })
}

/// Classical fixed-step RK4. The step must divide one day; steps are split at
/// schedule breakpoints. Nodes are recorded at integer days and breakpoints.
pub fn integrate_fixed_rk4(
    params: &ModelParameters,
    initial: &StateVector,
    horizon: u32,
    schedule: &ReleaseSchedule,
    h: f64,
) -> Result<Trajectory> {
    let per_day = 1.0 / h;
    if !(h > 0.0 && h <= 1.0) || (per_day - per_day.round()).abs() > 1e-9 * per_day {
        return Err(Error::InvalidInput(format!("fixed step {h} must divide one day")));
    }
    check_inputs(initial, schedule, horizon)?;
    let steps_per_day = per_day.round() as u64;
    let mut f = Rhs { params, schedule, stats: StepStats::default(), diagnostics: Vec::new() };
    let mut y = *initial;
    f.settle(0.0, &mut y)?;
    let mut nodes = vec![(0.0, y)];
    let bounds = segments(schedule, horizon);

    let mut n: u64 = 0;
    let mut t = 0.0;
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        while t < hi {
            let grid_next = (n + 1) as f64 / steps_per_day as f64;
            let on_grid = grid_next <= hi + 1e-12 * hi.max(1.0);
            let t_next = if on_grid { grid_next } else { hi };
            let dt = t_next - t;
            let k1 = f.eval(t, &y, lo, hi)?;
            let k2 = f.eval(t + 0.5 * dt, &y.axpy(0.5 * dt, &k1), lo, hi)?;
            let k3 = f.eval(t + 0.5 * dt, &y.axpy(0.5 * dt, &k2), lo, hi)?;
            let k4 = f.eval(t + dt, &y.axpy(dt, &k3), lo, hi)?;
            let mut y_new = combine(&y, dt, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
            f.settle(t_next, &mut y_new)?;
            y = y_new;
            f.stats.accepted += 1;
            if on_grid {
                n += 1;
            }
            t = t_next;
            if (on_grid && n % steps_per_day == 0) || t >= hi {
                nodes.push((t, y));
            }
        }
    }
    nodes.dedup_by(|a, b| a.0 == b.0);
    Ok(Trajectory { nodes, stats: f.stats, diagnostics: f.diagnostics, horizon, dense: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::reference_initial_state;
    use approx::assert_relative_eq;
    use Compartment::*;

    fn params() -> ModelParameters {
        ModelParameters::reference(15.0 * reference_initial_state().aquatic_total())
    }

    fn humans_only() -> StateVector {
        let mut s = StateVector::ZERO;
        s[Sh] = 1000.0;
        s
    }

    #[test]
    fn human_total_closed_form() {
        let p = params();
        let traj = integrate_adaptive(&p, &humans_only(), 365, &ReleaseSchedule::zero(365), &IntegratorConfig::default())
            .unwrap();
        let exact = 1000.0 * ((p.b_h - p.mu_h) * 365.0).exp();
        assert_relative_eq!(traj.final_state()[Sh], exact, max_relative = 1e-8);
        assert_eq!(traj.nodes.first().unwrap().0, 0.0);
        assert_eq!(traj.nodes.last().unwrap().0, 365.0);
        assert!(traj.nodes.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn rk4_convergence_order() {
        let p = params();
        let mut s = humans_only();
        s[Sh] = 1.0e6;
        let exact = 1.0e6 * ((p.b_h - p.mu_h) * 365.0).exp();
        // Sharpen the rate so the truncation error sits well above round-off.
        let mut fast = p;
        fast.b_h = 0.02;
        fast.mu_h = 0.0;
        let exact_fast = 1.0e6 * (0.02f64 * 365.0).exp();
        let err = |h: f64| {
            let t = integrate_fixed_rk4(&fast, &s, 365, &ReleaseSchedule::zero(365), h).unwrap();
            (t.final_state()[Sh] - exact_fast).abs()
        };
        let ratio = err(0.5) / err(0.25);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
        let t = integrate_fixed_rk4(&p, &s, 365, &ReleaseSchedule::zero(365), 0.01).unwrap();
        assert_relative_eq!(t.final_state()[Sh], exact, max_relative = 1e-12);
    }

    #[test]
    fn zero_horizon() {
        let s = reference_initial_state();
        let t = integrate_fixed_rk4(&params(), &s, 0, &ReleaseSchedule::zero(0), 0.01).unwrap();
        assert_eq!(t.nodes, vec![(0.0, s)]);
        let t = integrate_adaptive(&params(), &s, 0, &ReleaseSchedule::zero(0), &IntegratorConfig::default()).unwrap();
        assert_eq!(sample_daily(&t, 0).unwrap(), vec![s]);
    }

    #[test]
    fn rk4_rejects_bad_step() {
        let s = reference_initial_state();
        assert!(integrate_fixed_rk4(&params(), &s, 10, &ReleaseSchedule::zero(10), 0.3).is_err());
    }

    #[test]
    fn vector_free_population_stays_vector_free() {
        let mut s = humans_only();
        s[Ih] = 50.0;
        s[Jh] = 5.0;
        let traj =
            integrate_adaptive(&params(), &s, 120, &ReleaseSchedule::zero(120), &IntegratorConfig::default()).unwrap();
        let daily = sample_daily(&traj, 120).unwrap();
        for w in daily.windows(2) {
            assert!(w[1][Ih] <= w[0][Ih]);
            assert!(w[1][Jh] <= w[0][Jh] || w[0][Jh] < 1e-9);
        }
        assert!(daily[120][Ih] < 50.0 * 1e-3);
        for d in &daily {
            for c in Compartment::ALL.iter().filter(|c| !c.is_human()) {
                assert_eq!(d[*c], 0.0);
            }
        }
    }

    #[test]
    fn daily_sample_count_and_constant_state() {
        let s = StateVector::ZERO;
        let mut p = params();
        p.b_h = 0.0;
        p.mu_h = 0.0;
        let mut h = s;
        h[Rh] = 10.0;
        let traj = integrate_adaptive(&p, &h, 365, &ReleaseSchedule::zero(365), &IntegratorConfig::default()).unwrap();
        let daily = sample_daily(&traj, 365).unwrap();
        assert_eq!(daily.len(), 366);
        assert!(daily.iter().all(|d| *d == h));
        assert!(sample_daily(&traj, 366).is_err());
    }

    #[test]
    fn dense_output_matches_landing() {
        let p = params();
        let s = reference_initial_state();
        let schedule = ReleaseSchedule::constant(2.0e6, 30).unwrap();
        let cfg = IntegratorConfig { max_step: 7.0, ..IntegratorConfig::default() };
        let long = integrate_adaptive(&p, &s, 30, &schedule, &cfg).unwrap();
        let at10 = long.state_at(10.0).unwrap();
        let short = integrate_adaptive(&p, &s, 10, &schedule, &cfg.tightened(100.0)).unwrap();
        let landed = short.final_state();
        for c in Compartment::ALL {
            let scale = landed[c].abs().max(1.0);
            assert!((at10[c] - landed[c]).abs() / scale < 1e-6, "{c}: {} vs {}", at10[c], landed[c]);
        }
    }

    #[test]
    fn piecewise_breakpoints_are_nodes() {
        let p = params();
        let s = reference_initial_state();
        let schedule = ReleaseSchedule::piecewise(vec![1e6, 0.0, 5e5], 100).unwrap();
        let traj = integrate_adaptive(&p, &s, 100, &schedule, &IntegratorConfig::default()).unwrap();
        for b in schedule.breakpoints() {
            assert!(traj.nodes.iter().any(|(t, _)| *t == b), "missing breakpoint {b}");
        }
        let rk = integrate_fixed_rk4(&p, &s, 100, &schedule, 0.01).unwrap();
        for b in schedule.breakpoints() {
            assert!(rk.nodes.iter().any(|(t, _)| (*t - b).abs() < 1e-12));
        }
        assert_eq!(sample_daily(&rk, 100).unwrap().len(), 101);
    }

    #[test]
    fn deterministic_reruns() {
        let p = params();
        let s = reference_initial_state();
        let schedule = ReleaseSchedule::bump(1e6, 50.0, 200).unwrap();
        let a = integrate_adaptive(&p, &s, 200, &schedule, &IntegratorConfig::default()).unwrap();
        let b = integrate_adaptive(&p, &s, 200, &schedule, &IntegratorConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn genuine_negativity_is_an_error() {
        let mut p = params();
        p.k_a = 1.0e6;
        let s = reference_initial_state();
        // Far beyond capacity: eta turns negative and drains A below zero.
        let err = integrate_adaptive(&p, &s, 60, &ReleaseSchedule::constant(5e7, 60).unwrap(), &IntegratorConfig::default())
            .unwrap_err();
        assert!(matches!(err, Error::Integration { reason: IntegrationFailure::Positivity { .. }, .. }), "{err}");
    }

    #[test]
    fn capacity_excess_is_diagnosed() {
        let mut p = params();
        let s = reference_initial_state();
        p.k_a = 1.05 * s.aquatic_total();
        let traj = integrate_adaptive(&p, &s, 5, &ReleaseSchedule::constant(2e7, 5).unwrap(), &IntegratorConfig::default());
        match traj {
            Ok(t) => assert!(matches!(t.diagnostics.first(), Some(Diagnostic::CapacityExceeded { .. }))),
            Err(Error::Integration { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn step_limit() {
        let cfg = IntegratorConfig { max_steps: 3, ..IntegratorConfig::default() };
        let err = integrate_adaptive(&params(), &reference_initial_state(), 365, &ReleaseSchedule::zero(365), &cfg)
            .unwrap_err();
        assert!(matches!(err, Error::Integration { reason: IntegrationFailure::StepLimit(3), .. }));
    }
}
