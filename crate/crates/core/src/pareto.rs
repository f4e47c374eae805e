//! Release-cost versus societal-cost trade-off by the epsilon-constraint
//! method: minimize societal cost subject to a sweep of release-budget caps.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{solve_from, ObjectiveKind, OptimalPolicy, SingleObjectiveProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartMode {
    /// Each cap starts from the previous cap's solution plus the two
    /// budget-filling default starts.
    #[default]
    Warm,
    /// Every cap is solved independently from the standard multistart set.
    Cold,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoPoint {
    /// 1-based position in the sweep.
    pub k: usize,
    pub budget_cap: f64,
    pub release_cost: f64,
    pub societal_cost: f64,
    pub values: Vec<f64>,
    /// Failure message when the subproblem could not be solved.
    pub failure: Option<String>,
    /// Set by [`ParetoFront::mark_dominated`].
    pub dominated: bool,
}

impl ParetoPoint {
    pub fn solved(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoFront {
    pub points: Vec<ParetoPoint>,
    pub mode: StartMode,
}

impl ParetoFront {
    /// Solved points that no other solved point dominates, in sweep order.
    pub fn nondominated(&self) -> Vec<&ParetoPoint> {
        self.points.iter().filter(|p| p.solved() && !p.dominated).collect()
    }

    fn mark_dominated(&mut self) {
        let solved: Vec<usize> = (0..self.points.len()).filter(|&i| self.points[i].solved()).collect();
        let pairs: Vec<(f64, f64)> =
            solved.iter().map(|&i| (self.points[i].release_cost, self.points[i].societal_cost)).collect();
        let keep = filter_dominated(&pairs);
        for (j, &i) in solved.iter().enumerate() {
            self.points[i].dominated = !keep.contains(&j);
        }
    }
}

/// Evenly spaced caps `B_k = (k - 1) B_max / (K - 1)`, `k = 1..=K`.
pub fn budget_caps(points: usize, b_max: f64) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidInput(format!("a sweep needs at least 2 points, got {points}")));
    }
    if !(b_max > 0.0 && b_max.is_finite()) {
        return Err(Error::InvalidInput(format!("maximum budget must be positive and finite, got {b_max}")));
    }
    Ok((0..points).map(|k| k as f64 * b_max / (points - 1) as f64).collect())
}

fn subproblem(base: &SingleObjectiveProblem, cap: f64) -> SingleObjectiveProblem {
    SingleObjectiveProblem { budget: cap, objective: ObjectiveKind::Societal, ..base.clone() }
}

fn to_point(k: usize, cap: f64, result: Result<OptimalPolicy>) -> ParetoPoint {
    match result {
        Ok(p) => ParetoPoint {
            k,
            budget_cap: cap,
            release_cost: p.breakdown.release_cost,
            societal_cost: p.breakdown.societal_cost,
            values: p.values,
            failure: None,
            dominated: false,
        },
        Err(e) => ParetoPoint {
            k,
            budget_cap: cap,
            release_cost: f64::NAN,
            societal_cost: f64::NAN,
            values: Vec::new(),
            failure: Some(e.to_string()),
            dominated: false,
        },
    }
}

/// Sweeps `points` budget caps over `[0, b_max]`. The objective of `base` is
/// replaced by the societal cost and its budget by each cap in turn. Caps
/// whose subproblem fails are kept with their failure recorded and excluded
/// from the dominance filter.
pub fn epsilon_constraint_sweep(
    base: &SingleObjectiveProblem,
    points: usize,
    b_max: f64,
    mode: StartMode,
) -> Result<ParetoFront> {
    base.validate()?;
    let caps = budget_caps(points, b_max)?;
    let mut out = Vec::with_capacity(points);
    match mode {
        StartMode::Cold => {
            let solved: Vec<ParetoPoint> = caps
                .par_iter()
                .enumerate()
                .map(|(i, &cap)| {
                    let p = subproblem(base, cap);
                    let result = p.default_starts().and_then(|s| solve_from(&p, &s));
                    to_point(i + 1, cap, result)
                })
                .collect();
            out.extend(solved);
        }
        StartMode::Warm => {
            let mut previous: Option<Vec<f64>> = None;
            for (i, &cap) in caps.iter().enumerate() {
                let p = subproblem(base, cap);
                let result = p.default_starts().and_then(|defaults| {
                    // Previous solution, then the budget-filling front-loaded
                    // and uniform policies (the last two default starts).
                    let mut starts: Vec<Vec<f64>> = previous.iter().cloned().collect();
                    starts.extend(defaults.iter().skip(defaults.len().saturating_sub(2)).cloned());
                    solve_from(&p, &starts)
                });
                if let Ok(policy) = &result {
                    previous = Some(policy.values.clone());
                }
                out.push(to_point(i + 1, cap, result));
            }
        }
    }
    let mut front = ParetoFront { points: out, mode };
    front.mark_dominated();
    Ok(front)
}

/// Indices of the non-dominated points, both objectives minimized. Of a set of
/// identical points only the first is kept. Non-finite points are dropped.
pub fn filter_dominated(points: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).filter(|&i| points[i].0.is_finite() && points[i].1.is_finite()).collect();
    // Sort by first objective, then second, then original position.
    order.sort_by(|&a, &b| {
        points[a]
            .0
            .total_cmp(&points[b].0)
            .then(points[a].1.total_cmp(&points[b].1))
            .then(a.cmp(&b))
    });
    let mut keep = Vec::new();
    let mut best_second = f64::INFINITY;
    for i in order {
        if points[i].1 < best_second {
            best_second = points[i].1;
            keep.push(i);
        }
    }
    keep.sort_unstable();
    keep
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColdCheck {
    pub k: usize,
    pub warm_societal: f64,
    pub cold_societal: f64,
    /// `(warm - cold) / cold`; positive when the cold start did better.
    pub relative_gap: f64,
}

/// Re-solves `samples` randomly chosen caps of a warm-started front from the
/// standard cold starts, to detect warm-start bias.
pub fn verify_cold_start(
    base: &SingleObjectiveProblem,
    front: &ParetoFront,
    samples: usize,
    seed: u64,
) -> Result<Vec<ColdCheck>> {
    let solved: Vec<&ParetoPoint> = front.points.iter().filter(|p| p.solved()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks: Vec<usize> = sample(&mut rng, solved.len(), samples.min(solved.len())).into_vec();
    picks.sort_unstable();
    picks
        .par_iter()
        .map(|&i| {
            let point = solved[i];
            let p = subproblem(base, point.budget_cap);
            let cold = solve_from(&p, &p.default_starts()?)?;
            let c = cold.breakdown.societal_cost;
            Ok(ColdCheck {
                k: point.k,
                warm_societal: point.societal_cost,
                cold_societal: c,
                relative_gap: (point.societal_cost - c) / c.abs().max(f64::MIN_POSITIVE),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_are_evenly_spaced() {
        assert_eq!(budget_caps(5, 4.0).unwrap(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(budget_caps(1, 4.0).is_err());
        assert!(budget_caps(3, f64::INFINITY).is_err());
    }

    #[test]
    fn dominance_basic() {
        let pts = [(0.0, 10.0), (1.0, 8.0), (2.0, 9.0), (3.0, 5.0), (3.0, 6.0)];
        assert_eq!(filter_dominated(&pts), vec![0, 1, 3]);
    }

    #[test]
    fn dominance_duplicates_keep_first() {
        let pts = [(1.0, 1.0), (0.5, 2.0), (1.0, 1.0)];
        assert_eq!(filter_dominated(&pts), vec![0, 1]);
    }

    #[test]
    fn dominance_drops_nan() {
        let pts = [(f64::NAN, 0.0), (1.0, 1.0)];
        assert_eq!(filter_dominated(&pts), vec![1]);
        assert!(filter_dominated(&[]).is_empty());
    }
}
