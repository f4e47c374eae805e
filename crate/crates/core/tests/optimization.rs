use wolbachia_core::optimize::*;
use wolbachia_core::scenario::Scenario;

fn problem(pieces: usize, capacity: CapacityFunction, budget: f64) -> SingleObjectiveProblem {
    let mut s = Scenario::preset("quezon-city").unwrap();
    s.pieces = pieces;
    s.capacity = capacity;
    s.budget = budget;
    s.problem(ObjectiveKind::Total)
}

#[test]
fn two_pieces_match_grid_search() {
    let p = problem(2, CapacityFunction::Constant { value: 1e6 }, f64::INFINITY);
    let grid = brute_force_oracle(&p, 11).unwrap();
    let best = solve(&p).unwrap();
    assert!(best.objective <= grid.objective * (1.0 + 1e-3), "{} vs grid {}", best.objective, grid.objective);
}

#[test]
fn grid_search_rejects_large_problems() {
    let p = problem(4, CapacityFunction::Constant { value: 1e6 }, f64::INFINITY);
    assert!(brute_force_oracle(&p, 3).is_err());
}

#[test]
fn budget_is_respected_and_binding() {
    let p = problem(12, CapacityFunction::Constant { value: 1e6 }, 5e7);
    let sol = solve(&p).unwrap();
    assert!(p.is_feasible(&sol.values, 1e-9).unwrap());
    assert!(sol.diagnostics.budget_active, "{:?} {:?} {}", sol.values, sol.diagnostics, sol.breakdown.release_cost);
    assert!(sol.breakdown.release_cost <= 5e7 * (1.0 + 1e-9));
    let richer = solve(&problem(12, CapacityFunction::Constant { value: 1e6 }, 1e8)).unwrap();
    assert!(richer.objective <= sol.objective);
}

#[test]
fn objective_history_is_monotone() {
    let p = problem(12, CapacityFunction::Ramp { initial: 5e5, peak: 3.5e6, peak_day: 94.0 }, f64::INFINITY);
    let sol = solve(&p).unwrap();
    for w in sol.diagnostics.history.windows(2) {
        assert!(w[1] <= w[0]);
    }
    assert!(p.is_feasible(&sol.values, 1e-9).unwrap());
}

#[test]
fn min_over_piece_bounds_are_tighter_for_ramps() {
    let mut p = problem(12, CapacityFunction::Ramp { initial: 1e6, peak: 3.5e6, peak_day: 94.0 }, f64::INFINITY);
    let start = p.upper_bounds().unwrap();
    p.bound_mode = CapacityBoundMode::MinOverPiece;
    let min = p.upper_bounds().unwrap();
    assert!(min.iter().zip(&start).all(|(a, b)| a <= b));
    assert!(min.iter().zip(&start).any(|(a, b)| a < b));
    assert!((start[1] - (1e6 + 2.5e6 * 31.0 / 93.0)).abs() < 1e-6);
}

#[test]
fn zero_budget_forces_zero_policy() {
    let p = problem(12, CapacityFunction::Constant { value: 1e6 }, 0.0);
    let sol = solve(&p).unwrap();
    assert!(sol.values.iter().all(|v| *v == 0.0));
}

#[test]
fn solve_is_deterministic() {
    let p = problem(6, CapacityFunction::Constant { value: 7e5 }, 1e8);
    let a = solve(&p).unwrap();
    let b = solve(&p).unwrap();
    assert_eq!(a, b);
}
