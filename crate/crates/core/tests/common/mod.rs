#![allow(dead_code)]

use rand::Rng;
use wolbachia_core::model::{Compartment, ModelParameters, StateVector};
use wolbachia_core::release::ReleaseSchedule;

/// Splits `total` into `n` non-negative random shares.
fn split(rng: &mut impl Rng, total: f64, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| total * x / s).collect()
}

/// A random state strictly inside the invariant domain with humans and
/// males present.
pub fn random_state(rng: &mut impl Rng, p: &ModelParameters) -> StateVector {
    use Compartment::*;
    let [aq, males, nonpreg, preg] = p.vector_bounds();
    let mut s = StateVector::ZERO;
    let n = rng.gen_range(1e5..1e8);
    let humans = split(rng, n, 4);
    for (c, v) in [Sh, Ih, Jh, Rh].into_iter().zip(humans) {
        s[c] = v;
    }
    for (cs, limit) in [
        (vec![AW, A], aq),
        (vec![MvW, Mv], males),
        (vec![SvfW, Svf, IvfW, Ivf], nonpreg),
        (vec![SvfpW, Svfp, SvfpS, Ivfp, IvfpS, IvfpW], preg),
    ] {
        let total = rng.gen_range(0.05..0.95) * limit;
        for (c, v) in cs.iter().zip(split(rng, total, cs.len())) {
            s[*c] = v;
        }
    }
    s
}

/// One of the four analytic shapes or a piecewise schedule, with peak rate at
/// most `max_rate`.
pub fn random_schedule(rng: &mut impl Rng, horizon: u32, max_rate: f64) -> ReleaseSchedule {
    let peak = rng.gen_range(0.0..=max_rate);
    match rng.gen_range(0..5) {
        0 => ReleaseSchedule::constant(peak, horizon).unwrap(),
        1 => ReleaseSchedule::linear(peak / 2.0, horizon).unwrap(),
        2 => ReleaseSchedule::bump(peak, rng.gen_range(1.0..horizon as f64), horizon).unwrap(),
        3 => ReleaseSchedule::zero(horizon),
        _ => {
            let n = rng.gen_range(1..=12);
            ReleaseSchedule::piecewise((0..n).map(|_| rng.gen_range(0.0..=max_rate)).collect(), horizon).unwrap()
        }
    }
}
