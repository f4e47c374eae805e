mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wolbachia_core::model::*;

fn params() -> ModelParameters {
    reference_parameters_for(&reference_initial_state())
}

/// Richardson-extrapolated central difference of the right-hand side.
fn fd_column(p: &ModelParameters, s: &StateVector, j: usize) -> [f64; DIM] {
    let h = 1e-3 * s.0[j].abs().max(1.0);
    let central = |h: f64| {
        let mut up = *s;
        let mut down = *s;
        up.0[j] += h;
        down.0[j] -= h;
        let fu = rhs(0.0, &up, p, 0.0).unwrap();
        let fd = rhs(0.0, &down, p, 0.0).unwrap();
        std::array::from_fn::<f64, DIM, _>(|i| (fu.0[i] - fd.0[i]) / (2.0 * h))
    };
    let (d1, d2) = (central(h), central(h / 2.0));
    std::array::from_fn(|i| (4.0 * d2[i] - d1[i]) / 3.0)
}

#[test]
fn jacobian_matches_finite_differences() {
    let p = params();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = common::random_state(&mut rng, &p);
        let jac = jacobian(&s, &p).unwrap();
        for j in 0..DIM {
            let col = fd_column(&p, &s, j);
            for i in 0..DIM {
                let (a, b) = (jac[i][j], col[i]);
                if a.abs().max(b.abs()) > 1e-8 {
                    worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
                }
            }
        }
    }
    assert!(worst < 1e-5, "worst relative error {worst:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn human_total_grows_at_net_birth_rate(seed in any::<u64>(), release in 0.0f64..1e7) {
        let p = params();
        let s = common::random_state(&mut ChaCha8Rng::seed_from_u64(seed), &p);
        let d = rhs(0.0, &s, &p, release).unwrap();
        let dn = d.human_total();
        let expected = (p.b_h - p.mu_h) * s.human_total();
        prop_assert!((dn - expected).abs() <= 1e-9 * s.human_total() * (p.b_h + p.mu_h + p.gamma + p.theta));
    }

    #[test]
    fn zero_compartments_do_not_decrease(seed in any::<u64>(), mask in any::<u32>(), release in 0.0f64..1e6) {
        let p = params();
        let mut s = common::random_state(&mut ChaCha8Rng::seed_from_u64(seed), &p);
        // Keep at least one human and one male so the aggregates are defined.
        for (i, c) in Compartment::ALL.iter().enumerate() {
            if mask & (1 << i) != 0 && !matches!(c, Compartment::Sh | Compartment::Mv) {
                s[*c] = 0.0;
            }
        }
        let d = rhs(0.0, &s, &p, release).unwrap();
        for c in Compartment::ALL {
            if s[c] == 0.0 {
                prop_assert!(d[c] >= 0.0, "{} decreases from zero: {}", c.name(), d[c]);
            }
        }
    }

    #[test]
    fn random_states_are_in_domain(seed in any::<u64>()) {
        let p = params();
        let s = common::random_state(&mut ChaCha8Rng::seed_from_u64(seed), &p);
        prop_assert!(in_domain(&s, &p, 0.0).all_passed());
    }

    #[test]
    fn aquatic_bound_is_not_exceeded_at_capacity(seed in any::<u64>()) {
        // On the face A + A_w = K_a with the largest admissible release, the
        // aquatic total must not grow.
        let p = params();
        let mut s = common::random_state(&mut ChaCha8Rng::seed_from_u64(seed), &p);
        let total = s.aquatic_total();
        s[Compartment::A] *= p.k_a / total;
        s[Compartment::AW] *= p.k_a / total;
        let d = rhs(0.0, &s, &p, p.max_release_rate()).unwrap();
        prop_assert!(d.aquatic_total() <= 1e-9 * p.k_a);
    }
}
