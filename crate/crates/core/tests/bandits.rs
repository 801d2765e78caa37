use nalgebra::{DMatrix, SymmetricEigen};
use pcb_core::bandits::allocation::constraint_slack;
use pcb_core::bandits::linalg::Mat;
use pcb_core::bandits::{
    run_experiment, run_replication, solve_allocation, AllocationConfig, ArmBounds, LinUcb, LinearEnv, OamConfig,
    Policy, PolicySpec,
};
use pcb_core::bounds::Query;
use pcb_core::fixtures::synthetic_model;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture_env() -> LinearEnv {
    let m = synthetic_model();
    let q = Query::from_names(m.graph(), &["X1", "X2"], "Y", &["U1", "U2"]).unwrap();
    LinearEnv::from_model(&m, &q).unwrap()
}

fn assert_same_trajectory(env: &LinearEnv, a: &PolicySpec, b: &PolicySpec, horizon: usize, seed: u64) {
    for rep in 0..3 {
        let x = run_replication(env, a, horizon, seed, rep).unwrap();
        let y = run_replication(env, b, horizon, seed, rep).unwrap();
        assert_eq!(x.arms, y.arms, "{} vs {}", a.name, b.name);
        assert_eq!(x.rewards, y.rewards);
        assert_eq!(x.cumulative, y.cumulative);
    }
}

#[test]
fn trivial_bounds_reduce_to_baselines() {
    let env = fixture_env();
    let trivial = ArmBounds::trivial(env.n_contexts(), env.n_arms());
    assert_same_trajectory(&env, &PolicySpec::linucb(1.0), &PolicySpec::linucb_pcb(1.0, trivial.clone()), 3000, 1);
    let marginal = trivial.marginal(env.context_probs());
    assert_same_trajectory(&env, &PolicySpec::ucb(), &PolicySpec::ucb_pcb(marginal), 3000, 2);
    let cfg = OamConfig::default();
    assert_same_trajectory(&env, &PolicySpec::oam(cfg.clone()), &PolicySpec::oam_pcb(cfg, trivial), 1500, 3);
}

#[test]
fn oracle_policy_has_no_regret() {
    let env = fixture_env();
    let agg = run_experiment(&env, &PolicySpec::oracle(), 500, 3, 9).unwrap();
    assert!(agg.mean.iter().all(|v| *v == 0.0));
    let one = run_replication(&env, &PolicySpec::linucb(1.0), 1, 9, 0).unwrap();
    let max_gap = (0..4).flat_map(|c| (0..4).map(move |a| (c, a))).map(|(c, a)| env.gap(c, a)).fold(0.0, f64::max);
    assert!(one.cumulative[0] >= 0.0 && one.cumulative[0] <= max_gap);
}

#[test]
fn regret_curves_are_monotone_and_bounded() {
    let env = fixture_env();
    let max_gap = (0..4).flat_map(|c| (0..4).map(move |a| (c, a))).map(|(c, a)| env.gap(c, a)).fold(0.0, f64::max);
    for spec in [PolicySpec::linucb(1.0), PolicySpec::ucb(), PolicySpec::oam(OamConfig::default())] {
        let r = run_replication(&env, &spec, 1000, 4, 0).unwrap();
        assert_eq!(r.cumulative.len(), 1000);
        for (t, w) in r.cumulative.windows(2).enumerate() {
            assert!(w[1] >= w[0]);
            assert!(w[1] <= (t + 2) as f64 * max_gap + 1e-9);
        }
    }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let env = fixture_env();
    let a = run_experiment(&env, &PolicySpec::linucb(1.0), 500, 4, 77).unwrap();
    let b = run_experiment(&env, &PolicySpec::linucb(1.0), 500, 4, 77).unwrap();
    assert_eq!(a, b);
    let c = run_experiment(&env, &PolicySpec::linucb(1.0), 500, 4, 78).unwrap();
    assert_ne!(a.mean, c.mean);
}

#[test]
fn optimism_rules_out_arms_below_the_optimum() {
    let env = fixture_env();
    let exact = ArmBounds::exact(&env);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut p = LinUcb::new(env.n_arms(), env.dim(), 1.0, Some(exact.clone()));
    for _ in 0..5000 {
        let c = env.draw_context(rng.random());
        let best = env.best_arm(c);
        let optimistic = p.ucb(env.features(c, best), best) >= env.best_mean(c);
        let a = p.choose(&env, c);
        if optimistic {
            assert!(exact.upper(c, a) >= env.best_mean(c), "arm {a} played in context {c}");
        }
        let r = env.reward(c, a, rng.random());
        p.update(&env, c, a, r);
    }
}

#[test]
fn ucb_pcb_never_pulls_arms_below_the_optimum() {
    let env = fixture_env();
    let marginal = ArmBounds::exact(&env).marginal(env.context_probs());
    for rep in 0..20 {
        let r = run_replication(&env, &PolicySpec::ucb_pcb(marginal.clone()), 3000, 5, rep).unwrap();
        assert!(r.arms.iter().all(|a| *a == 3));
    }
}

#[test]
fn exact_bounds_beat_plain_linucb_on_paired_seeds() {
    let env = fixture_env();
    let exact = ArmBounds::exact(&env);
    let mut wins = 0;
    for rep in 0..100 {
        let plain = run_replication(&env, &PolicySpec::linucb(1.0), 15_000, 6, rep).unwrap();
        let pcb = run_replication(&env, &PolicySpec::linucb_pcb(1.0, exact.clone()), 15_000, 6, rep).unwrap();
        if pcb.final_regret() <= plain.final_regret() {
            wins += 1;
        }
    }
    assert!(wins >= 95, "{wins}");
}

#[test]
fn design_matrices_stay_positive_definite() {
    let env = fixture_env();
    let mut p = LinUcb::new(env.n_arms(), env.dim(), 1.0, None);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..2000 {
        let c = env.draw_context(rng.random());
        let a = p.choose(&env, c);
        let r = env.reward(c, a, rng.random());
        p.update(&env, c, a, r);
    }
    for arm in 0..env.n_arms() {
        let a = p.design(arm);
        let m = DMatrix::from_row_slice(a.dim(), a.dim(), a.as_slice());
        let eig = SymmetricEigen::new(m);
        assert!(eig.eigenvalues.iter().all(|l| *l >= 1.0 - 1e-9));
    }
}

proptest! {
    #[test]
    fn sherman_morrison_agrees_with_nalgebra(xs in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 4), 1..20)) {
        let mut inv = Mat::identity(4);
        let mut direct = DMatrix::<f64>::identity(4, 4);
        for x in &xs {
            inv.sherman_morrison(x, 1.0);
            let v = nalgebra::DVector::from_column_slice(x);
            direct += &v * v.transpose();
        }
        let want = direct.try_inverse().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((inv.get(i, j) - want[(i, j)]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn allocation_single_orthogonal_arm() {
    let cfg = AllocationConfig::default();
    let features = [vec![1.0, 0.0], vec![0.0, 1.0]];
    let (delta, f_n) = (0.3, 12.0);
    let a = solve_allocation(&features, &[0.0, delta], f_n, &cfg);
    let want = f_n / (delta * delta);
    assert!((a.weights[1] - want).abs() <= 0.01 * want, "{} vs {want}", a.weights[1]);
    assert!(constraint_slack(&features, &[0.0, delta], &a.weights, f_n, 1e9).iter().all(|s| *s <= 1e-6));
}

/// Cheapest feasible allocation over a fine grid of directions, each scaled
/// to the constraint boundary in closed form.
fn grid_reference(features: &[Vec<f64>], gaps: &[f64], f_n: f64) -> f64 {
    let mut best = f64::INFINITY;
    let n = 20_000;
    for i in 1..n {
        let t = i as f64 / n as f64;
        let w = [t, 1.0 - t];
        let mut h = DMatrix::<f64>::zeros(2, 2);
        for (x, wi) in features.iter().zip(w) {
            let v = nalgebra::DVector::from_column_slice(x);
            h += wi * &v * v.transpose();
        }
        let Some(hi) = h.try_inverse() else { continue };
        let scale = features
            .iter()
            .zip(gaps)
            .map(|(x, g)| {
                let v = nalgebra::DVector::from_column_slice(x);
                (v.transpose() * &hi * &v)[(0, 0)] / (g * g / f_n)
            })
            .fold(0.0, f64::max);
        let cost = scale * (gaps[0] * w[0] + gaps[1] * w[1]);
        best = best.min(cost);
    }
    best
}

#[test]
fn allocation_matches_grid_reference_in_two_dimensions() {
    let cfg = AllocationConfig::default();
    let cases = [
        (vec![vec![1.0, 0.0], vec![0.6, 0.8]], vec![0.2, 0.4]),
        (vec![vec![1.0, 0.3], vec![-0.2, 1.0]], vec![0.1, 0.1]),
        (vec![vec![1.0, 1.0], vec![1.0, -0.5]], vec![0.25, 0.05]),
    ];
    for (features, gaps) in cases {
        let f_n = 10.0;
        let a = solve_allocation(&features, &gaps, f_n, &cfg);
        let reference = grid_reference(&features, &gaps, f_n);
        assert!(constraint_slack(&features, &gaps, &a.weights, f_n, 1e9).iter().all(|s| *s <= 1e-6));
        assert!((a.objective - reference).abs() <= 0.01 * reference, "{} vs {reference}", a.objective);
    }
}
