//! Statistical and determinism checks for the Monte Carlo simulator. All
//! seeds are pinned, so these are deterministic.

use dustsim::model::ActiveRobotParams;
use dustsim::sim::{self, Arena, CrossingConvention, DepositionProcess, SimConfig, SimMode};
use dustsim::stats::Summary;

fn robot(beta: f64, h: f64) -> ActiveRobotParams {
    ActiveRobotParams::new(beta, h).unwrap()
}

#[test]
fn arrival_counts_follow_poisson_law() {
    for (alpha, mass, area, duration) in [
        (10.0, 1.0, 1.0, 3.0),
        (2.5, 0.5, 2.0, 1.5),
        (0.3, 1.0, 1.0, 1.0),
    ] {
        let dep = DepositionProcess::new(alpha, mass, 99).unwrap();
        let mut rng = dep.trial_rng(0);
        let reps = 20_000;
        let counts: Vec<f64> = (0..reps)
            .map(|_| dep.sample_arrivals(&mut rng, area, duration) as f64)
            .collect();
        let s = Summary::of(&counts);
        let lambda = alpha / mass * area * duration;
        // se of the mean: sqrt(lambda / n); se of the sample variance for a
        // Poisson: sqrt((lambda + 2 lambda^2) / n) approximately.
        let se_mean = (lambda / reps as f64).sqrt();
        let se_var = ((lambda + 2.0 * lambda * lambda) / reps as f64).sqrt();
        assert!(
            (s.mean - lambda).abs() <= 5.0 * se_mean,
            "mean {} vs {lambda}",
            s.mean
        );
        assert!(
            (s.variance - lambda).abs() <= 5.0 * se_var,
            "var {} vs {lambda}",
            s.variance
        );
    }
}

#[test]
fn passive_rate_converges() {
    let dep = DepositionProcess::new(3.0, 1.0, 42).unwrap();
    for (duration, trials) in [(100.0, 30), (1000.0, 60)] {
        let cfg =
            SimConfig::new(SimMode::PassiveFootprint, duration, trials, robot(1.0, 0.0)).unwrap();
        let r = sim::run_passive(&dep, &cfg).unwrap();
        assert_eq!(r.analytic_prediction, 3.0 * duration);
        let se = (3.0 * duration / trials as f64).sqrt();
        assert!((r.mean - r.analytic_prediction).abs() <= 1.96 * se * 1.5);
        assert!(r.ci95[0] <= r.mean && r.mean <= r.ci95[1]);
    }
}

#[test]
fn passive_with_unit_arena_keeps_every_arrival() {
    let dep = DepositionProcess::new(4.0, 2.0, 1).unwrap();
    let cfg = SimConfig::new(SimMode::PassiveFootprint, 10.0, 5, robot(1.0, 0.0))
        .unwrap()
        .with_arena(Arena::new(1.0, 1.0).unwrap());
    let r = sim::run_passive(&dep, &cfg).unwrap();
    assert_eq!(r.per_trial_mass, r.deposited_per_trial);
    assert!(r.per_trial_mass.iter().all(|m| m % 2.0 == 0.0));
}

#[test]
fn result_statistics_are_consistent() {
    let dep = DepositionProcess::new(1.5, 1.0, 5).unwrap();
    let cfg = SimConfig::new(SimMode::PassiveFootprint, 40.0, 12, robot(1.0, 0.0)).unwrap();
    let r = sim::run_passive(&dep, &cfg).unwrap();
    let mean = r.per_trial_mass.iter().sum::<f64>() / r.per_trial_mass.len() as f64;
    assert_eq!(r.mean, mean);
    assert_eq!(
        r.ci95,
        [r.mean - 1.96 * r.std_error, r.mean + 1.96 * r.std_error]
    );
    assert!(r.per_trial_mass.iter().all(|m| *m >= 0.0));
}

#[test]
fn occlusion_time_matches_inverse_speed() {
    let dep = DepositionProcess::new(1.0, 1.0, 3).unwrap();
    for beta in [0.5, 0.7, 1.0, 2.0, 3.3, 8.0] {
        let cfg = SimConfig::new(SimMode::OcclusionCrossing, 400.0, 2, robot(beta, 0.0)).unwrap();
        let r = sim::run_occlusion(&dep, &cfg).unwrap();
        let t = r.occlusion_time.unwrap();
        assert!((t - 1.0 / beta).abs() <= 1e-9 / beta, "beta {beta}: {t}");
    }
}

#[test]
fn per_crossing_pickup_matches_alpha_over_beta() {
    for (alpha, beta, probe) in [(8.0, 2.0, 1.0), (3.0, 0.75, 0.5), (5.0, 4.0, 0.2)] {
        let dep = DepositionProcess::new(alpha, 1.0, 17).unwrap();
        let duration = 1000.0 * 10.0 / beta;
        let cfg = SimConfig::new(SimMode::OcclusionCrossing, duration, 20, robot(beta, 0.0))
            .unwrap()
            .with_probe_width(probe)
            .unwrap();
        let r = sim::run_occlusion(&dep, &cfg).unwrap();
        assert!(r.crossings_per_trial.unwrap() >= 1000);
        let expected = alpha / beta;
        assert_eq!(r.analytic_prediction, expected);
        assert!(
            (r.mean - expected).abs() <= 0.05 * expected,
            "{} vs {expected}",
            r.mean
        );
    }
}

#[test]
fn model_faithful_matches_prediction() {
    let dep = DepositionProcess::new(8.0, 1.0, 42).unwrap();
    let cfg = SimConfig::new(SimMode::ActiveModelFaithful, 1000.0, 30, robot(2.0, 0.1)).unwrap();
    let r = sim::run_active_model_faithful(&dep, &cfg).unwrap();
    assert_eq!(r.analytic_prediction, (0.1 * 8.0 + 8.0) * 1000.0);
    assert!(r.ci95[0] - 3.0 * r.std_error <= r.analytic_prediction);
    assert!(r.analytic_prediction <= r.ci95[1] + 3.0 * r.std_error);

    // h = 0: per-crossing pickup of alpha / beta.
    let cfg = SimConfig::new(SimMode::ActiveModelFaithful, 500.0, 10, robot(2.0, 0.0)).unwrap();
    let r = sim::run_active_model_faithful(&dep, &cfg).unwrap();
    let n = r.crossings_per_trial.unwrap() as f64;
    assert!(n >= 1000.0);
    assert!((r.mean / n - 4.0).abs() <= 0.2);
}

#[test]
fn h_zero_reduces_to_occlusion_experiment() {
    let dep = DepositionProcess::new(6.0, 1.0, 2024).unwrap();
    let base = robot(1.5, 0.0);
    let occ = SimConfig::new(SimMode::OcclusionCrossing, 300.0, 6, base).unwrap();
    let faithful = SimConfig::new(SimMode::ActiveModelFaithful, 300.0, 6, base)
        .unwrap()
        .with_convention(CrossingConvention::PerCircumference);
    let a = sim::run_occlusion(&dep, &occ).unwrap();
    let b = sim::run_active_model_faithful(&dep, &faithful).unwrap();
    let n = a.crossings_per_trial.unwrap();
    assert_eq!(b.crossings_per_trial, Some(n));
    assert_eq!(
        b.crossing_convention,
        Some(CrossingConvention::PerCircumference)
    );
    for (per_crossing, total) in a.per_trial_mass.iter().zip(&b.per_trial_mass) {
        assert!((per_crossing * n as f64 - total).abs() <= 1e-9 * total.max(1.0));
    }
}

#[test]
fn seed_replay_is_bit_identical() {
    let dep = DepositionProcess::new(2.0, 1.0, 7).unwrap();
    for mode in [
        SimMode::PassiveFootprint,
        SimMode::OcclusionCrossing,
        SimMode::ActiveModelFaithful,
    ] {
        let cfg = SimConfig::new(mode, 200.0, 4, robot(1.5, 0.3)).unwrap();
        let a = sim::seed_replay(&cfg, &dep).unwrap();
        let b = sim::seed_replay(&cfg, &dep).unwrap();
        assert_eq!(a, b);
        let bits = |r: &sim::SimResult| {
            r.per_trial_mass
                .iter()
                .map(|m| m.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }
}

#[test]
fn different_seeds_give_different_streams() {
    let cfg = SimConfig::new(SimMode::PassiveFootprint, 100.0, 4, robot(1.0, 0.0)).unwrap();
    let a = sim::seed_replay(&cfg, &DepositionProcess::new(2.0, 1.0, 7).unwrap()).unwrap();
    let b = sim::seed_replay(&cfg, &DepositionProcess::new(2.0, 1.0, 8).unwrap()).unwrap();
    assert_ne!(a.per_trial_mass, b.per_trial_mass);
}

#[test]
fn thread_count_does_not_change_results() {
    let dep = DepositionProcess::new(2.0, 1.0, 7).unwrap();
    let cfg = SimConfig::new(SimMode::OcclusionCrossing, 200.0, 4, robot(2.0, 0.0)).unwrap();
    let sequential = sim::seed_replay(&cfg.clone().with_threads(Some(1)), &dep).unwrap();
    let parallel = sim::seed_replay(&cfg.clone().with_threads(Some(4)), &dep).unwrap();
    let default = sim::seed_replay(&cfg, &dep).unwrap();
    assert_eq!(sequential, parallel);
    assert_eq!(sequential, default);
}

#[test]
fn trial_depends_only_on_seed_and_index() {
    let dep = DepositionProcess::new(2.0, 1.0, 11).unwrap();
    let few = SimConfig::new(SimMode::PassiveFootprint, 50.0, 3, robot(1.0, 0.0)).unwrap();
    let many = SimConfig::new(SimMode::PassiveFootprint, 50.0, 9, robot(1.0, 0.0)).unwrap();
    let a = sim::seed_replay(&few, &dep).unwrap();
    let b = sim::seed_replay(&many, &dep).unwrap();
    assert_eq!(a.per_trial_mass[..], b.per_trial_mass[..3]);
}

#[test]
fn narrow_arena_rejected_for_occlusion() {
    let dep = DepositionProcess::new(1.0, 1.0, 1).unwrap();
    let cfg = SimConfig::new(SimMode::OcclusionCrossing, 100.0, 1, robot(2.0, 0.0))
        .unwrap()
        .with_arena(Arena::new(1.5, 10.0).unwrap());
    assert!(sim::run_occlusion(&dep, &cfg).is_err());
}
