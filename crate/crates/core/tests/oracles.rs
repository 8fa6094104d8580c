//! Checks against independently computed reference values.

mod common;

use common::max_abs;
use tsd_core::{
    build_decay_model, classify_energy_sectors, exponential_compare, find_transition_time,
    run_sequence, systems, CMatrix, FinderConfig, HamiltonianOperator, MixtureBasis, Source,
    Timing, C64,
};

/// exp(-i H t) by scaling and squaring a truncated Taylor series.
fn expm_taylor(h: &HamiltonianOperator, t: f64) -> CMatrix {
    let d = h.dim();
    let a = h.matrix() * C64::new(0.0, -t);
    let norm = max_abs(&a) * d as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = &a / C64::new(2f64.powi(squarings as i32), 0.0);
    let mut sum = CMatrix::identity(d, d);
    let mut term = CMatrix::identity(d, d);
    for k in 1..30 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[test]
fn eigen_propagator_matches_taylor_oracle() {
    let h = systems::Demo3::default().hamiltonian();
    for &t in &[0.1, 1.0, 3.3, 9.0] {
        assert!(max_abs(&(h.propagator(t).matrix() - expm_taylor(&h, t))) < 1e-11);
    }
}

fn violating_amplitude_sq(h: &HamiltonianOperator, t: f64) -> f64 {
    expm_taylor(h, t)[(2, 1)].norm_sqr()
}

#[test]
fn demo3_first_time_matches_dense_grid() {
    let sys = systems::Demo3::default();
    let h = sys.hamiltonian();
    let basis = MixtureBasis::standard(3);
    let psi = sys.initial_state();
    let cfg = FinderConfig {
        window: 4.0,
        grid_points: 400,
        ..FinderConfig::default()
    };
    let sectors = classify_energy_sectors(&basis, &h, &psi, 1e-9).unwrap();
    assert_eq!(sectors.violating, vec![2]);
    let found = match find_transition_time(
        Source::State(&psi),
        &h,
        &basis,
        &sectors,
        (0.0, cfg.window),
        &cfg,
    )
    .unwrap()
    {
        Timing::At(t) => t,
        other => panic!("expected a transition, got {other:?}"),
    };

    let fine_n = 10 * cfg.grid_points;
    let fine_step = cfg.window / fine_n as f64;
    let values: Vec<f64> = (0..=fine_n)
        .map(|i| violating_amplitude_sq(&h, i as f64 * fine_step))
        .collect();
    let peak = values.iter().copied().fold(0.0, f64::max);
    let first_zero = (11..fine_n)
        .find(|&i| {
            values[i] <= values[i - 1] && values[i] <= values[i + 1] && values[i] < 1e-3 * peak
        })
        .expect("a touching zero in the window");
    let oracle = first_zero as f64 * fine_step;
    assert!(
        (found - oracle).abs() <= fine_step,
        "finder {found} vs grid {oracle}"
    );
    // and the refined point really is a zero of the oracle amplitude
    assert!(violating_amplitude_sq(&h, found) < 1e-16);
}

#[test]
fn demo3_sequence_is_commuting_and_equally_spaced() {
    let sys = systems::Demo3::default();
    let h = sys.hamiltonian();
    let run = run_sequence(
        &sys.initial_state(),
        &h,
        &MixtureBasis::standard(3),
        5,
        &FinderConfig::default(),
    )
    .unwrap();
    assert_eq!(run.records.len(), 5);
    assert!(run.commuting);
    let spacing = run.spacing.expect("equal spacing");
    for (k, r) in run.records.iter().enumerate() {
        assert!((r.time - (k + 1) as f64 * spacing).abs() < 1e-6 * spacing * (k + 1) as f64);
        assert!((r.post_density.energy(&h) - r.pre_density.energy(&h)).abs() < 1e-9);
        assert!(r.populations[2] < 1e-9);
        assert!((r.populations.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn star_leakage_matches_taylor_oracle() {
    let couplings = [0.07, 0.11, 0.05, 0.09, 0.02];
    let h = systems::star(1.5, &couplings);
    let dt = 0.6;
    let model = build_decay_model(&h, &MixtureBasis::standard(6), 0, dt).unwrap();
    let u = expm_taylor(&h, dt);
    let leak: f64 = (1..6).map(|m| u[(m, 0)].norm_sqr()).sum();
    assert!((1.0 / model.lifetime - leak / dt).abs() < 1e-11);
    assert!((model.survival_amplitude_sq - u[(0, 0)].norm_sqr()).abs() < 1e-11);
}

#[test]
fn exponential_deviation_bound_from_direct_powers() {
    // max_k |(1-x)^k - e^{-kx}| / e^{-kx} over k x ≤ 5, computed directly.
    let x: f64 = 0.01;
    let oracle = (0..=500)
        .map(|k| {
            let r = (-(k as f64) * x).exp();
            ((1.0 - x).powi(k) - r).abs() / r
        })
        .fold(0.0, f64::max);
    assert!(oracle < 0.026);
    let (h, dt) = systems::two_level_decay(x, 1.0);
    let model = build_decay_model(&h, &MixtureBasis::standard(2), 0, dt).unwrap();
    let cmp = exponential_compare(&model, 500);
    assert!((cmp.max_relative_deviation - oracle).abs() < 1e-9);
    assert!(cmp.within_validity);
}

#[test]
fn exponential_deviation_vanishes_in_continuum_limit() {
    let mut previous = f64::INFINITY;
    for &x in &[0.04, 0.02, 0.01, 0.005, 0.0025] {
        let (h, dt) = systems::two_level_decay(x, 1.0);
        let model = build_decay_model(&h, &MixtureBasis::standard(2), 0, dt).unwrap();
        let dev = exponential_compare(&model, (5.0 / x).round() as usize).max_relative_deviation;
        assert!(dev < previous);
        previous = dev;
    }
    assert!(previous < 0.007);
}

#[test]
fn rabi_contraction_factors_by_iteration() {
    use tsd_core::RabiConfig;
    // iterate the post-transition map from p = 0 and measure the ratio of
    // successive distances from ½
    for &(ratio, expected) in &[(0.43, 0.637), (0.38, 0.063)] {
        let cfg = RabiConfig::from_ratio(1.0, ratio, 0.0).unwrap();
        let mut p = 0.0;
        let mut ratios = Vec::new();
        for _ in 0..4 {
            let next = cfg.step(p);
            ratios.push(((next - 0.5) / (p - 0.5)).abs());
            p = next;
        }
        for r in ratios {
            assert!((r - expected).abs() < 5e-4, "ratio {ratio}: {r}");
        }
    }
}
