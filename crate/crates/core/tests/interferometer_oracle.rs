#![allow(clippy::needless_range_loop)]

mod oracle;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use hscorr::interferometer::{
    empirical_correlation, outcome_distribution, sample_outcomes, PhaseSettings,
};
use hscorr::random::seeded_rng;
use hscorr::{correlation, evolve_ghz, ghsz_contradiction_report, ghz_density, GhszVerdict, Party};
use rand::Rng;

fn set(p: [f64; 3]) -> PhaseSettings<f64> {
    PhaseSettings::new(p[0], p[1], p[2]).unwrap()
}

#[test]
fn oracle_reference_values() {
    // frozen from the term-by-term expansion
    let p = oracle::ghz_probabilities([FRAC_PI_2, 0.0, 0.0]);
    assert!((p[0] - 0.25).abs() < 1e-15);
    for i in [1, 2, 4, 7] {
        assert!(p[i].abs() < 1e-15);
    }
    let p0 = oracle::ghz_probabilities([0.0; 3]);
    assert!(p0.iter().all(|x| (x - 0.125).abs() < 1e-15));
    assert!((oracle::ghz_correlation([FRAC_PI_2, 0.0, 0.0]) - 1.0).abs() < 1e-15);
    assert!(oracle::ghz_correlation([0.0; 3]).abs() < 1e-15);
    assert!((oracle::ghz_correlation([FRAC_PI_2; 3]) + 1.0).abs() < 1e-15);
}

#[test]
fn evolve_matches_oracle_and_beam_splitter_path() {
    let rho = ghz_density::<f64>();
    let grid: Vec<f64> = (0..5).map(|i| -PI + i as f64 * 1.3).collect();
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let s = set([a, b, c]);
                let direct = evolve_ghz(&s);
                let via_unitaries = outcome_distribution(&rho, &s).unwrap();
                let brute = oracle::ghz_probabilities([a, b, c]);
                for i in 0..8 {
                    assert!((direct.probabilities[i] - via_unitaries.probabilities[i]).abs() < 1e-12);
                    assert!((direct.probabilities[i] - brute[i]).abs() < 1e-12);
                }
                assert!((direct.total() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn closed_form_on_sum_grid() {
    for i in 0..=100 {
        let total = TAU * i as f64 / 100.0;
        let e = oracle::ghz_correlation([total, 0.0, 0.0]);
        assert!((e - total.sin()).abs() < 1e-12);
        assert!((correlation(&set([total, 0.0, 0.0])) - e).abs() < 1e-12);
    }
}

#[test]
fn depends_only_on_the_sum() {
    let mut rng = seeded_rng(12);
    for _ in 0..100 {
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-10.0..10.0));
        let e = correlation(&set(p));
        assert!((e - oracle::ghz_correlation(p)).abs() < 1e-12);
        for perm in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]] {
            let q = [p[perm[0]], p[perm[1]], p[perm[2]]];
            assert!((correlation(&set(q)) - e).abs() < 1e-12);
        }
        assert!((correlation(&set([p[0] + TAU, p[1], p[2]])) - e).abs() < 1e-12);
    }
}

#[test]
fn single_arm_marginals_are_flat() {
    let mut rng = seeded_rng(13);
    for _ in 0..50 {
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-PI..PI));
        let d = evolve_ghz(&set(p));
        for k in 0..3 {
            let m = d.marginal(Party(k));
            assert!((m[0] - 0.5).abs() < 1e-12 && (m[1] - 0.5).abs() < 1e-12);
        }
    }
}

#[test]
fn ghsz_report_against_enumeration() {
    let r = ghsz_contradiction_report::<f64>();
    let oracle_e = [
        oracle::ghz_correlation([FRAC_PI_2, 0.0, 0.0]),
        oracle::ghz_correlation([0.0, FRAC_PI_2, 0.0]),
        oracle::ghz_correlation([0.0, 0.0, FRAC_PI_2]),
        oracle::ghz_correlation([FRAC_PI_2; 3]),
    ];
    for (e, o) in r.correlations.iter().zip(oracle_e) {
        assert!((e - o).abs() < 1e-12);
    }
    assert!((r.product + 1.0).abs() < 1e-12);
    let targets = oracle_e.map(f64::round);
    assert_eq!(targets, [1.0, 1.0, 1.0, -1.0]);
    assert_eq!(oracle::lhv_max_satisfied(targets), 3);
    // with the sign of the fourth flipped all four are reachable: the
    // local-realist value is +1
    assert_eq!(oracle::lhv_max_satisfied([1.0, 1.0, 1.0, 1.0]), 4);
    assert_eq!(r.local_realist_fourth, Some(1.0));
    assert_eq!(r.verdict, GhszVerdict::Contradiction);
}

#[test]
fn sampling_statistics() {
    let s = set([FRAC_PI_2; 3]);
    let n = 1_000_000u64;
    let counts = sample_outcomes(&s, n, 2024).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), n);
    assert!((empirical_correlation(&counts) + 1.0).abs() < 0.005);
    let exact = oracle::ghz_probabilities([FRAC_PI_2; 3]);
    for (c, p) in counts.iter().zip(exact) {
        let freq = *c as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((freq - p).abs() <= 5.0 * se + 1e-12, "freq {freq} vs {p}");
    }

    let s = set([0.3, 0.1, 0.2]);
    let counts = sample_outcomes(&s, 200_000, 1).unwrap();
    let e = oracle::ghz_correlation([0.3, 0.1, 0.2]);
    let se = ((1.0 - e * e) / 200_000.0).sqrt();
    assert!((empirical_correlation(&counts) - e).abs() < 5.0 * se);
}
