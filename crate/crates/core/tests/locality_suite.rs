use hscorr::locality::{locality_sweep_with, TrialUnitary};
use hscorr::qstate::LocalUnitary;
use hscorr::random::{haar_unitary, seeded_rng};
use hscorr::{ghz_density, locality_sweep, random_density, verify_locality, Party};

#[test]
fn random_full_rank_states_pass_for_every_party() {
    let rho = random_density::<f64>(31, 3, 8).unwrap();
    let mut rng = seeded_rng(32);
    for k in 0..3 {
        for _ in 0..100 {
            let u = LocalUnitary::new(Party(k), haar_unitary(&mut rng)).unwrap();
            let r = verify_locality(&rho, &u, 1e-12).unwrap();
            assert!(r.verdict.passed(), "party {k}: {r:?}");
            assert_eq!(r.unchanged_blocks.len() + r.changed_blocks.len(), 8);
        }
    }
}

#[test]
fn ghz_sweeps_for_each_party() {
    let rho = ghz_density::<f64>();
    let worst: Vec<f64> = (0..3)
        .map(|k| {
            let s = locality_sweep(&rho, Party(k), 100, 17, 1e-12).unwrap();
            assert!(s.verdict.passed());
            assert!(s.worst_changed_deviation > 0.1);
            s.worst_unchanged_deviation
        })
        .collect();
    for w in &worst {
        assert!((w - worst[0]).abs() < 1e-12);
    }
}

#[test]
fn identity_sweep_reports_zero() {
    let rho = ghz_density::<f64>();
    let s = locality_sweep_with(&rho, Party::B, 1, 0, 1e-12, TrialUnitary::Identity).unwrap();
    assert!(s.verdict.passed());
    assert_eq!(s.worst_unchanged_deviation, 0.0);
}

#[test]
fn four_party_states() {
    let rho = random_density::<f64>(40, 4, 6).unwrap();
    for k in 0..4 {
        let s = locality_sweep(&rho, Party(k), 20, 3, 1e-12).unwrap();
        assert!(s.verdict.passed());
    }
}
