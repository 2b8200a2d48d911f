//! Executable locality check.
//!
//! A unitary acting on one party may change every coefficient block that
//! involves that party. Blocks that carry the identity on it, and the
//! reduced state of the remaining parties, must stay put.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hsdecomp::{decompose, Block};
use crate::linalg::{self, CMatrix};
use crate::qstate::{apply_local_unitary, partial_trace, DensityMatrix, LocalUnitary, Party};
use crate::random::{derived_seed, haar_unitary, seeded_rng};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Deviation of one coefficient block between the state before and after a
/// local unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDeviation<T: Real> {
    pub block: Block,
    pub name: String,
    pub max_abs_deviation: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport<T: Real> {
    pub acted_party: Party,
    /// Blocks with identity on the acted party.
    pub unchanged_blocks: Vec<BlockDeviation<T>>,
    /// Blocks involving the acted party. Membership is structural; a block
    /// listed here may still show zero deviation.
    pub changed_blocks: Vec<BlockDeviation<T>>,
    /// Max entrywise deviation of the reduced state of the other parties.
    pub marginal_deviation: T,
    pub tol: T,
    pub verdict: Verdict,
}

impl<T: Real> LocalityReport<T> {
    pub fn worst_unchanged(&self) -> T {
        self.unchanged_blocks
            .iter()
            .map(|b| b.max_abs_deviation)
            .fold(T::zero(), T::max)
    }

    pub fn worst_changed(&self) -> T {
        self.changed_blocks
            .iter()
            .map(|b| b.max_abs_deviation)
            .fold(T::zero(), T::max)
    }
}

/// Decompose `rho` before and after `u` and classify every block.
pub fn verify_locality<T: Real>(
    rho: &DensityMatrix<T>,
    u: &LocalUnitary<T>,
    tol: T,
) -> Result<LocalityReport<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let party = u.party();
    let n = rho.n_parties();
    let after = apply_local_unitary(rho, u)?;
    let before_c = decompose(rho)?;
    let after_c = decompose(&after)?;

    let mut unchanged_blocks = Vec::new();
    let mut changed_blocks = Vec::new();
    for block in Block::all(n) {
        let dev = BlockDeviation {
            block,
            name: block.name(),
            max_abs_deviation: before_c.block_max_abs_diff(&after_c, block),
        };
        if block.involves(party) {
            changed_blocks.push(dev);
        } else {
            unchanged_blocks.push(dev);
        }
    }

    let marginal_deviation = if n > 1 {
        let rest: Vec<Party> = (0..n).filter(|&k| k != party.0).map(Party).collect();
        partial_trace(rho, &rest)?.max_abs_diff(&partial_trace(&after, &rest)?)
    } else {
        T::zero()
    };

    let ok = unchanged_blocks.iter().all(|b| b.max_abs_deviation < tol) && marginal_deviation < tol;
    Ok(LocalityReport {
        acted_party: party,
        unchanged_blocks,
        changed_blocks,
        marginal_deviation,
        tol,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}

/// Source of the per-trial unitary in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialUnitary {
    Haar,
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport<T: Real> {
    pub party: Party,
    pub trials: usize,
    pub seed: u64,
    pub tol: T,
    pub worst_unchanged_deviation: T,
    pub worst_changed_deviation: T,
    pub worst_marginal_deviation: T,
    /// Indices of trials whose verdict was `Fail`.
    pub failed_trials: Vec<usize>,
    pub verdict: Verdict,
}

/// [`verify_locality`] over `n_trials` Haar-random unitaries on `party`;
/// trial `i` draws from seed `seed + i`.
pub fn locality_sweep<T: Real>(
    rho: &DensityMatrix<T>,
    party: Party,
    n_trials: usize,
    seed: u64,
    tol: T,
) -> Result<SweepReport<T>> {
    locality_sweep_with(rho, party, n_trials, seed, tol, TrialUnitary::Haar)
}

pub fn locality_sweep_with<T: Real>(
    rho: &DensityMatrix<T>,
    party: Party,
    n_trials: usize,
    seed: u64,
    tol: T,
    source: TrialUnitary,
) -> Result<SweepReport<T>> {
    if n_trials == 0 {
        return Err(Error::Parameter("locality sweep needs at least one trial".into()));
    }
    let reports: Vec<LocalityReport<T>> = (0..n_trials)
        .into_par_iter()
        .map(|i| {
            let m: CMatrix<T> = match source {
                TrialUnitary::Haar => haar_unitary(&mut seeded_rng(derived_seed(seed, i as u64))),
                TrialUnitary::Identity => linalg::identity(2),
            };
            let u = LocalUnitary::new(party, m)?;
            verify_locality(rho, &u, tol)
        })
        .collect::<Result<_>>()?;

    let fold_max = |f: fn(&LocalityReport<T>) -> T| reports.iter().map(f).fold(T::zero(), T::max);
    let failed_trials: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.verdict.passed())
        .map(|(i, _)| i)
        .collect();
    Ok(SweepReport {
        party,
        trials: n_trials,
        seed,
        tol,
        worst_unchanged_deviation: fold_max(LocalityReport::worst_unchanged),
        worst_changed_deviation: fold_max(LocalityReport::worst_changed),
        worst_marginal_deviation: fold_max(|r| r.marginal_deviation),
        verdict: if failed_trials.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        failed_trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::beam_splitter_unitary;
    use crate::qstate::{ghz_density, random_density};

    #[test]
    fn ghz_beam_splitter_on_a() {
        let rho = ghz_density::<f64>();
        let u = LocalUnitary::new(Party::A, beam_splitter_unitary(0.7)).unwrap();
        let r = verify_locality(&rho, &u, 1e-12).unwrap();
        assert!(r.verdict.passed());
        let unchanged: Vec<&str> = r.unchanged_blocks.iter().map(|b| b.name.as_str()).collect();
        let changed: Vec<&str> = r.changed_blocks.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(unchanged, ["unit", "s", "p", "t_bc"]);
        assert_eq!(changed, ["r", "q_ab", "o_ac", "R"]);
        assert!(r.worst_unchanged() < 1e-12);
        assert!(r.marginal_deviation < 1e-12);
    }

    #[test]
    fn negative_control_moves_three_party_block() {
        let rho = ghz_density::<f64>();
        let u = LocalUnitary::new(Party::A, beam_splitter_unitary(0.0)).unwrap();
        let r = verify_locality(&rho, &u, 1e-12).unwrap();
        let big_r = r.changed_blocks.iter().find(|b| b.name == "R").unwrap();
        assert!(big_r.max_abs_deviation > 0.1);
    }

    #[test]
    fn identity_gives_zero_everywhere() {
        let rho = random_density::<f64>(2, 3, 5).unwrap();
        for k in 0..3 {
            let r = verify_locality(&rho, &LocalUnitary::identity(Party(k)), 1e-12).unwrap();
            assert!(r.verdict.passed());
            assert_eq!(r.worst_unchanged(), 0.0);
            assert_eq!(r.worst_changed(), 0.0);
        }
    }

    #[test]
    fn bad_inputs() {
        let rho = ghz_density::<f64>();
        assert!(matches!(
            verify_locality(&rho, &LocalUnitary::identity(Party(5)), 1e-12),
            Err(Error::Addressing(_))
        ));
        assert!(verify_locality(&rho, &LocalUnitary::identity(Party::A), 0.0).is_err());
        assert!(locality_sweep(&rho, Party::A, 0, 0, 1e-12).is_err());
    }

    #[test]
    fn failing_tolerance_yields_fail() {
        // a tolerance below the rounding floor of a generic rotation
        let rho = random_density::<f64>(8, 3, 8).unwrap();
        let s = locality_sweep(&rho, Party::B, 5, 1, 1e-300).unwrap();
        assert_eq!(s.verdict, Verdict::Fail);
        assert!(!s.failed_trials.is_empty());
    }

    #[test]
    fn sweep_is_deterministic() {
        let rho = ghz_density::<f64>();
        let a = locality_sweep(&rho, Party::C, 10, 42, 1e-12).unwrap();
        let b = locality_sweep(&rho, Party::C, 10, 42, 1e-12).unwrap();
        assert_eq!(a, b);
        assert!(a.verdict.passed());
    }

    #[test]
    fn identity_sweep_is_exact() {
        let rho = ghz_density::<f64>();
        let s = locality_sweep_with(&rho, Party::B, 1, 0, 1e-12, TrialUnitary::Identity).unwrap();
        assert!(s.verdict.passed());
        assert_eq!(s.worst_unchanged_deviation, 0.0);
        assert_eq!(s.worst_changed_deviation, 0.0);
        assert_eq!(s.worst_marginal_deviation, 0.0);
    }
}
