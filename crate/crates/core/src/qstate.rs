//! Pure states, density matrices and local unitaries on `n` qubit-like
//! parties.
//!
//! Basis ordering: party `a` (index 0) is the most significant bit, and the
//! unprimed level of each party is bit 0. For three parties the basis index
//! of `|x_a x_b x_c>` is `4 x_a + 2 x_b + x_c`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Invariant, Result};
use crate::linalg::{self, CMatrix};
use crate::random::{complex_normal, seeded_rng};
use crate::real::Real;

/// Largest supported party count (64x64 density matrices).
pub const MAX_PARTIES: usize = 6;

fn check_parties(n_parties: usize) -> Result<()> {
    if n_parties == 0 || n_parties > MAX_PARTIES {
        return Err(Error::Parameter(format!(
            "n_parties must be in 1..={MAX_PARTIES}, got {n_parties}"
        )));
    }
    Ok(())
}

/// Index of one party. Parties 0, 1, 2 print as `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Party(pub usize);

impl Party {
    pub const A: Party = Party(0);
    pub const B: Party = Party(1);
    pub const C: Party = Party(2);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn letter(self) -> char {
        (b'a' + self.0 as u8) as char
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 26 {
            write!(f, "{}", self.letter())
        } else {
            write!(f, "#{}", self.0)
        }
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.as_bytes() {
            [ch @ b'a'..=b'z'] => Ok(Party((ch - b'a') as usize)),
            _ => s
                .parse::<usize>()
                .map(Party)
                .map_err(|_| Error::Addressing(format!("unrecognized party label {s:?}"))),
        }
    }
}

/// Normalized state vector over `n_parties` two-level parties.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    n_parties: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(n_parties: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_parties(n_parties)?;
        let dim = 1 << n_parties;
        if amplitudes.len() != dim {
            return Err(Invariant::Dimension {
                expected: dim,
                found: amplitudes.len(),
            }
            .into());
        }
        let norm_sqr = amplitudes.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
        if !((norm_sqr - T::one()).abs() < T::exact_tol()) {
            return Err(Invariant::Normalization {
                norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN),
            }
            .into());
        }
        Ok(Self { n_parties, amplitudes })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_parties: usize, index: usize) -> Result<Self> {
        check_parties(n_parties)?;
        let dim = 1 << n_parties;
        if index >= dim {
            return Err(Error::Parameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_parties, amplitudes: amps })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }
}

/// `(|000> + |111>) / sqrt(2)`.
pub fn ghz_pure<T: Real>() -> PureState<T> {
    let h = T::FRAC_1_SQRT_2();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 8];
    amps[0] = Complex::new(h, T::zero());
    amps[7] = Complex::new(h, T::zero());
    PureState {
        n_parties: 3,
        amplitudes: amps,
    }
}

/// Density matrix over `n_parties` parties.
///
/// Values built with [`DensityMatrix::new`] are validated: Hermitian, unit
/// trace and positive semidefinite. [`DensityMatrix::from_matrix_unchecked`]
/// only checks the shape; call [`DensityMatrix::validate`] when needed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    n_parties: usize,
    entries: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(n_parties: usize, entries: CMatrix<T>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(n_parties, entries)?;
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_matrix_unchecked(n_parties: usize, entries: CMatrix<T>) -> Result<Self> {
        check_parties(n_parties)?;
        let dim = 1 << n_parties;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Invariant::Dimension {
                expected: dim,
                found: if entries.nrows() != dim {
                    entries.nrows()
                } else {
                    entries.ncols()
                },
            }
            .into());
        }
        Ok(Self { n_parties, entries })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_parties: usize) -> Result<Self> {
        check_parties(n_parties)?;
        let dim = 1 << n_parties;
        let w = T::one() / T::lit(dim as f64);
        Ok(Self {
            n_parties,
            entries: linalg::identity::<T>(dim).mapv(|z| z * w),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.check_hermitian()?;
        let tr = linalg::trace(&self.entries);
        if !((tr - Complex::new(T::one(), T::zero())).norm() < T::exact_tol()) {
            return Err(Invariant::UnitTrace {
                trace: tr.re.to_f64().unwrap_or(f64::NAN),
            }
            .into());
        }
        let min_ev = self.eigenvalues()[0];
        if !(min_ev >= -T::eigen_tol()) {
            return Err(Invariant::PositiveSemidefinite {
                min_eigenvalue: min_ev.to_f64().unwrap_or(f64::NAN),
            }
            .into());
        }
        Ok(())
    }

    /// Fails on the worst Hermiticity violation, if any exceeds tolerance.
    pub fn check_hermitian(&self) -> Result<()> {
        let dim = self.dim();
        let mut worst = (0, 0, T::zero());
        for i in 0..dim {
            for j in i..dim {
                let dev = (self.entries[[i, j]] - self.entries[[j, i]].conj()).norm();
                if !(dev <= worst.2) {
                    worst = (i, j, dev);
                }
            }
        }
        if !(worst.2 < T::exact_tol()) {
            return Err(Invariant::Hermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2.to_f64().unwrap_or(f64::NAN),
            }
            .into());
        }
        Ok(())
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn dim(&self) -> usize {
        1 << self.n_parties
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix<T> {
        self.entries
    }

    pub fn trace(&self) -> Complex<T> {
        linalg::trace(&self.entries)
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> T {
        linalg::trace_of_product(&self.entries, &self.entries).re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::hermitian_eigenvalues(&self.entries)
    }

    /// Largest entrywise deviation from `other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.n_parties != other.n_parties {
            return T::infinity();
        }
        linalg::max_abs_diff(&self.entries, &other.entries)
    }
}

/// The density matrix of [`ghz_pure`]: `1/2` at the four corners, zero
/// elsewhere.
pub fn ghz_density<T: Real>() -> DensityMatrix<T> {
    let half = Complex::new(T::lit(0.5), T::zero());
    let mut m = CMatrix::from_elem((8, 8), Complex::new(T::zero(), T::zero()));
    for (i, j) in [(0, 0), (0, 7), (7, 0), (7, 7)] {
        m[[i, j]] = half;
    }
    DensityMatrix {
        n_parties: 3,
        entries: m,
    }
}

/// `|psi><psi|`.
pub fn pure_to_density<T: Real>(state: &PureState<T>) -> DensityMatrix<T> {
    let a = &state.amplitudes;
    let dim = a.len();
    DensityMatrix {
        n_parties: state.n_parties,
        entries: CMatrix::from_shape_fn((dim, dim), |(i, j)| a[i] * a[j].conj()),
    }
}

/// A 2x2 unitary acting on a single party.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary<T: Real> {
    party: Party,
    matrix: CMatrix<T>,
}

impl<T: Real> LocalUnitary<T> {
    pub fn new(party: Party, matrix: CMatrix<T>) -> Result<Self> {
        if matrix.dim() != (2, 2) {
            return Err(Invariant::Dimension {
                expected: 2,
                found: matrix.nrows().max(matrix.ncols()),
            }
            .into());
        }
        let defect = linalg::unitarity_defect(&matrix);
        if !(defect < T::exact_tol()) {
            return Err(Invariant::Unitary {
                deviation: defect.to_f64().unwrap_or(f64::NAN),
            }
            .into());
        }
        Ok(Self { party, matrix })
    }

    pub fn identity(party: Party) -> Self {
        Self {
            party,
            matrix: linalg::identity(2),
        }
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self {
            party: self.party,
            matrix: linalg::dagger(&self.matrix),
        }
    }
}

fn check_party(party: Party, n_parties: usize) -> Result<()> {
    if party.0 >= n_parties {
        return Err(Error::Addressing(format!(
            "party {party} out of range for a {n_parties}-party state"
        )));
    }
    Ok(())
}

/// `(I ⊗ .. ⊗ U ⊗ .. ⊗ I) rho (..)^dagger`.
pub fn apply_local_unitary<T: Real>(
    rho: &DensityMatrix<T>,
    u: &LocalUnitary<T>,
) -> Result<DensityMatrix<T>> {
    check_party(u.party, rho.n_parties)?;
    let full = linalg::embed_single(&u.matrix, u.party.0, rho.n_parties);
    let out = full.dot(&rho.entries).dot(&linalg::dagger(&full));
    Ok(DensityMatrix {
        n_parties: rho.n_parties,
        entries: out,
    })
}

/// Reduced state on `keep` (strictly increasing party indices).
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: &[Party]) -> Result<DensityMatrix<T>> {
    let n = rho.n_parties;
    if keep.is_empty() {
        return Err(Error::Addressing("partial trace must keep at least one party".into()));
    }
    for w in keep.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Addressing(format!(
                "kept parties must be strictly increasing, got {} before {}",
                w[0], w[1]
            )));
        }
    }
    for &p in keep {
        check_party(p, n)?;
    }
    let traced: Vec<usize> = (0..n).filter(|k| !keep.iter().any(|p| p.0 == *k)).collect();
    let kept: Vec<usize> = keep.iter().map(|p| p.0).collect();

    // scatter the bits of `sub` (over `parties`, first party most significant)
    // into a full basis index
    let scatter = |sub: usize, parties: &[usize]| -> usize {
        let m = parties.len();
        parties.iter().enumerate().fold(0, |acc, (pos, &party)| {
            let bit = (sub >> (m - 1 - pos)) & 1;
            acc | (bit << (n - 1 - party))
        })
    };

    let kdim = 1 << kept.len();
    let tdim = 1 << traced.len();
    let mut out = CMatrix::from_elem((kdim, kdim), Complex::new(T::zero(), T::zero()));
    for i in 0..kdim {
        let fi = scatter(i, &kept);
        for j in 0..kdim {
            let fj = scatter(j, &kept);
            let mut acc = Complex::new(T::zero(), T::zero());
            for t in 0..tdim {
                let ft = scatter(t, &traced);
                acc += rho.entries[[fi | ft, fj | ft]];
            }
            out[[i, j]] = acc;
        }
    }
    Ok(DensityMatrix {
        n_parties: kept.len(),
        entries: out,
    })
}

/// Normalized Gram matrix `G G^dagger / Tr(G G^dagger)` of a seeded
/// `2^n x rank` complex Gaussian matrix `G`, filled row-major.
pub fn random_density<T: Real>(seed: u64, n_parties: usize, rank: usize) -> Result<DensityMatrix<T>> {
    check_parties(n_parties)?;
    let dim = 1 << n_parties;
    if rank == 0 || rank > dim {
        return Err(Error::Parameter(format!(
            "rank must be in 1..={dim}, got {rank}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let g = CMatrix::<T>::from_shape_simple_fn((dim, rank), || complex_normal(&mut rng));
    let gram = g.dot(&linalg::dagger(&g));
    let tr = linalg::trace(&gram).re;
    let mut entries = gram.mapv(|z| z / tr);
    // exact Hermitian symmetry
    for i in 0..dim {
        entries[[i, i]].im = T::zero();
        for j in 0..i {
            entries[[i, j]] = entries[[j, i]].conj();
        }
    }
    Ok(DensityMatrix { n_parties, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ghz_pure_amplitudes() {
        let psi = ghz_pure::<f64>();
        let a = psi.amplitudes();
        for (i, z) in a.iter().enumerate() {
            let expect = if i == 0 || i == 7 { 0.5f64.sqrt() } else { 0.0 };
            assert_abs_diff_eq!(z.re, expect, epsilon = 1e-15);
            assert_eq!(z.im, 0.0);
        }
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        assert!(pure_to_density(&psi).max_abs_diff(&ghz_density()) < 1e-15);
    }

    #[test]
    fn ghz_density_is_valid_and_pure() {
        let rho = ghz_density::<f64>();
        rho.validate().unwrap();
        assert_eq!(rho.entries()[[0, 0]].re, 0.5);
        assert_eq!(rho.entries()[[0, 7]].re, 0.5);
        assert_eq!(rho.entries()[[7, 7]].re, 0.5);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn basis_projector() {
        let rho = pure_to_density(&PureState::<f64>::basis(3, 0).unwrap());
        for ((i, j), z) in rho.entries().indexed_iter() {
            let expect = if i == 0 && j == 0 { 1.0 } else { 0.0 };
            assert_eq!(z.re, expect);
        }
        let ev = rho.eigenvalues();
        assert_abs_diff_eq!(ev[7], 1.0, epsilon = 1e-12);
        assert!(ev[..7].iter().all(|e| e.abs() < 1e-12));
    }

    #[test]
    fn pure_state_rejects_bad_input() {
        let z = Complex::new(0.0, 0.0);
        assert!(matches!(
            PureState::<f64>::new(2, vec![z; 3]),
            Err(Error::Validation(Invariant::Dimension { .. }))
        ));
        assert!(matches!(
            PureState::<f64>::new(1, vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]),
            Err(Error::Validation(Invariant::Normalization { .. }))
        ));
        assert!(PureState::<f64>::new(0, vec![]).is_err());
        assert!(PureState::<f64>::new(7, vec![]).is_err());
    }

    #[test]
    fn validation_names_the_invariant() {
        let ghz = ghz_density::<f64>();

        let mut m = ghz.entries().clone();
        m[[0, 0]].re = 0.4;
        assert!(matches!(
            DensityMatrix::new(3, m),
            Err(Error::Validation(Invariant::UnitTrace { .. }))
        ));

        let mut m = ghz.entries().clone();
        m[[1, 2]] = Complex::new(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(3, m),
            Err(Error::Validation(Invariant::Hermitian { row: 1, col: 2, .. }))
        ));

        // diag(1.5, -0.5): Hermitian, unit trace, not PSD
        let mut m = linalg::identity::<f64>(2);
        m[[0, 0]].re = 1.5;
        m[[1, 1]].re = -0.5;
        assert!(matches!(
            DensityMatrix::new(1, m),
            Err(Error::Validation(Invariant::PositiveSemidefinite { .. }))
        ));

        assert!(matches!(
            DensityMatrix::<f64>::new(2, linalg::identity(3)),
            Err(Error::Validation(Invariant::Dimension { .. }))
        ));
    }

    #[test]
    fn rank_deficient_states_validate() {
        // rank 1 in dimension 64
        random_density::<f64>(5, 6, 1).unwrap().validate().unwrap();
    }

    #[test]
    fn identity_conjugation_is_noop() {
        let rho = ghz_density::<f64>();
        for k in 0..3 {
            let out = apply_local_unitary(&rho, &LocalUnitary::identity(Party(k))).unwrap();
            assert_eq!(out, rho);
        }
    }

    #[test]
    fn apply_local_unitary_rejects_bad_party() {
        let rho = ghz_density::<f64>();
        assert!(matches!(
            apply_local_unitary(&rho, &LocalUnitary::identity(Party(3))),
            Err(Error::Addressing(_))
        ));
    }

    #[test]
    fn local_unitary_rejects_non_unitary() {
        let mut m = linalg::identity::<f64>(2);
        m[[0, 1]].re = 0.1;
        assert!(matches!(
            LocalUnitary::new(Party::A, m),
            Err(Error::Validation(Invariant::Unitary { .. }))
        ));
    }

    #[test]
    fn partial_trace_addressing_errors() {
        let rho = ghz_density::<f64>();
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::Addressing(_))));
        assert!(matches!(
            partial_trace(&rho, &[Party::B, Party::A]),
            Err(Error::Addressing(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[Party::A, Party::A]),
            Err(Error::Addressing(_))
        ));
        assert!(matches!(partial_trace(&rho, &[Party(3)]), Err(Error::Addressing(_))));
    }

    #[test]
    fn single_party_marginals_of_ghz_are_maximally_mixed() {
        let rho = ghz_density::<f64>();
        let half = DensityMatrix::<f64>::maximally_mixed(1).unwrap();
        for k in 0..3 {
            let m = partial_trace(&rho, &[Party(k)]).unwrap();
            assert!(m.max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn product_state_marginal() {
        let rho = pure_to_density(&PureState::<f64>::basis(3, 0).unwrap());
        let bc = partial_trace(&rho, &[Party::B, Party::C]).unwrap();
        let expect = pure_to_density(&PureState::<f64>::basis(2, 0).unwrap());
        assert!(bc.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn keep_everything_is_identity() {
        let rho = random_density::<f64>(1, 3, 4).unwrap();
        let same = partial_trace(&rho, &[Party::A, Party::B, Party::C]).unwrap();
        assert_eq!(same, rho);
    }

    #[test]
    fn random_density_contract() {
        let a = random_density::<f64>(99, 3, 2).unwrap();
        let b = random_density::<f64>(99, 3, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_density::<f64>(100, 3, 2).unwrap());
        a.validate().unwrap();
        let p = random_density::<f64>(4, 3, 1).unwrap();
        assert_abs_diff_eq!(p.purity(), 1.0, epsilon = 1e-12);
        assert!(matches!(random_density::<f64>(0, 3, 0), Err(Error::Parameter(_))));
        assert!(matches!(random_density::<f64>(0, 3, 9), Err(Error::Parameter(_))));
    }

    #[test]
    fn party_labels() {
        assert_eq!("a".parse::<Party>().unwrap(), Party::A);
        assert_eq!("c".parse::<Party>().unwrap(), Party::C);
        assert_eq!("4".parse::<Party>().unwrap(), Party(4));
        assert!("ab".parse::<Party>().is_err());
        assert_eq!(Party::B.to_string(), "b");
    }

    #[test]
    fn works_in_single_precision() {
        let rho = random_density::<f32>(3, 3, 8).unwrap();
        rho.validate().unwrap();
        let m = partial_trace(&rho, &[Party::A]).unwrap();
        m.validate().unwrap();
    }
}
