//! Hilbert-Schmidt (Pauli basis) decomposition.
//!
//! A density matrix on `n` parties is expanded as
//!
//! ```text
//! rho = 2^-n * sum_s c_s * M_s,     c_s = Tr(rho M_s)
//! ```
//!
//! over all `4^n` Pauli strings `M_s`. Each coefficient is the expectation
//! value of its Pauli string, so the all-identity coefficient is 1 and the
//! rest lie in `[-1, 1]`. For three parties the coefficients group into the
//! familiar blocks:
//!
//! | block  | strings          | meaning                      |
//! |--------|------------------|------------------------------|
//! | `unit` | `III`            | normalization                |
//! | `r`    | `σI I`           | Bloch vector of `a`          |
//! | `s`    | `Iσ I`           | Bloch vector of `b`          |
//! | `p`    | `I Iσ`           | Bloch vector of `c`          |
//! | `q_ab` | `σσI`            | `a`-`b` correlation matrix   |
//! | `o_ac` | `σIσ`            | `a`-`c` correlation matrix   |
//! | `t_bc` | `Iσσ`            | `b`-`c` correlation matrix   |
//! | `R`    | `σσσ`            | three-party correlation tensor |
//!
//! The `a`-`b` matrix is often written `p_ij` in the literature; it is
//! called `q_ab` here to keep it apart from the vector `p`.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Invariant, Result};
use crate::linalg::{self, CMatrix};
use crate::pauli::{times_i_pow, PauliString};
use crate::qstate::{DensityMatrix, LocalUnitary, Party};
use crate::real::Real;

/// All `4^n` Hilbert-Schmidt coefficients of an `n`-party operator, stored
/// densely in [`PauliString::index`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor<T: Real> {
    n_parties: usize,
    coeffs: Vec<T>,
}

impl<T: Real> CoefficientTensor<T> {
    /// Coefficients of `I / 2^n`: unit coefficient 1, all others 0.
    pub fn maximally_mixed(n_parties: usize) -> Self {
        let mut coeffs = vec![T::zero(); 1 << (2 * n_parties)];
        coeffs[0] = T::one();
        Self { n_parties, coeffs }
    }

    pub fn from_vec(n_parties: usize, coeffs: Vec<T>) -> Result<Self> {
        let expected = 1 << (2 * n_parties);
        if coeffs.len() != expected {
            return Err(Invariant::Dimension {
                expected,
                found: coeffs.len(),
            }
            .into());
        }
        Ok(Self { n_parties, coeffs })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coeffs
    }

    pub fn get(&self, s: &PauliString) -> T {
        assert_eq!(s.n_parties(), self.n_parties, "Pauli string length mismatch");
        self.coeffs[s.index()]
    }

    pub fn set(&mut self, s: &PauliString, value: T) {
        assert_eq!(s.n_parties(), self.n_parties, "Pauli string length mismatch");
        self.coeffs[s.index()] = value;
    }

    /// Coefficient by numeric labels, e.g. `at(&[1, 2, 2])` for `XYY`.
    pub fn at(&self, labels: &[u8]) -> T {
        assert_eq!(labels.len(), self.n_parties, "label count mismatch");
        let idx = labels.iter().fold(0usize, |acc, &l| {
            assert!(l < 4, "Pauli label {l} out of range");
            (acc << 2) | l as usize
        });
        self.coeffs[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliString, T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &v)| (PauliString::from_index(self.n_parties, i), v))
    }

    /// The all-identity coefficient.
    pub fn unit(&self) -> T {
        self.coeffs[0]
    }

    /// `sum_s c_s^2`, equal to `2^n Tr(rho^2)`.
    pub fn sum_of_squares(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, &c| a + c * c)
    }

    /// Largest per-coefficient deviation; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.n_parties != other.n_parties {
            return T::infinity();
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// Largest deviation over the strings of one block.
    pub fn block_max_abs_diff(&self, other: &Self, block: Block) -> T {
        assert_eq!(self.n_parties, other.n_parties, "party count mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .filter(|(i, _)| PauliString::from_index(self.n_parties, *i).support() == block.support)
            .map(|(_, (a, b))| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// Bloch vector of one party: the weight-1 coefficients on `party`.
    pub fn bloch_vector(&self, party: Party) -> [T; 3] {
        std::array::from_fn(|i| self.at(&self.single(party, i as u8 + 1)))
    }

    /// Two-party correlation matrix `C[i][j] = c(sigma_i on p, sigma_j on q)`.
    pub fn correlation_matrix(&self, p: Party, q: Party) -> [[T; 3]; 3] {
        assert!(p != q, "correlation matrix needs two distinct parties");
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut labels = vec![0u8; self.n_parties];
                labels[p.0] = i as u8 + 1;
                labels[q.0] = j as u8 + 1;
                self.at(&labels)
            })
        })
    }

    fn single(&self, party: Party, label: u8) -> Vec<u8> {
        let mut labels = vec![0u8; self.n_parties];
        labels[party.0] = label;
        labels
    }

    fn assert_three(&self) {
        assert_eq!(self.n_parties, 3, "named blocks exist only for three parties");
    }

    /// Bloch vector of `a`. Panics unless `n_parties == 3`; the same
    /// holds for the other named views.
    pub fn r(&self) -> [T; 3] {
        self.assert_three();
        self.bloch_vector(Party::A)
    }

    pub fn s(&self) -> [T; 3] {
        self.assert_three();
        self.bloch_vector(Party::B)
    }

    pub fn p(&self) -> [T; 3] {
        self.assert_three();
        self.bloch_vector(Party::C)
    }

    pub fn q_ab(&self) -> [[T; 3]; 3] {
        self.assert_three();
        self.correlation_matrix(Party::A, Party::B)
    }

    pub fn o_ac(&self) -> [[T; 3]; 3] {
        self.assert_three();
        self.correlation_matrix(Party::A, Party::C)
    }

    pub fn t_bc(&self) -> [[T; 3]; 3] {
        self.assert_three();
        self.correlation_matrix(Party::B, Party::C)
    }

    /// Three-party correlation tensor `R[α][β][γ]`.
    pub fn big_r(&self) -> [[[T; 3]; 3]; 3] {
        self.assert_three();
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| self.at(&[i as u8 + 1, j as u8 + 1, k as u8 + 1]))
            })
        })
    }
}

/// Group of coefficients sharing the same set of non-identity parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    n_parties: usize,
    support: u32,
}

impl Block {
    pub fn new(n_parties: usize, support: u32) -> Self {
        assert!(support < (1 << n_parties), "support outside party range");
        Self { n_parties, support }
    }

    /// All `2^n` blocks, ordered by weight then by party letters.
    pub fn all(n_parties: usize) -> Vec<Block> {
        let mut v: Vec<Block> = (0..1u32 << n_parties)
            .map(|support| Block { n_parties, support })
            .collect();
        v.sort_by_key(|b| {
            let parties: Vec<usize> = b.parties().collect();
            (parties.len(), parties)
        });
        v
    }

    pub fn support(&self) -> u32 {
        self.support
    }

    pub fn weight(&self) -> usize {
        self.support.count_ones() as usize
    }

    pub fn involves(&self, party: Party) -> bool {
        self.support & (1 << party.0) != 0
    }

    pub fn parties(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_parties).filter(|k| self.support & (1 << k) != 0)
    }

    /// Number of coefficients in the block.
    pub fn size(&self) -> usize {
        3usize.pow(self.weight() as u32)
    }

    pub fn name(&self) -> String {
        if self.n_parties == 3 {
            let named = match self.support {
                0b000 => "unit",
                0b001 => "r",
                0b010 => "s",
                0b100 => "p",
                0b011 => "q_ab",
                0b101 => "o_ac",
                0b110 => "t_bc",
                _ => "R",
            };
            return named.to_string();
        }
        if self.support == 0 {
            return "unit".to_string();
        }
        self.parties().map(|k| Party(k).letter()).collect()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// 3x3 real orthogonal matrix acting on the Pauli vector of one party.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix<T: Real> {
    m: [[T; 3]; 3],
}

impl<T: Real> RotationMatrix<T> {
    /// Validates orthogonality to [`Real::exact_tol`]. Improper rotations
    /// (det -1) are accepted.
    pub fn new(m: [[T; 3]; 3]) -> Result<Self> {
        let r = Self { m };
        let defect = r.orthogonality_defect();
        if !(defect < T::exact_tol()) {
            return Err(Invariant::Orthogonal {
                deviation: defect.to_f64().unwrap_or(f64::NAN),
            }
            .into());
        }
        Ok(r)
    }

    pub fn identity() -> Self {
        Self {
            m: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
            }),
        }
    }

    pub fn rows(&self) -> &[[T; 3]; 3] {
        &self.m
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: std::array::from_fn(|i| std::array::from_fn(|j| self.m[j][i])),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            m: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..3).fold(T::zero(), |a, k| a + self.m[i][k] * other.m[k][j])
                })
            }),
        }
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entry of `|O O^T - I|`.
    pub fn orthogonality_defect(&self) -> T {
        let p = self.mul(&self.transpose());
        let mut worst = T::zero();
        for (i, row) in p.m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let want = if i == j { T::one() } else { T::zero() };
                worst = worst.max((v - want).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }

    pub fn apply(&self, v: [T; 3]) -> [T; 3] {
        std::array::from_fn(|i| (0..3).fold(T::zero(), |a, j| a + self.m[i][j] * v[j]))
    }
}

/// `c_s = Tr(rho M_s)` for every Pauli string `s`.
///
/// Fails if `rho` is not Hermitian or a trace comes out with a non-negligible
/// imaginary part.
pub fn decompose<T: Real>(rho: &DensityMatrix<T>) -> Result<CoefficientTensor<T>> {
    rho.check_hermitian()?;
    let n = rho.n_parties();
    let mut coeffs = Vec::with_capacity(1 << (2 * n));
    let dim = rho.dim();
    let entries = rho.entries();
    for s in PauliString::all(n) {
        // Tr(rho M) = sum_k M[k][col(k)] rho[col(k)][k]
        let z = (0..dim).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
            let (col, phase) = s.row_entry(k);
            acc + times_i_pow(entries[[col, k]], phase)
        });
        if !(z.im.abs() < T::exact_tol()) {
            return Err(Invariant::RealExpectation {
                string: s.to_string(),
                imag: z.im.to_f64().unwrap_or(f64::NAN),
            }
            .into());
        }
        coeffs.push(z.re);
    }
    Ok(CoefficientTensor { n_parties: n, coeffs })
}

/// `rho = 2^-n sum_s c_s M_s`.
///
/// The result is Hermitian with unit trace but is not checked for
/// positivity; arbitrary coefficient sets need not describe a state.
pub fn reconstruct<T: Real>(coeffs: &CoefficientTensor<T>) -> Result<DensityMatrix<T>> {
    let unit = coeffs.unit();
    if !((unit - T::one()).abs() < T::exact_tol()) {
        return Err(Error::Normalization(unit.to_f64().unwrap_or(f64::NAN)));
    }
    let n = coeffs.n_parties;
    let dim = 1 << n;
    let scale = T::one() / T::lit(dim as f64);
    let mut acc = CMatrix::from_elem((dim, dim), Complex::new(T::zero(), T::zero()));
    for (s, c) in coeffs.iter() {
        if c == T::zero() {
            continue;
        }
        let w = Complex::new(c * scale, T::zero());
        for row in 0..dim {
            let (col, phase) = s.row_entry(row);
            acc[[row, col]] += times_i_pow(w, phase);
        }
    }
    DensityMatrix::from_matrix_unchecked(n, acc)
}

/// Adjoint map `SU(2) -> SO(3)`: the matrix `M` with
/// `U σ_j U^dagger = sum_i M[i][j] σ_i`, i.e. column `j` holds the image of
/// `σ_j`. With this orientation `M(UV) = M(U) M(V)` and a Bloch vector
/// transforms as `r -> M r` under `rho -> U rho U^dagger`. For
/// `U = exp(-i θ σ_3 / 2)` it is the rotation by `θ` about axis 3.
///
/// A global phase of `u` cancels.
pub fn su2_to_so3<T: Real>(u: &CMatrix<T>) -> Result<RotationMatrix<T>> {
    if u.dim() != (2, 2) {
        return Err(Invariant::Dimension {
            expected: 2,
            found: u.nrows().max(u.ncols()),
        }
        .into());
    }
    let defect = linalg::unitarity_defect(u);
    if !(defect < T::exact_tol()) {
        return Err(Invariant::Unitary {
            deviation: defect.to_f64().unwrap_or(f64::NAN),
        }
        .into());
    }
    let ud = linalg::dagger(u);
    let sigma: [CMatrix<T>; 3] = std::array::from_fn(|i| linalg::pauli_matrix(i as u8 + 1));
    let half = T::lit(0.5);
    let images: [CMatrix<T>; 3] = std::array::from_fn(|j| u.dot(&sigma[j]).dot(&ud));
    let m = std::array::from_fn(|i| {
        std::array::from_fn(|j| linalg::trace_of_product(&sigma[i], &images[j]).re * half)
    });
    Ok(RotationMatrix { m })
}

/// Contract the Pauli index of `party` with `rot`; strings with identity on
/// `party` are copied through untouched.
fn rotate_mode<T: Real>(coeffs: &[T], n_parties: usize, party: usize, rot: &RotationMatrix<T>) -> Vec<T> {
    let stride = 1usize << (2 * (n_parties - 1 - party));
    let mut out = coeffs.to_vec();
    for (idx, slot) in out.iter_mut().enumerate() {
        let label = (idx / stride) & 3;
        if label == 0 {
            continue;
        }
        let base = idx - label * stride;
        let row = &rot.m[label - 1];
        *slot = (0..3).fold(T::zero(), |a, j| a + row[j] * coeffs[base + (j + 1) * stride]);
    }
    out
}

/// Change of measurement frame, one rotation per party.
///
/// Vectors transform as `v' = O v`, matrices as `T' = O_x T O_y^T` and the
/// three-party tensor with one rotation per index. Parties whose rotation
/// is the identity are skipped, so their blocks are returned bit-for-bit.
pub fn rotate_frame<T: Real>(
    coeffs: &CoefficientTensor<T>,
    rotations: &[RotationMatrix<T>],
) -> Result<CoefficientTensor<T>> {
    if rotations.len() != coeffs.n_parties {
        return Err(Error::Parameter(format!(
            "expected {} rotations, got {}",
            coeffs.n_parties,
            rotations.len()
        )));
    }
    let identity = RotationMatrix::identity();
    let mut data = coeffs.coeffs.clone();
    for (k, rot) in rotations.iter().enumerate() {
        if *rot == identity {
            continue;
        }
        data = rotate_mode(&data, coeffs.n_parties, k, rot);
    }
    Ok(CoefficientTensor {
        n_parties: coeffs.n_parties,
        coeffs: data,
    })
}

/// Coefficients of `U rho U^dagger` computed directly from those of `rho`.
///
/// `Tr(U rho U^dagger σ_j) = Tr(rho U^dagger σ_j U)` and
/// `U^dagger σ_j U = sum_i M[j][i] σ_i` with `M = su2_to_so3(U)` (the
/// transpose of `su2_to_so3(U^dagger)`), so the party's Pauli index is
/// contracted with `M`. Strings with identity on the acted party are never
/// touched.
pub fn transform_under_local_unitary<T: Real>(
    coeffs: &CoefficientTensor<T>,
    u: &LocalUnitary<T>,
) -> Result<CoefficientTensor<T>> {
    let party = u.party();
    if party.0 >= coeffs.n_parties {
        return Err(Error::Addressing(format!(
            "party {party} out of range for a {}-party tensor",
            coeffs.n_parties
        )));
    }
    let rot = su2_to_so3(u.matrix())?;
    Ok(CoefficientTensor {
        n_parties: coeffs.n_parties,
        coeffs: rotate_mode(&coeffs.coeffs, coeffs.n_parties, party.0, &rot),
    })
}

impl<T: Real> CoefficientTensor<T> {
    /// Labels of every string with a nonzero coefficient (beyond `tol`).
    pub fn nonzero(&self, tol: T) -> Vec<(PauliString, T)> {
        self.iter().filter(|(_, v)| v.abs() > tol).collect()
    }
}
