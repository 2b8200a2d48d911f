//! Dense complex matrix helpers over `ndarray`.

use nalgebra::DMatrix;
use ndarray::{linalg::kron, Array2};
use num_complex::{Complex, Complex64};

use crate::real::Real;

/// Dense complex matrix.
pub type CMatrix<T> = Array2<Complex<T>>;

pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub fn identity<T: Real>(dim: usize) -> CMatrix<T> {
    Array2::from_shape_fn((dim, dim), |(i, j)| {
        if i == j {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// Conjugate transpose.
pub fn dagger<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.t().mapv(|z| z.conj())
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all<T: Real>(factors: &[CMatrix<T>]) -> CMatrix<T> {
    let mut acc = identity::<T>(1);
    for f in factors {
        acc = kron(&acc, f);
    }
    acc
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.diag().iter().fold(Complex::new(T::zero(), T::zero()), |a, &z| a + z)
}

/// `Tr(a b)` without forming the product.
pub fn trace_of_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    let n = a.nrows();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            acc += a[[i, k]] * b[[k, i]];
        }
    }
    acc
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).norm())
        .fold(T::zero(), T::max)
}

/// Largest entrywise modulus of `U U^dagger - I`.
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> T {
    max_abs_diff(&u.dot(&dagger(u)), &identity(u.nrows()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Only the lower triangle is read. The decomposition runs in `f64`
/// regardless of `T`.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let n = m.nrows();
    let dm = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        let z = m[[i, j]];
        Complex64::new(
            z.re.to_f64().unwrap_or(f64::NAN),
            z.im.to_f64().unwrap_or(f64::NAN),
        )
    });
    let mut ev: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().map(T::lit).collect()
}

/// The 2x2 matrix for Pauli label 0..=3 (I, sigma_1, sigma_2, sigma_3).
pub fn pauli_matrix<T: Real>(label: u8) -> CMatrix<T> {
    let (o, z, i) = (T::one(), T::zero(), T::one());
    let raw = match label {
        0 => [[c(o, z), c(z, z)], [c(z, z), c(o, z)]],
        1 => [[c(z, z), c(o, z)], [c(o, z), c(z, z)]],
        2 => [[c(z, z), c(z, -i)], [c(z, i), c(z, z)]],
        3 => [[c(o, z), c(z, z)], [c(z, z), c(-o, z)]],
        _ => panic!("Pauli label {label} out of range"),
    };
    Array2::from_shape_fn((2, 2), |(r, k)| raw[r][k])
}

/// `I ⊗ .. ⊗ op ⊗ .. ⊗ I` with `op` at position `party` of `n_parties`.
pub fn embed_single<T: Real>(op: &CMatrix<T>, party: usize, n_parties: usize) -> CMatrix<T> {
    let factors: Vec<CMatrix<T>> = (0..n_parties)
        .map(|k| if k == party { op.clone() } else { identity(2) })
        .collect();
    kron_all(&factors)
}
