//! Seeded randomness.
//!
//! Every random draw in the crate goes through [`seeded_rng`]: a ChaCha8
//! stream seeded directly from the user's 64-bit integer via
//! `SeedableRng::seed_from_u64`. Sub-streams for parallel work use the
//! derived seed `seed + i` (wrapping).

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;
use crate::real::Real;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of sub-stream `index` derived from `seed`.
pub fn derived_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}

/// Complex number with independent standard-normal real and imaginary parts.
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-distributed 2x2 unitary.
///
/// Draws a complex Gaussian matrix and orthonormalizes its columns by
/// Gram-Schmidt. The implied R factor has a positive real diagonal, which is
/// the phase normalization that makes the Q factor Haar distributed.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R) -> CMatrix<T> {
    loop {
        let g: [Complex<T>; 4] = std::array::from_fn(|_| complex_normal(rng));
        // columns (g0, g2) and (g1, g3)
        let (a0, a1) = (g[0], g[2]);
        let n0 = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if n0 <= T::epsilon() {
            continue;
        }
        let (q00, q10) = (a0 / n0, a1 / n0);
        let (b0, b1) = (g[1], g[3]);
        let proj = q00.conj() * b0 + q10.conj() * b1;
        let (r0, r1) = (b0 - q00 * proj, b1 - q10 * proj);
        let n1 = (r0.norm_sqr() + r1.norm_sqr()).sqrt();
        if n1 <= T::epsilon() {
            continue;
        }
        let (q01, q11) = (r0 / n1, r1 / n1);
        return CMatrix::from_shape_vec((2, 2), vec![q00, q01, q10, q11])
            .expect("2x2 shape");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = seeded_rng(7);
        for _ in 0..200 {
            let u = haar_unitary::<f64, _>(&mut rng);
            assert!(unitarity_defect(&u) < 1e-14);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a = haar_unitary::<f64, _>(&mut seeded_rng(3));
        let b = haar_unitary::<f64, _>(&mut seeded_rng(3));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_first_moment_vanishes() {
        // E[U] = 0 under the Haar measure
        let mut rng = seeded_rng(11);
        let n = 20_000;
        let mut mean = Complex::new(0.0, 0.0);
        for _ in 0..n {
            mean += haar_unitary::<f64, _>(&mut rng)[[0, 0]];
        }
        mean /= n as f64;
        assert!(mean.norm() < 0.02, "mean {mean}");
    }
}
