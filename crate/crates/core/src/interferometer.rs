//! Three-arm GHZ interferometer.
//!
//! Each particle leaves the source through an unprimed or primed beam
//! (`|0>` / `|1>` of its party). The primed beam picks up a phase `phi_k`
//! and both beams meet on a 50-50 beam splitter in front of detectors
//! `d` (unprimed, outcome bit 0) and `d'` (primed, outcome bit 1).
//!
//! Detector values: unprimed `+1`, primed `-1`. With this convention the
//! three-party correlation comes out as `E = sin(phi_1 + phi_2 + phi_3)`.
//! Flipping the convention on one arm flips the sign of `E`.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qstate::{apply_local_unitary, ghz_pure, DensityMatrix, LocalUnitary, Party};
use crate::random::{derived_seed, seeded_rng};
use crate::real::Real;

/// Phase shifts (radians) on the primed beams of arms `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSettings<T: Real> {
    pub phi1: T,
    pub phi2: T,
    pub phi3: T,
}

impl<T: Real> PhaseSettings<T> {
    pub fn new(phi1: T, phi2: T, phi3: T) -> Result<Self> {
        if !(phi1.is_finite() && phi2.is_finite() && phi3.is_finite()) {
            return Err(Error::Parameter("phase settings must be finite".into()));
        }
        Ok(Self { phi1, phi2, phi3 })
    }

    pub fn phases(&self) -> [T; 3] {
        [self.phi1, self.phi2, self.phi3]
    }

    pub fn total(&self) -> T {
        self.phi1 + self.phi2 + self.phi3
    }
}

/// Probabilities of the eight detector triples, indexed by
/// `4 x_a + 2 x_b + x_c` with `x = 0` for `d, e, f` and `1` for
/// `d', e', f'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution<T: Real> {
    pub probabilities: [T; 8],
}

/// Detector value of outcome bit `x`.
fn detector_value<T: Real>(x: usize) -> T {
    if x == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Product of the three detector values of outcome `index`.
pub fn parity_value<T: Real>(index: usize) -> T {
    detector_value::<T>((index >> 2) & 1) * detector_value((index >> 1) & 1) * detector_value(index & 1)
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn probability(&self, xa: usize, xb: usize, xc: usize) -> T {
        self.probabilities[4 * xa + 2 * xb + xc]
    }

    pub fn total(&self) -> T {
        self.probabilities.iter().fold(T::zero(), |a, &p| a + p)
    }

    /// `sum_x p(x) v_a v_b v_c`, clamped to `[-1, 1]` against rounding.
    pub fn correlation(&self) -> T {
        self.probabilities
            .iter()
            .enumerate()
            .fold(T::zero(), |a, (i, &p)| a + p * parity_value::<T>(i))
            .max(-T::one())
            .min(T::one())
    }

    /// Single-arm detector marginal `[P(unprimed), P(primed)]`.
    pub fn marginal(&self, party: Party) -> [T; 2] {
        assert!(party.0 < 3, "three-arm distribution");
        let shift = 2 - party.0;
        let mut m = [T::zero(); 2];
        for (i, &p) in self.probabilities.iter().enumerate() {
            m[(i >> shift) & 1] += p;
        }
        m
    }
}

/// 50-50 beam splitter including the phase shift on the primed input:
/// `(d, d') = U (a, a')` with
/// `U = [[1, -i e^{-i phi}], [-i, e^{-i phi}]] / sqrt(2)`.
pub fn beam_splitter_unitary<T: Real>(phi: T) -> CMatrix<T> {
    let h = T::FRAC_1_SQRT_2();
    let z = T::zero();
    let e = Complex::from_polar(h, -phi);
    let minus_i = Complex::new(z, -h);
    CMatrix::from_shape_vec(
        (2, 2),
        vec![Complex::new(h, z), e * Complex::new(z, -T::one()), minus_i, e],
    )
    .expect("2x2 shape")
}

/// Ket evolution of one arm: column `k` is the image of input beam `k` in
/// the detector basis,
/// `|a> -> (|d> + i|d'>)/sqrt(2)`, `|a'> -> e^{i phi} (|d'> + i|d>)/sqrt(2)`.
pub fn arm_evolution<T: Real>(phi: T) -> CMatrix<T> {
    let h = T::FRAC_1_SQRT_2();
    let z = T::zero();
    let e = Complex::from_polar(h, phi);
    let i = Complex::new(z, T::one());
    CMatrix::from_shape_vec((2, 2), vec![Complex::new(h, z), e * i, Complex::new(z, h), e])
        .expect("2x2 shape")
}

/// Detector-triple distribution of the GHZ source under `settings`.
pub fn evolve_ghz<T: Real>(settings: &PhaseSettings<T>) -> OutcomeDistribution<T> {
    let arms: Vec<CMatrix<T>> = settings.phases().iter().map(|&p| arm_evolution(p)).collect();
    let full = linalg::kron_all(&arms);
    let psi = ndarray::Array1::from(ghz_pure::<T>().amplitudes().to_vec());
    let out = full.dot(&psi);
    OutcomeDistribution {
        probabilities: std::array::from_fn(|i| out[i].norm_sqr()),
    }
}

/// Detector-triple distribution for an arbitrary three-party state: apply
/// [`beam_splitter_unitary`] on every arm and read the diagonal.
pub fn outcome_distribution<T: Real>(
    rho: &DensityMatrix<T>,
    settings: &PhaseSettings<T>,
) -> Result<OutcomeDistribution<T>> {
    if rho.n_parties() != 3 {
        return Err(Error::Parameter(format!(
            "interferometer needs a three-party state, got {}",
            rho.n_parties()
        )));
    }
    let mut out = rho.clone();
    for (k, &phi) in settings.phases().iter().enumerate() {
        let u = LocalUnitary::new(Party(k), beam_splitter_unitary(phi))?;
        out = apply_local_unitary(&out, &u)?;
    }
    Ok(OutcomeDistribution {
        probabilities: std::array::from_fn(|i| out.entries()[[i, i]].re),
    })
}

/// Three-party correlation of the GHZ source.
pub fn correlation<T: Real>(settings: &PhaseSettings<T>) -> T {
    evolve_ghz(settings).correlation()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhszVerdict {
    /// Quantum fourth correlation has the opposite sign to the local-realist
    /// prediction.
    Contradiction,
    Consistent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhszReport<T: Real> {
    pub settings: [PhaseSettings<T>; 4],
    pub correlations: [T; 4],
    pub product: T,
    /// Value forced on the fourth setting by the first three, when those
    /// are perfect (`|E| = 1`).
    pub local_realist_fourth: Option<T>,
    pub verdict: GhszVerdict,
}

/// The four canonical settings `(π/2,0,0)`, `(0,π/2,0)`, `(0,0,π/2)`,
/// `(π/2,π/2,π/2)`.
pub fn ghsz_settings<T: Real>() -> [PhaseSettings<T>; 4] {
    let (z, h) = (T::zero(), T::FRAC_PI_2());
    [
        PhaseSettings { phi1: h, phi2: z, phi3: z },
        PhaseSettings { phi1: z, phi2: h, phi3: z },
        PhaseSettings { phi1: z, phi2: z, phi3: h },
        PhaseSettings { phi1: h, phi2: h, phi3: h },
    ]
}

/// Evaluates the GHSZ argument.
///
/// A phase of 0 or π/2 on an arm selects one of two dichotomic local
/// observables, call them `x_k` and `y_k`. Perfect correlations at the first
/// three settings fix `y_a x_b x_c`, `x_a y_b x_c` and `x_a x_b y_c`. Any
/// local assignment of pre-existing `±1` values then has
/// `y_a y_b y_c = (y_a x_b x_c)(x_a y_b x_c)(x_a x_b y_c)` because each
/// `x_k` appears squared, so the prediction for the fourth setting is the
/// product of the first three correlations.
pub fn ghsz_contradiction_report<T: Real>() -> GhszReport<T> {
    let settings = ghsz_settings::<T>();
    let correlations = settings.map(|s| correlation(&s));
    let product = correlations.iter().fold(T::one(), |a, &e| a * e);
    let perfect = correlations[..3]
        .iter()
        .all(|e| (e.abs() - T::one()).abs() < T::exact_tol());
    let local_realist_fourth = perfect.then(|| {
        correlations[..3]
            .iter()
            .fold(T::one(), |a, &e| a * e.signum())
    });
    let verdict = match local_realist_fourth {
        Some(lr) if correlations[3] * lr < T::zero() => GhszVerdict::Contradiction,
        _ => GhszVerdict::Consistent,
    };
    GhszReport {
        settings,
        correlations,
        product,
        local_realist_fourth,
        verdict,
    }
}

fn draw_counts<R: Rng>(cdf: &[f64; 8], fallback: usize, count: u64, rng: &mut R) -> [u64; 8] {
    let mut counts = [0u64; 8];
    for _ in 0..count {
        let u: f64 = rng.random();
        let idx = cdf.iter().position(|&c| u < c).unwrap_or(fallback);
        counts[idx] += 1;
    }
    counts
}

fn cdf_of<T: Real>(dist: &OutcomeDistribution<T>) -> ([f64; 8], usize) {
    let mut cdf = [0.0; 8];
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, p) in dist.probabilities.iter().enumerate() {
        let p = p.to_f64().unwrap_or(0.0).max(0.0);
        if p > 0.0 {
            last_positive = i;
        }
        acc += p;
        cdf[i] = acc;
    }
    (cdf, last_positive)
}

/// Draw `count` i.i.d. detector triples from [`evolve_ghz`] by inverse CDF
/// on one seeded stream.
pub fn sample_outcomes<T: Real>(
    settings: &PhaseSettings<T>,
    count: u64,
    seed: u64,
) -> Result<[u64; 8]> {
    if count == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    let (cdf, fallback) = cdf_of(&evolve_ghz(settings));
    Ok(draw_counts(&cdf, fallback, count, &mut seeded_rng(seed)))
}

/// Parallel variant of [`sample_outcomes`]: shard `i` draws its share of
/// `count` from seed `seed + i`, and the shard counts are summed. The result
/// depends on `shards` but not on thread scheduling.
pub fn sample_outcomes_sharded<T: Real>(
    settings: &PhaseSettings<T>,
    count: u64,
    seed: u64,
    shards: u64,
) -> Result<[u64; 8]> {
    if count == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    if shards == 0 {
        return Err(Error::Parameter("shard count must be at least 1".into()));
    }
    let (cdf, fallback) = cdf_of(&evolve_ghz(settings));
    let base = count / shards;
    let extra = count % shards;
    let per_shard: Vec<[u64; 8]> = (0..shards)
        .into_par_iter()
        .map(|i| {
            let n = base + u64::from(i < extra);
            draw_counts(&cdf, fallback, n, &mut seeded_rng(derived_seed(seed, i)))
        })
        .collect();
    Ok(per_shard.iter().fold([0u64; 8], |mut acc, c| {
        for (a, v) in acc.iter_mut().zip(c) {
            *a += v;
        }
        acc
    }))
}

/// Sample mean of the detector-value product.
pub fn empirical_correlation(counts: &[u64; 8]) -> f64 {
    let total: u64 = counts.iter().sum();
    let signed: f64 = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 * parity_value::<f64>(i))
        .sum();
    signed / total as f64
}
