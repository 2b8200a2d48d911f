//! Independent reference computations used only by tests.
//!
//! Nothing here calls into the library's matrix machinery: amplitudes are
//! expanded term by term from the ket evolution rules, traces are explicit
//! index sums, and the hidden-variable bound is plain enumeration.

#![allow(dead_code)]

use num_complex::Complex64;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Image of one input beam in the detector basis as a list of
/// (detector bit, amplitude) terms:
/// unprimed `-> (|d> + i|d'>)/sqrt2`, primed `-> e^{i phi}(|d'> + i|d>)/sqrt2`.
fn evolve_beam(primed: bool, phi: f64) -> [(usize, Complex64); 2] {
    let i = Complex64::i();
    if primed {
        let e = Complex64::from_polar(1.0, phi);
        [(1, e * H), (0, e * i * H)]
    } else {
        [(0, Complex64::new(H, 0.0)), (1, i * H)]
    }
}

/// Detector-triple amplitudes of `(|abc> + |a'b'c'>)/sqrt2` after every arm
/// evolves, by expanding the 2 x 2 x 2 x 2 product of terms.
pub fn ghz_amplitudes(phases: [f64; 3]) -> [Complex64; 8] {
    let mut amps = [Complex64::new(0.0, 0.0); 8];
    for primed in [false, true] {
        let arms: Vec<[(usize, Complex64); 2]> =
            phases.iter().map(|&phi| evolve_beam(primed, phi)).collect();
        for ta in &arms[0] {
            for tb in &arms[1] {
                for tc in &arms[2] {
                    let idx = 4 * ta.0 + 2 * tb.0 + tc.0;
                    amps[idx] += ta.1 * tb.1 * tc.1 * H;
                }
            }
        }
    }
    amps
}

pub fn ghz_probabilities(phases: [f64; 3]) -> [f64; 8] {
    ghz_amplitudes(phases).map(|z| z.norm_sqr())
}

/// `sum p(x) v_a v_b v_c` with `+1` for unprimed and `-1` for primed.
pub fn ghz_correlation(phases: [f64; 3]) -> f64 {
    ghz_probabilities(phases)
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ones = (i & 1) + ((i >> 1) & 1) + ((i >> 2) & 1);
            if ones % 2 == 0 {
                *p
            } else {
                -*p
            }
        })
        .sum()
}

/// Largest number of the four GHSZ perfect-correlation constraints that a
/// deterministic local assignment can satisfy. `targets[k]` is the required
/// product at setting `k`; settings are (y x x), (x y x), (x x y), (y y y).
pub fn lhv_max_satisfied(targets: [f64; 4]) -> usize {
    let uses_y = [[true, false, false], [false, true, false], [false, false, true], [true, true, true]];
    let mut best = 0;
    for bits in 0u32..64 {
        // bit 2k: x value of party k, bit 2k+1: y value
        let value = |party: usize, y: bool| -> f64 {
            if bits >> (2 * party + y as usize) & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let satisfied = (0..4)
            .filter(|&k| {
                let prod: f64 = (0..3).map(|p| value(p, uses_y[k][p])).product();
                prod == targets[k]
            })
            .count();
        best = best.max(satisfied);
    }
    best
}

fn pauli(label: u8) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    match label {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        3 => [[o, z], [z, -o]],
        _ => unreachable!(),
    }
}

/// `Tr(rho sigma_l0 ⊗ sigma_l1 ⊗ sigma_l2)` for an 8x8 `rho` given as a
/// closure, summed entry by entry with party `a` most significant.
pub fn expectation3(rho: impl Fn(usize, usize) -> Complex64, labels: [u8; 3]) -> Complex64 {
    let m = labels.map(pauli);
    let mut acc = Complex64::new(0.0, 0.0);
    for (ia, ib, ic) in triples() {
        for (ja, jb, jc) in triples() {
            let op = m[0][ja][ia] * m[1][jb][ib] * m[2][jc][ic];
            acc += rho(4 * ia + 2 * ib + ic, 4 * ja + 2 * jb + jc) * op;
        }
    }
    acc
}

fn triples() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..8).map(|i| (i >> 2, (i >> 1) & 1, i & 1))
}

/// Reduced state of parties `b, c` (4x4), tracing party `a` by explicit
/// summation.
pub fn trace_out_a(rho: impl Fn(usize, usize) -> Complex64) -> [[Complex64; 4]; 4] {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            for a in 0..2 {
                *slot += rho(4 * a + i, 4 * a + j);
            }
        }
    }
    out
}

/// Reduced state of party `a` (2x2), tracing `b` and `c`.
pub fn keep_a(rho: impl Fn(usize, usize) -> Complex64) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            for bc in 0..4 {
                *slot += rho(4 * i + bc, 4 * j + bc);
            }
        }
    }
    out
}
