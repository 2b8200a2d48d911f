//! Pauli labels and Pauli strings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qstate::{Party, MAX_PARTIES};
use crate::real::Real;

/// Single-party Pauli label. Discriminants match the numeric labels
/// `0 = I, 1 = sigma_1, 2 = sigma_2, 3 = sigma_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_label(label: u8) -> Option<Self> {
        Self::ALL.get(label as usize).copied()
    }

    pub fn label(self) -> u8 {
        self as u8
    }

    pub fn symbol(self) -> char {
        ['I', 'X', 'Y', 'Z'][self as usize]
    }

    pub fn from_symbol(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of one Pauli label per party, party `a` first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    labels: Vec<Pauli>,
}

impl PauliString {
    pub fn new(labels: Vec<Pauli>) -> Self {
        Self { labels }
    }

    /// From numeric labels in `0..=3`.
    pub fn from_labels(labels: &[u8]) -> Result<Self> {
        labels
            .iter()
            .map(|&l| {
                Pauli::from_label(l)
                    .ok_or_else(|| Error::Parameter(format!("Pauli label {l} out of range 0..=3")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn identity(n_parties: usize) -> Self {
        Self::new(vec![Pauli::I; n_parties])
    }

    /// Inverse of [`PauliString::index`].
    pub fn from_index(n_parties: usize, mut index: usize) -> Self {
        let mut labels = vec![Pauli::I; n_parties];
        for slot in labels.iter_mut().rev() {
            *slot = Pauli::ALL[index & 3];
            index >>= 2;
        }
        Self { labels }
    }

    /// Base-4 index with party `a` most significant; coincides with
    /// lexicographic order over `I < X < Y < Z`.
    pub fn index(&self) -> usize {
        self.labels.iter().fold(0, |acc, p| (acc << 2) | p.label() as usize)
    }

    /// All `4^n` strings in index order.
    pub fn all(n_parties: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n_parties)).map(move |i| Self::from_index(n_parties, i))
    }

    pub fn n_parties(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.labels
    }

    pub fn at(&self, party: Party) -> Pauli {
        self.labels[party.0]
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.labels.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Bit mask of the parties carrying a non-identity factor (bit `k` for
    /// party `k`).
    pub fn support(&self) -> u32 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .fold(0, |m, (k, _)| m | (1 << k))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.labels.iter().try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.chars().count() > MAX_PARTIES {
            return Err(Error::Parameter(format!(
                "Pauli string {s:?} must have 1..={MAX_PARTIES} symbols"
            )));
        }
        s.chars()
            .map(|ch| {
                Pauli::from_symbol(ch).ok_or_else(|| {
                    Error::Parameter(format!("invalid Pauli symbol {ch:?} in {s:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl PauliString {
    /// The single nonzero entry of row `row` of the string's matrix, as
    /// `(column, i^k)` with `k` in `0..4`.
    pub fn row_entry(&self, row: usize) -> (usize, u8) {
        let n = self.labels.len();
        let mut col = row;
        let mut phase = 0u8;
        for (k, p) in self.labels.iter().enumerate() {
            let shift = n - 1 - k;
            let bit = (row >> shift) & 1;
            match p {
                Pauli::I => {}
                Pauli::X => col ^= 1 << shift,
                // row 0 holds -i, row 1 holds +i
                Pauli::Y => {
                    col ^= 1 << shift;
                    phase += if bit == 0 { 3 } else { 1 };
                }
                Pauli::Z => phase += 2 * bit as u8,
            }
        }
        (col, phase % 4)
    }
}

/// Multiply by `i^k`.
pub(crate) fn times_i_pow<T: Real>(z: num_complex::Complex<T>, k: u8) -> num_complex::Complex<T> {
    match k % 4 {
        0 => z,
        1 => num_complex::Complex::new(-z.im, z.re),
        2 => -z,
        _ => num_complex::Complex::new(z.im, -z.re),
    }
}

/// Kronecker product of the per-party 2x2 matrices, in party order.
pub fn pauli_string_matrix<T: Real>(s: &PauliString) -> CMatrix<T> {
    let factors: Vec<CMatrix<T>> = s
        .labels
        .iter()
        .map(|p| linalg::pauli_matrix(p.label()))
        .collect();
    linalg::kron_all(&factors)
}
