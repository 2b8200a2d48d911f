//! Hilbert-Schmidt (Pauli basis) description of multi-qubit states, with a
//! GHZ three-arm interferometer and checks that local unitaries leave
//! every correlation not involving the acted party unchanged.
//!
//! All numerical types are generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is the precision
//! the documented tolerances refer to.

// `!(x < tol)` comparisons deliberately treat NaN as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hsdecomp;
pub mod interferometer;
pub mod linalg;
pub mod locality;
pub mod pauli;
pub mod qstate;
pub mod random;
pub mod real;

pub use error::{Error, Invariant, Result};
pub use hsdecomp::{
    decompose, reconstruct, rotate_frame, su2_to_so3, transform_under_local_unitary, Block,
};
pub use interferometer::{
    beam_splitter_unitary, correlation, evolve_ghz, ghsz_contradiction_report, sample_outcomes,
    GhszVerdict,
};
pub use linalg::CMatrix;
pub use locality::{locality_sweep, verify_locality, Verdict};
pub use pauli::{pauli_string_matrix, Pauli, PauliString};
pub use qstate::{
    apply_local_unitary, ghz_density, ghz_pure, partial_trace, pure_to_density, random_density,
    Party,
};
pub use real::Real;

pub type PureState = qstate::PureState<f64>;
pub type DensityMatrix = qstate::DensityMatrix<f64>;
pub type LocalUnitary = qstate::LocalUnitary<f64>;
pub type CoefficientTensor = hsdecomp::CoefficientTensor<f64>;
pub type RotationMatrix = hsdecomp::RotationMatrix<f64>;
pub type PhaseSettings = interferometer::PhaseSettings<f64>;
pub type OutcomeDistribution = interferometer::OutcomeDistribution<f64>;
pub type GhszReport = interferometer::GhszReport<f64>;
pub type LocalityReport = locality::LocalityReport<f64>;
pub type SweepReport = locality::SweepReport<f64>;

pub type DensityMatrix32 = qstate::DensityMatrix<f32>;
pub type CoefficientTensor32 = hsdecomp::CoefficientTensor<f32>;
