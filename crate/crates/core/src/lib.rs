//! Two-qubit entanglement measures and a Monte Carlo comparison of the
//! orderings they induce on random density matrices.
//!
//! * [`cmat`]: 4x4 complex linear algebra (Jacobi eigensolver, PSD square
//!   root, partial transpose, Kronecker product).
//! * [`qstate`]: validated density matrices and the singlet, Werner and
//!   Schmidt pure-state families.
//! * [`measures`]: concurrence, entanglement of formation, the negative
//!   partial-transpose eigenvalue `E_N`, the sum measure, linear entropy and
//!   the separability test.
//! * [`sampler`]: Haar unitaries from two-level rotations, uniform simplex
//!   spectra and `rho = U D U^dagger`.
//! * [`experiment`]: the pair-comparison harness and its statistics.
//! * [`io`]: CSV formats.

pub mod cmat;
pub mod error;
pub mod experiment;
pub mod io;
pub mod measures;
pub mod oracle;
pub mod qstate;
pub mod sampler;
pub mod selftest;
pub mod tol;

pub use cmat::{ComplexMatrix4, ComplexScalar, EigenDecomposition};
pub use error::{Error, Result};
pub use experiment::{
    compare_pair, run_experiment, run_experiment_with_threads, ExperimentConfig,
    ExperimentSummary, PairComparisonRecord,
};
pub use measures::{measure_report, MeasureReport};
pub use qstate::{DensityMatrix, PureStateAmplitudes, WernerParameter};
pub use sampler::{PhiRule, RngStream};
pub use tol::{Tolerances, TOL};
