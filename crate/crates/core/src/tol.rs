//! Numerical tolerances shared by the library and its test suites.

/// One record of every threshold the library uses, so that tests and
/// library code agree on what "Hermitian", "PSD" or "separable" means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-abs entrywise deviation of `m - m^dagger` accepted as Hermitian.
    pub hermiticity: f64,
    /// Eigenvalues in `[-psd_clamp, 0)` are clamped to zero.
    pub psd_clamp: f64,
    /// Accepted deviation of the trace of a density matrix from one.
    pub trace: f64,
    /// Entrywise tolerance for reconstructions such as `s * s = m`.
    pub reconstruction: f64,
    /// A state is separable iff its smallest partial-transpose eigenvalue is `>= -separability`.
    pub separability: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this
    /// (scaled by the Frobenius norm of the input when that exceeds one).
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// Pair comparisons with `|dEF|` or `|dEN|` at or below this are ties.
    pub tie_epsilon: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-10,
        psd_clamp: 1e-10,
        trace: 1e-10,
        reconstruction: 1e-9,
        separability: 1e-10,
        jacobi_off_diagonal: 1e-13,
        jacobi_max_sweeps: 100,
        tie_epsilon: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;

/// Eigenvalues of a PSD matrix at or below this multiple of machine epsilon
/// (relative to the spectral radius) are indistinguishable from zero and are
/// treated as exact zeros before square-rooting.
pub(crate) const NOISE_FLOOR_ULPS: f64 = 64.0;
