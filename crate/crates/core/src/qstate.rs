//! Validated two-qubit density matrices and the named state families.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::cmat::{hermitian_eigenvalues, ComplexMatrix4, ComplexScalar};
use crate::error::{Error, Result};
use crate::tol::TOL;

/// A two-qubit density matrix: Hermitian, unit trace and PSD, each to the
/// tolerances in [`crate::tol::Tolerances`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix4,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix4 {
        self.m
    }

    /// Build without validation. Callers must guarantee the invariants.
    pub(crate) fn new_unchecked(m: ComplexMatrix4) -> Self {
        DensityMatrix { m }
    }

    /// Row-major, real and imaginary parts interleaved.
    pub fn to_record(&self) -> [f64; 32] {
        let mut out = [0.0; 32];
        for (k, z) in self.m.entries().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
        out
    }

    /// Inverse of [`DensityMatrix::to_record`]; the result is validated.
    pub fn from_record(values: &[f64]) -> Result<Self> {
        if values.len() != 32 {
            return Err(Error::Parse(format!(
                "expected 32 values, found {}",
                values.len()
            )));
        }
        let m = ComplexMatrix4::from_fn(|r, c| {
            let k = 4 * r + c;
            Complex64::new(values[2 * k], values[2 * k + 1])
        });
        density_from_matrix(m)
    }
}

/// Validate `m` as a density matrix.
pub fn density_from_matrix(m: ComplexMatrix4) -> Result<DensityMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let deviation = m.hermiticity_deviation();
    if deviation > TOL.hermiticity {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m.trace().re;
    let trace_dev = (trace - 1.0).abs();
    if trace_dev > TOL.trace {
        return Err(Error::TraceNotOne {
            trace,
            deviation: trace_dev,
        });
    }
    let min_eigenvalue = hermitian_eigenvalues(&m)?[3];
    if min_eigenvalue < -TOL.psd_clamp {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(DensityMatrix { m })
}

/// Schmidt coefficient `alpha` of `alpha|00> + sqrt(1 - alpha^2)|11>`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PureStateAmplitudes(f64);

impl PureStateAmplitudes {
    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&alpha) {
            Ok(PureStateAmplitudes(alpha))
        } else {
            Err(Error::ParameterOutOfRange {
                name: "alpha",
                value: alpha,
                lo: 0.0,
                hi: 1.0,
            })
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn beta(self) -> f64 {
        (1.0 - self.0 * self.0).max(0.0).sqrt()
    }
}

/// Werner fidelity `F` in `[1/4, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WernerParameter(f64);

impl WernerParameter {
    pub fn new(f: f64) -> Result<Self> {
        if (0.25..=1.0).contains(&f) {
            Ok(WernerParameter(f))
        } else {
            Err(Error::ParameterOutOfRange {
                name: "F",
                value: f,
                lo: 0.25,
                hi: 1.0,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Projector onto a state vector, normalised by its squared norm.
pub fn from_pure_vector(v: &[ComplexScalar; 4]) -> Result<DensityMatrix> {
    let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
        return Err(Error::NonFinite);
    }
    let m = ComplexMatrix4::outer(v).scale(1.0 / norm_sqr);
    Ok(DensityMatrix::new_unchecked(m.hermitian_part()))
}

/// `|ab><ab|` for computational basis indices `a, b` in `{0, 1}`.
pub fn product_basis_state(a: usize, b: usize) -> DensityMatrix {
    let mut d = [0.0; 4];
    d[2 * (a & 1) + (b & 1)] = 1.0;
    DensityMatrix::new_unchecked(ComplexMatrix4::from_real_diagonal(d))
}

pub fn maximally_mixed() -> DensityMatrix {
    DensityMatrix::new_unchecked(ComplexMatrix4::from_real_diagonal([0.25; 4]))
}

/// `|psi><psi|` with `|psi> = alpha|00> + beta|11>`.
pub fn pure_schmidt(amplitudes: PureStateAmplitudes) -> DensityMatrix {
    let a = Complex64::new(amplitudes.alpha(), 0.0);
    let b = Complex64::new(amplitudes.beta(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    DensityMatrix::new_unchecked(ComplexMatrix4::outer(&[a, zero, zero, b]))
}

fn singlet_projector() -> ComplexMatrix4 {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut m = ComplexMatrix4::outer(&[zero, h, -h, zero]);
    // h * h rounds to 0.5000000000000001; pin the exact values.
    m[(1, 1)] = Complex64::new(0.5, 0.0);
    m[(2, 2)] = Complex64::new(0.5, 0.0);
    m[(1, 2)] = Complex64::new(-0.5, 0.0);
    m[(2, 1)] = Complex64::new(-0.5, 0.0);
    m
}

/// Projector onto `(|01> - |10>) / sqrt(2)`.
pub fn singlet() -> DensityMatrix {
    DensityMatrix::new_unchecked(singlet_projector())
}

/// `((4F - 1) / 3) |psi-><psi-| + ((1 - F) / 3) I` with `I` the 4x4 identity.
pub fn werner_state(f: WernerParameter) -> DensityMatrix {
    let f = f.value();
    let mix = (4.0 * f - 1.0) / 3.0;
    let noise = (1.0 - f) / 3.0;
    let m = singlet_projector().scale(mix) + ComplexMatrix4::identity().scale(noise);
    DensityMatrix::new_unchecked(m)
}
