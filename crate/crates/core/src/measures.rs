//! Entanglement quantities for two qubits.
//!
//! The concurrence follows the Wootters construction: with the spin-flipped
//! state `rho~ = (Y (x) Y) rho* (Y (x) Y)`, take the descending eigenvalues
//! `l1..l4` of `R = sqrt(sqrt(rho) rho~ sqrt(rho))` and return
//! `max(0, l1 - l2 - l3 - l4)`. The entanglement of formation is the binary
//! entropy of `(1 + sqrt(1 - C^2)) / 2`. The negativity-style measure `E_N`
//! is the modulus of the most negative eigenvalue of the partial transpose,
//! and `E_sum` is the sum of the absolute partial-transpose eigenvalues
//! minus one. All entropies are in bits.

use crate::cmat::{
    hermitian_eig, hermitian_eigenvalues, kron2, partial_transpose_b, psd_sqrt, sigma_y,
    ComplexMatrix4,
};
use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;
use crate::tol::TOL;

/// Slack allowed on the `[0, 1]` domain of the entropy helpers before
/// inputs are rejected instead of clamped.
const DOMAIN_SLACK: f64 = 1e-12;

/// Every measure of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureReport {
    pub concurrence: f64,
    pub e_formation: f64,
    pub e_negative: f64,
    pub e_sum: f64,
    pub linear_entropy: f64,
    pub separable: bool,
}

impl MeasureReport {
    pub const CSV_HEADER: [&'static str; 6] = ["C", "E_F", "E_N", "E_sum", "S", "separable"];

    /// CSV fields, numbers with 17 significant digits.
    pub fn csv_fields(&self) -> [String; 6] {
        use crate::io::fmt17;
        [
            fmt17(self.concurrence),
            fmt17(self.e_formation),
            fmt17(self.e_negative),
            fmt17(self.e_sum),
            fmt17(self.linear_entropy),
            self.separable.to_string(),
        ]
    }
}

/// `(Y (x) Y) rho* (Y (x) Y)`, conjugation in the computational basis.
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix4 {
    let yy = kron2(&sigma_y(), &sigma_y());
    &(&yy * &rho.matrix().conj()) * &yy
}

/// Descending eigenvalues of `R = sqrt(sqrt(rho) rho~ sqrt(rho))`.
pub fn r_eigenvalues(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let root = psd_sqrt(rho.matrix())?;
    let flipped = spin_flip(rho);
    let inner = (&(&root * &flipped) * &root).hermitian_part();
    let r = psd_sqrt(&inner)?;
    hermitian_eigenvalues(&r)
}

fn concurrence_from_r(l: &[f64; 4]) -> f64 {
    (l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0)
}

pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    r_eigenvalues(rho).map(|l| concurrence_from_r(&l))
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<f64> {
    if x.is_nan() || !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(Error::DomainError { name, value: x });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// `h(x) = -x log2 x - (1 - x) log2 (1 - x)` with `0 log2 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let x = check_unit_interval("binary_entropy", x)?;
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// `h((1 + sqrt(1 - C^2)) / 2)`.
pub fn ef_from_concurrence(c: f64) -> Result<f64> {
    let c = check_unit_interval("ef_from_concurrence", c)?;
    let x = 0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt());
    binary_entropy(x)
}

pub fn e_formation(rho: &DensityMatrix) -> Result<f64> {
    ef_from_concurrence(concurrence(rho)?)
}

/// Descending eigenvalues of the partial transpose.
pub fn pt_eigenvalues(rho: &DensityMatrix) -> Result<[f64; 4]> {
    hermitian_eigenvalues(&partial_transpose_b(rho.matrix()))
}

fn e_negative_from_pt(pt: &[f64; 4]) -> f64 {
    (-pt[3]).max(0.0)
}

fn e_sum_from_pt(pt: &[f64; 4]) -> f64 {
    (pt.iter().map(|x| x.abs()).sum::<f64>() - 1.0).max(0.0)
}

fn separable_from_pt(pt: &[f64; 4]) -> bool {
    pt[3] >= -TOL.separability
}

/// Modulus of the most negative partial-transpose eigenvalue, zero if none.
pub fn e_negative(rho: &DensityMatrix) -> Result<f64> {
    pt_eigenvalues(rho).map(|pt| e_negative_from_pt(&pt))
}

/// `sum |lambda^T_B| - 1`.
pub fn e_sum(rho: &DensityMatrix) -> Result<f64> {
    pt_eigenvalues(rho).map(|pt| e_sum_from_pt(&pt))
}

/// `1 - tr(rho^2)`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    let purity: f64 = rho.matrix().entries().map(|z| z.norm_sqr()).sum();
    (1.0 - purity).max(0.0)
}

/// Peres-Horodecki test: the partial transpose is PSD up to `TOL.separability`.
pub fn is_separable(rho: &DensityMatrix) -> Result<bool> {
    pt_eigenvalues(rho).map(|pt| separable_from_pt(&pt))
}

/// All measures, sharing one partial-transpose eigendecomposition and one
/// `R` spectrum.
pub fn measure_report(rho: &DensityMatrix) -> Result<MeasureReport> {
    let pt = hermitian_eig(&partial_transpose_b(rho.matrix()))?.eigenvalues;
    let concurrence = concurrence_from_r(&r_eigenvalues(rho)?);
    Ok(MeasureReport {
        concurrence,
        e_formation: ef_from_concurrence(concurrence)?,
        e_negative: e_negative_from_pt(&pt),
        e_sum: e_sum_from_pt(&pt),
        linear_entropy: linear_entropy(rho),
        separable: separable_from_pt(&pt),
    })
}
