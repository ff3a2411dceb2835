//! Dense 4x4 (and 2x2) complex linear algebra over the two-qubit
//! computational basis `|00>, |01>, |10>, |11>`.
//!
//! Everything here is sized for two qubits: a cyclic Jacobi eigensolver for
//! Hermitian matrices, the PSD square root built on it, the partial
//! transpose on the second qubit and the Kronecker product of two 2x2
//! matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::{NOISE_FLOOR_ULPS, TOL};

pub type ComplexScalar = Complex64;

/// 2x2 complex matrix, row-major.
pub type ComplexMatrix2 = [[ComplexScalar; 2]; 2];

const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

/// Row-major 4x4 complex matrix. Row and column `2a + b` is the basis
/// state `|ab>`, with `a` the first qubit.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[ComplexScalar; 4]; 4]);

impl ComplexMatrix4 {
    pub const fn zeros() -> Self {
        ComplexMatrix4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_real_diagonal([1.0; 4])
    }

    pub fn from_real_diagonal(d: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, &x) in d.iter().enumerate() {
            m.0[i][i] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Self {
        let mut m = Self::zeros();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = f(r, c);
            }
        }
        m
    }

    /// Build from real and imaginary parts given separately.
    pub fn from_parts(re: [[f64; 4]; 4], im: [[f64; 4]; 4]) -> Self {
        Self::from_fn(|r, c| Complex64::new(re[r][c], im[r][c]))
    }

    /// The projector `|v><v|` (not normalised).
    pub fn outer(v: &[ComplexScalar; 4]) -> Self {
        Self::from_fn(|r, c| v[r] * v[c].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|r, c| self.0[r][c].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r])
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * k)
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn diagonal(&self) -> [ComplexScalar; 4] {
        std::array::from_fn(|i| self.0[i][i])
    }

    /// Max-abs entrywise distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-abs entrywise value of `m - m^dagger`.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let mut h = Self::from_fn(|r, c| (self.0[r][c] + self.0[c][r].conj()) * 0.5);
        for i in 0..4 {
            h.0[i][i].im = 0.0;
        }
        h
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ComplexScalar> + '_ {
        self.0.iter().flat_map(|row| row.iter().copied())
    }

    pub fn column(&self, c: usize) -> [ComplexScalar; 4] {
        std::array::from_fn(|r| self.0[r][c])
    }
}

impl Default for ComplexMatrix4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl fmt::Debug for ComplexMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix4[")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = ComplexScalar;
    fn index(&self, (r, c): (usize, usize)) -> &ComplexScalar {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut ComplexScalar {
        &mut self.0[r][c]
    }
}

impl Mul for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        &self * &rhs
    }
}

impl Mul for &ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, rhs: &ComplexMatrix4) -> ComplexMatrix4 {
        ComplexMatrix4::from_fn(|r, c| (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum())
    }
}

impl Add for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn add(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        ComplexMatrix4::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl Sub for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn sub(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        ComplexMatrix4::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}

/// Pauli-y, `[[0, -i], [i, 0]]`.
pub fn sigma_y() -> ComplexMatrix2 {
    [
        [ZERO, Complex64::new(0.0, -1.0)],
        [Complex64::new(0.0, 1.0), ZERO],
    ]
}

pub fn identity2() -> ComplexMatrix2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// Kronecker product `a (x) b`: entry `(2i + k, 2j + l)` is `a[i][j] * b[k][l]`.
pub fn kron2(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|r, c| a[r / 2][c / 2] * b[r % 2][c % 2])
}

/// Transpose on the second qubit: `<a b| m^T_B |a' b'> = <a b'| m |a' b>`.
///
/// Each 2x2 block (indexed by the first qubit) is transposed in place, so the
/// operation is a pure entry permutation.
pub fn partial_transpose_b(m: &ComplexMatrix4) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|r, c| {
        let (a, b) = (r / 2, r % 2);
        let (a2, b2) = (c / 2, c % 2);
        m.0[2 * a + b2][2 * a2 + b]
    })
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition {
    /// Sorted descending.
    pub eigenvalues: [f64; 4],
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix4,
}

impl EigenDecomposition {
    /// `U diag(lambda) U^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix4 {
        self.apply_spectral(|x| x)
    }

    /// `U diag(f(lambda)) U^dagger`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix4 {
        let u = &self.eigenvectors;
        let d: [f64; 4] = std::array::from_fn(|k| f(self.eigenvalues[k]));
        ComplexMatrix4::from_fn(|r, c| (0..4).map(|k| u.0[r][k] * d[k] * u.0[c][k].conj()).sum())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[3]
    }
}

/// Eigendecomposition of a Hermitian 4x4 matrix by cyclic complex Jacobi
/// rotations.
pub fn hermitian_eig(m: &ComplexMatrix4) -> Result<EigenDecomposition> {
    let deviation = m.hermiticity_deviation();
    if !(deviation <= TOL.hermiticity) {
        return Err(Error::NonHermitianInput { deviation });
    }
    let mut a = m.hermitian_part().0;
    let mut v = ComplexMatrix4::identity().0;

    let scale = m.frobenius_norm().max(1.0);
    let threshold = TOL.jacobi_off_diagonal * scale;
    for _ in 0..TOL.jacobi_max_sweeps {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let eigenvalues = order.map(|k| a[k][k].re);
    let eigenvectors = ComplexMatrix4::from_fn(|r, c| v[r][order[c]]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, sorted descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix4) -> Result<[f64; 4]> {
    hermitian_eig(m).map(|e| e.eigenvalues)
}

fn off_diagonal_norm(a: &[[ComplexScalar; 4]; 4]) -> f64 {
    let mut s = 0.0;
    for (r, row) in a.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            if r != c {
                s += z.norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step annihilating `a[p][q]`: `a <- J^dagger a J`, `v <- v J`.
///
/// With `a[p][q] = |a_pq| e^{i theta}`, `J = diag(1, e^{-i theta}) R` on the
/// `(p, q)` plane where `R` is the real symmetric Jacobi rotation.
fn rotate(a: &mut [[ComplexScalar; 4]; 4], v: &mut [[ComplexScalar; 4]; 4], p: usize, q: usize) {
    let apq = a[p][q];
    let abs = apq.norm();
    if abs < f64::MIN_POSITIVE {
        return;
    }
    let phase_conj = apq.conj() / abs;
    let theta = (a[q][q].re - a[p][p].re) / (2.0 * abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase_conj * (-s);
    let j_qq = phase_conj * c;

    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * j_pp + y * j_qp;
        row[q] = x * j_pq + y * j_qq;
    }
    for k in 0..4 {
        let (x, y) = (a[p][k], a[q][k]);
        a[p][k] = j_pp.conj() * x + j_qp.conj() * y;
        a[q][k] = j_pq.conj() * x + j_qq.conj() * y;
    }
    a[p][q] = ZERO;
    a[q][p] = ZERO;
    a[p][p].im = 0.0;
    a[q][q].im = 0.0;

    for row in v.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * j_pp + y * j_qp;
        row[q] = x * j_pq + y * j_qq;
    }
}

/// Hermitian PSD square root.
///
/// Eigenvalues in `[-psd_clamp, 0)` are clamped to zero, as are positive
/// eigenvalues within a few ulps of the spectral radius (rounding noise of a
/// rank-deficient input); anything more negative is an error.
pub fn psd_sqrt(m: &ComplexMatrix4) -> Result<ComplexMatrix4> {
    let eig = hermitian_eig(m)?;
    let min = eig.min_eigenvalue();
    if min < -TOL.psd_clamp {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let floor = noise_floor(&eig.eigenvalues);
    Ok(eig.apply_spectral(|x| if x <= floor { 0.0 } else { x.sqrt() }))
}

pub(crate) fn noise_floor(eigenvalues: &[f64; 4]) -> f64 {
    let radius = eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    NOISE_FLOOR_ULPS * f64::EPSILON * radius
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        Complex64::new(re, im)
    }

    fn singlet_projector() -> ComplexMatrix4 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix4::outer(&[c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)])
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn eig_identity() {
        let e = hermitian_eig(&ComplexMatrix4::identity()).unwrap();
        assert_eq!(e.eigenvalues, [1.0; 4]);
        let u = e.eigenvectors;
        assert!((u.adjoint() * u).max_abs_diff(&ComplexMatrix4::identity()) < 1e-15);
    }

    #[test]
    fn eig_diagonal_keeps_standard_basis() {
        let e = hermitian_eig(&ComplexMatrix4::from_real_diagonal([1.0, 3.0, 2.0, 4.0])).unwrap();
        assert_eq!(e.eigenvalues, [4.0, 3.0, 2.0, 1.0]);
        for (k, basis) in [3usize, 1, 2, 0].into_iter().enumerate() {
            let col = e.eigenvectors.column(k);
            assert_eq!(col[basis].norm(), 1.0);
        }
    }

    #[test]
    fn partial_transpose_of_singlet() {
        // |psi-><psi-| has 1/2 at (1,1),(2,2) and -1/2 at (1,2),(2,1). After
        // the partial transpose the -1/2 moves to (0,3),(3,0): block {0,3}
        // is [[0,-1/2],[-1/2,0]] (eigenvalues +-1/2), block {1,2} is diag(1/2,1/2).
        let pt = partial_transpose_b(&singlet_projector());
        let mut expected = ComplexMatrix4::from_real_diagonal([0.0, 0.5, 0.5, 0.0]);
        expected[(0, 3)] = c(-0.5, 0.0);
        expected[(3, 0)] = c(-0.5, 0.0);
        assert!(pt.max_abs_diff(&expected) < 1e-15);
        let ev = hermitian_eigenvalues(&pt).unwrap();
        assert_close(&ev, &[0.5, 0.5, 0.5, -0.5], 1e-14);
    }

    #[test]
    fn partial_transpose_fixes_diagonal_and_is_involution() {
        let d = ComplexMatrix4::from_real_diagonal([0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose_b(&d), d);
        let m = ComplexMatrix4::from_fn(|r, c_| c(r as f64 + 0.5, c_ as f64 - 1.25));
        assert_eq!(partial_transpose_b(&partial_transpose_b(&m)), m);
        assert_eq!(partial_transpose_b(&m).trace(), m.trace());
    }

    #[test]
    fn kron_cases() {
        assert_eq!(kron2(&identity2(), &identity2()), ComplexMatrix4::identity());
        // sigma_y (x) sigma_y: (-i)(-i) = -1 at (0,3), (-i)(i) = 1 at (1,2), ...
        let yy = kron2(&sigma_y(), &sigma_y());
        let mut expected = ComplexMatrix4::zeros();
        expected[(0, 3)] = c(-1.0, 0.0);
        expected[(1, 2)] = c(1.0, 0.0);
        expected[(2, 1)] = c(1.0, 0.0);
        expected[(3, 0)] = c(-1.0, 0.0);
        assert_eq!(yy, expected);
        let a = [[c(1.0, 0.0), ZERO], [ZERO, c(2.0, 0.0)]];
        let b = [[c(3.0, 0.0), ZERO], [ZERO, c(4.0, 0.0)]];
        assert_eq!(kron2(&a, &b), ComplexMatrix4::from_real_diagonal([3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn sqrt_of_diagonals() {
        assert_eq!(
            psd_sqrt(&ComplexMatrix4::identity()).unwrap(),
            ComplexMatrix4::identity()
        );
        let s = psd_sqrt(&ComplexMatrix4::from_real_diagonal([4.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix4::from_real_diagonal([2.0, 1.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn sqrt_clamps_tiny_negative_and_rejects_large_negative() {
        let s = psd_sqrt(&ComplexMatrix4::from_real_diagonal([1.0, 0.0, 0.0, -5e-11])).unwrap();
        assert_eq!(s[(3, 3)], ZERO);
        match psd_sqrt(&ComplexMatrix4::from_real_diagonal([1.0, 0.0, 0.0, -1e-6])) {
            Err(Error::NotPositiveSemidefinite { min_eigenvalue }) => {
                assert_eq!(min_eigenvalue, -1e-6)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_input_reports_deviation() {
        let mut m = ComplexMatrix4::identity();
        m[(0, 1)] = c(1e-3, 0.0);
        match hermitian_eig(&m) {
            Err(Error::NonHermitianInput { deviation }) => assert_eq!(deviation, 1e-3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eig_complex_two_level_block() {
        // [[1, i], [-i, 1]] on the {0,1} plane has eigenvalues 2 and 0.
        let mut m = ComplexMatrix4::from_real_diagonal([1.0, 1.0, 0.25, -3.0]);
        m[(0, 1)] = c(0.0, 1.0);
        m[(1, 0)] = c(0.0, -1.0);
        let e = hermitian_eig(&m).unwrap();
        assert_close(&e.eigenvalues, &[2.0, 0.25, 0.0, -3.0], 1e-14);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-14);
    }
}
