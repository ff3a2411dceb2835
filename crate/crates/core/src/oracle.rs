//! Reference computations that avoid the library's own numerical paths.
//!
//! These back the invariant suites: eigenvalues of general complex 4x4
//! matrices from the characteristic polynomial (Faddeev-LeVerrier plus
//! simultaneous root iteration), a concurrence that uses the spectrum of
//! `rho rho~` instead of two matrix square roots, Gaussian Haar samplers and
//! the entanglement entropy of a pure state from its reduced density matrix.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::cmat::{ComplexMatrix4, ComplexScalar};
use crate::sampler::RngStream;

/// Monic characteristic polynomial coefficients `[c0, c1, c2, c3]` of
/// `x^4 + c3 x^3 + c2 x^2 + c1 x + c0`.
pub fn characteristic_polynomial(a: &ComplexMatrix4) -> [ComplexScalar; 4] {
    let n = 4;
    let mut c = [Complex64::new(0.0, 0.0); 5];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix4::zeros();
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a * &m;
        for i in 0..4 {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    [c[0], c[1], c[2], c[3]]
}

fn eval_monic(c: &[ComplexScalar; 4], x: ComplexScalar) -> (ComplexScalar, ComplexScalar) {
    // Horner for p and p'
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for k in (0..4).rev() {
        dp = dp * x + p;
        p = p * x + c[k];
    }
    (p, dp)
}

/// All four roots, via Durand-Kerner followed by Newton polishing.
pub fn quartic_roots(c: &[ComplexScalar; 4]) -> [ComplexScalar; 4] {
    let radius = 1.0 + c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: [ComplexScalar; 4] = std::array::from_fn(|k| seed.powu(k as u32) * radius);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..4 {
            let (p, _) = eval_monic(c, z[i]);
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = p / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-17 * radius {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_monic(c, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !(step.norm().is_finite()) {
                break;
            }
            *zi -= step;
        }
    }
    z
}

pub fn general_eigenvalues(a: &ComplexMatrix4) -> [ComplexScalar; 4] {
    quartic_roots(&characteristic_polynomial(a))
}

/// `Y (x) Y` written out: anti-diagonal `(-1, 1, 1, -1)` from top right.
fn yy() -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// Concurrence from the square roots of the eigenvalues of `rho rho~`.
///
/// With `rho = L L^dagger` (Cholesky), those square roots are the singular
/// values of the symmetric matrix `tau = L^dagger (Y (x) Y) conj(L)`, which
/// one-sided Jacobi computes with high relative accuracy even for the
/// smallest ones (the characteristic polynomial route loses about half the
/// digits of small eigenvalues).
pub fn concurrence_via_product_spectrum(rho: &ComplexMatrix4) -> f64 {
    let l = cholesky_psd(rho);
    let tau = &(&l.adjoint() * &yy()) * &l.conj();
    let mut s = singular_values(&tau);
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// Same quantity from the roots of the characteristic polynomial of `rho rho~`.
pub fn concurrence_via_charpoly(rho: &ComplexMatrix4) -> f64 {
    let flip = yy();
    let tilde = &(&flip * &rho.conj()) * &flip;
    let ev = general_eigenvalues(&(rho * &tilde));
    let mut l: [f64; 4] = ev.map(|z| z.re.max(0.0).sqrt());
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Lower-triangular `L` with `m = L L^dagger` for Hermitian PSD `m`; columns
/// with a non-positive pivot are left zero.
pub fn cholesky_psd(m: &ComplexMatrix4) -> ComplexMatrix4 {
    let mut l = ComplexMatrix4::zeros();
    for j in 0..4 {
        let d = m[(j, j)].re - (0..j).map(|k| l[(j, k)].norm_sqr()).sum::<f64>();
        if d <= 0.0 {
            continue;
        }
        let pivot = d.sqrt();
        l[(j, j)] = Complex64::new(pivot, 0.0);
        for i in j + 1..4 {
            let dot: ComplexScalar = (0..j).map(|k| l[(i, k)] * l[(j, k)].conj()).sum();
            l[(i, j)] = (m[(i, j)] - dot) / pivot;
        }
    }
    l
}

/// Singular values by one-sided (Hestenes) Jacobi orthogonalisation of the
/// columns.
pub fn singular_values(a: &ComplexMatrix4) -> [f64; 4] {
    let mut cols: [[ComplexScalar; 4]; 4] = std::array::from_fn(|c| a.column(c));
    let dot = |x: &[ComplexScalar; 4], y: &[ComplexScalar; 4]| -> ComplexScalar {
        x.iter().zip(y).map(|(u, v)| u.conj() * v).sum()
    };
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..3 {
            for q in p + 1..4 {
                let alpha = dot(&cols[p], &cols[p]).re;
                let beta = dot(&cols[q], &cols[q]).re;
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= 1e-16 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase_conj = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..4 {
                    let (x, y) = (cols[p][k], cols[q][k]);
                    cols[p][k] = x * c - phase_conj * y * s;
                    cols[q][k] = x * s + phase_conj * y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols.map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// Uniformly random unit vector in C^4.
pub fn haar_pure_vector(rng: &mut RngStream) -> [ComplexScalar; 4] {
    let mut v: [ComplexScalar; 4] = std::array::from_fn(|_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

/// Haar unitary from Gram-Schmidt on complex Gaussian columns.
pub fn haar_unitary_gram_schmidt(rng: &mut RngStream) -> ComplexMatrix4 {
    let mut cols: Vec<[ComplexScalar; 4]> = Vec::with_capacity(4);
    while cols.len() < 4 {
        let mut v: [ComplexScalar; 4] = std::array::from_fn(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        });
        for u in &cols {
            let dot: ComplexScalar = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.map(|z| z / norm));
    }
    ComplexMatrix4::from_fn(|r, c| cols[c][r])
}

/// Von Neumann entropy (bits) of the first-qubit reduced state of a unit
/// vector `(psi00, psi01, psi10, psi11)`.
pub fn entanglement_entropy(psi: &[ComplexScalar; 4]) -> f64 {
    let a = psi[0].norm_sqr() + psi[1].norm_sqr();
    let d = psi[2].norm_sqr() + psi[3].norm_sqr();
    let b = psi[0] * psi[2].conj() + psi[1] * psi[3].conj();
    let trace = a + d;
    let det = (a * d - b.norm_sqr()).max(0.0);
    let big = 0.5 * (trace + (trace * trace - 4.0 * det).max(0.0).sqrt());
    let small = if big > 0.0 { det / big } else { 0.0 };
    [big, small]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Nearest-neighbour eigenphase spacings of a unitary, in units of the mean
/// spacing `2 pi / 4`.
pub fn eigenphase_spacings(u: &ComplexMatrix4) -> [f64; 4] {
    let mut phases = general_eigenvalues(u).map(|z| z.arg());
    phases.sort_by(|a, b| a.total_cmp(b));
    let mean = std::f64::consts::TAU / 4.0;
    std::array::from_fn(|k| {
        let next = if k == 3 {
            phases[0] + std::f64::consts::TAU
        } else {
            phases[k + 1]
        };
        (next - phases[k]) / mean
    })
}
