//! Random two-qubit density matrices `rho = U D U^dagger`: `U` Haar-random
//! on U(4) from a product of six elementary two-level rotations, `D` the
//! diagonal of a point drawn uniformly from the probability simplex.
//!
//! Draw order per state is fixed: the three simplex uniforms, then for each
//! rotation in composition order its `phi`, `psi` and (if present) `chi`
//! uniforms. Given the same seed, every platform with IEEE-754 doubles
//! produces the same states.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cmat::{ComplexMatrix4, ComplexScalar};
use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;

/// Source of uniform draws in `[0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// Seeded, counter-based ChaCha20 stream. Uniforms use the top 53 bits of
/// each 64-bit output.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream `index` of `seed`, used for sharded runs.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(index);
        RngStream { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.inner.get_stream()
    }
}

impl UniformSource for RngStream {
    fn next_uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// How the rotation angle `phi` of the pair `(i, j)` is drawn from a uniform `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiRule {
    /// `cos^2 phi` distributed as `xi^(1/i)`, realised as
    /// `phi = arcsin(sqrt(1 - (1 - xi)^(1/i)))`. This makes the composed
    /// unitary Haar distributed.
    #[default]
    Haar,
    /// `phi = arcsin(xi^(1/(2i)))`, i.e. `sin^2 phi` distributed as
    /// `xi^(1/i)`. Kept for comparison runs; the composed unitary is not
    /// Haar distributed (entry moments and the entangled fraction are off).
    Literal,
}

impl PhiRule {
    pub fn phi(self, first_index: usize, xi: f64) -> f64 {
        let k = first_index as f64;
        match self {
            PhiRule::Haar => (1.0 - (1.0 - xi).powf(1.0 / k)).max(0.0).sqrt().asin(),
            PhiRule::Literal => xi.powf(1.0 / (2.0 * k)).asin(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhiRule::Haar => "haar",
            PhiRule::Literal => "literal",
        }
    }
}

impl std::str::FromStr for PhiRule {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "haar" => Ok(PhiRule::Haar),
            "literal" => Ok(PhiRule::Literal),
            other => Err(format!("unknown angle rule {other:?} (expected haar or literal)")),
        }
    }
}

/// Rotation pairs `(i, j)` (1-based) in composition order, and whether the
/// pair carries its own `chi` phase.
pub const ROTATION_SEQUENCE: [(usize, usize, bool); 6] = [
    (1, 2, true),
    (2, 3, false),
    (1, 3, true),
    (3, 4, false),
    (2, 4, false),
    (1, 4, true),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationAngles {
    pub i: usize,
    pub j: usize,
    /// In `[0, pi/2]`.
    pub phi: f64,
    /// In `[0, 2 pi)`.
    pub psi: f64,
    /// In `[0, 2 pi)`; zero for pairs without a `chi` phase.
    pub chi: f64,
}

/// Angles for the six rotations of [`ROTATION_SEQUENCE`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles(pub [RotationAngles; 6]);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint(pub [f64; 4]);

impl SimplexPoint {
    pub fn weights(&self) -> [f64; 4] {
        self.0
    }

    pub fn sorted_descending(&self) -> [f64; 4] {
        let mut p = self.0;
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }
}

/// The two-level unitary `U^(i,j)(phi, psi, chi)`, 1-based indices:
/// identity outside `{i, j}`, `cos(phi) e^{i psi}` at `(i,i)`,
/// `cos(phi) e^{-i psi}` at `(j,j)`, `sin(phi) e^{i chi}` at `(i,j)` and
/// `-sin(phi) e^{-i chi}` at `(j,i)`.
pub fn elementary_unitary(i: usize, j: usize, phi: f64, psi: f64, chi: f64) -> Result<ComplexMatrix4> {
    if !(1 <= i && i < j && j <= 4) {
        return Err(Error::BadIndices { i, j });
    }
    let (a, b) = (i - 1, j - 1);
    let (s, c) = phi.sin_cos();
    let mut u = ComplexMatrix4::identity();
    u[(a, a)] = Complex64::from_polar(c, psi);
    u[(b, b)] = Complex64::from_polar(c, -psi);
    u[(a, b)] = Complex64::from_polar(s, chi);
    u[(b, a)] = -Complex64::from_polar(s, -chi);
    Ok(u)
}

pub fn draw_euler_angles<S: UniformSource + ?Sized>(src: &mut S, rule: PhiRule) -> EulerAngles {
    EulerAngles(ROTATION_SEQUENCE.map(|(i, j, has_chi)| {
        let phi = rule.phi(i, src.next_uniform());
        let psi = TAU * src.next_uniform();
        let chi = if has_chi { TAU * src.next_uniform() } else { 0.0 };
        RotationAngles { i, j, phi, psi, chi }
    }))
}

/// `U^(1,2) U^(2,3) U^(1,3) U^(3,4) U^(2,4) U^(1,4)`, multiplied left to right.
pub fn unitary_from_angles(angles: &EulerAngles) -> ComplexMatrix4 {
    angles.0.iter().fold(ComplexMatrix4::identity(), |acc, a| {
        let e = elementary_unitary(a.i, a.j, a.phi, a.psi, a.chi)
            .expect("rotation sequence indices are valid");
        &acc * &e
    })
}

pub fn random_cue_unitary<S: UniformSource + ?Sized>(src: &mut S, rule: PhiRule) -> ComplexMatrix4 {
    unitary_from_angles(&draw_euler_angles(src, rule))
}

/// `p1 = 1 - xi1^(1/3)`, `p2 = (1 - xi2^(1/2))(1 - p1)`,
/// `p3 = (1 - xi3)(1 - p1 - p2)`, `p4 = 1 - p1 - p2 - p3`.
pub fn simplex_from_uniforms(xi: [f64; 3]) -> SimplexPoint {
    let p1 = 1.0 - xi[0].cbrt();
    let rest1 = 1.0 - p1;
    let p2 = (1.0 - xi[1].sqrt()) * rest1;
    let rest2 = rest1 - p2;
    let p3 = (1.0 - xi[2]) * rest2;
    let p4 = rest2 - p3;
    SimplexPoint([p1, p2, p3, p4])
}

pub fn random_simplex<S: UniformSource + ?Sized>(src: &mut S) -> SimplexPoint {
    let xi = [src.next_uniform(), src.next_uniform(), src.next_uniform()];
    simplex_from_uniforms(xi)
}

/// `U diag(p) U^dagger`, returned together with the spectrum `p`.
pub fn random_density_with_spectrum<S: UniformSource + ?Sized>(
    src: &mut S,
    rule: PhiRule,
) -> (DensityMatrix, SimplexPoint) {
    let p = random_simplex(src);
    let u = random_cue_unitary(src, rule);
    (conjugate_diagonal(&u, &p.0), p)
}

pub fn random_density<S: UniformSource + ?Sized>(src: &mut S, rule: PhiRule) -> DensityMatrix {
    random_density_with_spectrum(src, rule).0
}

fn conjugate_diagonal(u: &ComplexMatrix4, d: &[f64; 4]) -> DensityMatrix {
    let m = ComplexMatrix4::from_fn(|r, c| {
        (0..4)
            .map(|k| u[(r, k)] * d[k] * u[(c, k)].conj())
            .sum::<ComplexScalar>()
    });
    DensityMatrix::new_unchecked(m.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::density_from_matrix;

    struct Constant(f64);
    impl UniformSource for Constant {
        fn next_uniform(&mut self) -> f64 {
            self.0
        }
    }

    fn unitarity_error(u: &ComplexMatrix4) -> f64 {
        (u.adjoint() * *u).max_abs_diff(&ComplexMatrix4::identity())
    }

    #[test]
    fn elementary_identity_and_swap_like() {
        assert_eq!(
            elementary_unitary(2, 4, 0.0, 0.0, 0.0).unwrap(),
            ComplexMatrix4::identity()
        );
        let u = elementary_unitary(1, 2, std::f64::consts::FRAC_PI_2, 0.0, 0.0).unwrap();
        assert!((u[(0, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-16);
        assert!((u[(1, 0)] - Complex64::new(-1.0, 0.0)).norm() < 1e-16);
        assert!(u[(0, 0)].norm() < 1e-16 && u[(1, 1)].norm() < 1e-16);
        assert_eq!(u[(2, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(3, 3)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn elementary_rejects_bad_indices() {
        for (i, j) in [(0, 1), (2, 2), (3, 1), (1, 5)] {
            assert!(matches!(
                elementary_unitary(i, j, 0.1, 0.2, 0.3),
                Err(Error::BadIndices { .. })
            ));
        }
    }

    #[test]
    fn sampled_rotations_are_unitary() {
        let mut rng = RngStream::new(11);
        for _ in 0..1000 {
            for a in draw_euler_angles(&mut rng, PhiRule::Haar).0 {
                assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&a.phi));
                assert!((0.0..TAU).contains(&a.psi) && (0.0..TAU).contains(&a.chi));
                let e = elementary_unitary(a.i, a.j, a.phi, a.psi, a.chi).unwrap();
                assert!(unitarity_error(&e) < 1e-12);
            }
            assert!(unitarity_error(&random_cue_unitary(&mut rng, PhiRule::Haar)) < 1e-12);
        }
    }

    #[test]
    fn zero_uniforms_give_identity() {
        let u = random_cue_unitary(&mut Constant(0.0), PhiRule::Haar);
        assert!(u.max_abs_diff(&ComplexMatrix4::identity()) < 1e-16);
        let u = random_cue_unitary(&mut Constant(0.0), PhiRule::Literal);
        assert!(u.max_abs_diff(&ComplexMatrix4::identity()) < 1e-16);
    }

    #[test]
    fn simplex_end_points() {
        assert_eq!(simplex_from_uniforms([0.0; 3]).0, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(simplex_from_uniforms([1.0; 3]).0, [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(random_simplex(&mut Constant(0.0)).0, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn simplex_invariants() {
        let mut rng = RngStream::new(5);
        for _ in 0..10_000 {
            let p = random_simplex(&mut rng).0;
            assert!(p.iter().all(|&x| x >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let draw = |mut r: RngStream| (0..8).map(|_| r.next_uniform()).collect::<Vec<_>>();
        assert_eq!(draw(RngStream::new(3)), draw(RngStream::new(3)));
        assert_ne!(draw(RngStream::new(3)), draw(RngStream::new(4)));
        assert_ne!(draw(RngStream::substream(3, 0)), draw(RngStream::substream(3, 1)));
        let mut r = RngStream::new(9);
        assert!((0..10_000).map(|_| r.next_uniform()).all(|x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn densities_validate_and_keep_spectrum() {
        let mut rng = RngStream::new(21);
        for _ in 0..2000 {
            let (rho, p) = random_density_with_spectrum(&mut rng, PhiRule::Haar);
            assert!(density_from_matrix(*rho.matrix()).is_ok());
            let ev = crate::cmat::hermitian_eigenvalues(rho.matrix()).unwrap();
            for (a, b) in ev.iter().zip(p.sorted_descending()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn phi_rule_parses() {
        assert_eq!("haar".parse::<PhiRule>().unwrap(), PhiRule::Haar);
        assert_eq!("literal".parse::<PhiRule>().unwrap(), PhiRule::Literal);
        assert!("other".parse::<PhiRule>().is_err());
    }
}
