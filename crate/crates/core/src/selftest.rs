//! Invariant suites over random inputs, shared by the `selftest` command and
//! the test targets. Each check reports the worst observed deviation next
//! to its tolerance.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::cmat::{hermitian_eig, partial_transpose_b, psd_sqrt, ComplexMatrix4};
use crate::error::Result;
use crate::measures::{
    concurrence, e_formation, e_negative, e_sum, is_separable, measure_report, r_eigenvalues,
};
use crate::oracle;
use crate::qstate::{
    density_from_matrix, from_pure_vector, pure_schmidt, werner_state, PureStateAmplitudes,
    WernerParameter,
};
use crate::sampler::{random_density, random_density_with_spectrum, PhiRule, RngStream};
use crate::tol::TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Largest deviation seen (or violation count, for counting checks).
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl CheckOutcome {
    fn deviation(name: &'static str, worst: f64, tolerance: f64, samples: usize) -> Self {
        CheckOutcome {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
            samples,
        }
    }

    fn count(name: &'static str, failures: usize, samples: usize) -> Self {
        CheckOutcome {
            name,
            passed: failures == 0,
            worst: failures as f64,
            tolerance: 0.0,
            samples,
        }
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {} (n = {}, worst = {:.3e}, tol = {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.worst,
            self.tolerance
        )
    }
}

fn gaussian_matrix(rng: &mut RngStream) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|_, _| {
        let re: f64 = StandardNormal.sample(&mut *rng);
        let im: f64 = StandardNormal.sample(&mut *rng);
        Complex64::new(re, im)
    })
}

/// Eigendecomposition reconstruction, orthonormality and trace on `A + A^dagger`.
pub fn check_eigendecomposition(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = RngStream::new(seed);
    let (mut recon, mut ortho, mut trace, mut order) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    for _ in 0..n {
        let a = gaussian_matrix(&mut rng);
        let h = a + a.adjoint();
        let e = hermitian_eig(&h)?;
        recon = recon.max(e.reconstruct().max_abs_diff(&h));
        let u = e.eigenvectors;
        ortho = ortho.max((u.adjoint() * u).max_abs_diff(&ComplexMatrix4::identity()));
        trace = trace.max((e.eigenvalues.iter().sum::<f64>() - h.trace().re).abs());
        if e.eigenvalues.windows(2).any(|w| w[0] < w[1]) {
            order += 1;
        }
    }
    Ok(vec![
        CheckOutcome::deviation("eig reconstruction U diag(l) U^+ = m", recon, 1e-10, n),
        CheckOutcome::deviation("eig eigenvectors orthonormal", ortho, 1e-10, n),
        CheckOutcome::deviation("eig sum of eigenvalues = trace", trace, 1e-10, n),
        CheckOutcome::count("eig eigenvalues sorted descending", order, n),
    ])
}

/// Partial transpose is an exact involution and preserves the trace exactly.
pub fn check_partial_transpose(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = RngStream::new(seed);
    let mut failures = 0;
    let mut herm = 0.0f64;
    for _ in 0..n {
        let a = gaussian_matrix(&mut rng);
        let pt = partial_transpose_b(&a);
        if partial_transpose_b(&pt) != a || pt.trace() != a.trace() {
            failures += 1;
        }
        let h = a + a.adjoint();
        herm = herm.max(partial_transpose_b(&h).hermiticity_deviation());
    }
    Ok(vec![
        CheckOutcome::count("partial transpose involution and trace", failures, n),
        CheckOutcome::deviation("partial transpose keeps Hermiticity", herm, 0.0, n),
    ])
}

/// `psd_sqrt(m)^2 = m` on trace-normalised `A A^dagger`.
pub fn check_psd_sqrt(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = RngStream::new(seed);
    let mut worst = 0.0f64;
    let mut herm = 0.0f64;
    for _ in 0..n {
        let a = gaussian_matrix(&mut rng);
        let p = a * a.adjoint();
        let m = p.scale(1.0 / p.trace().re).hermitian_part();
        let s = psd_sqrt(&m)?;
        worst = worst.max((s * s).max_abs_diff(&m));
        herm = herm.max(s.hermiticity_deviation());
    }
    Ok(vec![
        CheckOutcome::deviation("psd_sqrt squares back", worst, TOL.reconstruction, n),
        CheckOutcome::deviation("psd_sqrt Hermitian", herm, TOL.hermiticity, n),
    ])
}

/// Werner closed forms on `F = 0.50, 0.51, .., 1.00` and separability below 1/2.
pub fn check_werner_grid() -> Result<Vec<CheckOutcome>> {
    let (mut c_err, mut en_err, mut ef_err) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..=50 {
        let f = 0.5 + 0.01 * k as f64;
        let rho = werner_state(WernerParameter::new(f)?);
        let mu = 0.5 + (f * (1.0 - f)).sqrt();
        let werfor = if mu >= 1.0 {
            0.0
        } else {
            -mu * mu.log2() - (1.0 - mu) * (1.0 - mu).log2()
        };
        c_err = c_err.max((concurrence(&rho)? - (2.0 * f - 1.0)).abs());
        en_err = en_err.max((e_negative(&rho)? - (f - 0.5)).abs());
        ef_err = ef_err.max((e_formation(&rho)? - werfor).abs());
    }
    let mut sep_failures = 0;
    let mut below = 0.0f64;
    for k in 0..25 {
        let f = 0.25 + 0.01 * k as f64;
        let r = measure_report(&werner_state(WernerParameter::new(f)?))?;
        if !r.separable {
            sep_failures += 1;
        }
        below = below
            .max(r.concurrence)
            .max(r.e_formation)
            .max(r.e_negative)
            .max(r.e_sum);
    }
    Ok(vec![
        CheckOutcome::deviation("werner C = 2F - 1", c_err, 1e-10, 51),
        CheckOutcome::deviation("werner E_N = F - 1/2", en_err, 1e-10, 51),
        CheckOutcome::deviation("werner E_F closed form", ef_err, 1e-10, 51),
        CheckOutcome::count("werner F < 1/2 separable", sep_failures, 25),
        CheckOutcome::deviation("werner F < 1/2 measures vanish", below, 1e-10, 25),
    ])
}

/// `C = 2 E_N` and `E_F` = entanglement entropy for Haar-random pure states.
pub fn check_pure_states(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = RngStream::new(seed);
    let (mut conn, mut ent) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let psi = oracle::haar_pure_vector(&mut rng);
        let rho = from_pure_vector(&psi)?;
        let r = measure_report(&rho)?;
        conn = conn.max((r.concurrence - 2.0 * r.e_negative).abs());
        ent = ent.max((r.e_formation - oracle::entanglement_entropy(&psi)).abs());
    }
    Ok(vec![
        CheckOutcome::deviation("pure states C = 2 E_N", conn, 1e-9, n),
        CheckOutcome::deviation("pure states E_F = entropy of entanglement", ent, 1e-9, n),
    ])
}

/// Concurrence via `R` against the `rho rho~` spectrum route.
pub fn check_concurrence_routes(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = RngStream::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let rho = random_density(&mut rng, PhiRule::Haar);
        let l = r_eigenvalues(&rho)?;
        let c = (l[0] - l[1] - l[2] - l[3]).max(0.0);
        worst = worst.max((c - oracle::concurrence_via_product_spectrum(rho.matrix())).abs());
    }
    Ok(vec![CheckOutcome::deviation(
        "concurrence R route = rho rho~ spectrum route",
        worst,
        1e-8,
        n,
    )])
}

/// `C >= 2 E_N - 1e-9` on random entangled states; returns the check and
/// the number of entangled states seen.
pub fn check_bound(n_entangled: usize, seed: u64) -> Result<CheckOutcome> {
    let mut rng = RngStream::new(seed);
    let (mut seen, mut worst) = (0usize, f64::NEG_INFINITY);
    while seen < n_entangled {
        let r = measure_report(&random_density(&mut rng, PhiRule::Haar))?;
        if r.separable {
            continue;
        }
        seen += 1;
        worst = worst.max(2.0 * r.e_negative - r.concurrence);
    }
    Ok(CheckOutcome::deviation(
        "bound C >= 2 E_N on entangled states",
        worst,
        1e-9,
        n_entangled,
    ))
}

/// Separability decision agrees with `E_N` and `E_sum`, and every sampled
/// state passes validation with its spectrum preserved.
pub fn check_sampled_states(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = RngStream::new(seed);
    let (mut inconsistent, mut invalid) = (0usize, 0usize);
    let mut spectrum = 0.0f64;
    let eps = TOL.separability;
    for _ in 0..n {
        let (rho, p) = random_density_with_spectrum(&mut rng, PhiRule::Haar);
        if density_from_matrix(*rho.matrix()).is_err() {
            invalid += 1;
        }
        let ev = hermitian_eig(rho.matrix())?.eigenvalues;
        for (a, b) in ev.iter().zip(p.sorted_descending()) {
            spectrum = spectrum.max((a - b).abs());
        }
        let sep = is_separable(&rho)?;
        let en = e_negative(&rho)?;
        let es = e_sum(&rho)?;
        // E_sum = 2 E_N when exactly one PT eigenvalue is negative
        let ok = (sep == (en <= eps)) && (!sep || es <= 4.0 * eps) && (en <= 2.0 * eps || es > 4.0 * eps);
        if !ok {
            inconsistent += 1;
        }
    }
    Ok(vec![
        CheckOutcome::count("sampled states validate", invalid, n),
        CheckOutcome::deviation("sampled spectrum = simplex point", spectrum, 1e-10, n),
        CheckOutcome::count("separable <=> E_N <= eps <=> E_sum <= 4 eps", inconsistent, n),
    ])
}

/// Idempotence of Schmidt pure states and determinism of the sampler.
pub fn check_constructors_and_streams(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut idem = 0.0f64;
    for k in 0..=100 {
        let rho = pure_schmidt(PureStateAmplitudes::new(k as f64 / 100.0)?);
        let m = rho.matrix();
        idem = idem.max((m * m).max_abs_diff(m));
    }
    let draw = |s| {
        let mut r = RngStream::new(s);
        (0..100)
            .map(|_| random_density(&mut r, PhiRule::Haar))
            .collect::<Vec<_>>()
    };
    let same = draw(seed) == draw(seed);
    Ok(vec![
        CheckOutcome::deviation("pure Schmidt states idempotent", idem, 1e-12, 101),
        CheckOutcome::count("equal seeds give equal state sequences", usize::from(!same), 100),
    ])
}

/// Every suite at size `n`.
pub fn run_all(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    out.extend(check_eigendecomposition(n, seed)?);
    out.extend(check_partial_transpose(n, seed + 1)?);
    out.extend(check_psd_sqrt(n, seed + 2)?);
    out.extend(check_werner_grid()?);
    out.extend(check_pure_states(n, seed + 3)?);
    out.extend(check_concurrence_routes(n, seed + 4)?);
    out.push(check_bound(n, seed + 5)?);
    out.extend(check_sampled_states(n, seed + 6)?);
    out.extend(check_constructors_and_streams(seed + 7)?);
    Ok(out)
}
