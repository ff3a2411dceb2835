//! Monte Carlo comparison of the orderings induced by `E_F` and `E_N`.
//!
//! States are drawn from the sampler, separable ones are discarded (they
//! still count toward the entangled fraction) and consecutive kept states
//! form a pair. For each pair the relative differences
//! `dE = (E(rho1) - E(rho2)) / (E(rho1) + E(rho2))` are computed for both
//! measures; the pair violates the common ordering when the signs differ.
//!
//! The run is split into fixed-size shards, each drawing from its own
//! substream `(seed, shard)`. Shards may run on any number of threads and
//! are merged in shard order, so the summary only depends on the config.

use rand_core::RngCore;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{measure_report, MeasureReport};
use crate::qstate::DensityMatrix;
use crate::sampler::{random_density, PhiRule, RngStream};
use crate::tol::TOL;

/// Usable pairs produced per shard.
pub const SHARD_PAIRS: usize = 1024;
/// Upper end of the `S = S1 + S2` axis: twice the two-qubit maximum of 3/4.
pub const S_MAX: f64 = 1.5;
pub const DEFAULT_S_BINS: usize = 30;
pub const DEFAULT_SCATTER_POINTS: usize = 10_000;
/// Slack on the `C >= 2 E_N` bound checked for every kept state.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairComparisonRecord {
    pub report1: MeasureReport,
    pub report2: MeasureReport,
    pub d_ef: f64,
    pub d_en: f64,
    pub d_esum: f64,
    /// `|dEF|` or `|dEN|` at or below the tie epsilon; ties never count as violations.
    pub tie: bool,
    /// `dEF * dEN < 0` for a non-tie pair.
    pub violation: bool,
    /// Same test with `E_sum` in place of `E_N`.
    pub violation_esum: bool,
    /// `S1 + S2`.
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Number of usable (non-tie) entangled pairs to accumulate.
    pub n_pairs: usize,
    pub s_bins: usize,
    pub tie_epsilon: f64,
    pub phi_rule: PhiRule,
    /// Points kept per scatter figure.
    pub scatter_points: usize,
    /// Keep every usable record in the summary.
    pub retain_records: bool,
}

impl ExperimentConfig {
    pub fn new(seed: u64, n_pairs: usize) -> Self {
        ExperimentConfig {
            seed,
            n_pairs,
            s_bins: DEFAULT_S_BINS,
            tie_epsilon: TOL.tie_epsilon,
            phi_rule: PhiRule::Haar,
            scatter_points: DEFAULT_SCATTER_POINTS,
            retain_records: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pairs < 1 {
            return Err(Error::ParameterOutOfRange {
                name: "n_pairs",
                value: self.n_pairs as f64,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        if self.s_bins < 1 {
            return Err(Error::ParameterOutOfRange {
                name: "s_bins",
                value: self.s_bins as f64,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        if !(self.tie_epsilon >= 0.0) {
            return Err(Error::ParameterOutOfRange {
                name: "tie_epsilon",
                value: self.tie_epsilon,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SBin {
    pub lo: f64,
    pub hi: f64,
    pub pairs: u64,
    pub violations: u64,
    /// `violations / pairs`, zero for an empty bin.
    pub rate: f64,
    pub empty: bool,
}

impl SBin {
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Uniform-bin accumulator of pair counts and violations over `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SHistogram {
    lo: f64,
    hi: f64,
    pairs: Vec<u64>,
    violations: Vec<u64>,
}

impl SHistogram {
    pub fn new(n_bins: usize, lo: f64, hi: f64) -> Self {
        let n = n_bins.max(1);
        SHistogram {
            lo,
            hi,
            pairs: vec![0; n],
            violations: vec![0; n],
        }
    }

    /// Values outside `[lo, hi]` land in the edge bins.
    pub fn bin_index(&self, s: f64) -> usize {
        let n = self.pairs.len();
        let t = (s - self.lo) / (self.hi - self.lo) * n as f64;
        if t.is_nan() || t < 0.0 {
            0
        } else {
            (t as usize).min(n - 1)
        }
    }

    pub fn push(&mut self, s: f64, violation: bool) {
        let k = self.bin_index(s);
        self.pairs[k] += 1;
        if violation {
            self.violations[k] += 1;
        }
    }

    pub fn merge(&mut self, other: &SHistogram) {
        for (a, b) in self.pairs.iter_mut().zip(&other.pairs) {
            *a += b;
        }
        for (a, b) in self.violations.iter_mut().zip(&other.violations) {
            *a += b;
        }
    }

    pub fn bins(&self) -> Vec<SBin> {
        let n = self.pairs.len();
        let width = (self.hi - self.lo) / n as f64;
        (0..n)
            .map(|k| {
                let pairs = self.pairs[k];
                let violations = self.violations[k];
                SBin {
                    lo: self.lo + width * k as f64,
                    hi: self.lo + width * (k + 1) as f64,
                    pairs,
                    violations,
                    rate: if pairs == 0 {
                        0.0
                    } else {
                        violations as f64 / pairs as f64
                    },
                    empty: pairs == 0,
                }
            })
            .collect()
    }
}

/// Per-bin statistics over `S` in `[0, 1.5]`.
pub fn s_histogram_bins(records: &[PairComparisonRecord], n_bins: usize) -> Vec<SBin> {
    s_histogram_range(records, n_bins, 0.0, S_MAX)
}

pub fn s_histogram_range(
    records: &[PairComparisonRecord],
    n_bins: usize,
    lo: f64,
    hi: f64,
) -> Vec<SBin> {
    let mut h = SHistogram::new(n_bins, lo, hi);
    for r in records {
        h.push(r.s, r.violation);
    }
    h.bins()
}

/// `(a - b) / (a + b)`.
pub fn relative_difference(a: f64, b: f64) -> Result<f64> {
    let sum = a + b;
    if !(sum > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    Ok(((a - b) / sum).clamp(-1.0, 1.0))
}

/// Compare two entangled states.
pub fn compare_pair(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    tie_epsilon: f64,
) -> Result<PairComparisonRecord> {
    compare_reports(&measure_report(rho1)?, &measure_report(rho2)?, tie_epsilon)
}

/// [`compare_pair`] on precomputed reports.
///
/// A pair whose `E_F` values are both zero (possible only for states within
/// rounding of the separable boundary) is reported as a tie.
pub fn compare_reports(
    r1: &MeasureReport,
    r2: &MeasureReport,
    tie_epsilon: f64,
) -> Result<PairComparisonRecord> {
    if r1.separable {
        return Err(Error::SeparableInput { which: 1 });
    }
    if r2.separable {
        return Err(Error::SeparableInput { which: 2 });
    }
    let rel = |a: f64, b: f64| relative_difference(a, b).unwrap_or(0.0);
    let d_ef = rel(r1.e_formation, r2.e_formation);
    let d_en = rel(r1.e_negative, r2.e_negative);
    let d_esum = rel(r1.e_sum, r2.e_sum);
    let tie = d_ef.abs() <= tie_epsilon || d_en.abs() <= tie_epsilon;
    let violation = !tie && d_ef * d_en < 0.0;
    let violation_esum = d_ef.abs() > tie_epsilon && d_esum.abs() > tie_epsilon && d_ef * d_esum < 0.0;
    Ok(PairComparisonRecord {
        report1: *r1,
        report2: *r2,
        d_ef,
        d_en,
        d_esum,
        tie,
        violation,
        violation_esum,
        s: r1.linear_entropy + r2.linear_entropy,
    })
}

/// A probability estimate with its binomial standard error `sqrt(p (1 - p) / n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, n: u64) -> Self {
        if n == 0 {
            return Estimate {
                value: 0.0,
                std_error: 0.0,
                n,
            };
        }
        let p = hits as f64 / n as f64;
        Estimate {
            value: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub states_drawn: u64,
    pub states_kept: u64,
    pub states_discarded: u64,
    /// Pairs formed from kept states, ties included.
    pub pairs_formed: u64,
    pub ties_excluded: u64,
    pub n_pairs: u64,
    pub violations: u64,
    pub violations_esum: u64,
    pub p_entangled: Estimate,
    pub p_violation: Estimate,
    pub p_violation_esum: Estimate,
    /// Kept states with `C < 2 E_N - 1e-9`.
    pub bound_violations: u64,
    /// Smallest `C - 2 E_N` over kept states.
    pub min_bound_gap: f64,
    /// Largest single-state linear entropy among kept states.
    pub max_kept_linear_entropy: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub s_histogram: Vec<SBin>,
    /// `(dEN, dEF)` per pair.
    pub scatter_def_den: Vec<(f64, f64)>,
    /// `(E_F, E_N)` per state.
    pub scatter_ef_en: Vec<(f64, f64)>,
    /// `(C, E_N)` per state.
    pub scatter_c_en: Vec<(f64, f64)>,
    pub records: Vec<PairComparisonRecord>,
}

/// Bottom-k sample by random key: uniform without replacement and
/// mergeable across shards.
#[derive(Debug, Clone, Default)]
struct KeyedSample<T> {
    items: Vec<(u64, u64, T)>,
}

impl<T: Copy> KeyedSample<T> {
    fn push(&mut self, key: u64, order: u64, item: T) {
        self.items.push((key, order, item));
    }

    fn truncate(&mut self, k: usize) {
        if self.items.len() > k {
            self.items.sort_unstable_by_key(|&(key, order, _)| (key, order));
            self.items.truncate(k);
        }
    }

    fn into_ordered(mut self, k: usize) -> Vec<T> {
        self.truncate(k);
        self.items.sort_unstable_by_key(|&(_, order, _)| order);
        self.items.into_iter().map(|(_, _, t)| t).collect()
    }
}

struct ShardResult {
    drawn: u64,
    kept: u64,
    pairs_formed: u64,
    ties: u64,
    violations: u64,
    violations_esum: u64,
    bound_violations: u64,
    min_bound_gap: f64,
    max_kept_linear_entropy: f64,
    s_min: f64,
    s_max: f64,
    hist: SHistogram,
    pair_points: KeyedSample<(f64, f64)>,
    state_points: KeyedSample<(f64, f64, f64)>,
    records: Vec<PairComparisonRecord>,
}

/// Substream indices: even for states, odd for sampling keys.
fn run_shard(cfg: &ExperimentConfig, shard: u64, target: usize) -> Result<ShardResult> {
    let mut rng = RngStream::substream(cfg.seed, 2 * shard);
    let mut keys = RngStream::substream(cfg.seed, 2 * shard + 1);
    let mut out = ShardResult {
        drawn: 0,
        kept: 0,
        pairs_formed: 0,
        ties: 0,
        violations: 0,
        violations_esum: 0,
        bound_violations: 0,
        min_bound_gap: f64::INFINITY,
        max_kept_linear_entropy: 0.0,
        s_min: f64::INFINITY,
        s_max: f64::NEG_INFINITY,
        hist: SHistogram::new(cfg.s_bins, 0.0, S_MAX),
        pair_points: KeyedSample::default(),
        state_points: KeyedSample::default(),
        records: Vec::new(),
    };
    // order keys are global so merged samples come out in draw order
    let order_base = shard << 32;
    let mut pending: Option<MeasureReport> = None;
    let mut usable = 0usize;
    while usable < target {
        let rho = random_density(&mut rng, cfg.phi_rule);
        out.drawn += 1;
        let report = measure_report(&rho)?;
        if report.separable {
            continue;
        }
        out.kept += 1;
        let gap = report.concurrence - 2.0 * report.e_negative;
        out.min_bound_gap = out.min_bound_gap.min(gap);
        if gap < -BOUND_SLACK {
            out.bound_violations += 1;
        }
        out.max_kept_linear_entropy = out.max_kept_linear_entropy.max(report.linear_entropy);
        out.state_points.push(
            keys.next_u64(),
            order_base + out.kept,
            (report.e_formation, report.e_negative, report.concurrence),
        );
        if out.state_points.items.len() >= 4 * cfg.scatter_points.max(1) {
            out.state_points.truncate(cfg.scatter_points);
        }

        let Some(first) = pending.take() else {
            pending = Some(report);
            continue;
        };
        out.pairs_formed += 1;
        let rec = compare_reports(&first, &report, cfg.tie_epsilon)?;
        if rec.tie {
            out.ties += 1;
            continue;
        }
        usable += 1;
        out.violations += rec.violation as u64;
        out.violations_esum += rec.violation_esum as u64;
        out.hist.push(rec.s, rec.violation);
        out.s_min = out.s_min.min(rec.s);
        out.s_max = out.s_max.max(rec.s);
        out.pair_points
            .push(keys.next_u64(), order_base + usable as u64, (rec.d_en, rec.d_ef));
        if out.pair_points.items.len() >= 4 * cfg.scatter_points.max(1) {
            out.pair_points.truncate(cfg.scatter_points);
        }
        if cfg.retain_records {
            out.records.push(rec);
        }
    }
    Ok(out)
}

/// Run the comparison on the current rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let n_shards = cfg.n_pairs.div_ceil(SHARD_PAIRS);
    let shards: Vec<ShardResult> = (0..n_shards)
        .into_par_iter()
        .map(|k| {
            let target = SHARD_PAIRS.min(cfg.n_pairs - k * SHARD_PAIRS);
            run_shard(cfg, k as u64, target)
        })
        .collect::<Result<_>>()?;
    Ok(merge(cfg, shards))
}

/// Run on a dedicated pool of `threads` workers. The result does not depend
/// on `threads`.
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<ExperimentSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    pool.install(|| run_experiment(cfg))
}

fn merge(cfg: &ExperimentConfig, shards: Vec<ShardResult>) -> ExperimentSummary {
    let mut hist = SHistogram::new(cfg.s_bins, 0.0, S_MAX);
    let mut pair_points = KeyedSample::default();
    let mut state_points = KeyedSample::default();
    let mut records = Vec::new();
    let (mut drawn, mut kept, mut formed, mut ties) = (0, 0, 0, 0);
    let (mut violations, mut violations_esum, mut bound_violations) = (0, 0, 0);
    let mut min_bound_gap = f64::INFINITY;
    let mut max_s1 = 0.0f64;
    let (mut s_min, mut s_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in shards {
        drawn += s.drawn;
        kept += s.kept;
        formed += s.pairs_formed;
        ties += s.ties;
        violations += s.violations;
        violations_esum += s.violations_esum;
        bound_violations += s.bound_violations;
        min_bound_gap = min_bound_gap.min(s.min_bound_gap);
        max_s1 = max_s1.max(s.max_kept_linear_entropy);
        s_min = s_min.min(s.s_min);
        s_max = s_max.max(s.s_max);
        hist.merge(&s.hist);
        pair_points.items.extend(s.pair_points.items);
        state_points.items.extend(s.state_points.items);
        records.extend(s.records);
    }
    let state_points = state_points.into_ordered(cfg.scatter_points);
    let n_pairs = cfg.n_pairs as u64;
    ExperimentSummary {
        config: *cfg,
        states_drawn: drawn,
        states_kept: kept,
        states_discarded: drawn - kept,
        pairs_formed: formed,
        ties_excluded: ties,
        n_pairs,
        violations,
        violations_esum,
        p_entangled: Estimate::from_counts(kept, drawn),
        p_violation: Estimate::from_counts(violations, n_pairs),
        p_violation_esum: Estimate::from_counts(violations_esum, n_pairs),
        bound_violations,
        min_bound_gap,
        max_kept_linear_entropy: max_s1,
        s_min,
        s_max,
        s_histogram: hist.bins(),
        scatter_def_den: pair_points.into_ordered(cfg.scatter_points),
        scatter_ef_en: state_points.iter().map(|&(ef, en, _)| (ef, en)).collect(),
        scatter_c_en: state_points.iter().map(|&(_, en, c)| (c, en)).collect(),
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{pure_schmidt, werner_state, PureStateAmplitudes, WernerParameter};

    fn werner(f: f64) -> DensityMatrix {
        werner_state(WernerParameter::new(f).unwrap())
    }

    #[test]
    fn relative_difference_cases() {
        assert_eq!(relative_difference(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(relative_difference(0.7, 0.0).unwrap(), 1.0);
        assert!((relative_difference(0.2, 0.6).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(relative_difference(0.0, 0.0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn werner_pair_agrees() {
        let r = compare_pair(&werner(0.9), &werner(0.7), TOL.tie_epsilon).unwrap();
        assert!(r.d_ef > 0.0 && r.d_en > 0.0);
        assert!(!r.violation && !r.tie);
    }

    #[test]
    fn equal_negativity_is_a_tie() {
        // pure alpha = 0.8 has E_N = 0.8 * 0.6 = 0.48, Werner F = 0.98 has E_N = 0.48
        let p = pure_schmidt(PureStateAmplitudes::new(0.8).unwrap());
        let r = compare_pair(&p, &werner(0.98), TOL.tie_epsilon).unwrap();
        assert!(r.d_en.abs() <= TOL.tie_epsilon, "{}", r.d_en);
        assert!(r.tie && !r.violation);

        let w = werner(0.8);
        let r = compare_pair(&w, &w, TOL.tie_epsilon).unwrap();
        assert_eq!((r.d_ef, r.d_en), (0.0, 0.0));
        assert!(r.tie && !r.violation);
    }

    #[test]
    fn separable_input_rejected() {
        assert!(matches!(
            compare_pair(&werner(0.4), &werner(0.8), 1e-12),
            Err(Error::SeparableInput { which: 1 })
        ));
        assert!(matches!(
            compare_pair(&werner(0.8), &werner(0.5), 1e-12),
            Err(Error::SeparableInput { which: 2 })
        ));
    }

    fn record_with_s(s: f64, violation: bool) -> PairComparisonRecord {
        let mut r = compare_pair(&werner(0.9), &werner(0.7), 1e-12).unwrap();
        r.s = s;
        r.violation = violation;
        r
    }

    #[test]
    fn histogram_pure_pairs_fill_bin_zero() {
        let recs = vec![record_with_s(0.0, false); 5];
        let bins = s_histogram_bins(&recs, 30);
        assert_eq!(bins.len(), 30);
        assert_eq!(bins[0].pairs, 5);
        assert_eq!(bins[0].rate, 0.0);
        assert!(bins[1..].iter().all(|b| b.empty && b.rate == 0.0));
        assert_eq!(bins[29].hi, 1.5);
    }

    #[test]
    fn histogram_single_bin_and_edges() {
        let bins = s_histogram_bins(&[record_with_s(0.7, true)], 1);
        assert_eq!(bins.len(), 1);
        assert_eq!((bins[0].pairs, bins[0].violations, bins[0].rate), (1, 1, 1.0));
        let bins = s_histogram_bins(&[record_with_s(1.5, false), record_with_s(0.75, true)], 2);
        assert_eq!(bins[1].pairs, 2);
        assert_eq!(bins[1].rate, 0.5);
    }

    #[test]
    fn degenerate_run_has_one_record() {
        let mut cfg = ExperimentConfig::new(3, 1);
        cfg.retain_records = true;
        let s = run_experiment(&cfg).unwrap();
        assert_eq!(s.records.len(), 1);
        assert!(s.p_violation.value == 0.0 || s.p_violation.value == 1.0);
        assert_eq!(s.states_drawn, s.states_kept + s.states_discarded);
        assert_eq!(s.pairs_formed, s.ties_excluded + 1);
        assert_eq!(s.states_kept, 2 * s.pairs_formed);
    }

    #[test]
    fn config_validation() {
        assert!(run_experiment(&ExperimentConfig::new(1, 0)).is_err());
        let mut c = ExperimentConfig::new(1, 4);
        c.s_bins = 0;
        assert!(run_experiment(&c).is_err());
    }

    #[test]
    fn keyed_sample_is_bottom_k_in_order() {
        let mut s = KeyedSample::default();
        for (i, key) in [50u64, 10, 40, 20, 30].into_iter().enumerate() {
            s.push(key, i as u64, i);
        }
        assert_eq!(s.into_ordered(3), vec![1, 3, 4]);
    }
}
