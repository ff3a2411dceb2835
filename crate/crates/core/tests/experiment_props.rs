use entorder_core::experiment::{run_experiment, run_experiment_with_threads, SHARD_PAIRS};
use entorder_core::io::{read_states, write_run_outputs, write_states, FIG1, FIG2, FIG3, FIG4, SUMMARY};
use entorder_core::qstate::{singlet, werner_state, WernerParameter};
use entorder_core::ExperimentConfig;

#[test]
fn summary_does_not_depend_on_thread_count() {
    let cfg = ExperimentConfig::new(17, 3 * SHARD_PAIRS + 100);
    let one = run_experiment_with_threads(&cfg, 1).unwrap();
    let three = run_experiment_with_threads(&cfg, 3).unwrap();
    assert_eq!(one, three);
    assert_eq!(one, run_experiment(&cfg).unwrap());
}

#[test]
fn counts_add_up() {
    let mut cfg = ExperimentConfig::new(4, 2 * SHARD_PAIRS + 7);
    cfg.retain_records = true;
    cfg.scatter_points = 500;
    let s = run_experiment(&cfg).unwrap();
    assert_eq!(s.n_pairs, cfg.n_pairs as u64);
    assert_eq!(s.states_drawn, s.states_kept + s.states_discarded);
    assert_eq!(s.pairs_formed, s.n_pairs + s.ties_excluded);
    // each shard stops right after completing a pair
    assert_eq!(s.states_kept, 2 * s.pairs_formed);
    assert_eq!(s.records.len() as u64, s.n_pairs);
    assert_eq!(s.s_histogram.len(), cfg.s_bins);
    assert_eq!(s.s_histogram.iter().map(|b| b.pairs).sum::<u64>(), s.n_pairs);
    assert_eq!(s.s_histogram.iter().map(|b| b.violations).sum::<u64>(), s.violations);
    assert_eq!(s.records.iter().filter(|r| r.violation).count() as u64, s.violations);
    assert_eq!(s.records.iter().filter(|r| r.violation_esum).count() as u64, s.violations_esum);
    assert_eq!(s.scatter_def_den.len(), 500);
    assert_eq!(s.scatter_ef_en.len(), 500);
    assert_eq!(s.scatter_c_en.len(), 500);
    assert_eq!(s.bound_violations, 0);
    assert!(s.min_bound_gap >= -1e-9);
}

#[test]
fn records_are_consistent() {
    let mut cfg = ExperimentConfig::new(8, 5_000);
    cfg.retain_records = true;
    let s = run_experiment(&cfg).unwrap();
    for r in &s.records {
        assert!(!r.tie);
        assert!(!r.report1.separable && !r.report2.separable);
        assert!(r.d_ef.abs() > cfg.tie_epsilon && r.d_en.abs() > cfg.tie_epsilon);
        assert!(r.d_ef.abs() <= 1.0 && r.d_en.abs() <= 1.0);
        assert_eq!(r.violation, r.d_ef * r.d_en < 0.0);
        assert!((r.s - r.report1.linear_entropy - r.report2.linear_entropy).abs() < 1e-15);
        assert!((s.s_min..=s.s_max).contains(&r.s));
    }
    assert!(s.violations > 0);
    assert!(s.violations_esum > 0, "the E_sum ordering also disagrees with E_F");
    let p = s.p_violation;
    assert!((p.value - s.violations as f64 / 5_000.0).abs() < 1e-15);
    assert!((p.std_error - (p.value * (1.0 - p.value) / 5_000.0).sqrt()).abs() < 1e-15);
}

#[test]
fn violations_grow_with_mixedness() {
    let mut cfg = ExperimentConfig::new(23, 30_000);
    cfg.retain_records = true;
    let s = run_experiment(&cfg).unwrap();
    let mid = 0.5 * (s.s_min + s.s_max);
    let rate = |pred: &dyn Fn(f64) -> bool| {
        let sel: Vec<_> = s.records.iter().filter(|r| pred(r.s)).collect();
        sel.iter().filter(|r| r.violation).count() as f64 / sel.len() as f64
    };
    assert!(rate(&|x| x >= mid) > 2.0 * rate(&|x| x < mid));
}

#[test]
fn run_outputs_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(2, 300);
    cfg.s_bins = 12;
    let s = run_experiment(&cfg).unwrap();
    write_run_outputs(&dir.path().join("nested"), &s).unwrap();
    let read = |name| std::fs::read_to_string(dir.path().join("nested").join(name)).unwrap();
    assert!(read(FIG1).starts_with("dEN,dEF\n"));
    assert_eq!(read(FIG1).lines().count(), 301);
    assert!(read(FIG2).starts_with("E_F,E_N\n"));
    assert!(read(FIG3).starts_with("C,E_N\n"));
    assert_eq!(read(FIG4).lines().count(), 13);
    assert!(read(SUMMARY).contains("n_pairs,300\n"));
}

#[test]
fn state_file_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("states.csv");
    let states = vec![singlet(), werner_state(WernerParameter::new(0.8).unwrap())];
    write_states(std::fs::File::create(&path).unwrap(), &states).unwrap();
    assert_eq!(read_states(std::fs::File::open(&path).unwrap()).unwrap(), states);
}
