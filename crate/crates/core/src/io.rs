//! CSV formats: state files, measure rows and the per-run figure data.
//!
//! A state is one line of 32 numbers: the 16 entries in row-major order, real
//! and imaginary parts interleaved. All numbers are written with 17
//! significant digits so they parse back to the same `f64`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::ExperimentSummary;
use crate::measures::MeasureReport;
use crate::qstate::DensityMatrix;

pub const FIG1: &str = "fig1.csv";
pub const FIG2: &str = "fig2.csv";
pub const FIG3: &str = "fig3.csv";
pub const FIG4: &str = "fig4.csv";
pub const SUMMARY: &str = "summary.csv";

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_states<W: Write>(w: W, states: &[DensityMatrix]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for rho in states {
        out.write_record(rho.to_record().iter().map(|&x| fmt17(x)))?;
    }
    out.flush()?;
    Ok(())
}

/// Parse and validate every state in a state file. Blank lines are skipped.
pub fn read_states<R: Read>(r: R) -> Result<Vec<DensityMatrix>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r);
    let mut states = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let values = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("record {}: {f:?}: {e}", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        states.push(DensityMatrix::from_record(&values)?);
    }
    Ok(states)
}

pub fn write_reports<W: Write>(w: W, reports: &[MeasureReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(MeasureReport::CSV_HEADER)?;
    for r in reports {
        out.write_record(r.csv_fields())?;
    }
    out.flush()?;
    Ok(())
}

fn write_points(path: &Path, header: [&str; 2], points: &[(f64, f64)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    out.write_record(header)?;
    for &(x, y) in points {
        out.write_record([fmt17(x), fmt17(y)])?;
    }
    out.flush()?;
    Ok(())
}

/// Key/value rows describing the run.
pub fn summary_rows(s: &ExperimentSummary) -> Vec<(&'static str, String)> {
    let c = &s.config;
    vec![
        ("seed", c.seed.to_string()),
        ("n_pairs", c.n_pairs.to_string()),
        ("s_bins", c.s_bins.to_string()),
        ("tie_epsilon", fmt17(c.tie_epsilon)),
        ("phi_rule", c.phi_rule.name().to_string()),
        ("scatter_points", c.scatter_points.to_string()),
        ("states_drawn", s.states_drawn.to_string()),
        ("states_kept", s.states_kept.to_string()),
        ("states_discarded", s.states_discarded.to_string()),
        ("pairs_formed", s.pairs_formed.to_string()),
        ("ties_excluded", s.ties_excluded.to_string()),
        ("violations", s.violations.to_string()),
        ("p_entangled", fmt17(s.p_entangled.value)),
        ("p_entangled_se", fmt17(s.p_entangled.std_error)),
        ("p_violation", fmt17(s.p_violation.value)),
        ("p_violation_se", fmt17(s.p_violation.std_error)),
        ("violations_esum", s.violations_esum.to_string()),
        ("p_violation_esum", fmt17(s.p_violation_esum.value)),
        ("p_violation_esum_se", fmt17(s.p_violation_esum.std_error)),
        ("bound_violations", s.bound_violations.to_string()),
        ("min_bound_gap", fmt17(s.min_bound_gap)),
        ("max_kept_linear_entropy", fmt17(s.max_kept_linear_entropy)),
        ("s_min", fmt17(s.s_min)),
        ("s_max", fmt17(s.s_max)),
    ]
}

/// Write `fig1.csv` .. `fig4.csv` and `summary.csv` into `dir`, creating it
/// if needed.
pub fn write_run_outputs(dir: &Path, s: &ExperimentSummary) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_points(&dir.join(FIG1), ["dEN", "dEF"], &s.scatter_def_den)?;
    write_points(&dir.join(FIG2), ["E_F", "E_N"], &s.scatter_ef_en)?;
    write_points(&dir.join(FIG3), ["C", "E_N"], &s.scatter_c_en)?;

    let mut out = csv::Writer::from_writer(BufWriter::new(File::create(dir.join(FIG4))?));
    out.write_record(["bin_center", "pair_count", "violation_count", "violation_rate"])?;
    for b in &s.s_histogram {
        out.write_record([
            fmt17(b.center()),
            b.pairs.to_string(),
            b.violations.to_string(),
            fmt17(b.rate),
        ])?;
    }
    out.flush()?;

    let mut out = csv::Writer::from_writer(BufWriter::new(File::create(dir.join(SUMMARY))?));
    out.write_record(["key", "value"])?;
    for (k, v) in summary_rows(s) {
        out.write_record([k, v.as_str()])?;
    }
    out.flush()?;
    Ok(())
}
