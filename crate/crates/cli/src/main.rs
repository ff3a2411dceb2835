use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use entorder_core::experiment::{run_experiment_with_threads, ExperimentConfig, DEFAULT_S_BINS};
use entorder_core::io::{fmt17, read_states, summary_rows, write_reports, write_run_outputs, write_states};
use entorder_core::measures::measure_report;
use entorder_core::qstate::{pure_schmidt, singlet, werner_state, PureStateAmplitudes, WernerParameter};
use entorder_core::sampler::{random_density, PhiRule, RngStream};
use entorder_core::{selftest, DensityMatrix, Error};

#[derive(Parser, Debug)]
#[command(name = "entorder", version, about = "Two-qubit entanglement measures and ordering comparison")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Werner,
    Pure,
    Singlet,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Angles {
    Haar,
    Literal,
}

impl From<Angles> for PhiRule {
    fn from(a: Angles) -> PhiRule {
        match a {
            Angles::Haar => PhiRule::Haar,
            Angles::Literal => PhiRule::Literal,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the measure report of a named state or of every state in a file.
    Measure {
        #[arg(long, value_enum, conflicts_with = "state")]
        family: Option<Family>,
        /// Werner F or Schmidt alpha.
        #[arg(long)]
        param: Option<f64>,
        /// State file (32 values per line).
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Draw random states and write them as a state file.
    Sample {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Angles::Haar)]
        angles: Angles,
    },
    /// Run the pair comparison and write fig1..fig4 and summary CSVs.
    Compare {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_S_BINS)]
        bins: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = Angles::Haar)]
        angles: Angles,
    },
    /// Measures of Werner states over a grid of F.
    WernerTable {
        #[arg(long, default_value_t = 0.25)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value_t = 2_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ParameterOutOfRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

fn named_state(family: Family, param: Option<f64>) -> Result<DensityMatrix, Failure> {
    let need = |p: Option<f64>| p.ok_or_else(|| Failure::Usage(format!("--family {family:?} needs --param").to_lowercase()));
    Ok(match family {
        Family::Singlet => singlet(),
        Family::Werner => werner_state(WernerParameter::new(need(param)?)?),
        Family::Pure => pure_schmidt(PureStateAmplitudes::new(need(param)?)?),
    })
}

fn measure(family: Option<Family>, param: Option<f64>, state: Option<PathBuf>) -> Result<(), Failure> {
    let states = match (family, state) {
        (Some(f), None) => vec![named_state(f, param)?],
        (None, Some(path)) => read_states(BufReader::new(File::open(path)?))?,
        _ => return Err(Failure::Usage("give either --family or --state".into())),
    };
    let reports = states.iter().map(measure_report).collect::<Result<Vec<_>, _>>()?;
    write_reports(io::stdout().lock(), &reports)?;
    Ok(())
}

fn sample(seed: u64, count: usize, out: Option<PathBuf>, angles: Angles) -> Result<(), Failure> {
    let mut rng = RngStream::new(seed);
    let states: Vec<_> = (0..count).map(|_| random_density(&mut rng, angles.into())).collect();
    match out {
        Some(path) => write_states(BufWriter::new(File::create(path)?), &states)?,
        None => write_states(io::stdout().lock(), &states)?,
    }
    Ok(())
}

fn compare(
    seed: u64,
    pairs: usize,
    bins: usize,
    out: PathBuf,
    threads: usize,
    angles: Angles,
) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::new(seed, pairs);
    cfg.s_bins = bins;
    cfg.phi_rule = angles.into();
    let summary = run_experiment_with_threads(&cfg, threads)?;
    write_run_outputs(&out, &summary)?;
    let mut stdout = io::stdout().lock();
    for (k, v) in summary_rows(&summary) {
        writeln!(stdout, "{k},{v}")?;
    }
    Ok(())
}

fn werner_table(from: f64, to: f64, step: f64) -> Result<(), Failure> {
    if !(step > 0.0) || !(to >= from) {
        return Err(Failure::Usage("need step > 0 and to >= from".into()));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "F,C,E_F,E_N,E_sum")?;
    for k in 0..=n {
        let f = from + step * k as f64;
        let r = measure_report(&werner_state(WernerParameter::new(f)?))?;
        writeln!(
            stdout,
            "{},{},{},{},{}",
            fmt17(f),
            fmt17(r.concurrence),
            fmt17(r.e_formation),
            fmt17(r.e_negative),
            fmt17(r.e_sum)
        )?;
    }
    Ok(())
}

fn run_selftest(samples: usize, seed: u64) -> Result<(), Failure> {
    let outcomes = selftest::run_all(samples, seed)?;
    let mut stdout = io::stdout().lock();
    for o in &outcomes {
        writeln!(stdout, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} invariant check(s) failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure { family, param, state } => measure(family, param, state),
        Command::Sample { seed, count, out, angles } => sample(seed, count, out, angles),
        Command::Compare {
            seed,
            pairs,
            bins,
            out,
            threads,
            angles,
        } => compare(seed, pairs, bins, out, threads, angles),
        Command::WernerTable { from, to, step } => werner_table(from, to, step),
        Command::Selftest { samples, seed } => run_selftest(samples, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
