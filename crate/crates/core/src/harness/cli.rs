//! `qloc` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::encoding::{AmplitudeVector, DEFAULT_FLOOR_DBM};
use crate::error::{Error, Result};
use crate::fingerprint::{FingerprintDb, MatchMode, TestSample};
use crate::statevector::RngStream;
use crate::swaptest::{
    estimate_similarity, exact_match_probability, exact_similarity, SwapTestCircuit,
};

use super::csvio::{
    load_fingerprints, load_samples, save_with, write_cdf, write_localizations, write_rss_table,
    write_sweep,
};
use super::experiments::{
    compare_modes, localize_all, run_cdf, run_shot_sweep, CompareReport, DEFAULT_SHOT_LIST,
};
use super::format::format_sig9;
use super::testbed::{generate_testbed, TestbedConfig};

#[derive(Debug, Parser)]
#[command(
    name = "qloc",
    version,
    about = "Swap-test RSS fingerprint localization (simulated)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic testbed: fingerprints.csv and samples.csv.
    Gen(GenArgs),
    /// Localize every sample against the fingerprint db.
    Localize(RunArgs),
    /// Median error against number of shots.
    Sweep(SweepArgs),
    /// CDF of localization error.
    Cdf(RunArgs),
    /// Classical vs quantum location choices.
    Compare(RunArgs),
    /// Run a single swap test between two vectors.
    SwapTest(SwapTestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Shots,
    Classical,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, env = "QLOC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_FLOOR_DBM, allow_negative_numbers = true)]
    pub floor: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub aps: usize,
    #[arg(long, default_value_t = 24)]
    pub train: usize,
    #[arg(long, default_value_t = 24)]
    pub test: usize,
    /// Shadowing standard deviation in dB.
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub db: PathBuf,
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long, default_value_t = DEFAULT_FLOOR_DBM, allow_negative_numbers = true)]
    pub floor: f64,
    #[arg(long, env = "QLOC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output directory; tables go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 4096)]
    pub shots: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SHOT_LIST)]
    pub shot_list: Vec<u64>,
    /// Number of shot-noise seeds, derived from --seed.
    #[arg(long, default_value_t = 20)]
    pub repeats: u64,
}

#[derive(Debug, Args)]
pub struct SwapTestArgs {
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub psi: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub phi: Vec<f64>,
    /// Exact probabilities (the default unless --shots is given).
    #[arg(long, conflicts_with = "shots")]
    pub exact: bool,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, env = "QLOC_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl RunArgs {
    fn match_mode(&self) -> MatchMode {
        match self.mode {
            ModeArg::Exact => MatchMode::QuantumExact,
            ModeArg::Classical => MatchMode::Classical,
            ModeArg::Shots => MatchMode::QuantumShots {
                shots: self.shots,
                seed: self.data.seed,
            },
        }
    }
}

impl DataArgs {
    fn load(&self) -> Result<(FingerprintDb, Vec<TestSample>)> {
        let db = load_fingerprints(&self.db, self.floor)?;
        let samples = load_samples(&self.samples, self.floor)?;
        Ok((db, samples))
    }
}

/// Write to `<out>/<name>` when an output directory is given, otherwise to `stdout`.
fn emit<F>(out_dir: Option<&Path>, name: &str, stdout: &mut dyn Write, render: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
{
    match out_dir {
        Some(dir) => {
            let path = dir.join(name);
            save_with(&path, render)?;
            writeln!(stdout, "wrote {}", path.display()).map_err(stdout_err)
        }
        None => {
            let mut buf = Vec::new();
            render(&mut buf).map_err(stdout_err)?;
            stdout.write_all(&buf).map_err(stdout_err)
        }
    }
}

fn stdout_err(source: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

/// Seeds for `repeats` shot-noise repetitions under one master seed.
pub fn repeat_seeds(master: u64, repeats: u64) -> Vec<u64> {
    (0..repeats)
        .map(|r| crate::fingerprint::sample_seed(master, u64::MAX - r))
        .collect()
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Gen(args) => {
            let config = TestbedConfig {
                ap_count: args.aps,
                train_count: args.train,
                test_count: args.test,
                shadowing_sigma_db: args.sigma,
                rss_floor_dbm: args.floor,
                seed: args.seed,
                ..TestbedConfig::default()
            };
            let tb = generate_testbed(&config)?;
            // fail now rather than on load if a row cannot be encoded
            tb.db()?;
            tb.test_samples()?;
            for (name, records) in [
                ("fingerprints.csv", &tb.fingerprints),
                ("samples.csv", &tb.samples),
            ] {
                let path = args.out.join(name);
                save_with(&path, |w| write_rss_table(w, config.ap_count, records))?;
                writeln!(stdout, "wrote {}", path.display()).map_err(stdout_err)?;
            }
            Ok(())
        }
        Command::Localize(args) => {
            let (db, samples) = args.data.load()?;
            let rows = localize_all(&db, &samples, args.match_mode())?;
            emit(args.data.out.as_deref(), "localize.csv", stdout, |w| {
                write_localizations(w, &rows)
            })
        }
        Command::Cdf(args) => {
            let (db, samples) = args.data.load()?;
            let report = run_cdf(&db, &samples, args.match_mode())?;
            emit(args.data.out.as_deref(), "cdf.csv", stdout, |w| {
                write_cdf(w, &report)
            })
        }
        Command::Sweep(args) => {
            let (db, samples) = args.data.load()?;
            if args.repeats == 0 {
                return Err(Error::EmptyInput("--repeats must be at least 1"));
            }
            let seeds = repeat_seeds(args.data.seed, args.repeats);
            let report = run_shot_sweep(&db, &samples, &args.shot_list, &seeds)?;
            emit(args.data.out.as_deref(), "sweep.csv", stdout, |w| {
                write_sweep(w, &report)
            })
        }
        Command::Compare(args) => {
            let (db, samples) = args.data.load()?;
            let other = match args.mode {
                ModeArg::Classical => MatchMode::QuantumExact,
                _ => args.match_mode(),
            };
            let report = compare_modes(&db, &samples, MatchMode::Classical, other)?;
            write_compare(stdout, &report).map_err(stdout_err)?;
            if let Some(dir) = args.data.out.as_deref() {
                for (name, mode) in [
                    ("cdf_classical.csv", MatchMode::Classical),
                    ("cdf_quantum.csv", other),
                ] {
                    let report = run_cdf(&db, &samples, mode)?;
                    emit(Some(dir), name, stdout, |w| write_cdf(w, &report))?;
                }
            }
            Ok(())
        }
        Command::SwapTest(args) => swap_test(&args, stdout),
    }
}

fn write_compare(out: &mut dyn Write, r: &CompareReport) -> std::io::Result<()> {
    writeln!(out, "samples={}", r.samples)?;
    writeln!(out, "distinct_score_samples={}", r.distinct)?;
    writeln!(out, "agreements={}", r.agreements)?;
    writeln!(out, "agreement_rate={}", format_sig9(r.agreement_rate()))
}

fn swap_test(args: &SwapTestArgs, out: &mut dyn Write) -> Result<()> {
    let raw_norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let psi = AmplitudeVector::normalized(args.psi.clone())?;
    let phi = AmplitudeVector::normalized(args.phi.clone())?;
    let circuit = SwapTestCircuit::new(&psi, &phi)?;
    let w = |e| stdout_err(e);

    for (name, v) in [("psi", &args.psi), ("phi", &args.phi)] {
        let n = raw_norm(v);
        if (n - 1.0).abs() > crate::statevector::NORM_TOLERANCE {
            writeln!(
                out,
                "# {name} rescaled to unit norm (input sum of squares {})",
                format_sig9(n)
            )
            .map_err(w)?;
        }
    }
    writeln!(out, "qubits={}", circuit.total_qubits()).map_err(w)?;
    match args.shots {
        Some(shots) => {
            let est = estimate_similarity(&psi, &phi, shots, &RngStream::new(args.seed, 0))?;
            writeln!(out, "shots={shots}").map_err(w)?;
            writeln!(out, "ones={}", est.ones_count).map_err(w)?;
            writeln!(out, "similarity={:.6}", est.value).map_err(w)?;
        }
        None => {
            let p1 = exact_match_probability(&psi, &phi)?;
            writeln!(out, "p1={p1:.6}").map_err(w)?;
            let sim = exact_similarity(&psi, &phi)?;
            writeln!(out, "similarity={sim:.6}").map_err(w)?;
        }
    }
    Ok(())
}

/// Parse `argv` (program name first), run, and return the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
