//! Command line driver for the Burnside process on complete flags over a
//! prime field: chain simulation with histograms and trajectories, exact
//! transition kernels with spectral checks, Green polynomials, RSK, cell
//! size estimation, and the full verification suite.
//!
//! Exit codes: 0 on success, 1 when a computation or check fails, 2 on a
//! usage error (composite field order, malformed permutation, zero steps).

mod output;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use burnside::oracle::fixture::Gl3Fixture;
use burnside::oracle::spectral::spectrum_report;
use burnside::oracle::{exact_transition, fraction_string};
use burnside::rsk::rsk;
use burnside::{
    acceptance, estimate_cell_size, green_polynomial, run_chains, CellEstimate, ChainConfig,
    Partition, Permutation, PrimeField, StartState,
};
use clap::{Args, Parser, Subcommand};
use output::{Format, MatrixJson, RunManifest};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Parser)]
#[command(name = "burnside", version, about = "Burnside process on complete flags over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the chain and write a visit histogram
    Simulate(SimulateArgs),
    /// Compute the exact flag and lumped kernels and write them as JSON
    Exact(ExactArgs),
    /// Print the Green polynomial of a Jordan type
    Green(GreenArgs),
    /// Apply the RSK correspondence to a permutation
    Rsk(RskArgs),
    /// Estimate a Bruhat cell size by collision counting inside the cell
    EstimateCell(EstimateCellArgs),
    /// Run every verification criterion and report pass or fail per line
    Verify,
}

#[derive(Args)]
struct SimulateArgs {
    /// Flag length; the chain lives on the flags of F_q^n
    #[arg(long)]
    n: usize,
    /// Field order, a prime
    #[arg(long)]
    q: u64,
    /// Seed for the chain generator; chain i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of steps per chain
    #[arg(long)]
    steps: usize,
    /// Start permutation in one-line notation (default: the longest element)
    #[arg(long)]
    start: Option<String>,
    /// Output directory, created if missing
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Histogram format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Keep the flag at every step and write trajectory files
    #[arg(long)]
    retain_flags: bool,
    /// Number of independently seeded chains, merged into one histogram
    #[arg(long, default_value_t = 1)]
    chains: usize,
}

#[derive(Args)]
struct ExactArgs {
    /// Flag length
    #[arg(long)]
    n: usize,
    /// Field order, a prime
    #[arg(long)]
    q: u64,
    /// Output directory, created if missing
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Compare the computed lumped kernel with the stored n = 3 closed form
    #[arg(long)]
    check: bool,
    /// Verify the n = 3 spectrum and write spectrum.json
    #[arg(long)]
    spectrum: bool,
}

#[derive(Args)]
struct GreenArgs {
    /// Jordan type as a partition, comma separated, e.g. 2,1
    shape: String,
}

#[derive(Args)]
struct RskArgs {
    /// Permutation in one-line notation, e.g. 213
    word: String,
}

#[derive(Args)]
struct EstimateCellArgs {
    /// Permutation labeling the cell, one-line notation
    word: String,
    /// Field order, a prime
    #[arg(long)]
    q: u64,
    /// Chain steps to take inside the cell
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Seed for the sampling generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Bad invocation rather than a failed computation; maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// Ok(false) means the run completed but a check failed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Simulate(args) => cmd_simulate(args).map(|()| true),
        Command::Exact(args) => cmd_exact(args),
        Command::Green(args) => cmd_green(args).map(|()| true),
        Command::Rsk(args) => cmd_rsk(args).map(|()| true),
        Command::EstimateCell(args) => cmd_estimate_cell(args).map(|()| true),
        Command::Verify => cmd_verify(),
    }
}

fn checked_field(q: u64) -> Result<PrimeField> {
    PrimeField::new(q).map_err(|e| usage(e.to_string()))
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let started = Instant::now();
    if args.n == 0 {
        return Err(usage("n must be at least 1"));
    }
    checked_field(args.q)?;
    if args.steps == 0 {
        return Err(usage("steps must be at least 1"));
    }
    if args.chains == 0 {
        return Err(usage("chains must be at least 1"));
    }

    let start_word = match &args.start {
        Some(text) => {
            let w = Permutation::parse(text).map_err(|e| usage(e.to_string()))?;
            if w.n() != args.n {
                return Err(usage(format!(
                    "start permutation has {} entries, expected {}",
                    w.n(),
                    args.n
                )));
            }
            w
        }
        None => Permutation::longest(args.n),
    };
    let mut config = ChainConfig::new(args.n, args.q, args.seed, args.steps);
    config.start = StartState::Word(start_word.clone());
    config.retain_flags = args.retain_flags;

    let trajectories = run_chains(&config, args.chains)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;

    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for traj in &trajectories {
        for word in &traj.words {
            *counts.entry(word.one_line()).or_insert(0) += 1;
        }
    }
    let rows = histogram_rows(args.n, &counts);
    let histogram_path = output::write_histogram(&args.out, args.format, &rows)?;
    if args.retain_flags {
        output::write_trajectories(&args.out, &trajectories)?;
    }

    let mut manifest = RunManifest::new("simulate", &args.out, args.format);
    manifest.n = Some(args.n);
    manifest.q = Some(args.q);
    manifest.seed = Some(args.seed);
    manifest.steps = Some(args.steps);
    manifest.start = Some(start_word.to_string());
    manifest.chains = Some(args.chains);
    manifest.retain_flags = Some(args.retain_flags);
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    output::write_manifest(&args.out, &manifest)?;

    let total: u64 = rows.iter().map(|(_, c)| *c).sum();
    println!(
        "wrote {} ({} rows, counts sum {})",
        histogram_path.display(),
        rows.len(),
        total
    );
    Ok(())
}

/// Small state spaces get the full lexicographic table, zeros included;
/// larger n would make that table enormous, so only visited words appear.
fn histogram_rows(n: usize, counts: &BTreeMap<Vec<usize>, u64>) -> Vec<(String, u64)> {
    const FULL_TABLE_LIMIT: usize = 7;
    if n <= FULL_TABLE_LIMIT {
        Permutation::all(n)
            .iter()
            .map(|w| {
                let count = counts.get(&w.one_line()).copied().unwrap_or(0);
                (w.to_string(), count)
            })
            .collect()
    } else {
        counts
            .iter()
            .map(|(line, count)| {
                let w = Permutation::from_one_line(line).expect("visited words are valid");
                (w.to_string(), *count)
            })
            .collect()
    }
}

fn cmd_exact(args: ExactArgs) -> Result<bool> {
    let started = Instant::now();
    if args.n == 0 {
        return Err(usage("n must be at least 1"));
    }
    let field = checked_field(args.q)?;
    if args.check && args.n != 3 {
        return Err(usage("--check compares against the stored n = 3 closed form; pass --n 3"));
    }
    if args.spectrum && args.n != 3 {
        return Err(usage("--spectrum applies to the n = 3 lumped kernel; pass --n 3"));
    }

    let kernel = exact_transition(field, args.n)?;
    let lumped = kernel.lump()?;

    if args.check {
        match Gl3Fixture::load().check(&lumped) {
            Ok(()) => println!(
                "PASS: lumped kernel at q = {} matches the stored closed form",
                args.q
            ),
            Err(msg) => {
                println!("FAIL: {msg}");
                return Ok(false);
            }
        }
    }

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let kernel_path = args.out.join("kernel.json");
    output::write_json(&kernel_path, &MatrixJson::from_flag_kernel(&kernel, args.n))?;
    let lumped_path = args.out.join("lumped.json");
    output::write_json(&lumped_path, &MatrixJson::from_lumped_kernel(&lumped, args.n))?;

    println!("lumped kernel on {} words at q = {}:", lumped.len(), args.q);
    for (i, w) in lumped.words.iter().enumerate() {
        let entries: Vec<String> = lumped.matrix[i].iter().map(fraction_string).collect();
        println!("  {w}: {}", entries.join(" "));
    }

    let mut spectrum_ok = true;
    if args.spectrum {
        let report = spectrum_report(&lumped)?;
        let json = serde_json::json!({
            "q": report.q,
            "gap_eigenvalue": fraction_string(&report.gap_eigenvalue),
            "exact_checks_pass": report.exact_checks_pass(),
            "char_poly_ascending": report
                .char_coeffs
                .iter()
                .map(fraction_string)
                .collect::<Vec<_>>(),
            "cubic_factor_ascending": report
                .cubic
                .iter()
                .map(fraction_string)
                .collect::<Vec<_>>(),
            "eigenvalues": report.numeric_eigenvalues,
            "max_residual": report.max_residual,
        });
        output::write_json(&args.out.join("spectrum.json"), &json)?;
        spectrum_ok = report.exact_checks_pass();
        println!(
            "spectrum: gap eigenvalue {}; eigenvalues 1 and 0 {}",
            fraction_string(&report.gap_eigenvalue),
            if spectrum_ok { "verified" } else { "NOT verified" }
        );
    }

    let mut manifest = RunManifest::new("exact", &args.out, Format::Json);
    manifest.n = Some(args.n);
    manifest.q = Some(args.q);
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    output::write_manifest(&args.out, &manifest)?;

    println!("wrote {} and {}", kernel_path.display(), lumped_path.display());
    Ok(spectrum_ok)
}

fn cmd_green(args: GreenArgs) -> Result<()> {
    let shape = Partition::parse(&args.shape).map_err(|e| usage(e.to_string()))?;
    println!("{}", green_polynomial(&shape));
    Ok(())
}

fn cmd_rsk(args: RskArgs) -> Result<()> {
    let w = Permutation::parse(&args.word).map_err(|e| usage(e.to_string()))?;
    let (p, q) = rsk(&w);
    println!("P: {}", serde_json::to_string(p.rows())?);
    println!("Q: {}", serde_json::to_string(q.rows())?);
    println!("shape: {}", p.shape());
    Ok(())
}

fn cmd_estimate_cell(args: EstimateCellArgs) -> Result<()> {
    let w = Permutation::parse(&args.word).map_err(|e| usage(e.to_string()))?;
    checked_field(args.q)?;
    if args.samples == 0 {
        return Err(usage("samples must be at least 1"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let length = w.length();
    let exact: Option<u128> = (args.q as u128).checked_pow(length as u32);
    let exact_text = match exact {
        Some(v) => format!("exact q^{length} = {v}"),
        None => format!("exact q^{length}"),
    };
    match estimate_cell_size(&w, args.q, args.samples, &mut rng)? {
        CellEstimate::Estimate(x) => {
            println!("estimated cell size {x:.1} ({exact_text})");
        }
        CellEstimate::LowerBound(d) => {
            println!(
                "no collision in {} samples; saw {d} distinct flags ({exact_text})",
                args.samples
            );
        }
    }
    Ok(())
}

fn cmd_verify() -> Result<bool> {
    let results = acceptance::run_all();
    let mut passed = 0;
    for r in &results {
        println!("{}", r.line());
        if r.passed {
            passed += 1;
        }
    }
    println!("{passed}/{} criteria passed", results.len());
    Ok(passed == results.len())
}
