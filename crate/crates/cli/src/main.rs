//! `epd`: phantom generation, forward simulation, reconstruction,
//! verification suites and report emission for spherical means on annuli.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config or usage error,
//! 3 geometry error, 4 reconstruction failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use epd_core::field::parse_phantom;
use epd_core::harmonics::decompose;
use epd_core::io::{format_f64, read_text, write_text};
use epd_core::reconstruct::{reconstruct_field, Reconstruction};
use epd_core::transform::generate_dataset;
use epd_core::verify::{format_table, rows_to_csv, run_suite, Suite, VerifyOptions};
use epd_core::{
    AngularSampleSet, Error, ModeIndex, PriorSide, RadialProfile, RunConfig, ScalarField,
    SphericalMeanDataset,
};

#[derive(Parser)]
#[command(
    name = "epd",
    version,
    about = "Spherical means on annuli via Darboux mode decomposition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the configured phantom's radial profiles.
    Phantom(Common),
    /// Simulate spherical-mean data of the configured phantom.
    Forward {
        #[command(flatten)]
        common: Common,
        /// Standard deviation of additive Gaussian noise; overrides the config.
        #[arg(long)]
        noise_sigma: Option<f64>,
        /// Noise seed; overrides the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recover the field on the annulus from a dataset and a prior.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Dataset CSV written by `forward`.
        #[arg(long)]
        dataset: PathBuf,
        /// File holding the prior's phantom description; defaults to the
        /// config phantom.
        #[arg(long)]
        prior: Option<PathBuf>,
    },
    /// Run a verification suite and print its pass/fail table.
    Verify {
        /// One of intertwine, trace, kernel, k-integral, energy, curved,
        /// epd-convergence.
        #[arg(long)]
        suite: String,
        /// Also write the table as CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scale the first factor of Q_m by 1 + delta (negative control).
        #[arg(long, hide = true)]
        corrupt_q: Option<f64>,
    },
    /// Forward run plus reconstruction from the phantom itself on every
    /// available prior side, written as two-column plot data.
    Report(Common),
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Geometry(_) => 3,
            Error::Reconstruction(_) | Error::Singular { .. } | Error::Instability { .. } => 4,
            Error::InvalidInput(_) | Error::Config(_) | Error::Parse { .. } | Error::Io { .. } => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Phantom(c) => cmd_phantom(&c),
        Command::Forward {
            common,
            noise_sigma,
            seed,
        } => cmd_forward(&common, noise_sigma, seed),
        Command::Reconstruct {
            common,
            dataset,
            prior,
        } => cmd_reconstruct(&common, &dataset, prior.as_deref()),
        Command::Verify {
            suite,
            out,
            corrupt_q,
        } => cmd_verify(&suite, out.as_deref(), corrupt_q),
        Command::Report(c) => cmd_report(&c),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("epd: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(common: &Common) -> std::result::Result<(RunConfig, PathBuf), Failure> {
    let config = RunConfig::read(&common.config)?;
    config.validate()?;
    let out = common
        .out
        .clone()
        .or_else(|| config.out_dir.clone())
        .ok_or_else(|| usage("no output directory: pass --out or set out_dir"))?;
    Ok((config, out))
}

fn truth(config: &RunConfig) -> std::result::Result<ScalarField, Failure> {
    config
        .phantom_field()?
        .ok_or_else(|| usage("config has no phantom"))
}

fn mode_stem(prefix: &str, mode: ModeIndex) -> String {
    format!("{prefix}_m{}_l{}", mode.degree(), mode.index())
}

/// `radial_points` uniform radii on `(0, R]`, `R` the outermost configured radius.
fn profile_radii(config: &RunConfig) -> Vec<f64> {
    let g = &config.geometry;
    let outer = g.r_ext().unwrap_or(g.outer());
    let k = config.radial_points;
    (1..=k).map(|i| outer * i as f64 / k as f64).collect()
}

fn decompose_on(
    config: &RunConfig,
    field: &ScalarField,
    radii: &[f64],
) -> std::result::Result<Vec<RadialProfile>, Failure> {
    let angular = AngularSampleSet::new(config.n, config.angular_points)?;
    Ok(decompose(field, radii, config.m_max, &angular)?)
}

fn cmd_phantom(common: &Common) -> CmdResult {
    let (config, out) = load(common)?;
    let field = truth(&config)?;
    let profiles = decompose_on(&config, &field, &profile_radii(&config))?;
    for p in &profiles {
        p.write_csv(&out.join(format!("{}.csv", mode_stem("phantom", p.mode))))?;
    }
    let mut meta = config.to_text();
    writeln!(meta, "modes = {}", profiles.len()).unwrap();
    write_text(&out.join("phantom.txt"), &meta)?;
    println!("wrote {} profiles to {}", profiles.len(), out.display());
    Ok(())
}

fn cmd_forward(common: &Common, noise_sigma: Option<f64>, seed: Option<u64>) -> CmdResult {
    let (mut config, out) = load(common)?;
    if let Some(s) = noise_sigma {
        if s.is_nan() || s < 0.0 {
            return Err(usage(format!("--noise-sigma must be >= 0, got {s}")));
        }
        config.noise_sigma = s;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    let field = truth(&config)?;
    let mut run = generate_dataset(
        &field,
        &config.geometry,
        &config.sampling()?,
        config.quad_order,
    )?;
    run.dataset.add_noise(config.noise_sigma, config.seed)?;
    run.dataset.write_csv(&out.join("dataset.csv"))?;
    println!("samples {}", run.dataset.len());
    println!("rejected {}", run.rejected);
    println!("max_abs_value {:.6e}", run.dataset.max_abs_value());
    Ok(())
}

/// Phantom description from a file: `#` comments dropped, lines joined as terms.
fn read_prior(path: &Path, n: usize) -> std::result::Result<ScalarField, Failure> {
    let text = read_text(path)?;
    let terms: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if terms.is_empty() {
        return Err(usage(format!(
            "{}: empty prior description",
            path.display()
        )));
    }
    Ok(parse_phantom(n, &terms.join("; "))?)
}

fn write_reconstruction(
    rec: &Reconstruction,
    config: &RunConfig,
    out: &Path,
    prefix: &str,
) -> std::result::Result<(), Failure> {
    for p in &rec.profiles {
        p.write_csv(&out.join(format!("{}.csv", mode_stem(prefix, p.mode))))?;
    }
    let (lo, hi) = config.trimmed_range();
    write_text(
        &out.join(format!("{prefix}_field.csv")),
        &rec.field_csv(lo, hi, 41, config.angular_points),
    )?;
    write_text(
        &out.join(format!("{prefix}_diagnostics.csv")),
        &rec.diagnostics_csv(),
    )?;
    for r in &rec.reports {
        if let Some(why) = &r.failure {
            eprintln!("mode {} not reconstructed: {why}", r.mode);
        }
    }
    Ok(())
}

fn cmd_reconstruct(common: &Common, dataset: &Path, prior: Option<&Path>) -> CmdResult {
    let (config, out) = load(common)?;
    let data = SphericalMeanDataset::read_csv(dataset)?;
    if data.geometry() != &config.geometry {
        return Err(usage(format!(
            "{}: dataset geometry differs from the config",
            dataset.display()
        )));
    }
    let prior = match prior {
        Some(p) => read_prior(p, config.n)?,
        None => config
            .phantom_field()?
            .ok_or_else(|| usage("no prior: pass --prior or set phantom"))?,
    };
    let rec = reconstruct_field(&data, &prior, &config)?;
    write_reconstruction(&rec, &config, &out, "recon")?;
    println!(
        "modes {} reconstructed, {} failed",
        rec.profiles.len(),
        rec.failed_modes().len()
    );
    if let Some(t) = config.phantom_field()? {
        let (lo, hi) = config.trimmed_range();
        println!("rel_l2 {:.6e}", rec.error_against(&t, lo, hi)?);
    }
    Ok(())
}

fn cmd_verify(suite: &str, out: Option<&Path>, corrupt_q: Option<f64>) -> CmdResult {
    let suite = Suite::parse(suite)?;
    let rows = run_suite(suite, &VerifyOptions { corrupt_q })?;
    print!("{}", format_table(&rows));
    if let Some(dir) = out {
        write_text(
            &dir.join(format!("verify_{suite}.csv")),
            &rows_to_csv(&rows),
        )?;
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Failure {
            code: 1,
            message: format!("suite {suite}: {failed} of {} checks failed", rows.len()),
        });
    }
    Ok(())
}

/// Whitespace-separated `r value` lines.
fn two_column(p: &RadialProfile) -> String {
    let mut s = String::new();
    for (r, v) in p.radii().iter().zip(p.values()) {
        writeln!(s, "{} {}", format_f64(*r), format_f64(*v)).unwrap();
    }
    s
}

fn cmd_report(common: &Common) -> CmdResult {
    let (config, out) = load(common)?;
    let field = truth(&config)?;
    let run = generate_dataset(
        &field,
        &config.geometry,
        &config.sampling()?,
        config.quad_order,
    )?;
    let mut sides = vec![PriorSide::Interior];
    if config.geometry.r_ext().is_some() {
        sides.push(PriorSide::Exterior);
    }
    let (lo, hi) = config.trimmed_range();
    let mut summary = String::new();
    writeln!(summary, "samples {}", run.dataset.len()).unwrap();
    writeln!(summary, "rejected {}", run.rejected).unwrap();
    let mut fields = Vec::new();
    for side in sides {
        let cfg = RunConfig {
            prior: side,
            ..config.clone()
        };
        let rec = reconstruct_field(&run.dataset, &field, &cfg)?;
        let radii: Vec<f64> = rec.profiles.first().map(|p| p.radii()).unwrap_or_default();
        let truths = decompose_on(&cfg, &field, &radii)?;
        for p in &rec.profiles {
            let stem = mode_stem(&side.to_string(), p.mode);
            write_text(&out.join(format!("{stem}.dat")), &two_column(p))?;
            if let Some(t) = truths.iter().find(|t| t.mode == p.mode) {
                write_text(
                    &out.join(format!("{}.dat", mode_stem("truth", p.mode))),
                    &two_column(t),
                )?;
            }
        }
        write_text(
            &out.join(format!("{side}_diagnostics.csv")),
            &rec.diagnostics_csv(),
        )?;
        let err = rec.error_against(&field, lo, hi)?;
        writeln!(summary, "{side} rel_l2 {err:.6e}").unwrap();
        writeln!(summary, "{side} failed_modes {}", rec.failed_modes().len()).unwrap();
        fields.push(rec.field());
    }
    if let [a, b] = fields.as_slice() {
        let order = if config.n == 2 { 64 } else { 32 };
        let agree = epd_core::reconstruct::relative_l2_error(b, a, lo, hi, order)?;
        writeln!(summary, "route_agreement {agree:.6e}").unwrap();
    }
    write_text(&out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}
