//! `shearcst` — command-line front end for the shearcst library.
//!
//! Exit codes: 0 when the requested work succeeded (and, for `verify`,
//! every check passed); 1 when `verify` ran to completion but at least one
//! check failed; 2 for configuration, usage, or computation errors.

use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};

use shearcst::cst::{cst_slice, make_fiducial, FiducialSpec};
use shearcst::dynamics::{
    cayley_map, evolve_shear_slice, jump_times, squeeze_bounds, squeeze_geometry, HeatSeed,
};
use shearcst::spectrum::{eigenstate, eigenvalue};
use shearcst::verify::{run_all, run_named, Report, VerifyConfig, SUITE_NAMES};
use shearcst::{Error as LibError, UniformGrid, C64};

use shearcst_cli::config::{self, Overrides};
use shearcst_cli::emit::{self, CayleySample, Format, GeometryDoc};

/// Largest per-axis sample count the emit commands accept.
const MAX_GRID_COUNT: usize = 256;

#[derive(Parser)]
#[command(
    name = "shearcst",
    version,
    about = "Coherent-state transforms, verification suites, and oscillator dynamics \
             on a step-3 shear group",
    after_help = "Configuration layering: defaults, then --config file (key = value), \
                  then SHEARCST_* environment variables, then flags."
)]
struct Cli {
    /// `key = value` configuration file (keys: seed, squeeze, seed_radius,
    /// hbar4, h2, m, omega).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(flatten)]
    flags: Flags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Flags {
    /// Seed for the deterministic verification datasets.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Squeeze parameter E of the Gaussian frame.
    #[arg(long, global = true, allow_negative_numbers = true)]
    squeeze: Option<f64>,

    /// Radius of the seed family whose admissible squeeze window `verify`
    /// enforces.
    #[arg(long, global = true)]
    seed_radius: Option<f64>,

    /// Central-direction constant ħ₄ (> 0).
    #[arg(long, global = true)]
    hbar4: Option<f64>,

    /// Shear-direction constant h₂.
    #[arg(long, global = true, allow_negative_numbers = true)]
    h2: Option<f64>,

    /// Oscillator mass m (> 0).
    #[arg(long, global = true)]
    m: Option<f64>,

    /// Oscillator angular frequency ω (> 0).
    #[arg(long, global = true)]
    omega: Option<f64>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            squeeze: self.squeeze,
            seed_radius: self.seed_radius,
            hbar4: self.hbar4,
            h2: self.h2,
            m: self.m,
            omega: self.omega,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites; print one line per check.
    Verify(VerifyArgs),
    /// Transform a Gaussian fiducial pair and write the image slice.
    Cst(CstArgs),
    /// Evolve a seed in the squeeze frame and write the resulting slice.
    Evolve(EvolveArgs),
    /// Print oscillator eigenvalues; optionally write an eigenstate slice.
    Spectrum(SpectrumArgs),
    /// Summarize the Cayley-disk geometry of the configured squeeze.
    Geometry(GeometryArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite instead of all of them.
    #[arg(long, value_parser = PossibleValuesParser::new(SUITE_NAMES))]
    suite: Option<String>,

    /// Write the full reports to this file as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Print only the summary line.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct GridArgs {
    /// Grid step shared by the x₁ and x₃ axes.
    #[arg(long, default_value_t = 0.125)]
    step: f64,

    /// Samples per axis (2 ..= 256).
    #[arg(long, default_value_t = 64)]
    count: usize,
}

impl GridArgs {
    fn build(&self) -> Result<UniformGrid> {
        if self.count > MAX_GRID_COUNT {
            anyhow::bail!("--count {} exceeds the supported maximum {MAX_GRID_COUNT}", self.count);
        }
        Ok(UniformGrid::centered(self.step, self.count)?)
    }
}

#[derive(Args)]
struct CstArgs {
    /// Width parameter q of the Gaussian fiducial being transformed
    /// (the analysis window width is the configured squeeze).
    #[arg(long, default_value_t = 1.0)]
    fiducial: f64,

    /// Section coordinate x₂ of the emitted slice.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x2: f64,

    #[command(flatten)]
    grid: GridArgs,

    /// Output file.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,

    /// Output format (default: inferred from the extension).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum SeedKind {
    /// Constant seed.
    Unit,
    /// Polynomial seed with the `--coeffs` coefficients.
    Polynomial,
    /// Gaussian seed e^{−αz²} with the `--alpha` width.
    Gaussian,
}

#[derive(Args)]
struct EvolveArgs {
    /// Seed family to evolve.
    #[arg(long, value_enum, default_value = "gaussian")]
    seed_kind: SeedKind,

    /// Gaussian width α as `re,im`.
    #[arg(long, default_value = "0.5,0.2", allow_hyphen_values = true)]
    alpha: String,

    /// Polynomial coefficients, low degree first, as `re,im;re,im;…`.
    #[arg(long, default_value = "1,0;0,0.5;0.25,0", allow_hyphen_values = true)]
    coeffs: String,

    /// Evolution time t.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    time: f64,

    /// Section coordinate x₂ of the evolved slice.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x2: f64,

    #[command(flatten)]
    grid: GridArgs,

    /// Output file.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,

    /// Output format (default: inferred from the extension).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Highest degree j to report.
    #[arg(long, default_value_t = 8)]
    degree: usize,

    /// Section coordinate x₂ of the emitted eigenstate.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x2: f64,

    #[command(flatten)]
    grid: GridArgs,

    /// Write the degree-`--degree` eigenstate slice to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format (default: inferred from the extension).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct GeometryArgs {
    /// Half-width of the sampled x₂ range on the Cayley circle.
    #[arg(long, default_value_t = 4.0)]
    x2_span: f64,

    /// Number of circle samples.
    #[arg(long, default_value_t = 33)]
    samples: usize,

    /// Section coordinate at which the jump times are evaluated.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x2: f64,

    /// Write the JSON document to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = config::resolve(cli.config.as_deref(), &cli.flags.overrides())?;
    match &cli.command {
        Command::Verify(args) => cmd_verify(&cfg, args),
        Command::Cst(args) => cmd_cst(&cfg, args).map(|()| true),
        Command::Evolve(args) => cmd_evolve(&cfg, args).map(|()| true),
        Command::Spectrum(args) => cmd_spectrum(&cfg, args).map(|()| true),
        Command::Geometry(args) => cmd_geometry(&cfg, args).map(|()| true),
    }
}

fn cmd_verify(cfg: &VerifyConfig, args: &VerifyArgs) -> Result<bool> {
    let reports: Vec<Report> = match &args.suite {
        Some(name) => vec![run_named(name, cfg)?],
        None => run_all(cfg),
    };
    for report in &reports {
        for check in &report.checks {
            if !args.quiet || !check.pass {
                println!(
                    "[{}] {}: {:.3e} <= {:.0e}  {}",
                    report.suite,
                    check.name,
                    check.residual,
                    check.tolerance,
                    if check.pass { "PASS" } else { "FAIL" }
                );
                if let Some(detail) = &check.detail {
                    println!("    {detail}");
                }
            }
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failed: usize =
        reports.iter().flat_map(|r| &r.checks).filter(|c| !c.pass).count();
    println!(
        "verify: {} ({} suites, {} checks, {} failed, seed {})",
        if passed { "PASS" } else { "FAIL" },
        reports.len(),
        checks,
        failed,
        cfg.seed
    );
    if let Some(path) = &args.json {
        let file = File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        serde_json::to_writer_pretty(file, &reports)?;
    }
    Ok(passed)
}

fn cmd_cst(cfg: &VerifyConfig, args: &CstArgs) -> Result<()> {
    let p = &cfg.params;
    let grid = args.grid.build()?;
    let f = make_fiducial(&FiducialSpec::gaussian(args.fiducial), grid, p)?;
    let phi = make_fiducial(&FiducialSpec::gaussian(cfg.squeeze), grid, p)?;
    let slice = cst_slice(&f, &phi, args.x2, p)?;
    let format = args.format.unwrap_or_else(|| Format::infer(&args.out));
    emit::save_slice(&args.out, format, &slice)?;
    println!(
        "wrote {}x{} transform slice at x2 = {} (fiducial q = {}, squeeze E = {}) to {}",
        grid.count,
        grid.count,
        args.x2,
        args.fiducial,
        cfg.squeeze,
        args.out.display()
    );
    Ok(())
}

fn parse_pair(s: &str) -> Result<C64> {
    let (re, im) = s
        .split_once(',')
        .with_context(|| format!("expected `re,im`, got {s:?}"))?;
    Ok(C64::new(
        re.trim().parse().with_context(|| format!("bad real part in {s:?}"))?,
        im.trim().parse().with_context(|| format!("bad imaginary part in {s:?}"))?,
    ))
}

fn parse_coeffs(s: &str) -> Result<Vec<C64>> {
    s.split(';').map(parse_pair).collect()
}

fn cmd_evolve(cfg: &VerifyConfig, args: &EvolveArgs) -> Result<()> {
    let seed = match args.seed_kind {
        SeedKind::Unit => HeatSeed::Unit,
        SeedKind::Polynomial => HeatSeed::Polynomial(parse_coeffs(&args.coeffs)?),
        SeedKind::Gaussian => HeatSeed::Gaussian { alpha: parse_pair(&args.alpha)? },
    };
    let grid = args.grid.build()?;
    let slice =
        evolve_shear_slice(&seed, cfg.squeeze, args.time, grid, grid, args.x2, &cfg.params)?;
    let format = args.format.unwrap_or_else(|| Format::infer(&args.out));
    emit::save_slice(&args.out, format, &slice)?;
    println!(
        "wrote {}x{} evolved slice at x2 = {}, t = {} (squeeze E = {}) to {}",
        grid.count,
        grid.count,
        args.x2,
        args.time,
        cfg.squeeze,
        args.out.display()
    );
    Ok(())
}

fn cmd_spectrum(cfg: &VerifyConfig, args: &SpectrumArgs) -> Result<()> {
    let p = &cfg.params;
    for j in 0..=args.degree {
        println!("{j}\t{}", eigenvalue(j, p));
    }
    if let Some(out) = &args.out {
        let grid = args.grid.build()?;
        let slice = eigenstate(args.degree, cfg.squeeze, &grid, &grid, args.x2, p)?;
        let format = args.format.unwrap_or_else(|| Format::infer(out));
        emit::save_slice(out, format, &slice)?;
        println!(
            "wrote degree-{} eigenstate at x2 = {} (squeeze E = {}) to {}",
            args.degree,
            args.x2,
            cfg.squeeze,
            out.display()
        );
    }
    Ok(())
}

fn cmd_geometry(cfg: &VerifyConfig, args: &GeometryArgs) -> Result<()> {
    let p = &cfg.params;
    let geo = squeeze_geometry(cfg.squeeze, p);
    let window = squeeze_bounds(cfg.seed_radius, p)?;
    let jumps = match jump_times(args.x2, cfg.squeeze, p.omega, p) {
        Ok(ts) => Some(ts),
        Err(LibError::CenterPoint) => None,
        Err(e) => return Err(e.into()),
    };
    let n = args.samples.max(2);
    let circle = (0..n)
        .map(|k| {
            let x2 = -args.x2_span + 2.0 * args.x2_span * k as f64 / (n - 1) as f64;
            let u = cayley_map(x2, cfg.squeeze, p);
            CayleySample { x2, re: u.re, im: u.im }
        })
        .collect();
    let doc = GeometryDoc {
        squeeze: cfg.squeeze,
        center: geo.center,
        radius: geo.radius,
        contraction: geo.contraction,
        window,
        jump_times: jumps,
        circle,
    };
    let text = serde_json::to_string_pretty(&doc)?;
    match &args.out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}
