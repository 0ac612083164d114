use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use exspline::approx::NaiveAnchors;
use exspline::studies::{golden_checks, run_study, weights_demo, write_csv, Check, StudyConfig, StudyKind};

mod file_config;

use file_config::FileConfig;

/// Interpolation studies with extended B-spline bases on trimmed domains.
#[derive(Parser, Debug)]
#[command(name = "exspline", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Untrimmed 1D and 2D interpolation, d_k = 4.
    Table1(StudyArgs),
    /// Sweep of the 1D trim [-1, t) for both methods.
    Study1d(StudyArgs),
    /// Sweep of the tensor trim [-1, t)^2 for both methods.
    Study2d(StudyArgs),
    /// Sweep of the variable knot u_hat on [-1, 1.625].
    Nonuniform(StudyArgs),
    /// Extrapolation weights of the worked example by every route.
    WeightsDemo {
        /// Compare the weights with the known values and exit non-zero on
        /// mismatch.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AnchorRule {
    TruncatedGreville,
    ClampToBoundary,
}

impl From<AnchorRule> for NaiveAnchors {
    fn from(r: AnchorRule) -> Self {
        match r {
            AnchorRule::TruncatedGreville => NaiveAnchors::TruncatedGreville,
            AnchorRule::ClampToBoundary => NaiveAnchors::ClampToBoundary,
        }
    }
}

#[derive(Args, Debug, Default)]
struct StudyArgs {
    /// TOML file with study parameters; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spline degrees (repeat or separate by commas).
    #[arg(long = "degree", value_delimiter = ',')]
    degrees: Vec<usize>,
    /// Knot insertion depth: 2^d_k spans on [-1, 1].
    #[arg(long)]
    dk: Option<u32>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_samples: Option<usize>,
    /// Trimming parameters of the non-uniform study.
    #[arg(long = "trim", value_delimiter = ',')]
    trims: Vec<f64>,
    #[arg(long)]
    u_hat_min: Option<f64>,
    #[arg(long)]
    u_hat_max: Option<f64>,
    #[arg(long)]
    u_hat_samples: Option<usize>,
    /// Also run the non-uniform study on adaptively refined knot vectors.
    #[arg(long)]
    adaptive: bool,
    /// Span length ratio above which adaptive refinement bisects.
    #[arg(long)]
    ratio: Option<f64>,
    /// Anchor placement of the naive baseline.
    #[arg(long, value_enum)]
    naive_anchors: Option<AnchorRule>,
    /// CSV output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compare against reference values and exit non-zero on failure.
    #[arg(long)]
    check: bool,
}

impl StudyArgs {
    fn resolve(&self, kind: StudyKind) -> Result<StudyConfig> {
        let mut cfg = StudyConfig::new(kind);
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file: FileConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            file.apply(&mut cfg)?;
        }
        if !self.degrees.is_empty() {
            cfg.degrees = self.degrees.clone();
        }
        if !self.trims.is_empty() {
            cfg.trims = self.trims.clone();
        }
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(dk, t_min, t_max, t_samples, u_hat_min, u_hat_max, u_hat_samples, ratio);
        if let Some(r) = self.naive_anchors {
            cfg.naive_anchors = r.into();
        }
        cfg.adaptive |= self.adaptive;
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(checks: &[Check]) -> bool {
    for c in checks {
        eprintln!("{c}");
    }
    checks.iter().all(|c| c.passed)
}

fn run_csv_study(kind: StudyKind, args: &StudyArgs) -> Result<bool> {
    let cfg = args.resolve(kind)?;
    let rows = run_study(&cfg)?;
    match &cfg.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&rows, f)?;
        }
        None => write_csv(&rows, io::stdout().lock())?,
    }
    Ok(!args.check || report(&golden_checks(kind, &rows)))
}

fn run_weights_demo(check: bool) -> Result<bool> {
    let demo = weights_demo()?;
    write!(io::stdout().lock(), "{demo}")?;
    if !check {
        return Ok(true);
    }
    let expected = [2.0, -1.5, 0.5];
    let checks: Vec<Check> = [("direct", &demo.direct), ("indirect", &demo.indirect), ("interpolation", &demo.interpolation)]
        .into_iter()
        .map(|(name, w)| {
            let dev = w.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Check { name: format!("{name} weights"), passed: dev <= 1e-12, detail: format!("max deviation {dev:.1e}") }
        })
        .collect();
    Ok(report(&checks))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Table1(a) => run_csv_study(StudyKind::Table1, a),
        Command::Study1d(a) => run_csv_study(StudyKind::Study1d, a),
        Command::Study2d(a) => run_csv_study(StudyKind::Study2d, a),
        Command::Nonuniform(a) => run_csv_study(StudyKind::Nonuniform, a),
        Command::WeightsDemo { check } => run_weights_demo(*check),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
