use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pt_horizon::topology::{Axis, FactorSet, Mode};
use pt_horizon::Factor;

#[derive(Debug, Parser)]
#[command(name = "pt-horizon", version, about = "Reality domain of the four-site PT-symmetric chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminants, energies and domain verdict at one point.
    Classify(ClassifyArgs),
    /// Sample a 2-D slice to CSV, optionally rendering SVG.
    Slice(SliceArgs),
    /// Component report of a slice, or of the 3-D box with `--box`.
    Components(ComponentsArgs),
    /// Slices over a list of b values plus `summary.json`.
    Sweep(SweepArgs),
    /// Run the identity suite.
    Verify(VerifyArgs),
    /// Closed-form and numerical spectrum side by side.
    Spectrum(SpectrumArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[default]
    Strict,
    Real,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::StrictSimple,
            ModeArg::Real => Mode::RealOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fix {
    pub axis: Axis,
    pub value: f64,
}

impl FromStr for Fix {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (axis, value) = s.split_once('=').context("expected axis=value, e.g. b=0.1")?;
        let value: f64 = value.trim().parse().with_context(|| format!("bad number {value:?}"))?;
        if !value.is_finite() {
            bail!("fixed value must be finite");
        }
        Ok(Self {
            axis: axis.parse()?,
            value,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
}

impl FromStr for RangeSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (axis, rest) = s.split_once('=').context("expected axis=min:max, e.g. a=-3:3")?;
        let (lo, hi) = rest.split_once(':').context("expected min:max")?;
        let min: f64 = lo.trim().parse().with_context(|| format!("bad number {lo:?}"))?;
        let max: f64 = hi.trim().parse().with_context(|| format!("bad number {hi:?}"))?;
        if !(min.is_finite() && max.is_finite() && min < max) {
            bail!("range {s:?} must satisfy finite min < max");
        }
        Ok(Self {
            axis: axis.parse()?,
            min,
            max,
        })
    }
}

fn parse_factors(s: &str) -> anyhow::Result<FactorSet> {
    let mut set = FactorSet { w: false, q: false, p: false };
    for part in s.split(',') {
        match part.parse::<Factor>()? {
            Factor::W => set.w = true,
            Factor::Q => set.q = true,
            Factor::P => set.p = true,
        }
    }
    Ok(set)
}

fn parse_eta(s: &str) -> anyhow::Result<f64> {
    let eta: f64 = s.parse().with_context(|| format!("bad number {s:?}"))?;
    if !eta.is_finite() || eta < 0.0 {
        bail!("eta must be finite and >= 0");
    }
    Ok(eta)
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// Margin: a discriminant must exceed eta.
    #[arg(long, default_value_t = 0.0, value_parser = parse_eta)]
    pub eta: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    /// Discriminants taking part in membership, e.g. `W,Q` or `P`.
    #[arg(long, value_parser = parse_factors)]
    pub factors: Option<FactorSet>,
}

impl DomainArgs {
    pub fn factor_set(&self) -> FactorSet {
        self.factors.unwrap_or(FactorSet::ALL)
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 0.0, value_parser = parse_eta)]
    pub eta: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Fixed coordinate, e.g. `b=0.1`.
    #[arg(long)]
    pub fix: Option<Fix>,
    /// Window along a free axis, e.g. `a=-3:3`. Repeatable.
    #[arg(long = "range", allow_hyphen_values = true)]
    pub ranges: Vec<RangeSpec>,
    /// Samples per axis.
    #[arg(long)]
    pub res: Option<usize>,
    #[command(flatten)]
    pub domain: DomainArgs,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render an SVG here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComponentsArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Label the 3-D box instead of a slice.
    #[arg(long = "box")]
    pub boxed: bool,
    /// JSON destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated b values; defaults to ten values from near the top of the domain down to 0.1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Vec<f64>,
    #[arg(long, default_value_t = 800)]
    pub res: usize,
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Directory for the per-slice CSV/SVG files and summary.json.
    #[arg(long, default_value = "sweep")]
    pub out_dir: PathBuf,
    /// Skip SVG rendering.
    #[arg(long)]
    pub no_svg: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = pt_horizon::identities::VERIFY_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// JSON destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
