use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use covroc_core::io::OutputFormat;
use covroc_core::simulation::Scenario;
use covroc_core::testing::BandwidthPolicy;
use covroc_core::{DistanceKind, KernelSpec};

#[derive(Debug, Parser)]
#[command(name = "covroc", version, about = "Pooled, covariate-adjusted and conditional ROC curves, and a bootstrap test of ROC = AROC")]
pub struct Cli {
    /// Worker threads for bootstrap and Monte Carlo loops (results do not depend on it).
    #[arg(long, global = true, env = "COVROC_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test H0: AROC = ROC on a CSV dataset.
    Test(TestArgs),
    /// Estimate pooled, adjusted and conditional ROC curves with their areas.
    Curves(CurvesArgs),
    /// Monte Carlo level/power study on the built-in scenarios.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kernel {
    Gaussian,
    Epanechnikov,
}

impl From<Kernel> for KernelSpec {
    fn from(k: Kernel) -> Self {
        match k {
            Kernel::Gaussian => KernelSpec::Gaussian,
            Kernel::Epanechnikov => KernelSpec::Epanechnikov,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long, default_value = "status")]
    pub status_col: String,
    #[arg(long)]
    pub marker_col: String,
    #[arg(long)]
    pub covariate_col: String,
    /// Use -marker, for markers where lower values indicate disease.
    #[arg(long)]
    pub negate_marker: bool,
    /// Status value of the diseased population.
    #[arg(long, default_value = "1")]
    pub positive_label: String,
    /// Status value of the healthy population.
    #[arg(long, default_value = "0")]
    pub negative_label: String,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fraction of each population used for the pooled ROC.
    #[arg(long, default_value = "0.5", value_parser = parse_fraction)]
    pub rho: f64,
    /// Bootstrap iterations.
    #[arg(long = "B", visible_alias = "bootstrap", default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub bootstrap: u64,
    #[arg(long, value_delimiter = ',', default_value = "L1,L2,KS", value_parser = parse_distance)]
    pub distances: Vec<DistanceKind>,
    /// Number of grid points in (0, 1).
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(10..))]
    pub grid: u64,
    /// auto | auto-reselect | fixed:<g_F>,<g_G>
    #[arg(long, default_value = "auto", value_parser = parse_bandwidth)]
    pub bandwidth: BandwidthPolicy,
    #[arg(long, value_enum, default_value_t = Kernel::Gaussian)]
    pub kernel: Kernel,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Covariate values for conditional curves (default: 10/25/50/75/90th percentiles).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub at_covariate: Option<Vec<f64>>,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(10..))]
    pub grid: u64,
    /// auto | fixed:<g_F>,<g_G>
    #[arg(long, default_value = "auto", value_parser = parse_bandwidth)]
    pub bandwidth: BandwidthPolicy,
    #[arg(long, value_enum, default_value_t = Kernel::Gaussian)]
    pub kernel: Kernel,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_scenario)]
    pub scenario: Vec<Scenario>,
    /// Sample sizes as n_F,n_G; repeat for several pairs.
    #[arg(long, value_parser = parse_sizes, default_value = "100,100")]
    pub sizes: Vec<(usize, usize)>,
    #[arg(long, value_delimiter = ',', default_value = "1/2", value_parser = parse_fraction)]
    pub rho_list: Vec<f64>,
    /// Simulated datasets per cell.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub ns: u64,
    /// Run the full-size study (n_s = 1000); overrides --ns.
    #[arg(long)]
    pub full: bool,
    #[arg(long = "B", visible_alias = "bootstrap", default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub bootstrap: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.025,0.05,0.1")]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "L1,L2,KS", value_parser = parse_distance)]
    pub distances: Vec<DistanceKind>,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(10..))]
    pub grid: u64,
    /// auto | auto-reselect | fixed:<g_F>,<g_G>
    #[arg(long, default_value = "auto", value_parser = parse_bandwidth)]
    pub bandwidth: BandwidthPolicy,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single ASCII character, got '{s}'")),
    }
}

/// Decimal or a/b.
pub fn parse_fraction(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad fraction '{s}'"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad fraction '{s}'"))?;
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("bad number '{s}'"))?,
    };
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{s} is outside (0, 1)"))
    }
}

fn parse_distance(s: &str) -> Result<DistanceKind, String> {
    s.parse().map_err(|e: covroc_core::Error| e.to_string())
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: covroc_core::Error| e.to_string())
}

pub fn parse_bandwidth(s: &str) -> Result<BandwidthPolicy, String> {
    match s {
        "auto" => Ok(BandwidthPolicy::Auto {
            reselect_in_bootstrap: false,
        }),
        "auto-reselect" => Ok(BandwidthPolicy::Auto {
            reselect_in_bootstrap: true,
        }),
        _ => {
            let rest = s
                .strip_prefix("fixed:")
                .ok_or_else(|| format!("expected auto, auto-reselect or fixed:<g_F>,<g_G>, got '{s}'"))?;
            let (f, g) = rest
                .split_once(',')
                .ok_or_else(|| format!("fixed bandwidth needs two values, got '{rest}'"))?;
            let parse = |v: &str| -> Result<f64, String> {
                match v.trim().parse::<f64>() {
                    Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
                    _ => Err(format!("bandwidth '{v}' must be a positive number")),
                }
            };
            Ok(BandwidthPolicy::Fixed {
                diseased: parse(f)?,
                healthy: parse(g)?,
            })
        }
    }
}

fn parse_sizes(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .or_else(|| s.split_once('x'))
        .ok_or_else(|| format!("sizes must look like n_F,n_G, got '{s}'"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("bad sample size '{v}'"));
    Ok((parse(a)?, parse(b)?))
}
