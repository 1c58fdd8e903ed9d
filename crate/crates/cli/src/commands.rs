use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use covroc_core::curves::{curves_to_csv, estimate_curves, CurveRequest};
use covroc_core::io::{read_csv, records_to_csv, result_to_csv, result_to_json, versioned_json, write_atomic, CsvOptions, OutputFormat};
use covroc_core::simulation::{run_monte_carlo_with, MonteCarloPlan};
use covroc_core::testing::{run_test, BandwidthPolicy, Bandwidths, SplitConfig, TestConfig};
use covroc_core::StudyDataset;

use crate::args::{CurvesArgs, InputArgs, SimulateArgs, TestArgs};

const FULL_REPLICATIONS: usize = 1000;

/// Written next to every result. Re-running the recorded configuration on
/// the same input reproduces the result bit for bit.
#[derive(Serialize)]
struct RunManifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    input: Option<InputDigest>,
    config: &'a C,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
    options: CsvOptions,
    diseased_rows: usize,
    healthy_rows: usize,
    dropped_rows: usize,
}

fn csv_options(input: &InputArgs) -> CsvOptions {
    let mut opts = CsvOptions::new(&input.status_col, &input.marker_col, &input.covariate_col);
    opts.negate_marker = input.negate_marker;
    opts.positive_label = input.positive_label.clone();
    opts.negative_label = input.negative_label.clone();
    opts.delimiter = input.delimiter;
    opts
}

fn load(input: &InputArgs) -> Result<(StudyDataset, InputDigest)> {
    let bytes = fs::read(&input.csv).with_context(|| format!("reading {}", input.csv.display()))?;
    let opts = csv_options(input);
    let data = read_csv(&input.csv, &opts)?;
    if data.metadata.dropped_rows > 0 {
        eprintln!(
            "warning: dropped {} row(s) with missing values in the used columns",
            data.metadata.dropped_rows
        );
    }
    let digest = InputDigest {
        path: input.csv.display().to_string(),
        sha256: format!("{:x}", Sha256::digest(&bytes)),
        diseased_rows: data.diseased.len(),
        healthy_rows: data.healthy.len(),
        dropped_rows: data.metadata.dropped_rows,
        options: opts,
    };
    Ok((data, digest))
}

/// Everything is rendered in memory first, so a failure leaves no files.
fn emit<C: Serialize>(
    out: &Path,
    command: &'static str,
    seed: u64,
    input: Option<InputDigest>,
    config: &C,
    files: Vec<(String, String)>,
) -> Result<()> {
    let manifest = RunManifest {
        tool: "covroc",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        input,
        config,
        outputs: files.iter().map(|(name, _)| name.clone()).collect(),
    };
    let manifest = versioned_json(&manifest)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for (name, text) in &files {
        write_atomic(&out.join(name), text.as_bytes())?;
    }
    write_atomic(&out.join("manifest.json"), manifest.as_bytes())?;
    Ok(())
}

fn file_name(stem: &str, format: OutputFormat) -> String {
    format!("{stem}.{}", format.extension())
}

pub fn test(a: TestArgs) -> Result<()> {
    let (data, digest) = load(&a.input)?;
    let cfg = TestConfig {
        bootstrap_iterations: a.bootstrap as usize,
        split: SplitConfig::new(a.rho, a.seed)?,
        distances: a.distances.clone(),
        grid_size: a.grid as usize,
        kernel: a.kernel.into(),
        bandwidth: a.bandwidth,
        seed: a.seed,
        parallel: true,
    };
    let result = run_test(&data, &cfg).context("running the test")?;

    println!(
        "n_F = {}, n_G = {}, rho = {}, B = {}",
        data.diseased.len(),
        data.healthy.len(),
        a.rho,
        cfg.bootstrap_iterations
    );
    println!(
        "bandwidths: diseased {:.6}, healthy {:.6}",
        result.bandwidths.diseased, result.bandwidths.healthy
    );
    println!("AUC = {:.4}, AAUC = {:.4}", result.auc, result.aauc);
    for (kind, s) in &result.statistics {
        println!("{kind}: statistic = {s:.6}, p-value = {}", result.p_values[kind]);
    }

    let format: OutputFormat = a.format.into();
    let body = match format {
        OutputFormat::Json => result_to_json(&result)?,
        OutputFormat::Csv => result_to_csv(&result),
    };
    emit(&a.out, "test", a.seed, Some(digest), &cfg, vec![(file_name("result", format), body)])
}

pub fn curves(a: CurvesArgs) -> Result<()> {
    let (data, digest) = load(&a.input)?;
    let bandwidths = match a.bandwidth {
        BandwidthPolicy::Fixed { diseased, healthy } => Some(Bandwidths { diseased, healthy }),
        BandwidthPolicy::Auto {
            reselect_in_bootstrap: true,
        } => bail!("auto-reselect only applies to the bootstrap test; use auto or fixed:<g_F>,<g_G>"),
        BandwidthPolicy::Auto { .. } => None,
    };
    let req = CurveRequest {
        grid_size: a.grid as usize,
        kernel: a.kernel.into(),
        bandwidths,
        at: a.at_covariate.clone(),
    };
    let summary = estimate_curves(&data, &req).context("estimating curves")?;
    println!("AUC = {:.4}, AAUC = {:.4}", summary.auc, summary.aauc);
    for c in &summary.conditional {
        if !c.within_observed_range {
            eprintln!(
                "warning: covariate {} lies outside the observed range; the conditional curve is extrapolated",
                c.covariate
            );
        }
        println!("AUC^x at {} = {:.4}", c.covariate, c.auc);
    }
    let format: OutputFormat = a.format.into();
    let body = match format {
        OutputFormat::Json => versioned_json(&summary)?,
        OutputFormat::Csv => curves_to_csv(&summary),
    };
    emit(&a.out, "curves", 0, Some(digest), &req, vec![(file_name("curves", format), body)])
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let replications = if a.full { FULL_REPLICATIONS } else { a.ns as usize };
    if a.alphas.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        bail!("alphas must lie in (0, 1)");
    }
    let mut template = TestConfig::new(a.seed);
    template.bootstrap_iterations = a.bootstrap as usize;
    template.distances = a.distances.clone();
    template.grid_size = a.grid as usize;
    template.bandwidth = a.bandwidth;

    let plans: Vec<MonteCarloPlan> = a
        .scenario
        .iter()
        .map(|&scenario| MonteCarloPlan {
            scenario,
            sample_sizes: a.sizes.clone(),
            rhos: a.rho_list.clone(),
            replications,
            alphas: a.alphas.clone(),
            test: template.clone(),
            seed: a.seed,
        })
        .collect();
    for plan in &plans {
        plan.validate()?;
    }

    let mut rows = Vec::new();
    let mut tables = Vec::new();
    for plan in &plans {
        let table = run_monte_carlo_with(plan, |cell| {
            eprintln!("finished {} ({} datasets)", cell.key, replications);
        })?;
        for row in &table.rows {
            println!(
                "{} ({},{}) rho={:.4} {} alpha={}: {:.3} [{:.3}, {:.3}]",
                row.scenario, row.n_diseased, row.n_healthy, row.rho, row.distance, row.alpha, row.proportion, row.lower, row.upper
            );
        }
        rows.extend(table.rows.iter().cloned());
        tables.push(table);
    }

    let format: OutputFormat = a.format.into();
    let body = match format {
        OutputFormat::Json => versioned_json(&serde_json::json!({ "tables": tables }))?,
        OutputFormat::Csv => records_to_csv(&rows)?,
    };
    emit(
        &a.out,
        "simulate",
        a.seed,
        None,
        &plans,
        vec![(file_name("rejection_table", format), body)],
    )
}

