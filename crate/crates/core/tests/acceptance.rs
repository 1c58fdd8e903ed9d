//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to stderr
//! (bypassing the test harness capture) and then asserts.
//!
//! Run with `cargo test -p covroc-core --test acceptance --release`.

use std::io::Write;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use covroc_core::bandwidth::{select_bandwidth, BandwidthSearch};
use covroc_core::estimators::{
    aroc_estimate, auc, conditional_roc, default_variance_floor, nw_fit, pooled_roc, standardized_residuals,
};
use covroc_core::io::{result_from_json, result_to_json};
use covroc_core::simulation::{
    generate_scenario, run_cell, scenario_c_analytic_roc, tabulate, MonteCarloPlan, RejectionRow, Scenario,
};
use covroc_core::testing::curve_distance;
use covroc_core::{
    run_test, Curve, DistanceKind, Grid, KernelSpec, PairedSample, StudyDataset, TestConfig,
};

const SEED: u64 = 1;
const PROPERTY_CASES: u32 = 1000;

fn report(criterion: u32, pass: bool, what: &str, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance {criterion} {verdict}: {what} ({detail})");
}

fn plan(scenario: Scenario, sizes: Vec<(usize, usize)>, rhos: Vec<f64>, n_s: usize, alphas: Vec<f64>) -> MonteCarloPlan {
    MonteCarloPlan {
        scenario,
        sample_sizes: sizes,
        rhos,
        replications: n_s,
        alphas,
        test: TestConfig::new(SEED),
        seed: SEED,
    }
}

fn rows_for(plan: &MonteCarloPlan, size_index: usize, rho: f64) -> Vec<RejectionRow> {
    let cell = run_cell(plan, size_index, rho).expect("cell runs");
    tabulate(&cell, &plan.alphas).expect("tabulates")
}

fn row(rows: &[RejectionRow], d: DistanceKind, alpha: f64) -> &RejectionRow {
    rows.iter()
        .find(|r| r.distance == d && (r.alpha - alpha).abs() < 1e-12)
        .expect("row present")
}

#[test]
fn criterion_1_level_calibration() {
    let alphas = vec![0.025, 0.05, 0.1];
    let p = plan(Scenario::A, vec![(100, 100)], vec![0.5], 200, alphas.clone());
    let rows = rows_for(&p, 0, 0.5);
    let mut pass = true;
    let mut detail = Vec::new();
    for d in DistanceKind::ALL {
        for &alpha in &alphas {
            let prop = row(&rows, d, alpha).proportion;
            let half = 1.96 * (alpha * (1.0 - alpha) / 200.0).sqrt();
            let ok = match d {
                DistanceKind::KS => prop <= alpha + half,
                _ => (prop - alpha).abs() <= half,
            };
            pass &= ok;
            detail.push(format!("{d}@{alpha}={prop:.3}{}", if ok { "" } else { "!" }));
        }
    }
    report(1, pass, "scenario A level within calibration bands", &detail.join(" "));
    assert!(pass, "level outside calibration bands: {detail:?}");
}

#[test]
fn criterion_2_power_reproduction() {
    let sizes = vec![(100, 100), (250, 350), (500, 500)];
    let targets_l1 = [0.272, 0.629, 0.852];
    let targets_l2 = [0.283, 0.631, 0.844];
    let p = plan(Scenario::C, sizes.clone(), vec![0.5], 200, vec![0.05]);
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, size) in sizes.iter().enumerate() {
        let rows = rows_for(&p, i, 0.5);
        for (d, target) in [(DistanceKind::L1, targets_l1[i]), (DistanceKind::L2, targets_l2[i])] {
            let prop = row(&rows, d, 0.05).proportion;
            let ok = (prop - target).abs() <= 0.07;
            pass &= ok;
            detail.push(format!("C{size:?} {d}={prop:.3}/{target}{}", if ok { "" } else { "!" }));
        }
    }
    let pd = plan(Scenario::D, vec![(500, 500)], vec![0.5], 200, vec![0.05]);
    let prop = row(&rows_for(&pd, 0, 0.5), DistanceKind::L2, 0.05).proportion;
    let ok = (prop - 0.884).abs() <= 0.07;
    pass &= ok;
    detail.push(format!("D(500, 500) L2={prop:.3}/0.884{}", if ok { "" } else { "!" }));
    report(2, pass, "power within 0.07 of the published values", &detail.join(" "));
    assert!(pass, "power outside tolerance: {detail:?}");
}

#[test]
fn criterion_3_partition_monotonicity() {
    let rhos = [0.5, 1.0 / 3.0, 0.25];
    let p = plan(Scenario::C, vec![(500, 500)], rhos.to_vec(), 200, vec![0.05]);
    let by_rho: Vec<Vec<RejectionRow>> = rhos.iter().map(|&rho| rows_for(&p, 0, rho)).collect();
    let mut pass = true;
    let mut detail = Vec::new();
    for d in DistanceKind::ALL {
        let props: Vec<f64> = by_rho.iter().map(|rows| row(rows, d, 0.05).proportion).collect();
        let ok = props.windows(2).all(|w| w[0] + 0.05 >= w[1]);
        pass &= ok;
        detail.push(format!(
            "{d}: {:.3} {:.3} {:.3}{}",
            props[0],
            props[1],
            props[2],
            if ok { "" } else { "!" }
        ));
    }
    report(3, pass, "power ordered rho 1/2 >= 1/3 >= 1/4 up to 0.05", &detail.join(", "));
    assert!(pass, "partition ordering violated: {detail:?}");
}

#[test]
fn criterion_4_analytic_aroc_oracle() {
    let grid = Grid::uniform(500).unwrap();
    let truth: Vec<f64> = grid.points().iter().map(|&p| scenario_c_analytic_roc(p).unwrap()).collect();
    let reps = 50;
    let mut within = 0;
    let mut worst: f64 = 0.0;
    for r in 0..reps {
        let data = generate_scenario(Scenario::C, 2000, 2000, SEED + r).unwrap();
        let search = BandwidthSearch::default_for(&data.healthy).unwrap();
        let g = select_bandwidth(&data.healthy, KernelSpec::Gaussian, &search).unwrap();
        let est = aroc_estimate(&data.diseased, &data.healthy, g, KernelSpec::Gaussian, &grid).unwrap();
        let sup = est.values().iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(sup);
        if sup <= 0.08 {
            within += 1;
        }
    }
    let pass = within * 10 >= reps * 9;
    report(
        4,
        pass,
        "scenario C AROC within sup-distance 0.08 of the closed form",
        &format!("{within}/{reps} seeds, worst {worst:.4}"),
    );
    assert!(pass);
}

/// Straight transcription of the AROC definition with explicit loops.
fn aroc_double_loop(
    diseased: &PairedSample,
    healthy: &PairedSample,
    g: f64,
    kernel: KernelSpec,
    grid: &Grid,
) -> Vec<f64> {
    let hx = healthy.covariate();
    let hy = healthy.marker();
    let n_g = hx.len();
    let weights = |x: f64| -> Vec<f64> {
        let raw: Vec<f64> = hx.iter().map(|&xj| kernel.density((x - xj) / g)).collect();
        let total: f64 = raw.iter().sum();
        raw.iter().map(|w| w / total).collect()
    };
    let mean_at = |x: f64| -> f64 {
        let w = weights(x);
        (0..n_g).map(|j| w[j] * hy[j]).sum()
    };
    let fitted: Vec<f64> = hx.iter().map(|&x| mean_at(x)).collect();
    let floor = default_variance_floor(hy);
    let sd_at = |x: f64| -> f64 {
        let w = weights(x);
        let v: f64 = (0..n_g).map(|j| w[j] * (hy[j] - fitted[j]).powi(2)).sum();
        v.sqrt().max(floor)
    };
    let eps: Vec<f64> = (0..n_g).map(|j| (hy[j] - fitted[j]) / sd_at(hx[j])).collect();
    let placements: Vec<f64> = diseased
        .covariate()
        .iter()
        .zip(diseased.marker())
        .map(|(&x, &y)| {
            let t = (y - mean_at(x)) / sd_at(x);
            let mut below = 0;
            for &e in &eps {
                if e <= t {
                    below += 1;
                }
            }
            below as f64 / n_g as f64
        })
        .collect();
    let n_f = placements.len();
    grid.points()
        .iter()
        .map(|&p| {
            let mut above = 0;
            for &u in &placements {
                if u > 1.0 - p {
                    above += 1;
                }
            }
            above as f64 / n_f as f64
        })
        .collect()
}

fn mann_whitney(diseased: &[f64], healthy: &[f64]) -> f64 {
    let mut s = 0.0;
    for &f in diseased {
        for &g in healthy {
            if f > g {
                s += 1.0;
            } else if f == g {
                s += 0.5;
            }
        }
    }
    s / (diseased.len() * healthy.len()) as f64
}

fn random_paired(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> PairedSample {
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|&x| shift + 2.0 * x + rng.sample::<f64, _>(rand_distr::StandardNormal))
        .collect();
    PairedSample::new(x, y).unwrap()
}

#[test]
fn criterion_5_estimator_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let dense = Grid::uniform(5000).unwrap();
    let mut aroc_mismatch = 0;
    let mut auc_worst: f64 = 0.0;
    for _ in 0..100 {
        let n_f = rng.gen_range(2..=30);
        let n_g = rng.gen_range(2..=30);
        let shift = rng.gen_range(-1.0..2.0);
        let diseased = random_paired(&mut rng, n_f, shift);
        let healthy = random_paired(&mut rng, n_g, 0.0);
        let (kernel, g) = if rng.gen_bool(0.5) {
            (KernelSpec::Gaussian, rng.gen_range(0.05..1.5))
        } else {
            (KernelSpec::Epanechnikov, rng.gen_range(1.05..3.0))
        };
        let grid = Grid::uniform(rng.gen_range(10..300)).unwrap();
        let est = aroc_estimate(&diseased, &healthy, g, kernel, &grid).unwrap();
        if est.values() != aroc_double_loop(&diseased, &healthy, g, kernel, &grid).as_slice() {
            aroc_mismatch += 1;
        }
        let roc = pooled_roc(&diseased.markers(), &healthy.markers(), &dense);
        let gap = (auc(&roc) - mann_whitney(diseased.marker(), healthy.marker())).abs();
        auc_worst = auc_worst.max(gap);
    }
    let pass = aroc_mismatch == 0 && auc_worst <= 0.01;
    report(
        5,
        pass,
        "AROC equals the double-loop oracle; AUC matches Mann-Whitney",
        &format!("{aroc_mismatch}/100 AROC mismatches, worst AUC gap {auc_worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_6_null_p_value_uniformity() {
    let p = plan(Scenario::B, vec![(250, 350)], vec![0.5], 500, vec![0.05]);
    let cell = run_cell(&p, 0, 0.5).unwrap();
    let mut ps = cell.p_values[&DistanceKind::L1].clone();
    ps.sort_by(f64::total_cmp);
    let n = ps.len() as f64;
    let ks = ps
        .iter()
        .enumerate()
        .map(|(i, &v)| ((i + 1) as f64 / n - v).max(v - i as f64 / n))
        .fold(0.0, f64::max);
    let pass = ks < 0.08;
    report(6, pass, "scenario B L1 p-values close to uniform", &format!("Kolmogorov distance {ks:.4}"));
    assert!(pass);
}

#[derive(Debug, Clone)]
struct Instance {
    diseased: PairedSample,
    healthy: PairedSample,
    bandwidth: f64,
    grid: usize,
}

fn instance(n_max: usize) -> impl Strategy<Value = Instance> {
    (10..=n_max, 10..=n_max, -2.0..2.0f64, 0.05..2.0f64, 10usize..80, any::<u64>()).prop_map(
        move |(n_f, n_g, shift, bandwidth, grid, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Instance {
                diseased: random_paired(&mut rng, n_f, shift),
                healthy: random_paired(&mut rng, n_g, 0.0),
                bandwidth,
                grid,
            }
        },
    )
}

fn monotone_unit(c: &Curve) -> bool {
    c.values().iter().all(|v| (0.0..=1.0).contains(v)) && c.values().windows(2).all(|w| w[0] <= w[1])
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

#[test]
fn criterion_7_property_suite() {
    let mut outcomes = Vec::new();

    let curves = runner().run(&instance(40), |inst| {
        let grid = Grid::uniform(inst.grid).unwrap();
        let roc = pooled_roc(&inst.diseased.markers(), &inst.healthy.markers(), &grid);
        let aroc = aroc_estimate(&inst.diseased, &inst.healthy, inst.bandwidth, KernelSpec::Gaussian, &grid).unwrap();
        let fit_f = nw_fit(&inst.diseased, inst.bandwidth, KernelSpec::Gaussian, 1e-8).unwrap();
        let fit_g = nw_fit(&inst.healthy, inst.bandwidth, KernelSpec::Gaussian, 1e-8).unwrap();
        let cond = conditional_roc(
            0.5,
            &fit_f,
            &fit_g,
            &standardized_residuals(&fit_f),
            &standardized_residuals(&fit_g),
            &grid,
        )
        .unwrap();
        for c in [&roc, &aroc, &cond] {
            prop_assert!(monotone_unit(c));
            prop_assert!(Curve::new(c.grid().clone(), c.values().to_vec()).is_ok());
        }
        Ok(())
    });
    outcomes.push(("curve invariants", curves.map_err(|e| e.to_string())));

    let distances = runner().run(&instance(40), |inst| {
        let grid = Grid::uniform(inst.grid).unwrap();
        let roc = pooled_roc(&inst.diseased.markers(), &inst.healthy.markers(), &grid);
        let aroc = aroc_estimate(&inst.diseased, &inst.healthy, inst.bandwidth, KernelSpec::Gaussian, &grid).unwrap();
        for c in [&roc, &aroc] {
            for d in DistanceKind::ALL {
                prop_assert_eq!(curve_distance(c, c, d).unwrap(), 0.0);
            }
        }
        let l1 = curve_distance(&roc, &aroc, DistanceKind::L1).unwrap();
        let l2 = curve_distance(&roc, &aroc, DistanceKind::L2).unwrap();
        let ks = curve_distance(&roc, &aroc, DistanceKind::KS).unwrap();
        prop_assert!(l1 <= ks);
        prop_assert!(l2 <= ks * ks);
        Ok(())
    });
    outcomes.push(("distance axioms", distances.map_err(|e| e.to_string())));

    let reconstruction = runner().run(&instance(60), |inst| {
        for s in [&inst.diseased, &inst.healthy] {
            let fit = nw_fit(s, inst.bandwidth, KernelSpec::Gaussian, default_variance_floor(s.marker())).unwrap();
            let res = standardized_residuals(&fit);
            let scale = s.marker().iter().fold(1.0f64, |m, y| m.max(y.abs()));
            for (i, &y) in s.marker().iter().enumerate() {
                let back = fit.fitted_mean()[i] + fit.fitted_sd()[i] * res.residuals()[i];
                prop_assert!((back - y).abs() <= 8.0 * f64::EPSILON * scale, "{} vs {}", back, y);
            }
        }
        Ok(())
    });
    outcomes.push(("residual reconstruction", reconstruction.map_err(|e| e.to_string())));

    let determinism = runner().run(&(instance(40), any::<u64>(), 0.3..0.7f64), |(inst, seed, rho)| {
        let data = StudyDataset::new(inst.diseased, inst.healthy).unwrap();
        let mut cfg = TestConfig::new(seed);
        cfg.split.rho = rho;
        cfg.bootstrap_iterations = 8;
        cfg.grid_size = inst.grid;
        cfg.bandwidth = covroc_core::testing::BandwidthPolicy::Fixed {
            diseased: inst.bandwidth,
            healthy: inst.bandwidth,
        };
        cfg.parallel = true;
        let parallel = run_test(&data, &cfg).unwrap();
        cfg.parallel = false;
        let serial = run_test(&data, &cfg).unwrap();
        prop_assert_eq!(&parallel, &serial);
        let json = result_to_json(&parallel).unwrap();
        prop_assert_eq!(result_to_json(&serial).unwrap(), json.clone());
        let back = result_from_json(&json).unwrap();
        prop_assert_eq!(back, parallel);
        Ok(())
    });
    let determinism = determinism.map_err(|e| e.to_string());
    outcomes.push(("serial vs parallel bit-identical", determinism.clone()));
    outcomes.push(("JSON round-trip", determinism));

    let pass = outcomes.iter().all(|(_, r)| r.is_ok());
    let detail = outcomes
        .iter()
        .map(|(name, r)| match r {
            Ok(()) => format!("{name}: ok"),
            Err(e) => format!("{name}: {e}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    report(7, pass, &format!("property suite, {PROPERTY_CASES} cases each"), &detail);
    assert!(pass, "{detail}");
}

