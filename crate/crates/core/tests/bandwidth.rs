use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use covroc_core::bandwidth::{cv_score, select_bandwidth, BandwidthSearch};
use covroc_core::{KernelSpec, PairedSample};

fn sample(seed: u64, n: usize) -> PairedSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let y = x
        .iter()
        .map(|&v| (6.0 * v).sin() + 0.3 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    PairedSample::new(x, y).unwrap()
}

fn doubled(s: &PairedSample) -> PairedSample {
    let twice = |v: &[f64]| v.iter().chain(v).copied().collect::<Vec<_>>();
    PairedSample::new(twice(s.covariate()), twice(s.marker())).unwrap()
}

#[test]
fn duplicated_dataset_selects_same_bandwidth() {
    for seed in 0..5 {
        let s = sample(seed, 150);
        let d = doubled(&s);
        let search = BandwidthSearch::log_spaced(0.01, 1.0, 25).unwrap();
        for kernel in [KernelSpec::Gaussian, KernelSpec::Epanechnikov] {
            assert_eq!(
                select_bandwidth(&s, kernel, &search).unwrap(),
                select_bandwidth(&d, kernel, &search).unwrap()
            );
        }
        for g in search.candidates() {
            let a = cv_score(&s, KernelSpec::Gaussian, *g).unwrap();
            let b = cv_score(&d, KernelSpec::Gaussian, *g).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        let own = BandwidthSearch::default_for(&s).unwrap();
        let dup = BandwidthSearch::default_for(&d).unwrap();
        let pos = |search: &BandwidthSearch, data: &PairedSample| {
            let g = select_bandwidth(data, KernelSpec::Gaussian, search).unwrap();
            search.candidates().iter().position(|&c| c == g).unwrap() as i64
        };
        assert!((pos(&own, &s) - pos(&dup, &d)).abs() <= 1);
    }
}

#[test]
fn selection_is_deterministic_and_an_exact_argmin() {
    let s = sample(9, 120);
    let search = BandwidthSearch::default_for(&s).unwrap();
    let g = select_bandwidth(&s, KernelSpec::Gaussian, &search).unwrap();
    assert_eq!(g, select_bandwidth(&s, KernelSpec::Gaussian, &search).unwrap());
    assert!(search.candidates().contains(&g));
    let best = cv_score(&s, KernelSpec::Gaussian, g).unwrap();
    for &c in search.candidates() {
        assert!(best <= cv_score(&s, KernelSpec::Gaussian, c).unwrap());
    }
}
