mod support;

use shuffletest::expfam::PriorSpec;
use shuffletest::inference::{
    binomial_point_null_bf, chi_square_test, flat_dirichlet_bf, flat_dirichlet_log_bf,
    gamma_poisson_log_bf, harmonic_mean_marginal, lindley_example, simulated_p_value,
    uniformity_bayes_factor, BayesConfig, ExpectedModel,
};
use shuffletest::normalizer::ExactFixedPointNormalizer;
use shuffletest::samplers::{run_exchange_chain, ChainConfig, ExchangeTarget};
use shuffletest::shuffle::{sample_dataset, ShuffleScheme};
use shuffletest::StatisticSpec;

#[test]
fn harmonic_mean_tracks_quadrature_on_toy_problem() {
    let stat = StatisticSpec::fixed_points();
    let prior = PriorSpec::normal(0.0, 0.01).unwrap();
    let norm = ExactFixedPointNormalizer { n: 6 };
    for rep in 0..20u64 {
        let data = sample_dataset(&ShuffleScheme::uniform(6, 100 + rep), 20).unwrap();
        let target = ExchangeTarget::from_data(&stat, 6, &data).unwrap();
        let chain =
            run_exchange_chain(&target, &prior, &ChainConfig::new(6000, 1000, rep)).unwrap();
        let est = harmonic_mean_marginal(&chain, &target, &norm).unwrap();
        let q = support::Quadrature::fixed_points(
            6,
            20,
            target.stat_sum[0],
            0.0,
            0.01,
            (-1.5, 1.5),
            6001,
        );
        let oracle = q.log_marginal();
        let se = est.stderr.unwrap();
        assert!(
            (est.log_marginal - oracle).abs() < 3.0 * se,
            "rep {rep}: {} vs {oracle} (se {se})",
            est.log_marginal
        );
    }
}

#[test]
fn uniform_data_usually_favour_the_null() {
    let stat = StatisticSpec::fixed_points();
    let prior = PriorSpec::normal(0.0, 0.1).unwrap();
    let mut estimated = 0;
    let mut exact = 0;
    for rep in 0..50u64 {
        let data = sample_dataset(&ShuffleScheme::uniform(6, 500 + rep), 500).unwrap();
        let target = ExchangeTarget::from_data(&stat, 6, &data).unwrap();
        let config = BayesConfig {
            chain: ChainConfig::new(1000, 200, rep),
            ..BayesConfig::default()
        };
        let report = uniformity_bayes_factor(&target, &prior, &config).unwrap();
        assert!((report.posterior_null - report.bf / (1.0 + report.bf)).abs() < 1e-12);
        if report.bf > 1.0 {
            estimated += 1;
        }
        let q = support::Quadrature::fixed_points(
            6,
            500,
            target.stat_sum[0],
            0.0,
            0.1,
            (-4.0, 4.0),
            16_001,
        );
        if -500.0 * support::ln_factorial(6) - q.log_marginal() > 0.0 {
            exact += 1;
        }
    }
    println!("bf > 1: harmonic mean {estimated}/50, quadrature {exact}/50");
    assert!(exact >= 45, "quadrature {exact} of 50");
    assert!(
        estimated >= 45,
        "harmonic mean {estimated} of 50 (quadrature {exact})"
    );
}

#[test]
fn lindley_corrected_figures() {
    let r = lindley_example(49_581, 48_870).unwrap();
    assert!(r.p_value < 0.05, "{r:?}");
    assert!((r.posterior_null - 0.95).abs() < 0.02, "{r:?}");
    assert!((r.posterior_null - r.bf / (1.0 + r.bf)).abs() < 1e-12);
}

#[test]
fn binomial_bf_follows_local_limit() {
    let n = 10_000u64;
    let exact = binomial_point_null_bf(n, n / 2).unwrap();
    let approx = (2.0 * n as f64 / std::f64::consts::PI).sqrt();
    assert!(
        ((exact - approx) / approx).abs() < 0.02,
        "{exact} vs {approx}"
    );
    // off-centre the Gaussian factor appears
    let j = n / 2 + 150;
    let z2 = (j as f64 - n as f64 / 2.0).powi(2) / (n as f64 / 4.0);
    let approx = approx * (-z2 / 2.0).exp();
    let exact = binomial_point_null_bf(n, j).unwrap();
    assert!(
        ((exact - approx) / approx).abs() < 0.02,
        "{exact} vs {approx}"
    );
}

#[test]
fn flat_dirichlet_large_cell_count() {
    // ten distinct cells among 720: product of (1 + i/720), close to 1
    let data: Vec<u64> = (0..10).collect();
    let bf = flat_dirichlet_bf(720, &data).unwrap();
    let direct: f64 = (0..10).map(|i| 1.0 + i as f64 / 720.0).product();
    assert!(((bf - direct) / direct).abs() < 1e-12);
    assert!((bf - 1.0).abs() < 0.1);
    // a hundred distinct cells already give a large factor
    let data: Vec<u64> = (0..100).collect();
    let direct: f64 = (0..100).map(|i| (1.0 + i as f64 / 720.0f64).ln()).sum();
    assert!((flat_dirichlet_log_bf(720, &data).unwrap() - direct).abs() < 1e-9);
    // repeated cells count against uniformity
    assert!(flat_dirichlet_bf(6, &[2, 2]).unwrap() < flat_dirichlet_bf(6, &[1, 2]).unwrap());
}

#[test]
fn closed_forms_are_stable_for_large_samples() {
    let n = 1_000_000u64;
    let a = gamma_poisson_log_bf(n, n, 1.0).unwrap();
    let b = gamma_poisson_log_bf(n, n, 1.0).unwrap();
    assert_eq!(a, b);
    assert!(a.is_finite() && a > 0.0);
    let far = gamma_poisson_log_bf(n, 2 * n, 1.0).unwrap();
    assert!(far.is_finite() && far < -1e5);
    let data: Vec<u64> = (0..n).map(|i| i % 1000).collect();
    assert!(flat_dirichlet_log_bf(1_000_000_000, &data)
        .unwrap()
        .is_finite());
}

#[test]
fn chi_square_agrees_with_simulation() {
    let obs = [14u64, 19, 12, 4, 1, 2];
    let report = chi_square_test(&obs, &ExpectedModel::Poisson { lambda: 1.0 }, 5).unwrap();
    let sim = simulated_p_value(&report, 200_000, 7).unwrap();
    assert!(
        (sim - report.p_value).abs() < 0.015,
        "{sim} vs {}",
        report.p_value
    );
    assert_eq!(report.df, report.categories.len() - 1);
}

#[test]
fn poorly_shuffled_decks_fail_chi_square() {
    let data = sample_dataset(&ShuffleScheme::random_transpositions(52, 100, 2018), 200).unwrap();
    let hist = shuffletest::io::Histogram::from_values(data.iter().map(|p| p.fixed_points()));
    let r = chi_square_test(&hist.counts, &ExpectedModel::Poisson { lambda: 1.0 }, 5).unwrap();
    assert!(r.p_value < 0.01, "{r:?}");
}
