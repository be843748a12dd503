use proptest::prelude::*;
use shuffletest::combinatorics::{
    exact_log_z, fixed_point_counts, log_z_closed_form, log_z_level_sets,
};
use shuffletest::expfam::{conjugate_posterior_update, PriorSpec};
use shuffletest::inference::{chi_square_test, posterior_null, ExpectedModel};
use shuffletest::io::{
    read_histogram_csv, read_perm_file, write_histogram_csv, write_perm_file, Histogram, PermHeader,
};
use shuffletest::rng::seeded_rng;
use shuffletest::{Permutation, ShuffleScheme, StatisticSpec};

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = seeded_rng(seed);
        Permutation::random_uniform(n, &mut rng)
    })
}

fn permutation_pair(max_n: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max_n, any::<u64>(), any::<u64>()).prop_map(|(n, a, b)| {
        (
            Permutation::random_uniform(n, &mut seeded_rng(a)),
            Permutation::random_uniform(n, &mut seeded_rng(b)),
        )
    })
}

proptest! {
    #[test]
    fn inverse_composes_to_identity(sigma in permutation(60)) {
        let id = Permutation::identity(sigma.n());
        prop_assert_eq!(sigma.compose(&sigma.inverse()).unwrap(), id.clone());
        prop_assert_eq!(sigma.inverse().compose(&sigma).unwrap(), id);
        prop_assert_eq!(sigma.inverse().inverse(), sigma);
    }

    #[test]
    fn composition_is_associative((a, b) in permutation_pair(30), seed in any::<u64>()) {
        let c = Permutation::random_uniform(a.n(), &mut seeded_rng(seed));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rank_unrank_round_trip(n in 1usize..=9, seed in any::<u64>()) {
        let sigma = Permutation::random_uniform(n, &mut seeded_rng(seed));
        let r = sigma.rank();
        prop_assert!(r < (1..=n).product::<usize>());
        prop_assert_eq!(Permutation::unrank(n, r), sigma);
    }

    #[test]
    fn fixed_points_invariant_under_conjugation((a, b) in permutation_pair(40)) {
        let conj = b.compose(&a).unwrap().compose(&b.inverse()).unwrap();
        prop_assert_eq!(conj.fixed_points(), a.fixed_points());
    }

    #[test]
    fn statistic_values_lie_in_support(sigma in permutation(52)) {
        let n = sigma.n();
        let f = StatisticSpec::fixed_points();
        let value = f.evaluate(&sigma)[0];
        prop_assert!((0.0..=n as f64).contains(&value));
        prop_assert!(value != (n as f64) - 1.0 || n == 1);
        if n >= 3 {
            let triple = StatisticSpec::wash_triple();
            let v = triple.evaluate(&sigma);
            for (x, (lo, hi)) in v.iter().zip(triple.support_box(n)) {
                prop_assert!(*x >= lo && *x <= hi, "{x} outside [{lo}, {hi}]");
            }
        }
    }

    #[test]
    fn conjugate_update_is_batch_associative(
        n0 in 0.1f64..10.0,
        x0 in 0.1f64..3.0,
        first in 1usize..200,
        second in 1usize..200,
        mean_a in 0.0f64..6.0,
        mean_b in 0.0f64..6.0,
    ) {
        let prior = PriorSpec::conjugate(n0, vec![x0]).unwrap();
        let one = conjugate_posterior_update(&prior, first, &[mean_a]).unwrap();
        let two = conjugate_posterior_update(&one, second, &[mean_b]).unwrap();
        let pooled_mean = (first as f64 * mean_a + second as f64 * mean_b) / (first + second) as f64;
        let batch = conjugate_posterior_update(&prior, first + second, &[pooled_mean]).unwrap();
        let (PriorSpec::Conjugate { n0: a_n, x0: a_x }, PriorSpec::Conjugate { n0: b_n, x0: b_x }) = (two, batch) else {
            panic!("conjugate update changed prior family");
        };
        prop_assert!((a_n - b_n).abs() < 1e-9);
        prop_assert!((a_x[0] - b_x[0]).abs() < 1e-9 * b_x[0].abs().max(1.0));
    }

    #[test]
    fn level_sets_match_closed_form(n in 1usize..=80, theta in -4.0f64..4.0) {
        let counts = fixed_point_counts(n).unwrap();
        let level = log_z_level_sets(&counts, theta);
        let closed = log_z_closed_form(n, theta);
        prop_assert!((level - closed).abs() <= 1e-9 * level.abs().max(1.0), "{level} vs {closed}");
    }

    #[test]
    fn log_z_is_convex(n in 2usize..=40, theta in -3.0f64..3.0, h in 0.01f64..0.5) {
        let lo = exact_log_z(n, theta - h).unwrap();
        let mid = exact_log_z(n, theta).unwrap();
        let hi = exact_log_z(n, theta + h).unwrap();
        prop_assert!(lo + hi - 2.0 * mid >= -1e-9 * mid.abs());
    }

    #[test]
    fn posterior_odds_identity(log_bf in -50.0f64..50.0, log_odds in -5.0f64..5.0) {
        let p = posterior_null(log_bf, log_odds.exp());
        prop_assert!((0.0..=1.0).contains(&p));
        let x = log_bf + log_odds;
        if p > 1e-9 && p < 1.0 - 1e-9 {
            let odds = (p / (1.0 - p)).ln();
            prop_assert!((odds - x).abs() < 1e-6 * (1.0 + odds.abs()));
        } else if x < 0.0 {
            prop_assert!((p.ln() - (x - x.exp().ln_1p())).abs() < 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn chi_square_conserves_counts(
        counts in prop::collection::vec(0u64..40, 1..9),
        threshold in 2usize..8,
    ) {
        prop_assume!(counts.iter().sum::<u64>() > 0);
        let report = chi_square_test(&counts, &ExpectedModel::Poisson { lambda: 1.0 }, threshold).unwrap();
        let total: u64 = counts.iter().sum();
        prop_assert_eq!(report.total(), total);
        let expected: f64 = report.expected.iter().sum();
        prop_assert!((expected - total as f64).abs() < 1e-6 * total as f64);
        prop_assert_eq!(report.df + 1, report.categories.len());
        prop_assert_eq!(report.observed.len(), report.categories.len());
        prop_assert!(report.statistic >= 0.0);
        prop_assert!((0.0..=1.0).contains(&report.p_value));
    }

    #[test]
    fn perm_file_round_trip(n in 1usize..30, count in 1usize..20, steps in 0usize..50, seed in any::<u64>()) {
        let scheme = ShuffleScheme::random_transpositions(n, steps, seed);
        let data = shuffletest::shuffle::sample_dataset(&scheme, count).unwrap();
        let header = PermHeader::for_scheme(&scheme, count);
        let mut buf = Vec::new();
        write_perm_file(&mut buf, &header, &data).unwrap();
        let parsed = read_perm_file(buf.as_slice()).unwrap();
        prop_assert_eq!(parsed.header, Some(header));
        prop_assert_eq!(parsed.permutations, data);
    }

    #[test]
    fn histogram_csv_round_trip(values in prop::collection::vec(0usize..12, 1..200)) {
        let hist = Histogram::from_values(values.iter().copied());
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &hist).unwrap();
        let parsed = read_histogram_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(parsed.total(), values.len() as u64);
        prop_assert_eq!(parsed.value_sum(), values.iter().sum::<usize>() as u64);
    }
}
