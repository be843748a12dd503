//! Convergence diagnostics: split-chain R̂ and effective sample size.

use crate::numeric::{mean, variance};

/// Gelman–Rubin R̂ over chains split in half. Returns 1 for a single
/// half-chain of fewer than 4 draws or when every chain is constant.
pub fn split_rhat(chains: &[&[f64]]) -> f64 {
    let mut halves: Vec<&[f64]> = Vec::with_capacity(2 * chains.len());
    for c in chains {
        let half = c.len() / 2;
        if half < 2 {
            continue;
        }
        halves.push(&c[..half]);
        halves.push(&c[c.len() - half..]);
    }
    if halves.len() < 2 {
        return 1.0;
    }
    let len = halves.iter().map(|h| h.len()).min().unwrap_or(0) as f64;
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let w = halves.iter().map(|h| variance(h)).sum::<f64>() / halves.len() as f64;
    let b = len * variance(&means);
    if w <= 0.0 {
        return if b <= 0.0 { 1.0 } else { f64::INFINITY };
    }
    let var_plus = (len - 1.0) / len * w + b / len;
    (var_plus / w).sqrt()
}

fn autocovariance(xs: &[f64], mu: f64, lag: usize) -> f64 {
    let n = xs.len();
    let mut s = 0.0;
    for i in 0..n - lag {
        s += (xs[i] - mu) * (xs[i + lag] - mu);
    }
    s / n as f64
}

/// Effective sample size of one chain using Geyer's initial positive
/// sequence. A constant chain counts every draw as independent.
pub fn effective_sample_size(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 4 {
        return n as f64;
    }
    let mu = mean(xs);
    let c0 = autocovariance(xs, mu, 0);
    if c0 <= 0.0 {
        return n as f64;
    }
    let mut tau = -1.0;
    let mut prev_pair = f64::INFINITY;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = (autocovariance(xs, mu, lag) + autocovariance(xs, mu, lag + 1)) / c0;
        if pair <= 0.0 {
            break;
        }
        // monotone sequence estimator
        let pair = pair.min(prev_pair);
        tau += 2.0 * pair;
        prev_pair = pair;
        lag += 2;
    }
    let tau = tau.max(1.0 / (n as f64).log10().max(1.0));
    (n as f64 / tau).min(n as f64 * (n as f64).log10().max(1.0))
}

/// Summed per-chain ESS.
pub fn pooled_ess(chains: &[&[f64]]) -> f64 {
    chains.iter().map(|c| effective_sample_size(c)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn rhat_near_one_for_iid() {
        let mut rng = seeded_rng(1);
        let a: Vec<f64> = (0..2000).map(|_| rng.sample(StandardNormal)).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.sample(StandardNormal)).collect();
        let r = split_rhat(&[&a, &b]);
        assert!((r - 1.0).abs() < 0.02, "{r}");
    }

    #[test]
    fn rhat_flags_separated_chains() {
        let a: Vec<f64> = (0..500).map(|i| (i % 7) as f64 * 0.01).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 5.0).collect();
        assert!(split_rhat(&[&a, &b]) > 1.1);
        assert!(split_rhat(&[&[1.0, 1.0, 1.0, 1.0]]) == 1.0);
    }

    #[test]
    fn ess_iid_and_ar1() {
        let mut rng = seeded_rng(2);
        let iid: Vec<f64> = (0..5000).map(|_| rng.sample(StandardNormal)).collect();
        let e = effective_sample_size(&iid);
        assert!(e > 4000.0 && e < 6500.0, "{e}");
        let mut x = 0.0;
        let ar: Vec<f64> = (0..20000)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                x = 0.9 * x + z;
                x
            })
            .collect();
        // tau = (1 + 0.9) / (1 - 0.9) = 19
        let e = effective_sample_size(&ar);
        assert!(e > 20000.0 / 30.0 && e < 20000.0 / 12.0, "{e}");
        assert_eq!(effective_sample_size(&[3.0; 100]), 100.0);
    }
}
