//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here calls into the library under test.
#![allow(dead_code)]

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn fixed_points(p: &[usize]) -> usize {
    p.iter().enumerate().filter(|(i, &v)| *i == v).count()
}

pub fn adjacent_pairs(p: &[usize]) -> usize {
    p.windows(2).filter(|w| w[1] == w[0] + 1).count()
}

/// `#{σ ∈ S_n : F(σ) = j}` by enumeration.
pub fn brute_fixed_point_counts(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for p in permutations(n) {
        counts[fixed_points(&p)] += 1;
    }
    counts
}

pub fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln Z(θ)` for fixed points from the series `n! Σ_j (e^θ − 1)^j / j!`.
pub fn series_log_z(n: usize, theta: f64) -> f64 {
    let x = theta.exp_m1();
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=n {
        term *= x / j as f64;
        sum += term;
    }
    ln_factorial(n) + sum.ln()
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Posterior of the one-parameter fixed-point model on a fine θ grid, with a
/// normal prior of the given variance.
pub struct Quadrature {
    pub grid: Vec<f64>,
    pub log_joint: Vec<f64>,
    step: f64,
}

impl Quadrature {
    pub fn fixed_points(
        n: usize,
        count: usize,
        stat_sum: f64,
        prior_mean: f64,
        prior_variance: f64,
        range: (f64, f64),
        points: usize,
    ) -> Self {
        let step = (range.1 - range.0) / (points - 1) as f64;
        let grid: Vec<f64> = (0..points).map(|i| range.0 + i as f64 * step).collect();
        let log_joint = grid
            .iter()
            .map(|&t| {
                let prior = -(t - prior_mean).powi(2) / (2.0 * prior_variance)
                    - 0.5 * (2.0 * std::f64::consts::PI * prior_variance).ln();
                prior + t * stat_sum - count as f64 * series_log_z(n, t)
            })
            .collect();
        Self {
            grid,
            log_joint,
            step,
        }
    }

    /// `ln ∫ P(Data|θ) π(θ) dθ` by the trapezoid rule.
    pub fn log_marginal(&self) -> f64 {
        let mut terms = self.log_joint.clone();
        let last = terms.len() - 1;
        terms[0] += 0.5f64.ln();
        terms[last] += 0.5f64.ln();
        log_sum_exp(&terms) + self.step.ln()
    }

    /// Posterior density at the grid nodes.
    pub fn density(&self) -> Vec<f64> {
        let lm = self.log_marginal();
        self.log_joint.iter().map(|l| (l - lm).exp()).collect()
    }

    pub fn mean(&self) -> f64 {
        let d = self.density();
        self.grid.iter().zip(&d).map(|(t, p)| t * p).sum::<f64>() * self.step
    }

    pub fn variance(&self) -> f64 {
        let d = self.density();
        let mu = self.mean();
        self.grid
            .iter()
            .zip(&d)
            .map(|(t, p)| (t - mu).powi(2) * p)
            .sum::<f64>()
            * self.step
    }

    /// Posterior probability of each of `bins` equal bins over `range`.
    pub fn bin_probabilities(&self, range: (f64, f64), bins: usize) -> Vec<f64> {
        let width = (range.1 - range.0) / bins as f64;
        let d = self.density();
        let mut probs = vec![0.0; bins];
        for (t, p) in self.grid.iter().zip(&d) {
            if *t < range.0 || *t >= range.1 {
                continue;
            }
            let b = (((t - range.0) / width) as usize).min(bins - 1);
            probs[b] += p * self.step;
        }
        let total: f64 = probs.iter().sum();
        probs.iter().map(|p| p / total).collect()
    }
}

pub fn histogram(samples: &[f64], range: (f64, f64), bins: usize) -> Vec<f64> {
    let width = (range.1 - range.0) / bins as f64;
    let mut h = vec![0.0; bins];
    let mut inside = 0.0;
    for &s in samples {
        if s < range.0 || s >= range.1 {
            continue;
        }
        let b = (((s - range.0) / width) as usize).min(bins - 1);
        h[b] += 1.0;
        inside += 1.0;
    }
    h.iter().map(|c| c / inside).collect()
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
