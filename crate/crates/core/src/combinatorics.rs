//! Exact counting: derangements, fixed-point level sets, the closed-form
//! partition function of the fixed-point family, and exact distributions of
//! the random-transposition walk on small decks.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{ln_factorial, log_sum_exp, signed_log_sum_exp, total_variation};
use crate::perm::Permutation;

/// Largest deck handled by [`exact_walk_distribution`].
pub const MAX_WALK_DECK: usize = 7;

/// `D_m`, the number of derangements of `m` items.
pub fn derangements(m: usize) -> BigUint {
    let mut prev2 = BigUint::one(); // D_0
    if m == 0 {
        return prev2;
    }
    let mut prev1 = BigUint::zero(); // D_1
    for i in 2..=m {
        let next = (&prev1 + &prev2) * BigUint::from(i - 1);
        prev2 = prev1;
        prev1 = next;
    }
    prev1
}

/// `ln` of a big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().map_or(f64::INFINITY, f64::ln)
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `c_n(j) = #{σ ∈ S_n : F(σ) = j}` for `j = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointCounts {
    n: usize,
    counts: Vec<BigUint>,
    log_counts: Vec<f64>,
}

impl FixedPointCounts {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `ln c_n(j)`, `-inf` where the count is zero.
    pub fn log_counts(&self) -> &[f64] {
        &self.log_counts
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `c_n(j) / n!` as a float.
    pub fn uniform_probability(&self, j: usize) -> f64 {
        (self.log_counts[j] - ln_factorial(self.n as u64)).exp()
    }

    /// Log weights `ln c_n(j) + θ j`.
    pub fn log_weights(&self, theta: f64) -> Vec<f64> {
        self.log_counts
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                if l == f64::NEG_INFINITY {
                    l
                } else {
                    l + theta * j as f64
                }
            })
            .collect()
    }

    /// Writes `j,count` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "j,count")?;
        for (j, c) in self.counts.iter().enumerate() {
            writeln!(w, "{j},{c}")?;
        }
        Ok(())
    }
}

/// `c_n(j) = C(n, j) · D_{n-j}`.
pub fn fixed_point_counts(n: usize) -> Result<FixedPointCounts> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "deck size must be at least 1".into(),
        ));
    }
    let der: Vec<BigUint> = {
        let mut d = vec![BigUint::one(), BigUint::zero()];
        for i in 2..=n {
            let next = (&d[i - 1] + &d[i - 2]) * BigUint::from(i - 1);
            d.push(next);
        }
        d
    };
    let counts: Vec<BigUint> = (0..=n).map(|j| binomial(n, j) * &der[n - j]).collect();
    let log_counts = counts.iter().map(ln_biguint).collect();
    Ok(FixedPointCounts {
        n,
        counts,
        log_counts,
    })
}

/// `ln Z(θ)` for `Z(θ) = Σ_σ e^{θ F(σ)}`, from the level-set sum.
pub fn log_z_level_sets(counts: &FixedPointCounts, theta: f64) -> f64 {
    log_sum_exp(&counts.log_weights(theta))
}

/// `ln Z(θ)` from `Z(θ) = n! Σ_{j=0}^{n} (e^θ - 1)^j / j!`.
pub fn log_z_closed_form(n: usize, theta: f64) -> f64 {
    let x = theta.exp_m1();
    let lnf = ln_factorial(n as u64);
    if x == 0.0 {
        return lnf;
    }
    let lx = x.abs().ln();
    let terms: Vec<(f64, bool)> = (0..=n)
        .map(|j| {
            (
                j as f64 * lx - ln_factorial(j as u64),
                x < 0.0 && j % 2 == 1,
            )
        })
        .collect();
    let (l, _) = signed_log_sum_exp(&terms);
    lnf + l
}

/// Exact `ln Z(θ)` of the fixed-point family on `S_n`.
///
/// Both the level-set sum and the closed form are evaluated; debug builds
/// assert that they agree.
pub fn exact_log_z(n: usize, theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "theta must be finite, got {theta}"
        )));
    }
    let counts = fixed_point_counts(n)?;
    let level = log_z_level_sets(&counts, theta);
    debug_assert!({
        let closed = log_z_closed_form(n, theta);
        (closed - level).abs() <= 1e-9 * level.abs().max(1.0)
    });
    Ok(level)
}

/// Poisson probability mass `e^{-λ} λ^j / j!`.
pub fn poisson_pmf(lambda: f64, j: u64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Poisson rate must be positive, got {lambda}"
        )));
    }
    Ok((-lambda + j as f64 * lambda.ln() - ln_factorial(j)).exp())
}

/// Distribution of the random-transposition walk after `k` steps from the
/// identity, indexed by permutation rank.
#[derive(Debug, Clone)]
pub struct ExactWalkDistribution {
    n: usize,
    k: usize,
    probs: Vec<f64>,
}

impl ExactWalkDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> usize {
        self.k
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, sigma: &Permutation) -> f64 {
        if sigma.n() != self.n {
            return 0.0;
        }
        self.probs[sigma.rank()]
    }

    /// Law of the number of fixed points under this distribution.
    pub fn fixed_point_law(&self) -> Vec<f64> {
        let mut law = vec![0.0; self.n + 1];
        for (r, p) in self.probs.iter().enumerate() {
            law[Permutation::unrank(self.n, r).fixed_points()] += p;
        }
        law
    }

    /// `max_A |P(A) - U(A)| = ½ Σ_σ |P(σ) - 1/n!|`.
    pub fn total_variation_to_uniform(&self) -> f64 {
        let u = vec![1.0 / self.probs.len() as f64; self.probs.len()];
        total_variation(&self.probs, &u)
    }
}

/// Transition table: for each state rank, the ranks reached by each
/// transposition `(a, b)`, `a < b`.
struct TranspositionTable {
    targets: Vec<Vec<u32>>,
}

impl TranspositionTable {
    fn new(n: usize) -> Self {
        let states: usize = (1..=n).product();
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
            .collect();
        let targets = (0..states)
            .map(|r| {
                let sigma = Permutation::unrank(n, r);
                pairs
                    .iter()
                    .map(|&(a, b)| {
                        let mut t = sigma.clone();
                        t.swap_positions(a, b);
                        t.rank() as u32
                    })
                    .collect()
            })
            .collect();
        Self { targets }
    }
}

/// `Q^{*k}` by repeated convolution with the one-step law
/// `Q(Id) = 1/n`, `Q((i j)) = 2/n²`.
pub fn exact_walk_distribution(n: usize, k: usize) -> Result<ExactWalkDistribution> {
    exact_walk_path(n, k).map(|mut v| v.pop().expect("path has k+1 entries"))
}

/// `Q^{*0}, Q^{*1}, ..., Q^{*k}`.
pub fn exact_walk_path(n: usize, k: usize) -> Result<Vec<ExactWalkDistribution>> {
    if n == 0 || n > MAX_WALK_DECK {
        return Err(Error::OutOfRange {
            what: "deck size for exact walk",
            value: n as f64,
            lo: 1.0,
            hi: MAX_WALK_DECK as f64,
        });
    }
    let states: usize = (1..=n).product();
    let table = TranspositionTable::new(n);
    let stay = 1.0 / n as f64;
    let swap = 2.0 / (n * n) as f64;
    let mut probs = vec![0.0; states];
    probs[0] = 1.0;
    let mut path = vec![ExactWalkDistribution {
        n,
        k: 0,
        probs: probs.clone(),
    }];
    for step in 1..=k {
        let mut next: Vec<f64> = probs.iter().map(|p| p * stay).collect();
        for (r, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mass = p * swap;
            for &t in &table.targets[r] {
                next[t as usize] += mass;
            }
        }
        probs = next;
        path.push(ExactWalkDistribution {
            n,
            k: step,
            probs: probs.clone(),
        });
    }
    Ok(path)
}

/// Total variation between an exact walk distribution and the uniform law.
pub fn total_variation_to_uniform(p: &ExactWalkDistribution) -> f64 {
    p.total_variation_to_uniform()
}
