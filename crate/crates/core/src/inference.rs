//! Bayes factors for uniformity and the classical goodness-of-fit test.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::{checked_gamma_ur, ln_gamma};

use crate::error::{Error, Result};
use crate::expfam::PriorSpec;
use crate::io::Histogram;
use crate::normalizer::{ExactFixedPointNormalizer, LogNormalizer, NormalizerTable};
use crate::numeric::{ln_factorial, log_sum_exp, median};
use crate::rng::{derive_seed, stream_rng};
use crate::samplers::{
    replicate_rhat, run_replicate_chains, ChainConfig, ExchangeTarget, ParameterChain,
};

pub const REPORT_VERSION: u32 = 1;
/// Above this natural-log Bayes factor the factor is reported as `+∞`.
pub const LOG_BF_OVERFLOW: f64 = 700.0;

const HARMONIC_MEAN_WARNING: &str =
    "harmonic-mean marginal likelihood estimates can have very high variance";

/// Marginal likelihood estimate in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalEstimate {
    pub log_marginal: f64,
    /// Batch-means standard error of the log estimate; absent for fewer than
    /// four draws.
    pub stderr: Option<f64>,
}

/// `log P(Data|θ) = θ·S − N m(θ)`.
pub fn log_likelihood(
    target: &ExchangeTarget,
    theta: &[f64],
    normalizer: &dyn LogNormalizer,
) -> Result<f64> {
    if target.count == 0 {
        return Ok(0.0);
    }
    let dot: f64 = theta.iter().zip(&target.stat_sum).map(|(a, b)| a * b).sum();
    Ok(dot - target.count as f64 * normalizer.log_z(theta)?)
}

/// Harmonic mean `{(1/M) Σ P(Data|θᵢ)⁻¹}⁻¹` of the likelihood over posterior
/// draws, computed in log space.
pub fn harmonic_mean_marginal(
    chain: &ParameterChain,
    target: &ExchangeTarget,
    normalizer: &dyn LogNormalizer,
) -> Result<MarginalEstimate> {
    if chain.is_empty() {
        return Err(Error::InvalidArgument(
            "harmonic mean of an empty chain".into(),
        ));
    }
    let neg: Vec<f64> = chain
        .samples
        .iter()
        .map(|t| log_likelihood(target, t, normalizer).map(|l| -l))
        .collect::<Result<_>>()?;
    let m = neg.len();
    let log_marginal = (m as f64).ln() - log_sum_exp(&neg);
    let stderr = if m < 4 {
        None
    } else {
        let batches = m.min(20);
        let size = m / batches;
        let shift = neg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let means: Vec<f64> = (0..batches)
            .map(|b| {
                let s = &neg[b * size..(b + 1) * size];
                s.iter().map(|x| (x - shift).exp()).sum::<f64>() / size as f64
            })
            .collect();
        let bar = means.iter().sum::<f64>() / batches as f64;
        let var = means.iter().map(|x| (x - bar).powi(2)).sum::<f64>() / (batches - 1) as f64;
        Some((var / batches as f64).sqrt() / bar)
    };
    Ok(MarginalEstimate {
        log_marginal,
        stderr,
    })
}

/// Settings of the exchange-chain Bayes-factor pipeline.
#[derive(Debug, Clone)]
pub struct BayesConfig {
    pub chains: usize,
    pub chain: ChainConfig,
    pub prior_odds: f64,
    /// Needed for statistics other than fixed points.
    pub table: Option<Arc<NormalizerTable>>,
}

impl Default for BayesConfig {
    fn default() -> Self {
        Self {
            chains: 20,
            chain: ChainConfig::default(),
            prior_odds: 1.0,
            table: None,
        }
    }
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn serialize_extended_vec<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        if x.is_infinite() && *x > 0.0 {
            seq.serialize_element("+inf")?;
        } else {
            seq.serialize_element(x)?;
        }
    }
    seq.end()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Extended {
    Num(f64),
    Text(String),
}

impl Extended {
    fn value<E: serde::de::Error>(self) -> std::result::Result<f64, E> {
        match self {
            Extended::Num(x) => Ok(x),
            Extended::Text(t) if t == "+inf" => Ok(f64::INFINITY),
            Extended::Text(t) => Err(E::custom(format!("expected a number or \"+inf\", got {t}"))),
        }
    }
}

fn deserialize_extended<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Extended::deserialize(d)?.value()
}

fn deserialize_extended_vec<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<f64>, D::Error> {
    Vec::<Extended>::deserialize(d)?
        .into_iter()
        .map(Extended::value)
        .collect()
}

/// Bayes factor `P(Data|H₀)/P(Data|H₁)` for `H₀: θ = 0` against `H₁: θ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesFactorReport {
    pub version: u32,
    pub method: String,
    pub statistic: String,
    pub n: usize,
    pub count: usize,
    pub prior: String,
    #[serde(
        serialize_with = "serialize_extended",
        deserialize_with = "deserialize_extended"
    )]
    pub bf: f64,
    pub log_bf: f64,
    pub posterior_null: f64,
    pub prior_odds: f64,
    #[serde(
        serialize_with = "serialize_extended_vec",
        deserialize_with = "deserialize_extended_vec"
    )]
    pub per_chain_bf: Vec<f64>,
    pub per_chain_log_bf: Vec<f64>,
    pub log_marginal_null: f64,
    pub seed: u64,
    pub chain_seeds: Vec<u64>,
    pub chain: ChainConfig,
    pub acceptance_rates: Vec<f64>,
    pub ess: Vec<f64>,
    pub rhat: Vec<f64>,
    pub approximate: bool,
    pub warnings: Vec<String>,
}

/// `bf` from `log_bf`, `+∞` past the overflow guard.
pub fn bf_from_log(log_bf: f64) -> f64 {
    if log_bf > LOG_BF_OVERFLOW {
        f64::INFINITY
    } else {
        log_bf.exp()
    }
}

/// `P(H₀|Data)` from the log Bayes factor and prior odds `P(H₀)/P(H₁)`.
pub fn posterior_null(log_bf: f64, prior_odds: f64) -> f64 {
    let x = log_bf + prior_odds.ln();
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Median in log space; for an even count this is the geometric mean of the
/// two middle Bayes factors.
fn pooled_log_bf(values: &[f64]) -> f64 {
    median(values)
}

/// Pooled report together with the replicate chains behind it.
#[derive(Debug, Clone)]
pub struct BayesRun {
    pub report: BayesFactorReport,
    pub chains: Vec<ParameterChain>,
}

/// Runs replicate exchange chains, turns each into a harmonic-mean Bayes
/// factor against the exact uniform likelihood `(1/n!)^N`, and pools by median.
pub fn uniformity_bayes_factor(
    target: &ExchangeTarget,
    prior: &PriorSpec,
    config: &BayesConfig,
) -> Result<BayesFactorReport> {
    Ok(uniformity_bayes_run(target, prior, config)?.report)
}

/// Same as [`uniformity_bayes_factor`] but keeps the chains.
pub fn uniformity_bayes_run(
    target: &ExchangeTarget,
    prior: &PriorSpec,
    config: &BayesConfig,
) -> Result<BayesRun> {
    if !(config.prior_odds > 0.0) || !config.prior_odds.is_finite() {
        return Err(Error::InvalidArgument("prior odds must be positive".into()));
    }
    let exact = ExactFixedPointNormalizer { n: target.n };
    let normalizer: &dyn LogNormalizer = if target.statistic.is_fixed_points() {
        &exact
    } else {
        match &config.table {
            Some(t) if t.statistic == target.statistic && t.n == target.n => t.as_ref(),
            Some(_) => {
                return Err(Error::InvalidArgument(
                    "normalizer table does not match the statistic and deck size".into(),
                ))
            }
            None => {
                return Err(Error::NormalizerUnavailable(format!(
                    "statistic {} needs a normalizer table",
                    target.statistic
                )))
            }
        }
    };
    let chains = run_replicate_chains(target, prior, &config.chain, config.chains)?;
    let log_null = -(target.count as f64) * ln_factorial(target.n as u64);
    let per_chain_log_bf: Vec<f64> = chains
        .par_iter()
        .map(|c| harmonic_mean_marginal(c, target, normalizer).map(|m| log_null - m.log_marginal))
        .collect::<Result<_>>()?;
    let log_bf = pooled_log_bf(&per_chain_log_bf);
    let rhat = replicate_rhat(&chains);
    let d = target.statistic.dimension();
    let ess: Vec<f64> = (0..d)
        .map(|i| chains.iter().map(|c| c.diagnostics.ess[i]).sum())
        .collect();
    let approximate = chains.iter().any(|c| c.approximate);
    let mut warnings = vec![HARMONIC_MEAN_WARNING.to_string()];
    if rhat.iter().any(|r| *r > 1.1) {
        warnings.push(format!("split R-hat across chains exceeds 1.1: {rhat:?}"));
    }
    if ess.iter().any(|e| *e < 100.0) {
        warnings.push(format!("low effective sample size: {ess:?}"));
    }
    if approximate {
        warnings.push(
            "auxiliary draws came from an inner Metropolis run; results are approximate".into(),
        );
    }
    if log_bf > LOG_BF_OVERFLOW {
        warnings.push("Bayes factor overflows and is reported as +inf".into());
    }
    let report = BayesFactorReport {
        version: REPORT_VERSION,
        method: "exchange+harmonic-mean".into(),
        statistic: target.statistic.name(),
        n: target.n,
        count: target.count,
        prior: prior.to_string(),
        bf: bf_from_log(log_bf),
        log_bf,
        posterior_null: posterior_null(log_bf, config.prior_odds),
        prior_odds: config.prior_odds,
        per_chain_bf: per_chain_log_bf.iter().map(|l| bf_from_log(*l)).collect(),
        per_chain_log_bf,
        log_marginal_null: log_null,
        seed: config.chain.seed,
        chain_seeds: chains.iter().map(|c| c.seed).collect(),
        chain: config.chain.clone(),
        acceptance_rates: chains.iter().map(|c| c.acceptance_rate).collect(),
        ess,
        rhat,
        approximate,
        warnings,
    };
    Ok(BayesRun { report, chains })
}

fn ln_binomial(n: u64, j: u64) -> f64 {
    ln_factorial(n) - ln_factorial(j) - ln_factorial(n - j)
}

/// `ln[(n+1) C(n,j) 2⁻ⁿ]`: fair coin against a uniform prior on the bias.
pub fn binomial_point_null_log_bf(n: u64, j: u64) -> Result<f64> {
    if j > n {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds n = {n}")));
    }
    Ok(((n + 1) as f64).ln() + ln_binomial(n, j) - n as f64 * std::f64::consts::LN_2)
}

pub fn binomial_point_null_bf(n: u64, j: u64) -> Result<f64> {
    binomial_point_null_log_bf(n, j).map(f64::exp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindleyResult {
    pub z: f64,
    /// Two-sided normal-approximation p-value.
    pub p_value: f64,
    pub bf: f64,
    pub posterior_null: f64,
}

/// Fair-coin test on birth counts: frequentist z-test next to the point-null
/// Bayes factor with even prior odds.
pub fn lindley_example(boys: u64, girls: u64) -> Result<LindleyResult> {
    if boys == 0 || girls == 0 {
        return Err(Error::InvalidArgument(
            "birth counts must be positive".into(),
        ));
    }
    let n = boys + girls;
    let z = (boys as f64 - n as f64 / 2.0) / (n as f64 / 4.0).sqrt();
    let p_value = statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2);
    let log_bf = binomial_point_null_log_bf(n, boys)?;
    Ok(LindleyResult {
        z,
        p_value,
        bf: log_bf.exp(),
        posterior_null: posterior_null(log_bf, 1.0),
    })
}

/// `ln BF` of "uniform over `m` cells" against a flat Dirichlet prior on
/// the cell probabilities, for data given as cell labels `0..m`.
pub fn flat_dirichlet_log_bf(m: u64, data: &[u64]) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two cells, got {m}"
        )));
    }
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for &c in data {
        if c >= m {
            return Err(Error::InvalidArgument(format!("cell {c} outside 0..{m}")));
        }
        *counts.entry(c).or_default() += 1;
    }
    let mf = m as f64;
    let rising: f64 = (0..data.len()).map(|i| (i as f64 / mf).ln_1p()).sum();
    let cells: f64 = counts.values().map(|&c| ln_factorial(c)).sum();
    Ok(rising - cells)
}

pub fn flat_dirichlet_bf(m: u64, data: &[u64]) -> Result<f64> {
    flat_dirichlet_log_bf(m, data).map(f64::exp)
}

/// One point of a Bayes-factor curve over `α` or `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub bf: f64,
    pub log_bf: f64,
}

/// `ln BF` of Poisson(1) against `λ ~ Γ(α, α)` for `count` observations
/// summing to `total`.
pub fn gamma_poisson_log_bf(count: u64, total: u64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let n = count as f64;
    let s = total as f64;
    Ok(
        -n - alpha * alpha.ln() + ln_gamma(alpha) - ln_gamma(alpha + s)
            + (alpha + s) * (alpha + n).ln(),
    )
}

/// Bayes factor against the Gamma–Poisson alternative for each `α`.
pub fn gamma_poisson_bf_curve(hist: &Histogram, alphas: &[f64]) -> Result<Vec<CurvePoint>> {
    let (count, total) = (hist.total(), hist.value_sum());
    alphas
        .iter()
        .map(|&a| {
            let log_bf = gamma_poisson_log_bf(count, total, a)?;
            Ok(CurvePoint {
                x: a,
                bf: bf_from_log(log_bf),
                log_bf,
            })
        })
        .collect()
}

/// CSV with columns `alpha_or_k,bf,log_bf`.
pub fn write_curve_csv<W: Write>(mut w: W, points: &[CurvePoint]) -> Result<()> {
    writeln!(w, "alpha_or_k,bf,log_bf")?;
    for p in points {
        let bf = if p.bf.is_infinite() {
            "+inf".to_string()
        } else {
            format!("{:e}", p.bf)
        };
        writeln!(w, "{},{bf},{}", p.x, p.log_bf)?;
    }
    Ok(())
}

/// Null model for the χ² test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpectedModel {
    Poisson {
        lambda: f64,
    },
    /// Equal probability over the observed value range.
    Uniform,
    /// Probabilities of values `0, 1, …`; must sum to 1.
    Explicit {
        probabilities: Vec<f64>,
    },
}

impl fmt::Display for ExpectedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedModel::Poisson { lambda } => write!(f, "poisson:{lambda}"),
            ExpectedModel::Uniform => f.write_str("uniform"),
            ExpectedModel::Explicit { probabilities } => {
                let p: Vec<String> = probabilities.iter().map(|x| x.to_string()).collect();
                write!(f, "explicit:{}", p.join(","))
            }
        }
    }
}

impl FromStr for ExpectedModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>> {
            arg.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidArgument(format!("model argument '{t}': {e}")))
                })
                .collect()
        };
        match kind {
            "poisson" => {
                let lambda = if arg.is_empty() { 1.0 } else { nums()?[0] };
                if !(lambda > 0.0) || !lambda.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "poisson rate must be positive, got {lambda}"
                    )));
                }
                Ok(ExpectedModel::Poisson { lambda })
            }
            "uniform" => Ok(ExpectedModel::Uniform),
            "explicit" => Ok(ExpectedModel::Explicit {
                probabilities: nums()?,
            }),
            other => Err(Error::InvalidArgument(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareReport {
    pub version: u32,
    pub model: String,
    pub categories: Vec<String>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub lump_threshold: usize,
    pub convention: String,
    /// Upper 0.05 point of χ² with `df` degrees of freedom.
    pub critical_value: f64,
}

impl ChiSquareReport {
    pub fn total(&self) -> u64 {
        self.observed.iter().sum()
    }

    /// Cell probabilities under the null.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.total() as f64;
        self.expected.iter().map(|e| e / n).collect()
    }
}

const LUMPING_CONVENTION: &str = "values >= lump_threshold form one tail cell; then the last cell \
     is merged into its neighbour while its expected count is below 1; df = cells - 1";

/// Upper-`alpha` point of χ² with `df` degrees of freedom.
pub fn chi_square_quantile(df: usize, alpha: f64) -> Result<f64> {
    if df == 0 || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "bad quantile request df={df}, alpha={alpha}"
        )));
    }
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(dist.inverse_cdf(1.0 - alpha))
}

/// Pearson statistic `Σ (O − E)²/E`.
pub fn pearson_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

fn model_probabilities(model: &ExpectedModel, cells: usize) -> Result<(Vec<f64>, f64)> {
    match model {
        ExpectedModel::Poisson { lambda } => {
            let mut p = Vec::with_capacity(cells);
            let mut term = (-lambda).exp();
            for j in 0..cells {
                if j > 0 {
                    term *= lambda / j as f64;
                }
                p.push(term);
            }
            let tail = (1.0 - p.iter().sum::<f64>()).max(0.0);
            Ok((p, tail))
        }
        ExpectedModel::Uniform => Ok((vec![1.0 / cells as f64; cells], 0.0)),
        ExpectedModel::Explicit { probabilities } => {
            let s: f64 = probabilities.iter().sum();
            if (s - 1.0).abs() > 1e-9 || probabilities.iter().any(|p| *p < 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "explicit probabilities must be nonnegative and sum to 1, got sum {s}"
                )));
            }
            let mut p = probabilities.clone();
            p.resize(cells.max(p.len()), 0.0);
            let tail: f64 = p[cells..].iter().sum();
            p.truncate(cells);
            Ok((p, tail))
        }
    }
}

/// Goodness of fit of counts indexed by value against `model`.
pub fn chi_square_test(
    observed: &[u64],
    model: &ExpectedModel,
    lump_threshold: usize,
) -> Result<ChiSquareReport> {
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument(
            "chi-square test needs at least one observation".into(),
        ));
    }
    if lump_threshold == 0 {
        return Err(Error::InvalidArgument(
            "lump threshold must be at least 1".into(),
        ));
    }
    let n = total as f64;
    let support = match model {
        ExpectedModel::Uniform => observed.len(),
        ExpectedModel::Explicit { probabilities } => probabilities.len().max(observed.len()),
        ExpectedModel::Poisson { .. } => observed.len(),
    };
    let head = lump_threshold.min(support);
    let (probs, tail_prob) = model_probabilities(model, head)?;
    let mut labels: Vec<String> = (0..head).map(|j| j.to_string()).collect();
    let mut obs: Vec<u64> = (0..head)
        .map(|j| observed.get(j).copied().unwrap_or(0))
        .collect();
    let mut exp: Vec<f64> = probs.iter().map(|p| p * n).collect();
    let tail_obs: u64 = observed.iter().skip(head).sum();
    if tail_prob > 0.0 || tail_obs > 0 {
        labels.push(format!("{head}+"));
        obs.push(tail_obs);
        exp.push(tail_prob * n);
    }
    let mut tail_start = labels.len() - 1;
    let last_is_tail = tail_prob > 0.0 || tail_obs > 0;
    while exp.len() > 2 && exp[exp.len() - 1] < 1.0 {
        let e = exp.pop().unwrap_or(0.0);
        let o = obs.pop().unwrap_or(0);
        labels.pop();
        *exp.last_mut().expect("at least two cells") += e;
        *obs.last_mut().expect("at least two cells") += o;
        tail_start -= 1;
        let last = labels.len() - 1;
        labels[last] = if last_is_tail || tail_start + 1 < support {
            format!("{tail_start}+")
        } else {
            tail_start.to_string()
        };
    }
    if let Some(i) = exp.iter().position(|&e| e <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "expected count of category {} is zero after lumping",
            labels[i]
        )));
    }
    if exp.len() < 2 {
        return Err(Error::InvalidArgument(
            "chi-square test needs at least two categories".into(),
        ));
    }
    let statistic = pearson_statistic(&obs, &exp);
    let df = exp.len() - 1;
    let p_value = if statistic > 0.0 {
        checked_gamma_ur(df as f64 / 2.0, statistic / 2.0)
            .map_err(|e| Error::InvalidArgument(format!("chi-square p-value: {e}")))?
    } else {
        1.0
    };
    Ok(ChiSquareReport {
        version: REPORT_VERSION,
        model: model.to_string(),
        categories: labels,
        observed: obs,
        expected: exp,
        statistic,
        df,
        p_value,
        lump_threshold,
        convention: LUMPING_CONVENTION.into(),
        critical_value: chi_square_quantile(df, 0.05)?,
    })
}

/// Monte Carlo p-value: fraction of `draws` multinomial samples of the
/// report's cells whose Pearson statistic is at least the observed one.
pub fn simulated_p_value(report: &ChiSquareReport, draws: usize, seed: u64) -> Result<f64> {
    if draws == 0 {
        return Err(Error::InvalidArgument(
            "need at least one simulation draw".into(),
        ));
    }
    let n = report.total() as usize;
    let probs = report.probabilities();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cdf.push(acc);
    }
    const BLOCK: usize = 10_000;
    let blocks = draws.div_ceil(BLOCK);
    let threshold = report.statistic * (1.0 - 1e-12);
    let hits: usize = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let len = BLOCK.min(draws - b * BLOCK);
            let mut counts = vec![0u64; probs.len()];
            let mut hits = 0;
            for _ in 0..len {
                counts.iter_mut().for_each(|c| *c = 0);
                for _ in 0..n {
                    let u = rng.random::<f64>() * acc;
                    let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                    counts[k] += 1;
                }
                if pearson_statistic(&counts, &report.expected) >= threshold {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(hits as f64 / draws as f64)
}

/// Per-chain seeds used by `uniformity_bayes_factor` for a master seed.
pub fn chain_seeds(master: u64, chains: usize) -> Vec<u64> {
    (0..chains as u64).map(|c| derive_seed(master, c)).collect()
}
