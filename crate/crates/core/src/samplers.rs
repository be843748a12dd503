//! Metropolis sampling on `S_n`, exact fixed-point level draws, and the
//! exchange algorithm on parameter space.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{exact_log_z, fixed_point_counts, FixedPointCounts};
use crate::diagnostics::{effective_sample_size, split_rhat};
use crate::error::{Error, Result};
use crate::expfam::{prior_log_density, ExpFamilyModel, Matrix, PriorSpec};
use crate::numeric::{batch_means_stderr, log_sum_exp};
use crate::perm::Permutation;
use crate::rng::{derive_seed, seeded_rng, StreamRng};
use crate::statistic::StatisticSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    /// Total transitions, burn-in included.
    pub steps: usize,
    pub burnin: usize,
    /// Initial standard deviation of the Gaussian random-walk proposal.
    pub proposal_scale: f64,
    pub seed: u64,
    pub thin: usize,
    /// Inner Metropolis burn-in for approximate auxiliary draws.
    pub inner_steps: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            steps: 1000,
            burnin: 200,
            proposal_scale: 0.2,
            seed: 0,
            thin: 1,
            inner_steps: 2000,
        }
    }
}

impl ChainConfig {
    pub fn new(steps: usize, burnin: usize, seed: u64) -> Self {
        Self {
            steps,
            burnin,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps <= self.burnin {
            return Err(Error::InvalidArgument(format!(
                "steps ({}) must exceed burn-in ({})",
                self.steps, self.burnin
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidArgument("thin must be at least 1".into()));
        }
        if !(self.proposal_scale > 0.0) || !self.proposal_scale.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "proposal scale must be positive, got {}",
                self.proposal_scale
            )));
        }
        Ok(())
    }

    /// Same settings with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    fn keeps(&self, step: usize) -> bool {
        step >= self.burnin && (step - self.burnin) % self.thin == 0
    }
}

/// Single-site Metropolis walker on `S_n` targeting `P_θ`.
struct PermutationWalker<'a> {
    statistic: &'a StatisticSpec,
    theta: &'a [f64],
    state: Permutation,
    energy: f64,
    accepted: u64,
    proposed: u64,
}

impl<'a> PermutationWalker<'a> {
    fn new(statistic: &'a StatisticSpec, theta: &'a [f64], start: Permutation) -> Self {
        let energy = statistic.dot(theta, &start);
        Self {
            statistic,
            theta,
            state: start,
            energy,
            accepted: 0,
            proposed: 0,
        }
    }

    fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.state.n();
        if n < 2 {
            return;
        }
        let i = rng.random_range(1..=n);
        let mut j = rng.random_range(1..n);
        if j >= i {
            j += 1;
        }
        self.proposed += 1;
        self.state.swap_positions(i, j);
        let proposed = self.statistic.dot(self.theta, &self.state);
        let log_a = proposed - self.energy;
        if log_a >= 0.0 || rng.random::<f64>().ln() < log_a {
            self.energy = proposed;
            self.accepted += 1;
        } else {
            self.state.swap_positions(i, j);
        }
    }

    fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

/// Metropolis chain on `S_n` with uniform transposition proposals, started
/// from a uniform draw. Returns the kept states after burn-in and thinning.
pub fn metropolis_on_x(model: &ExpFamilyModel, config: &ChainConfig) -> Result<Vec<Permutation>> {
    config.validate()?;
    let mut rng = seeded_rng(config.seed);
    let start = Permutation::random_uniform(model.n(), &mut rng);
    let mut walker = PermutationWalker::new(model.statistic(), model.theta(), start);
    let mut kept = Vec::with_capacity((config.steps - config.burnin) / config.thin + 1);
    for step in 0..config.steps {
        walker.step(&mut rng);
        if config.keeps(step) {
            kept.push(walker.state.clone());
        }
    }
    Ok(kept)
}

/// Moment estimates of `T` under `P_θ` from one Metropolis run.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub mean: Vec<f64>,
    pub covariance: Matrix,
    /// Batch-means standard error of each mean coordinate.
    pub stderr: Vec<f64>,
    /// Smallest per-coordinate effective sample size.
    pub ess: f64,
    pub acceptance_rate: f64,
    pub samples: usize,
}

/// Streams the statistic along a Metropolis run and summarizes it.
pub fn metropolis_moments(
    statistic: &StatisticSpec,
    n: usize,
    theta: &[f64],
    config: &ChainConfig,
) -> Result<MomentEstimate> {
    config.validate()?;
    statistic.check_deck(n)?;
    let d = statistic.dimension();
    let mut rng = seeded_rng(config.seed);
    let start = Permutation::random_uniform(n, &mut rng);
    let mut walker = PermutationWalker::new(statistic, theta, start);
    let mut traces: Vec<Vec<f64>> = vec![Vec::new(); d];
    let mut buf = vec![0.0; d];
    for step in 0..config.steps {
        walker.step(&mut rng);
        if config.keeps(step) {
            statistic.evaluate_into(&walker.state, &mut buf);
            for (t, v) in traces.iter_mut().zip(&buf) {
                t.push(*v);
            }
        }
    }
    let m = traces[0].len();
    let mean: Vec<f64> = traces
        .iter()
        .map(|t| t.iter().sum::<f64>() / m as f64)
        .collect();
    let mut covariance = vec![vec![0.0; d]; d];
    for a in 0..d {
        for b in a..d {
            let c = traces[a]
                .iter()
                .zip(&traces[b])
                .map(|(x, y)| (x - mean[a]) * (y - mean[b]))
                .sum::<f64>()
                / (m.max(2) - 1) as f64;
            covariance[a][b] = c;
            covariance[b][a] = c;
        }
    }
    let stderr = traces.iter().map(|t| batch_means_stderr(t, 20)).collect();
    let ess = traces
        .iter()
        .map(|t| effective_sample_size(t))
        .fold(f64::INFINITY, f64::min);
    Ok(MomentEstimate {
        mean,
        covariance,
        stderr,
        ess,
        acceptance_rate: walker.acceptance_rate(),
        samples: m,
    })
}

/// Exact sampler for the level `j = F(σ)` under `P_θ`, by inverse CDF over
/// the weights `c_n(j) e^{θj}`.
#[derive(Debug, Clone)]
pub struct FixedPointLevelSampler {
    cdf: Vec<f64>,
}

impl FixedPointLevelSampler {
    pub fn new(counts: &FixedPointCounts, theta: f64) -> Self {
        let lw = counts.log_weights(theta);
        let lz = log_sum_exp(&lw);
        let mut acc = 0.0;
        let cdf = lw
            .iter()
            .map(|l| {
                acc += (l - lz).exp();
                acc
            })
            .collect();
        Self { cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.cdf[self.cdf.len() - 1];
        let j = self.cdf.partition_point(|&c| c <= u);
        // levels with zero weight (j = n-1) have a flat CDF step and are never hit
        j.min(self.cdf.len() - 1)
    }
}

/// One exact draw of `F` under `P_θ` on `S_n`.
pub fn sample_f_level(n: usize, theta: f64, seed: u64) -> Result<usize> {
    let counts = fixed_point_counts(n)?;
    Ok(FixedPointLevelSampler::new(&counts, theta).sample(&mut seeded_rng(seed)))
}

/// Source of the synthetic data the exchange algorithm draws at the proposal.
pub trait AuxiliarySampler: Sync {
    /// `Σᵢ T(wᵢ)` for `count` draws `wᵢ ~ P_θ`.
    fn statistic_sum(&self, theta: &[f64], count: usize, rng: &mut StreamRng) -> Result<Vec<f64>>;

    /// Whether draws come exactly from `P_θ`.
    fn is_exact(&self) -> bool;

    /// `m(θ)` when it is known in closed form.
    fn log_normalizer(&self, _theta: &[f64]) -> Option<Result<f64>> {
        None
    }
}

/// Exact auxiliary draws for the fixed-point statistic.
#[derive(Debug, Clone)]
pub struct ExactFixedPointAuxiliary {
    counts: FixedPointCounts,
}

impl ExactFixedPointAuxiliary {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            counts: fixed_point_counts(n)?,
        })
    }
}

impl AuxiliarySampler for ExactFixedPointAuxiliary {
    fn statistic_sum(&self, theta: &[f64], count: usize, rng: &mut StreamRng) -> Result<Vec<f64>> {
        let sampler = FixedPointLevelSampler::new(&self.counts, theta[0]);
        let total: usize = (0..count).map(|_| sampler.sample(rng)).sum();
        Ok(vec![total as f64])
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn log_normalizer(&self, theta: &[f64]) -> Option<Result<f64>> {
        Some(exact_log_z(self.counts.n(), theta[0]))
    }
}

/// Approximate auxiliary draws from an inner Metropolis run: `inner_steps`
/// burn-in transitions from a uniform start, then one state every `n` steps.
#[derive(Debug, Clone)]
pub struct MetropolisAuxiliary {
    statistic: StatisticSpec,
    n: usize,
    inner_steps: usize,
}

impl MetropolisAuxiliary {
    pub fn new(statistic: StatisticSpec, n: usize, inner_steps: usize) -> Result<Self> {
        statistic.check_deck(n)?;
        Ok(Self {
            statistic,
            n,
            inner_steps,
        })
    }
}

impl AuxiliarySampler for MetropolisAuxiliary {
    fn statistic_sum(&self, theta: &[f64], count: usize, rng: &mut StreamRng) -> Result<Vec<f64>> {
        let d = self.statistic.dimension();
        let mut total = vec![0.0; d];
        if count == 0 {
            return Ok(total);
        }
        let start = Permutation::random_uniform(self.n, rng);
        let mut walker = PermutationWalker::new(&self.statistic, theta, start);
        for _ in 0..self.inner_steps {
            walker.step(rng);
        }
        let mut buf = vec![0.0; d];
        for _ in 0..count {
            for _ in 0..self.n {
                walker.step(rng);
            }
            self.statistic.evaluate_into(&walker.state, &mut buf);
            for (t, b) in total.iter_mut().zip(&buf) {
                *t += b;
            }
        }
        Ok(total)
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// Picks the exact sampler for the fixed-point statistic and the inner
/// Metropolis fallback otherwise.
pub fn auxiliary_for(
    statistic: &StatisticSpec,
    n: usize,
    inner_steps: usize,
) -> Result<Box<dyn AuxiliarySampler>> {
    if statistic.is_fixed_points() {
        Ok(Box::new(ExactFixedPointAuxiliary::new(n)?))
    } else {
        Ok(Box::new(MetropolisAuxiliary::new(
            statistic.clone(),
            n,
            inner_steps,
        )?))
    }
}

fn prior_term(prior: &PriorSpec, theta: &[f64], aux: &dyn AuxiliarySampler) -> Result<f64> {
    match prior {
        PriorSpec::Conjugate { .. } => {
            let m = |t: &[f64]| {
                aux.log_normalizer(t).unwrap_or_else(|| {
                    Err(Error::NormalizerUnavailable(
                        "conjugate priors in the exchange algorithm need an exact normalizer"
                            .into(),
                    ))
                })
            };
            prior_log_density(prior, theta, Some(&m))
        }
        _ => prior_log_density(prior, theta, None),
    }
}

/// Log acceptance ratio of the exchange algorithm for a symmetric proposal:
/// `log p(θ') − log p(θ) + (θ'−θ)·S_y + (θ−θ')·S_w`.
pub fn exchange_log_ratio(
    theta: &[f64],
    proposal: &[f64],
    data_stat_sum: &[f64],
    aux_stat_sum: &[f64],
    log_prior_current: f64,
    log_prior_proposal: f64,
) -> f64 {
    let mut log_a = log_prior_proposal - log_prior_current;
    for i in 0..theta.len() {
        let diff = proposal[i] - theta[i];
        log_a += diff * data_stat_sum[i] - diff * aux_stat_sum[i];
    }
    log_a
}

/// One exchange transition toward an explicit proposal. Draws the size-`count`
/// auxiliary dataset at `proposal` and accepts with probability `min(1, a)`.
pub fn exchange_transition(
    theta: &[f64],
    proposal: &[f64],
    data_stat_sum: &[f64],
    count: usize,
    prior: &PriorSpec,
    aux: &dyn AuxiliarySampler,
    rng: &mut StreamRng,
) -> Result<bool> {
    let lp_prop = prior_term(prior, proposal, aux)?;
    if lp_prop == f64::NEG_INFINITY {
        return Ok(false);
    }
    let lp_cur = prior_term(prior, theta, aux)?;
    let aux_sum = aux.statistic_sum(proposal, count, rng)?;
    let log_a = exchange_log_ratio(theta, proposal, data_stat_sum, &aux_sum, lp_cur, lp_prop);
    if log_a.is_nan() {
        return Err(Error::Diagnostics(format!(
            "exchange ratio is NaN at theta {theta:?} -> {proposal:?}"
        )));
    }
    Ok(log_a >= 0.0 || rng.random::<f64>().ln() < log_a)
}

/// One exchange step with a Gaussian random-walk proposal of standard
/// deviation `proposal_scale` in every coordinate.
#[allow(clippy::too_many_arguments)]
pub fn exchange_step(
    theta: &[f64],
    data_stat_sum: &[f64],
    count: usize,
    prior: &PriorSpec,
    proposal_scale: f64,
    aux: &dyn AuxiliarySampler,
    rng: &mut StreamRng,
) -> Result<(Vec<f64>, bool)> {
    let proposal: Vec<f64> = theta
        .iter()
        .map(|t| t + proposal_scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let accepted = exchange_transition(theta, &proposal, data_stat_sum, count, prior, aux, rng)?;
    Ok(if accepted {
        (proposal, true)
    } else {
        (theta.to_vec(), false)
    })
}

/// Sufficient data summary the exchange chain conditions on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeTarget {
    pub statistic: StatisticSpec,
    pub n: usize,
    pub count: usize,
    pub stat_sum: Vec<f64>,
}

impl ExchangeTarget {
    pub fn from_data(statistic: &StatisticSpec, n: usize, data: &[Permutation]) -> Result<Self> {
        statistic.check_deck(n)?;
        if let Some(p) = data.iter().find(|p| p.n() != n) {
            return Err(Error::InvalidArgument(format!(
                "dataset mixes deck sizes {n} and {}",
                p.n()
            )));
        }
        Ok(Self {
            statistic: statistic.clone(),
            n,
            count: data.len(),
            stat_sum: statistic.sum_over(data),
        })
    }

    pub fn from_summary(
        statistic: &StatisticSpec,
        n: usize,
        count: usize,
        stat_sum: Vec<f64>,
    ) -> Result<Self> {
        statistic.check_deck(n)?;
        if stat_sum.len() != statistic.dimension() {
            return Err(Error::InvalidArgument(
                "statistic sum has the wrong dimension".into(),
            ));
        }
        Ok(Self {
            statistic: statistic.clone(),
            n,
            count,
            stat_sum,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    pub ess: Vec<f64>,
    pub rhat: Vec<f64>,
    pub acceptance_rate: f64,
    pub seed: u64,
}

/// Post-burn-in, thinned exchange chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterChain {
    pub samples: Vec<Vec<f64>>,
    /// Transition index of each kept sample.
    pub steps: Vec<usize>,
    /// Whether the transition that produced each kept sample was accepted.
    pub accepted: Vec<bool>,
    /// Acceptance rate over the post-burn-in transitions.
    pub acceptance_rate: f64,
    /// Proposal scale after burn-in adaptation.
    pub proposal_scale: f64,
    pub seed: u64,
    pub diagnostics: ChainDiagnostics,
    /// Auxiliary draws came from an inner Metropolis run.
    pub approximate: bool,
}

impl ParameterChain {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[i]).collect()
    }

    /// CSV with columns `step, theta_0..theta_{d-1}, accepted`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let d = self.samples.first().map_or(0, |s| s.len());
        let mut header = vec!["step".to_string()];
        header.extend((0..d).map(|i| format!("theta_{i}")));
        header.push("accepted".into());
        writeln!(w, "{}", header.join(","))?;
        for ((step, theta), acc) in self.steps.iter().zip(&self.samples).zip(&self.accepted) {
            let t: Vec<String> = theta.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{step},{},{}", t.join(","), u8::from(*acc))?;
        }
        Ok(())
    }
}

fn initial_theta(prior: &PriorSpec, d: usize, rng: &mut StreamRng) -> Vec<f64> {
    match prior {
        PriorSpec::Normal { variance, .. } => {
            let mean = prior.normal_mean(d).unwrap_or_else(|| vec![0.0; d]);
            let sd = variance.sqrt();
            mean.iter()
                .map(|m| m + sd * rng.sample::<f64, _>(StandardNormal))
                .collect()
        }
        PriorSpec::Gamma { shape, rate } => vec![shape / rate],
        PriorSpec::Conjugate { .. } => vec![0.0; d],
    }
}

const ADAPT_WINDOW: usize = 25;
const TARGET_ACCEPTANCE: f64 = 0.35;

/// Runs one exchange chain. The proposal scale adapts in windows during
/// burn-in only and is frozen afterwards.
pub fn run_exchange_chain(
    target: &ExchangeTarget,
    prior: &PriorSpec,
    config: &ChainConfig,
) -> Result<ParameterChain> {
    let aux = auxiliary_for(&target.statistic, target.n, config.inner_steps)?;
    run_exchange_chain_with(target, prior, config, aux.as_ref())
}

pub fn run_exchange_chain_with(
    target: &ExchangeTarget,
    prior: &PriorSpec,
    config: &ChainConfig,
    aux: &dyn AuxiliarySampler,
) -> Result<ParameterChain> {
    config.validate()?;
    prior.validate_for(&target.statistic, target.n)?;
    let d = target.statistic.dimension();
    let mut rng = seeded_rng(config.seed);
    let mut theta = initial_theta(prior, d, &mut rng);
    let mut scale = config.proposal_scale;
    let mut window_accepts = 0usize;
    let mut post_accepts = 0usize;
    let mut samples = Vec::new();
    let mut steps = Vec::new();
    let mut accepted = Vec::new();
    for step in 0..config.steps {
        let (next, acc) = exchange_step(
            &theta,
            &target.stat_sum,
            target.count,
            prior,
            scale,
            aux,
            &mut rng,
        )?;
        theta = next;
        if step < config.burnin {
            window_accepts += usize::from(acc);
            if (step + 1) % ADAPT_WINDOW == 0 {
                let rate = window_accepts as f64 / ADAPT_WINDOW as f64;
                scale *= (2.0 * (rate - TARGET_ACCEPTANCE)).exp();
                window_accepts = 0;
            }
        } else {
            post_accepts += usize::from(acc);
        }
        if config.keeps(step) {
            samples.push(theta.clone());
            steps.push(step);
            accepted.push(acc);
        }
    }
    let acceptance_rate = post_accepts as f64 / (config.steps - config.burnin) as f64;
    let traces: Vec<Vec<f64>> = (0..d)
        .map(|i| samples.iter().map(|s| s[i]).collect())
        .collect();
    let diagnostics = ChainDiagnostics {
        ess: traces.iter().map(|t| effective_sample_size(t)).collect(),
        rhat: traces.iter().map(|t| split_rhat(&[t])).collect(),
        acceptance_rate,
        seed: config.seed,
    };
    Ok(ParameterChain {
        samples,
        steps,
        accepted,
        acceptance_rate,
        proposal_scale: scale,
        seed: config.seed,
        diagnostics,
        approximate: !aux.is_exact(),
    })
}

/// Independent replicate chains, chain `c` seeded with `derive_seed(seed, c)`.
pub fn run_replicate_chains(
    target: &ExchangeTarget,
    prior: &PriorSpec,
    config: &ChainConfig,
    chains: usize,
) -> Result<Vec<ParameterChain>> {
    if chains == 0 {
        return Err(Error::InvalidArgument("need at least one chain".into()));
    }
    let aux = auxiliary_for(&target.statistic, target.n, config.inner_steps)?;
    let aux = aux.as_ref();
    (0..chains as u64)
        .into_par_iter()
        .map(|c| {
            run_exchange_chain_with(
                target,
                prior,
                &config.with_seed(derive_seed(config.seed, c)),
                aux,
            )
        })
        .collect()
}

/// Split R̂ per coordinate across replicate chains.
pub fn replicate_rhat(chains: &[ParameterChain]) -> Vec<f64> {
    let d = chains
        .first()
        .and_then(|c| c.samples.first())
        .map_or(0, |s| s.len());
    (0..d)
        .map(|i| {
            let traces: Vec<Vec<f64>> = chains.iter().map(|c| c.coordinate(i)).collect();
            let refs: Vec<&[f64]> = traces.iter().map(|t| t.as_slice()).collect();
            split_rhat(&refs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::total_variation;

    #[test]
    fn config_checks() {
        assert!(ChainConfig::default().validate().is_ok());
        assert!(ChainConfig::new(10, 10, 0).validate().is_err());
        let mut c = ChainConfig::default();
        c.thin = 0;
        assert!(c.validate().is_err());
        c.thin = 1;
        c.proposal_scale = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_theta_accepts_everything() {
        let s = StatisticSpec::fixed_points();
        let est = metropolis_moments(&s, 8, &[0.0], &ChainConfig::new(2000, 0, 1)).unwrap();
        assert_eq!(est.acceptance_rate, 1.0);
    }

    #[test]
    fn level_sampler_n4_uniform() {
        let counts = fixed_point_counts(4).unwrap();
        let sampler = FixedPointLevelSampler::new(&counts, 0.0);
        let mut rng = seeded_rng(3);
        let mut hist = [0usize; 5];
        let trials = 240_000;
        for _ in 0..trials {
            hist[sampler.sample(&mut rng)] += 1;
        }
        assert_eq!(hist[3], 0);
        let freq: Vec<f64> = hist.iter().map(|&h| h as f64 / trials as f64).collect();
        let exact = [9.0 / 24.0, 8.0 / 24.0, 6.0 / 24.0, 0.0, 1.0 / 24.0];
        assert!(total_variation(&freq, &exact) < 0.005);
    }

    #[test]
    fn level_sampler_very_negative_theta() {
        for seed in 0..50 {
            assert_eq!(sample_f_level(52, -60.0, seed).unwrap(), 0);
        }
    }

    #[test]
    fn equal_proposal_has_unit_ratio() {
        let t = [0.7];
        assert_eq!(exchange_log_ratio(&t, &t, &[12.0], &[3.0], -1.0, -1.0), 0.0);
        let aux = ExactFixedPointAuxiliary::new(6).unwrap();
        let prior = PriorSpec::normal(0.0, 1.0).unwrap();
        let mut rng = seeded_rng(0);
        for _ in 0..100 {
            assert!(exchange_transition(&t, &t, &[12.0], 20, &prior, &aux, &mut rng).unwrap());
        }
    }

    #[test]
    fn chains_are_deterministic() {
        let target =
            ExchangeTarget::from_summary(&StatisticSpec::fixed_points(), 6, 30, vec![40.0])
                .unwrap();
        let prior = PriorSpec::normal(0.0, 1.0).unwrap();
        let cfg = ChainConfig::new(300, 50, 17);
        let a = run_exchange_chain(&target, &prior, &cfg).unwrap();
        let b = run_exchange_chain(&target, &prior, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 250);
        assert!(a.acceptance_rate > 0.0 && a.acceptance_rate < 1.0);
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("step,theta_0,accepted\n50,"));
        assert_eq!(text.lines().count(), 251);
    }

    #[test]
    fn metropolis_auxiliary_is_flagged() {
        let target =
            ExchangeTarget::from_summary(&StatisticSpec::adjacent_pairs(), 6, 10, vec![5.0])
                .unwrap();
        let prior = PriorSpec::normal(0.0, 1.0).unwrap();
        let mut cfg = ChainConfig::new(60, 10, 1);
        cfg.inner_steps = 50;
        let chain = run_exchange_chain(&target, &prior, &cfg).unwrap();
        assert!(chain.approximate);
        let conj = PriorSpec::conjugate(1.0, vec![1.0]).unwrap();
        assert!(matches!(
            run_exchange_chain(&target, &conj, &cfg),
            Err(Error::NormalizerUnavailable(_))
        ));
    }
}
