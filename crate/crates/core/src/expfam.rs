//! Exponential families `P_θ(σ) = exp(θ·T(σ) − m(θ))` on `S_n`, their
//! moments, and priors over `θ`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{exact_log_z, fixed_point_counts};
use crate::error::{Error, Result};
use crate::normalizer::{
    importance_log_z, importance_moments, thermodynamic_log_z, NormalizerTable,
};
use crate::numeric::{ln_factorial, log_sum_exp};
use crate::perm::Permutation;
use crate::samplers::{metropolis_moments, ChainConfig};
use crate::statistic::StatisticSpec;

/// Symmetric `d × d` matrix, row-major.
pub type Matrix = Vec<Vec<f64>>;

/// How `m(θ)` and its derivatives are obtained.
#[derive(Debug, Clone)]
pub enum NormalizerSource {
    /// Level-set counts (fixed-point statistic) or `θ = 0`.
    Exact,
    /// Uniform-proposal importance sampling.
    Importance { samples: usize, seed: u64 },
    /// Metropolis estimates of `∇m` integrated from the uniform anchor.
    Thermodynamic {
        grid_points: usize,
        chain: ChainConfig,
    },
    /// Interpolation in a precomputed table.
    Table(Arc<NormalizerTable>),
}

#[derive(Debug, Clone)]
pub struct ExpFamilyModel {
    statistic: StatisticSpec,
    n: usize,
    theta: Vec<f64>,
    source: NormalizerSource,
}

impl ExpFamilyModel {
    pub fn new(
        statistic: StatisticSpec,
        n: usize,
        theta: Vec<f64>,
        source: NormalizerSource,
    ) -> Result<Self> {
        statistic.check_deck(n)?;
        if theta.len() != statistic.dimension() {
            return Err(Error::InvalidArgument(format!(
                "theta has dimension {} but statistic {} has dimension {}",
                theta.len(),
                statistic,
                statistic.dimension()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("theta must be finite".into()));
        }
        Ok(Self {
            statistic,
            n,
            theta,
            source,
        })
    }

    /// Fixed-point family with the exact normalizer.
    pub fn fixed_points(n: usize, theta: f64) -> Result<Self> {
        Self::new(
            StatisticSpec::fixed_points(),
            n,
            vec![theta],
            NormalizerSource::Exact,
        )
    }

    pub fn statistic(&self) -> &StatisticSpec {
        &self.statistic
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn source(&self) -> &NormalizerSource {
        &self.source
    }

    pub fn with_theta(&self, theta: Vec<f64>) -> Result<Self> {
        Self::new(self.statistic.clone(), self.n, theta, self.source.clone())
    }

    fn is_origin(&self) -> bool {
        self.theta.iter().all(|&t| t == 0.0)
    }

    /// `m(θ) = ln Σ_σ e^{θ·T(σ)}`.
    pub fn log_normalizer(&self) -> Result<f64> {
        if self.is_origin() {
            return Ok(ln_factorial(self.n as u64));
        }
        match &self.source {
            NormalizerSource::Exact => {
                if self.statistic.is_fixed_points() {
                    exact_log_z(self.n, self.theta[0])
                } else {
                    Err(Error::NormalizerUnavailable(format!(
                        "no exact normalizer for statistic {}",
                        self.statistic
                    )))
                }
            }
            NormalizerSource::Importance { samples, seed } => {
                importance_log_z(&self.statistic, self.n, &self.theta, *samples, *seed)
                    .map(|e| e.log_z)
            }
            NormalizerSource::Thermodynamic { grid_points, chain } => {
                thermodynamic_log_z(&self.statistic, self.n, &self.theta, *grid_points, chain)
                    .map(|e| e.log_z)
            }
            NormalizerSource::Table(table) => table.log_z(&self.theta),
        }
    }

    /// `θ·T(σ) − m(θ)`.
    pub fn log_density(&self, sigma: &Permutation) -> Result<f64> {
        if sigma.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation of size {} for a model on S_{}",
                sigma.n(),
                self.n
            )));
        }
        Ok(self.statistic.dot(&self.theta, sigma) - self.log_normalizer()?)
    }

    /// `∇m(θ) = E_θ[T]`.
    pub fn mean_parameter(&self) -> Result<Vec<f64>> {
        Ok(self.moments()?.0)
    }

    /// `∇²m(θ) = Cov_θ(T)`.
    pub fn covariance_parameter(&self) -> Result<Matrix> {
        Ok(self.moments()?.1)
    }

    fn moments(&self) -> Result<(Vec<f64>, Matrix)> {
        match &self.source {
            NormalizerSource::Exact => {
                if self.statistic.is_fixed_points() {
                    let (mean, var) = exact_fixed_point_moments(self.n, self.theta[0])?;
                    Ok((vec![mean], vec![vec![var]]))
                } else {
                    Err(Error::NormalizerUnavailable(format!(
                        "no exact moments for statistic {}",
                        self.statistic
                    )))
                }
            }
            NormalizerSource::Importance { samples, seed } => {
                importance_moments(&self.statistic, self.n, &self.theta, *samples, *seed)
            }
            NormalizerSource::Thermodynamic { chain, .. } => {
                let est = metropolis_moments(&self.statistic, self.n, &self.theta, chain)?;
                Ok((est.mean, est.covariance))
            }
            NormalizerSource::Table(table) => {
                let slope = table.directional_derivative(&self.theta)?;
                if self.statistic.dimension() != 1 {
                    return Err(Error::NormalizerUnavailable(
                        "a ray table only provides the directional derivative".into(),
                    ));
                }
                Err(Error::NormalizerUnavailable(format!(
                    "table gives E[T] = {slope} but no covariance; use mean_from_table"
                )))
            }
        }
    }

    /// Mean parameter from a 1-d table's interpolated derivative.
    pub fn mean_from_table(&self) -> Result<Vec<f64>> {
        match &self.source {
            NormalizerSource::Table(t) if self.statistic.dimension() == 1 => {
                Ok(vec![t.directional_derivative(&self.theta)?])
            }
            NormalizerSource::Table(_) => Err(Error::NormalizerUnavailable(
                "a ray table only provides the directional derivative".into(),
            )),
            _ => self.mean_parameter(),
        }
    }
}

/// Mean and variance of `F` under `P_θ` from the level-set weights.
pub fn exact_fixed_point_moments(n: usize, theta: f64) -> Result<(f64, f64)> {
    let counts = fixed_point_counts(n)?;
    let lw = counts.log_weights(theta);
    let lz = log_sum_exp(&lw);
    let mut mean = 0.0;
    let mut second = 0.0;
    for (j, l) in lw.iter().enumerate() {
        let p = (l - lz).exp();
        mean += p * j as f64;
        second += p * (j * j) as f64;
    }
    Ok((mean, (second - mean * mean).max(0.0)))
}

/// Prior over the natural parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorSpec {
    /// `∝ exp(n₀ x₀·θ − n₀ m(θ))`.
    Conjugate { n0: f64, x0: Vec<f64> },
    /// Isotropic normal; `variance` is σ², not σ.
    Normal { mean: Vec<f64>, variance: f64 },
    /// Shape/rate gamma over a positive parameter, so `Γ(α, α)` has mean 1.
    Gamma { shape: f64, rate: f64 },
}

impl PriorSpec {
    pub fn normal(mean: f64, variance: f64) -> Result<Self> {
        let p = PriorSpec::Normal {
            mean: vec![mean],
            variance,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        let p = PriorSpec::Gamma { shape, rate };
        p.validate()?;
        Ok(p)
    }

    pub fn conjugate(n0: f64, x0: Vec<f64>) -> Result<Self> {
        let p = PriorSpec::Conjugate { n0, x0 };
        p.validate()?;
        Ok(p)
    }

    /// Conjugate prior centred at `∇m(0)`, the uniform-law mean of `T`.
    pub fn centered_conjugate(statistic: &StatisticSpec, n: usize, n0: f64) -> Result<Self> {
        Self::conjugate(n0, statistic.uniform_mean(n))
    }

    /// Parameter checks that do not need the statistic.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        match self {
            PriorSpec::Conjugate { n0, x0 } => {
                if !(*n0 > 0.0) || !n0.is_finite() {
                    return bad(format!("conjugate prior needs n0 > 0, got {n0}"));
                }
                if x0.is_empty() || x0.iter().any(|v| !v.is_finite()) {
                    return bad("conjugate prior needs a finite x0".into());
                }
            }
            PriorSpec::Normal { mean, variance } => {
                if !(*variance > 0.0) || !variance.is_finite() {
                    return bad(format!("normal prior needs variance > 0, got {variance}"));
                }
                if mean.is_empty() || mean.iter().any(|v| !v.is_finite()) {
                    return bad("normal prior needs a finite mean".into());
                }
            }
            PriorSpec::Gamma { shape, rate } => {
                if !(*shape > 0.0 && *rate > 0.0) || !shape.is_finite() || !rate.is_finite() {
                    return bad(format!(
                        "gamma prior needs shape, rate > 0, got {shape}, {rate}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Checks dimensions and, for conjugate priors, that `x₀` lies inside the
    /// box spanned by the statistic's attainable values (margin 1e-9).
    pub fn validate_for(&self, statistic: &StatisticSpec, n: usize) -> Result<()> {
        self.validate()?;
        let d = statistic.dimension();
        match self {
            PriorSpec::Conjugate { x0, .. } => {
                if x0.len() != d {
                    return Err(Error::InvalidArgument(format!(
                        "x0 has dimension {} but the statistic has dimension {d}",
                        x0.len()
                    )));
                }
                for (v, (lo, hi)) in x0.iter().zip(statistic.support_box(n)) {
                    if !(*v > lo + 1e-9 && *v < hi - 1e-9) {
                        return Err(Error::OutOfRange {
                            what: "conjugate prior mean x0",
                            value: *v,
                            lo,
                            hi,
                        });
                    }
                }
            }
            PriorSpec::Normal { mean, .. } => {
                if mean.len() != 1 && mean.len() != d {
                    return Err(Error::InvalidArgument(format!(
                        "normal prior mean has dimension {} but the statistic has dimension {d}",
                        mean.len()
                    )));
                }
            }
            PriorSpec::Gamma { .. } => {
                if d != 1 {
                    return Err(Error::Unsupported(
                        "gamma priors are one-dimensional".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Prior mean of θ for the given dimension; conjugate priors report `None`.
    pub fn normal_mean(&self, d: usize) -> Option<Vec<f64>> {
        match self {
            PriorSpec::Normal { mean, .. } if mean.len() == 1 => Some(vec![mean[0]; d]),
            PriorSpec::Normal { mean, .. } => Some(mean.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            PriorSpec::Conjugate { n0, x0 } => write!(f, "conjugate:{n0},{}", join(x0)),
            PriorSpec::Normal { mean, variance } => write!(f, "normal:{},{variance}", join(mean)),
            PriorSpec::Gamma { shape, rate } => write!(f, "gamma:{shape},{rate}"),
        }
    }
}

/// Parses `normal:MU,SIGMA2`, `conjugate:N0,X0` and `gamma:ALPHA,BETA`.
/// Vector means are given as extra comma-separated values
/// (`normal:MU1,...,MUd,SIGMA2`, `conjugate:N0,X1,...,Xd`).
impl FromStr for PriorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("prior '{s}' is not KIND:ARGS")))?;
        let kind = kind.trim();
        if kind == "jeffreys" {
            return Err(Error::Unsupported(
                "the Jeffreys prior on the simplex is improper; its posterior stays improper"
                    .into(),
            ));
        }
        let nums = args
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("prior argument '{t}': {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let need = |k: usize| -> Result<()> {
            if nums.len() < k {
                Err(Error::InvalidArgument(format!(
                    "prior '{s}' needs at least {k} numbers"
                )))
            } else {
                Ok(())
            }
        };
        let prior = match kind {
            "normal" => {
                need(2)?;
                let (mean, var) = nums.split_at(nums.len() - 1);
                PriorSpec::Normal {
                    mean: mean.to_vec(),
                    variance: var[0],
                }
            }
            "conjugate" => {
                need(2)?;
                PriorSpec::Conjugate {
                    n0: nums[0],
                    x0: nums[1..].to_vec(),
                }
            }
            "gamma" => {
                if nums.len() != 2 {
                    return Err(Error::InvalidArgument(format!(
                        "prior '{s}' needs ALPHA,BETA"
                    )));
                }
                PriorSpec::Gamma {
                    shape: nums[0],
                    rate: nums[1],
                }
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown prior kind '{other}'"
                )))
            }
        };
        prior.validate()?;
        Ok(prior)
    }
}

/// Log normalizer callback used by conjugate priors.
pub type LogNormalizerFn<'a> = &'a dyn Fn(&[f64]) -> Result<f64>;

/// Prior log density at `theta`, up to an additive constant for conjugate priors.
///
/// Gamma priors treat `theta[0]` as the positive rate and return `-inf`
/// outside their support.
pub fn prior_log_density(
    prior: &PriorSpec,
    theta: &[f64],
    m_eval: Option<LogNormalizerFn<'_>>,
) -> Result<f64> {
    match prior {
        PriorSpec::Normal { mean, variance } => {
            let d = theta.len() as f64;
            let sq: f64 = theta
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let mu = if mean.len() == 1 { mean[0] } else { mean[i] };
                    (t - mu) * (t - mu)
                })
                .sum();
            Ok(-sq / (2.0 * variance) - 0.5 * d * (2.0 * std::f64::consts::PI * variance).ln())
        }
        PriorSpec::Gamma { shape, rate } => {
            let x = theta[0];
            if x <= 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            Ok(
                shape * rate.ln() - statrs::function::gamma::ln_gamma(*shape)
                    + (shape - 1.0) * x.ln()
                    - rate * x,
            )
        }
        PriorSpec::Conjugate { n0, x0 } => {
            let m = m_eval.ok_or_else(|| {
                Error::NormalizerUnavailable("conjugate prior density needs m(θ)".into())
            })?;
            let dot: f64 = x0.iter().zip(theta).map(|(a, b)| a * b).sum();
            Ok(n0 * dot - n0 * m(theta)?)
        }
    }
}

/// Conjugate update `(n₀, x₀) → (n₀ + N, (n₀ x₀ + N T̄)/(n₀ + N))`.
pub fn conjugate_posterior_update(
    prior: &PriorSpec,
    count: usize,
    t_bar: &[f64],
) -> Result<PriorSpec> {
    let PriorSpec::Conjugate { n0, x0 } = prior else {
        return Err(Error::Unsupported(format!(
            "closed-form posterior update needs a conjugate prior, got {prior}"
        )));
    };
    if count == 0 {
        return Ok(prior.clone());
    }
    if t_bar.len() != x0.len() {
        return Err(Error::InvalidArgument(format!(
            "data mean has dimension {} but x0 has dimension {}",
            t_bar.len(),
            x0.len()
        )));
    }
    let big_n = count as f64;
    let post_n = n0 + big_n;
    let x = x0
        .iter()
        .zip(t_bar)
        .map(|(a, t)| (n0 * a + big_n * t) / post_n)
        .collect();
    Ok(PriorSpec::Conjugate { n0: post_n, x0: x })
}

/// A prior together with the data summary it is conditioned on.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSpec {
    pub prior: PriorSpec,
    pub count: usize,
    pub mean_statistic: Vec<f64>,
}

impl PosteriorSpec {
    /// Conjugate posterior parameters `(n₀', x₀')`.
    pub fn conjugate_parameters(&self) -> Result<(f64, Vec<f64>)> {
        match conjugate_posterior_update(&self.prior, self.count, &self.mean_statistic)? {
            PriorSpec::Conjugate { n0, x0 } => Ok((n0, x0)),
            _ => unreachable!("conjugate update returns a conjugate prior"),
        }
    }
}

/// Ways of choosing the prior sample size `n₀` of a centred conjugate prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum N0Strategy {
    /// `n₀ = 1`.
    Unit,
    /// A value reasoned out by the user, e.g. from imagined results.
    UserSupplied(f64),
    /// Carry `n₀` along and report the Bayes factor as a curve.
    Sweep(Vec<f64>),
    EmpiricalBayes,
    VanishingLimit,
}

impl Default for N0Strategy {
    fn default() -> Self {
        N0Strategy::Unit
    }
}

impl N0Strategy {
    /// The `n₀` values to evaluate.
    pub fn values(&self) -> Result<Vec<f64>> {
        let vals = match self {
            N0Strategy::Unit => vec![1.0],
            N0Strategy::UserSupplied(v) => vec![*v],
            N0Strategy::Sweep(v) => v.clone(),
            N0Strategy::EmpiricalBayes => {
                return Err(Error::NotImplemented(
                    "empirical-Bayes estimation of n0 is not available; pick n0 or use a sweep"
                        .into(),
                ))
            }
            N0Strategy::VanishingLimit => {
                return Err(Error::NotImplemented(
                    "the n0 -> 0 limit is not available; pick n0 or use a sweep".into(),
                ))
            }
        };
        if vals.is_empty() || vals.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "n0 values must be positive: {vals:?}"
            )));
        }
        Ok(vals)
    }

    /// `unit`, `user:N0`, `sweep:A,B,...`, `empirical-bayes`, `limit-zero`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>> {
            arg.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidArgument(format!("n0 '{t}': {e}")))
                })
                .collect()
        };
        match kind {
            "unit" => Ok(N0Strategy::Unit),
            "user" => Ok(N0Strategy::UserSupplied(nums()?[0])),
            "sweep" => Ok(N0Strategy::Sweep(nums()?)),
            "empirical-bayes" => Ok(N0Strategy::EmpiricalBayes),
            "limit-zero" => Ok(N0Strategy::VanishingLimit),
            other => Err(Error::InvalidArgument(format!(
                "unknown n0 strategy '{other}'"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    #[test]
    fn origin_is_uniform() {
        let m = ExpFamilyModel::fixed_points(6, 0.0).unwrap();
        let lnf = ln_factorial(6);
        for p in all_permutations(6) {
            assert!((m.log_density(&p).unwrap() + lnf).abs() < 1e-12);
        }
        let adj = ExpFamilyModel::new(
            StatisticSpec::adjacent_pairs(),
            52,
            vec![0.0],
            NormalizerSource::Exact,
        )
        .unwrap();
        assert!((adj.log_normalizer().unwrap() - ln_factorial(52)).abs() < 1e-9);
    }

    #[test]
    fn log_density_example() {
        let m = ExpFamilyModel::fixed_points(4, 2f64.ln()).unwrap();
        let v = m.log_density(&Permutation::identity(4)).unwrap();
        assert!((v - (4.0 * 2f64.ln() - 65f64.ln())).abs() < 1e-12);
        assert!(m.log_density(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn exact_source_refuses_other_statistics() {
        let m = ExpFamilyModel::new(
            StatisticSpec::adjacent_pairs(),
            6,
            vec![0.5],
            NormalizerSource::Exact,
        )
        .unwrap();
        assert!(matches!(
            m.log_normalizer(),
            Err(Error::NormalizerUnavailable(_))
        ));
        assert!(matches!(
            m.log_density(&Permutation::identity(6)),
            Err(Error::NormalizerUnavailable(_))
        ));
    }

    #[test]
    fn moments_at_origin() {
        let m = ExpFamilyModel::fixed_points(52, 0.0).unwrap();
        assert!((m.mean_parameter().unwrap()[0] - 1.0).abs() < 1e-12);
        assert!((m.covariance_parameter().unwrap()[0][0] - 1.0).abs() < 1e-12);
        assert!((StatisticSpec::adjacent_pairs().uniform_mean(52)[0] - 51.0 / 52.0).abs() < 1e-15);
    }

    #[test]
    fn variance_nonnegative_on_grid() {
        for i in -40..=40 {
            let (_, v) = exact_fixed_point_moments(13, i as f64 * 0.25).unwrap();
            assert!(v >= 0.0);
        }
    }

    #[test]
    fn prior_grammar() {
        let p: PriorSpec = "normal:0,0.1".parse().unwrap();
        assert_eq!(p, PriorSpec::normal(0.0, 0.1).unwrap());
        assert_eq!(p.to_string(), "normal:0,0.1");
        let c: PriorSpec = "conjugate:1,1".parse().unwrap();
        assert_eq!(
            c,
            PriorSpec::Conjugate {
                n0: 1.0,
                x0: vec![1.0]
            }
        );
        let g: PriorSpec = "gamma:2,2".parse().unwrap();
        assert_eq!(g.to_string(), "gamma:2,2");
        assert!("normal:0,-1".parse::<PriorSpec>().is_err());
        assert!("conjugate:0,1".parse::<PriorSpec>().is_err());
        assert!("gamma:1,0".parse::<PriorSpec>().is_err());
        assert!("cauchy:0,1".parse::<PriorSpec>().is_err());
        assert!(matches!(
            "jeffreys:1".parse::<PriorSpec>(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn conjugate_mean_must_be_interior() {
        let f = StatisticSpec::fixed_points();
        assert!(PriorSpec::conjugate(1.0, vec![1.0])
            .unwrap()
            .validate_for(&f, 52)
            .is_ok());
        assert!(PriorSpec::conjugate(1.0, vec![0.0])
            .unwrap()
            .validate_for(&f, 52)
            .is_err());
        assert!(PriorSpec::conjugate(1.0, vec![52.0])
            .unwrap()
            .validate_for(&f, 52)
            .is_err());
        assert!(PriorSpec::conjugate(1.0, vec![1.0, 2.0])
            .unwrap()
            .validate_for(&f, 52)
            .is_err());
        let w = StatisticSpec::wash_triple();
        let c = PriorSpec::centered_conjugate(&w, 52, 1.0).unwrap();
        assert!(c.validate_for(&w, 52).is_ok());
    }

    #[test]
    fn prior_densities() {
        let p = PriorSpec::normal(0.0, 0.1).unwrap();
        let at0 = prior_log_density(&p, &[0.0], None).unwrap();
        for t in [-1.0, -0.1, 0.05, 0.3] {
            assert!(prior_log_density(&p, &[t], None).unwrap() < at0);
        }
        let g = PriorSpec::gamma(2.0, 2.0).unwrap();
        let v = prior_log_density(&g, &[1.0], None).unwrap();
        assert!((v - ((4.0 * (-2f64).exp()).ln() - 0.0)).abs() < 1e-12);
        assert_eq!(
            prior_log_density(&g, &[0.0], None).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(
            prior_log_density(&g, &[-1.0], None).unwrap(),
            f64::NEG_INFINITY
        );
        let c = PriorSpec::conjugate(1.0, vec![1.0]).unwrap();
        assert!(prior_log_density(&c, &[0.0], None).is_err());
    }

    #[test]
    fn centred_conjugate_is_stationary_at_origin() {
        let n = 6;
        let c = PriorSpec::centered_conjugate(&StatisticSpec::fixed_points(), n, 3.0).unwrap();
        let m = |t: &[f64]| exact_log_z(n, t[0]);
        let h = 1e-5;
        let up = prior_log_density(&c, &[h], Some(&m)).unwrap();
        let dn = prior_log_density(&c, &[-h], Some(&m)).unwrap();
        assert!(((up - dn) / (2.0 * h)).abs() < 1e-6);
    }

    #[test]
    fn posterior_update_examples() {
        let c = PriorSpec::conjugate(1.0, vec![1.0]).unwrap();
        assert_eq!(conjugate_posterior_update(&c, 0, &[5.0]).unwrap(), c);
        let post = PosteriorSpec {
            prior: c.clone(),
            count: 199,
            mean_statistic: vec![0.8],
        };
        let (n0, x0) = post.conjugate_parameters().unwrap();
        assert_eq!(n0, 200.0);
        assert!((x0[0] - 0.801).abs() < 1e-12);
        let normal = PriorSpec::normal(0.0, 1.0).unwrap();
        assert!(matches!(
            conjugate_posterior_update(&normal, 3, &[1.0]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn n0_strategies() {
        assert_eq!(N0Strategy::default().values().unwrap(), vec![1.0]);
        assert_eq!(
            N0Strategy::parse("user:4").unwrap().values().unwrap(),
            vec![4.0]
        );
        assert_eq!(
            N0Strategy::parse("sweep:0.5,1,2")
                .unwrap()
                .values()
                .unwrap(),
            vec![0.5, 1.0, 2.0]
        );
        assert!(matches!(
            N0Strategy::EmpiricalBayes.values(),
            Err(Error::NotImplemented(_))
        ));
        assert!(matches!(
            N0Strategy::parse("limit-zero").unwrap().values(),
            Err(Error::NotImplemented(_))
        ));
        assert!(N0Strategy::UserSupplied(-1.0).values().is_err());
    }
}
