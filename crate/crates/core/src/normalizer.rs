//! Estimates of `m(θ) = log Z(θ)`: uniform-proposal importance sampling,
//! thermodynamic integration from the uniform anchor, exact level sets, and
//! interpolated tables built from any of them.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::exact_log_z;
use crate::error::{Error, Result};
use crate::expfam::Matrix;
use crate::numeric::{ln_factorial, log_sum_exp, simpson, simpson_weights, Pchip};
use crate::perm::Permutation;
use crate::rng::{derive_seed, stream_rng};
use crate::samplers::{metropolis_moments, ChainConfig};
use crate::statistic::StatisticSpec;

pub const TABLE_VERSION: u32 = 1;
pub const MIN_IMPORTANCE_SAMPLES: usize = 1000;
const IMPORTANCE_BLOCK: usize = 4096;
const MIN_ESS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogZEstimate {
    pub log_z: f64,
    pub stderr: f64,
    /// Importance-weight ESS, or the smallest chain ESS for thermodynamic runs.
    pub ess: f64,
    /// Richardson estimate of the quadrature error (thermodynamic only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_error: Option<f64>,
}

impl LogZEstimate {
    fn anchored(n: usize) -> Self {
        Self {
            log_z: ln_factorial(n as u64),
            stderr: 0.0,
            ess: f64::INFINITY,
            quadrature_error: None,
        }
    }
}

fn check_theta(statistic: &StatisticSpec, n: usize, theta: &[f64]) -> Result<()> {
    statistic.check_deck(n)?;
    if theta.len() != statistic.dimension() {
        return Err(Error::InvalidArgument(format!(
            "theta has dimension {} but the statistic has dimension {}",
            theta.len(),
            statistic.dimension()
        )));
    }
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("theta must be finite".into()));
    }
    Ok(())
}

/// Uniform draws in fixed-size blocks, block `b` from stream `b` of `seed`,
/// so the result is independent of the thread count.
fn importance_draws(
    statistic: &StatisticSpec,
    n: usize,
    theta: &[f64],
    samples: usize,
    seed: u64,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let blocks = samples.div_ceil(IMPORTANCE_BLOCK);
    let parts: Vec<(Vec<f64>, Vec<Vec<f64>>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let len = IMPORTANCE_BLOCK.min(samples - b * IMPORTANCE_BLOCK);
            let mut lw = Vec::with_capacity(len);
            let mut ts = Vec::with_capacity(len);
            for _ in 0..len {
                let sigma = Permutation::random_uniform(n, &mut rng);
                let t = statistic.evaluate(&sigma);
                lw.push(t.iter().zip(theta).map(|(a, b)| a * b).sum());
                ts.push(t);
            }
            (lw, ts)
        })
        .collect();
    let mut lw = Vec::with_capacity(samples);
    let mut ts = Vec::with_capacity(samples);
    for (a, b) in parts {
        lw.extend(a);
        ts.extend(b);
    }
    (lw, ts)
}

fn normalized_weights(log_weights: &[f64]) -> (Vec<f64>, f64) {
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
    let s: f64 = w.iter().sum();
    let s2: f64 = w.iter().map(|x| x * x).sum();
    (w, s * s / s2)
}

/// `log n! + log((1/M) Σ e^{θ·T(σᵢ)})` with `σᵢ` uniform; the standard error
/// comes from the delta method on the log of the weight mean.
pub fn importance_log_z(
    statistic: &StatisticSpec,
    n: usize,
    theta: &[f64],
    samples: usize,
    seed: u64,
) -> Result<LogZEstimate> {
    check_theta(statistic, n, theta)?;
    if samples < MIN_IMPORTANCE_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "importance sampling needs at least {MIN_IMPORTANCE_SAMPLES} samples, got {samples}"
        )));
    }
    if theta.iter().all(|&t| t == 0.0) {
        return Ok(LogZEstimate::anchored(n));
    }
    let (lw, _) = importance_draws(statistic, n, theta, samples, seed);
    let (w, ess) = normalized_weights(&lw);
    if ess < MIN_ESS {
        return Err(Error::DegenerateWeights { ess });
    }
    let m = samples as f64;
    let wbar = w.iter().sum::<f64>() / m;
    let var = w.iter().map(|x| (x - wbar) * (x - wbar)).sum::<f64>() / (m - 1.0);
    Ok(LogZEstimate {
        log_z: ln_factorial(n as u64) + log_sum_exp(&lw) - m.ln(),
        stderr: var.sqrt() / (m.sqrt() * wbar),
        ess,
        quadrature_error: None,
    })
}

/// Self-normalized importance estimates of `E_θ[T]` and `Cov_θ(T)`.
pub fn importance_moments(
    statistic: &StatisticSpec,
    n: usize,
    theta: &[f64],
    samples: usize,
    seed: u64,
) -> Result<(Vec<f64>, Matrix)> {
    check_theta(statistic, n, theta)?;
    if samples < MIN_IMPORTANCE_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "importance sampling needs at least {MIN_IMPORTANCE_SAMPLES} samples, got {samples}"
        )));
    }
    let d = statistic.dimension();
    let (lw, ts) = importance_draws(statistic, n, theta, samples, seed);
    let (w, ess) = normalized_weights(&lw);
    if ess < MIN_ESS {
        return Err(Error::DegenerateWeights { ess });
    }
    let total: f64 = w.iter().sum();
    let mut mean = vec![0.0; d];
    for (wi, t) in w.iter().zip(&ts) {
        for a in 0..d {
            mean[a] += wi * t[a];
        }
    }
    mean.iter_mut().for_each(|m| *m /= total);
    let mut cov = vec![vec![0.0; d]; d];
    for (wi, t) in w.iter().zip(&ts) {
        for a in 0..d {
            for b in 0..d {
                cov[a][b] += wi * (t[a] - mean[a]) * (t[b] - mean[b]);
            }
        }
    }
    cov.iter_mut().flatten().for_each(|c| *c /= total);
    Ok((mean, cov))
}

/// Integrand `θ·E_{tθ}[T]` at `t = i/(points-1)` with its standard error and
/// chain ESS. The `t = 0` node uses the exact uniform mean.
fn ray_integrand(
    statistic: &StatisticSpec,
    n: usize,
    theta: &[f64],
    ts: &[f64],
    chain: &ChainConfig,
) -> Result<Vec<(f64, f64, f64)>> {
    let uniform = statistic.uniform_mean(n);
    ts.par_iter()
        .enumerate()
        .map(|(i, &t)| {
            if t == 0.0 {
                let g = theta.iter().zip(&uniform).map(|(a, b)| a * b).sum();
                return Ok((g, 0.0, f64::INFINITY));
            }
            let point: Vec<f64> = theta.iter().map(|x| x * t).collect();
            let est = metropolis_moments(
                statistic,
                n,
                &point,
                &chain.with_seed(derive_seed(chain.seed, i as u64)),
            )?;
            let varies = est
                .covariance
                .iter()
                .enumerate()
                .any(|(a, row)| row[a] > 0.0);
            if varies && est.ess < MIN_ESS {
                return Err(Error::Diagnostics(format!(
                    "Metropolis chain at theta {point:?} has ESS {:.1} < {MIN_ESS} \
                     (acceptance {:.3}, {} kept draws)",
                    est.ess, est.acceptance_rate, est.samples
                )));
            }
            let g = theta.iter().zip(&est.mean).map(|(a, b)| a * b).sum();
            let var: f64 = theta
                .iter()
                .zip(&est.stderr)
                .map(|(a, s)| (a * s) * (a * s))
                .sum();
            Ok((g, var.sqrt(), est.ess))
        })
        .collect()
}

/// `m(θ) = m(0) + ∫₀¹ θ·E_{tθ}[T] dt` by Simpson's rule on `grid_points`
/// equally spaced nodes along the ray from 0 to θ. When the node count allows
/// halving, the Richardson difference `(I_h − I_2h)/15` is reported.
pub fn thermodynamic_log_z(
    statistic: &StatisticSpec,
    n: usize,
    theta: &[f64],
    grid_points: usize,
    chain: &ChainConfig,
) -> Result<LogZEstimate> {
    check_theta(statistic, n, theta)?;
    chain.validate()?;
    if grid_points < 5 || grid_points % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "thermodynamic integration needs an odd number of grid points >= 5, got {grid_points}"
        )));
    }
    if theta.iter().all(|&t| t == 0.0) {
        return Ok(LogZEstimate::anchored(n));
    }
    let h = 1.0 / (grid_points - 1) as f64;
    let ts: Vec<f64> = (0..grid_points).map(|i| i as f64 * h).collect();
    let nodes = ray_integrand(statistic, n, theta, &ts, chain)?;
    let values: Vec<f64> = nodes.iter().map(|v| v.0).collect();
    let integral = simpson(&values, h)?;
    let weights = simpson_weights(grid_points);
    let var: f64 = weights
        .iter()
        .zip(&nodes)
        .map(|(w, v)| (w * h / 3.0 * v.1).powi(2))
        .sum();
    let quadrature_error = if (grid_points - 1) % 4 == 0 {
        let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
        Some((integral - simpson(&coarse, 2.0 * h)?) / 15.0)
    } else {
        None
    };
    Ok(LogZEstimate {
        log_z: ln_factorial(n as u64) + integral,
        stderr: var.sqrt(),
        ess: nodes.iter().map(|v| v.2).fold(f64::INFINITY, f64::min),
        quadrature_error,
    })
}

/// Route used to fill a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalizerMethod {
    Exact,
    Importance {
        samples: usize,
    },
    Thermodynamic {
        steps: usize,
        burnin: usize,
        thin: usize,
    },
}

impl fmt::Display for NormalizerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizerMethod::Exact => f.write_str("exact"),
            NormalizerMethod::Importance { .. } => f.write_str("importance"),
            NormalizerMethod::Thermodynamic { .. } => f.write_str("thermodynamic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TablePoint {
    pub theta: f64,
    pub log_z: f64,
    pub stderr: f64,
}

/// `log Z` on a grid with monotone cubic (PCHIP) interpolation. For
/// statistics of dimension `d > 1` the grid runs along the ray `s·direction`
/// and `theta` in each point is the ray coordinate `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizerTable {
    pub version: u32,
    pub statistic: StatisticSpec,
    pub n: usize,
    pub method: NormalizerMethod,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    /// Richardson estimate `|I_h - I_2h| / 15` of the thermodynamic
    /// quadrature error, largest over the two sides of the anchor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_error: Option<f64>,
    pub grid: Vec<TablePoint>,
}

impl NormalizerTable {
    pub fn range(&self) -> (f64, f64) {
        (self.grid[0].theta, self.grid[self.grid.len() - 1].theta)
    }

    fn interpolant(&self) -> Result<Pchip> {
        Pchip::new(
            self.grid.iter().map(|p| p.theta).collect(),
            self.grid.iter().map(|p| p.log_z).collect(),
        )
    }

    /// Ray coordinate of `theta`, rejecting points off the ray or the range.
    fn coordinate(&self, theta: &[f64]) -> Result<f64> {
        if theta.len() != self.statistic.dimension() {
            return Err(Error::InvalidArgument(format!(
                "theta has dimension {} but the table's statistic has dimension {}",
                theta.len(),
                self.statistic.dimension()
            )));
        }
        let s = match &self.direction {
            None => theta[0],
            Some(dir) => {
                let s: f64 = theta.iter().zip(dir).map(|(a, b)| a * b).sum();
                let off: f64 = theta
                    .iter()
                    .zip(dir)
                    .map(|(a, b)| (a - s * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if off > 1e-9 * (1.0 + s.abs()) {
                    return Err(Error::NormalizerUnavailable(format!(
                        "theta {theta:?} is not on the table's ray"
                    )));
                }
                s
            }
        };
        let (lo, hi) = self.range();
        let eps = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if s < lo - eps || s > hi + eps {
            return Err(Error::OutOfRange {
                what: "theta",
                value: s,
                lo,
                hi,
            });
        }
        Ok(s.clamp(lo, hi))
    }

    pub fn log_z(&self, theta: &[f64]) -> Result<f64> {
        let s = self.coordinate(theta)?;
        if s == 0.0 {
            return Ok(ln_factorial(self.n as u64));
        }
        Ok(self.interpolant()?.eval(s))
    }

    /// Slope of the interpolant along the grid direction at `theta`.
    pub fn directional_derivative(&self, theta: &[f64]) -> Result<f64> {
        let s = self.coordinate(theta)?;
        Ok(self.interpolant()?.derivative(s))
    }

    /// Second differences must be nonnegative up to three combined standard
    /// errors of the three values involved.
    pub fn check_convexity(&self) -> Result<()> {
        for w in self.grid.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let h1 = b.theta - a.theta;
            let h2 = c.theta - b.theta;
            let second = (c.log_z - b.log_z) / h2 - (b.log_z - a.log_z) / h1;
            let noise = ((a.stderr / h1).powi(2)
                + (b.stderr * (1.0 / h1 + 1.0 / h2)).powi(2)
                + (c.stderr / h2).powi(2))
            .sqrt();
            if second < -3.0 * noise - 1e-9 * (1.0 + b.log_z.abs()) {
                return Err(Error::Diagnostics(format!(
                    "log Z is not convex near theta = {} (second difference {second:.3e})",
                    b.theta
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let table: NormalizerTable = serde_json::from_str(s)?;
        if table.version != TABLE_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported normalizer table version {}",
                table.version
            )));
        }
        if table.grid.len() < 2 || table.grid.windows(2).any(|w| !(w[0].theta < w[1].theta)) {
            return Err(Error::InvalidArgument(
                "normalizer table grid must be strictly increasing with at least two points".into(),
            ));
        }
        Ok(table)
    }
}

/// `θ` grid of `resolution` equally spaced points over `range`, with 0 added
/// when it falls strictly inside and is not already a node.
fn table_grid(range: (f64, f64), resolution: usize) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "invalid theta range {lo}..{hi}"
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidArgument(
            "table resolution must be at least 2".into(),
        ));
    }
    let h = (hi - lo) / (resolution - 1) as f64;
    let mut grid: Vec<f64> = (0..resolution)
        .map(|i| {
            let x = lo + i as f64 * h;
            // snap values within rounding of zero
            if x.abs() < 1e-12 * h {
                0.0
            } else {
                x
            }
        })
        .collect();
    if lo < 0.0 && hi > 0.0 && !grid.contains(&0.0) {
        let pos = grid.partition_point(|&x| x < 0.0);
        grid.insert(pos, 0.0);
    }
    Ok(grid)
}

fn unit_direction(direction: Option<Vec<f64>>, d: usize) -> Result<Option<Vec<f64>>> {
    if d == 1 {
        return Ok(None);
    }
    let dir = direction.unwrap_or_else(|| vec![1.0; d]);
    if dir.len() != d {
        return Err(Error::InvalidArgument(format!(
            "ray direction has dimension {} but the statistic has dimension {d}",
            dir.len()
        )));
    }
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidArgument(
            "ray direction must be nonzero".into(),
        ));
    }
    Ok(Some(dir.iter().map(|x| x / norm).collect()))
}

/// Fills a table over `range` with `resolution` points.
///
/// Thermodynamic tables estimate `E[T]` once per node and integrate
/// cumulatively outward from the anchor at 0, which must be a grid node.
pub fn build_table(
    statistic: &StatisticSpec,
    n: usize,
    range: (f64, f64),
    resolution: usize,
    method: NormalizerMethod,
    seed: u64,
    direction: Option<Vec<f64>>,
) -> Result<NormalizerTable> {
    statistic.check_deck(n)?;
    let dir = unit_direction(direction, statistic.dimension())?;
    let grid = table_grid(range, resolution)?;
    let at = |s: f64| -> Vec<f64> {
        match &dir {
            None => vec![s],
            Some(d) => d.iter().map(|x| x * s).collect(),
        }
    };
    let lnf = ln_factorial(n as u64);
    let mut quadrature_error = None;
    let points: Vec<TablePoint> = match &method {
        NormalizerMethod::Exact => {
            if !statistic.is_fixed_points() {
                return Err(Error::NormalizerUnavailable(format!(
                    "the exact method is only available for fixed-points, not {statistic}"
                )));
            }
            grid.iter()
                .map(|&s| {
                    Ok(TablePoint {
                        theta: s,
                        log_z: if s == 0.0 { lnf } else { exact_log_z(n, s)? },
                        stderr: 0.0,
                    })
                })
                .collect::<Result<_>>()?
        }
        NormalizerMethod::Importance { samples } => grid
            .par_iter()
            .enumerate()
            .map(|(i, &s)| {
                let est =
                    importance_log_z(statistic, n, &at(s), *samples, derive_seed(seed, i as u64))?;
                Ok(TablePoint {
                    theta: s,
                    log_z: est.log_z,
                    stderr: est.stderr,
                })
            })
            .collect::<Result<_>>()?,
        NormalizerMethod::Thermodynamic {
            steps,
            burnin,
            thin,
        } => {
            let chain = ChainConfig {
                steps: *steps,
                burnin: *burnin,
                thin: *thin,
                seed,
                ..ChainConfig::default()
            };
            chain.validate()?;
            let (points, err) = cumulative_thermodynamic(statistic, n, &grid, &at, &chain)?;
            quadrature_error = err;
            points
        }
    };
    let table = NormalizerTable {
        version: TABLE_VERSION,
        statistic: statistic.clone(),
        n,
        method,
        seed,
        direction: dir,
        quadrature_error,
        grid: points,
    };
    Ok(table)
}

fn cumulative_thermodynamic(
    statistic: &StatisticSpec,
    n: usize,
    grid: &[f64],
    at: &(dyn Fn(f64) -> Vec<f64> + Sync),
    chain: &ChainConfig,
) -> Result<(Vec<TablePoint>, Option<f64>)> {
    let zero = grid.iter().position(|&s| s == 0.0).ok_or_else(|| {
        Error::InvalidArgument("thermodynamic tables need theta = 0 on the grid".into())
    })?;
    let h = grid[1] - grid[0];
    if grid
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h)
    {
        return Err(Error::InvalidArgument(
            "thermodynamic tables need an equally spaced grid through 0".into(),
        ));
    }
    let unit = at(1.0);
    // derivative of m along the grid direction at every node
    let slopes: Vec<(f64, f64)> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            if s == 0.0 {
                let mean = statistic.uniform_mean(n);
                return Ok((unit.iter().zip(&mean).map(|(a, b)| a * b).sum(), 0.0));
            }
            let est = metropolis_moments(
                statistic,
                n,
                &at(s),
                &chain.with_seed(derive_seed(chain.seed, i as u64)),
            )?;
            let varies = est
                .covariance
                .iter()
                .enumerate()
                .any(|(a, row)| row[a] > 0.0);
            if varies && est.ess < MIN_ESS {
                return Err(Error::Diagnostics(format!(
                    "Metropolis chain at grid point {s} has ESS {:.1} < {MIN_ESS}",
                    est.ess
                )));
            }
            let g = unit.iter().zip(&est.mean).map(|(a, b)| a * b).sum();
            let var: f64 = unit
                .iter()
                .zip(&est.stderr)
                .map(|(a, e)| (a * e).powi(2))
                .sum();
            Ok((g, var.sqrt()))
        })
        .collect::<Result<_>>()?;
    let lnf = ln_factorial(n as u64);
    let mut out = vec![
        TablePoint {
            theta: 0.0,
            log_z: lnf,
            stderr: 0.0
        };
        grid.len()
    ];
    let mut quadrature_error: Option<f64> = None;
    for dir in [1isize, -1] {
        // node weights of the integral from the anchor to the current node
        let mut weights: Vec<f64> = Vec::new();
        let mut idx = zero as isize + dir;
        let mut k = 1usize;
        while idx >= 0 && (idx as usize) < grid.len() {
            let nodes: Vec<usize> = (0..=k)
                .map(|j| (zero as isize + dir * j as isize) as usize)
                .collect();
            weights.clear();
            weights.resize(k + 1, 0.0);
            let pairs = k / 2;
            if pairs > 0 {
                let sw = simpson_weights(2 * pairs + 1);
                for (j, w) in sw.iter().enumerate() {
                    weights[j] += w * h / 3.0;
                }
            }
            if k % 2 == 1 {
                if k == 1 {
                    weights[0] += 0.5 * h;
                    weights[1] += 0.5 * h;
                } else {
                    // last half-step of the quadratic through the final three nodes
                    weights[k - 2] += -h / 12.0;
                    weights[k - 1] += 8.0 * h / 12.0;
                    weights[k] += 5.0 * h / 12.0;
                }
            }
            let sign = dir as f64;
            let integral: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&i, w)| w * slopes[i].0)
                .sum();
            let var: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&i, w)| (w * slopes[i].1).powi(2))
                .sum();
            let i = idx as usize;
            out[i] = TablePoint {
                theta: grid[i],
                log_z: lnf + sign * integral,
                stderr: var.sqrt(),
            };
            idx += dir;
            k += 1;
        }
        // Simpson over the longest multiple of four intervals on this side
        let span = (k - 1) / 4 * 4;
        if span >= 4 {
            let fine: Vec<f64> = (0..=span)
                .map(|j| slopes[(zero as isize + dir * j as isize) as usize].0)
                .collect();
            let coarse: Vec<f64> = fine.iter().step_by(2).copied().collect();
            let i_h = simpson(&fine, h)?;
            let i_2h = simpson(&coarse, 2.0 * h)?;
            let e = (i_h - i_2h).abs() / 15.0;
            quadrature_error = Some(quadrature_error.map_or(e, |q: f64| q.max(e)));
        }
    }
    Ok((out, quadrature_error))
}

/// Anything that evaluates `m(θ)`.
pub trait LogNormalizer: Sync {
    fn log_z(&self, theta: &[f64]) -> Result<f64>;
}

impl LogNormalizer for NormalizerTable {
    fn log_z(&self, theta: &[f64]) -> Result<f64> {
        NormalizerTable::log_z(self, theta)
    }
}

/// Exact level-set normalizer of the fixed-point family.
#[derive(Debug, Clone, Copy)]
pub struct ExactFixedPointNormalizer {
    pub n: usize,
}

impl LogNormalizer for ExactFixedPointNormalizer {
    fn log_z(&self, theta: &[f64]) -> Result<f64> {
        exact_log_z(self.n, theta[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_anchored() {
        let f = StatisticSpec::fixed_points();
        let e = importance_log_z(&f, 52, &[0.0], 1000, 1).unwrap();
        assert_eq!(e.log_z, ln_factorial(52));
        assert_eq!(e.stderr, 0.0);
        let t = thermodynamic_log_z(&f, 6, &[0.0], 5, &ChainConfig::new(100, 10, 0)).unwrap();
        assert_eq!(t.log_z, ln_factorial(6));
    }

    #[test]
    fn importance_rejects_small_samples() {
        let f = StatisticSpec::fixed_points();
        assert!(importance_log_z(&f, 6, &[1.0], 999, 1).is_err());
    }

    #[test]
    fn importance_matches_exact_n6() {
        let f = StatisticSpec::fixed_points();
        let e = importance_log_z(&f, 6, &[1.0], 100_000, 7).unwrap();
        let exact = exact_log_z(6, 1.0).unwrap();
        assert!((e.log_z - exact).abs() < 3.0 * e.stderr, "{e:?} vs {exact}");
    }

    #[test]
    fn importance_independent_of_threads() {
        let f = StatisticSpec::fixed_points();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let a = pool.install(|| importance_log_z(&f, 13, &[0.8], 20_000, 3).unwrap());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| importance_log_z(&f, 13, &[0.8], 20_000, 3).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn thermodynamic_needs_odd_grid() {
        let f = StatisticSpec::fixed_points();
        let c = ChainConfig::new(4000, 200, 0);
        assert!(thermodynamic_log_z(&f, 6, &[1.0], 4, &c).is_err());
        assert!(thermodynamic_log_z(&f, 6, &[1.0], 6, &c).is_err());
        let t = thermodynamic_log_z(&f, 6, &[1.0], 5, &c).unwrap();
        assert!(t.quadrature_error.is_some());
    }

    #[test]
    fn exact_table_and_queries() {
        let f = StatisticSpec::fixed_points();
        let t = build_table(&f, 6, (-3.0, 3.0), 61, NormalizerMethod::Exact, 0, None).unwrap();
        assert_eq!(t.grid.len(), 61);
        for p in &t.grid {
            assert!((p.log_z - exact_log_z(6, p.theta).unwrap()).abs() < 1e-12);
        }
        assert_eq!(t.log_z(&[0.0]).unwrap(), ln_factorial(6));
        assert!(matches!(t.log_z(&[3.5]), Err(Error::OutOfRange { .. })));
        t.check_convexity().unwrap();
        let back = NormalizerTable::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
        let adj = StatisticSpec::adjacent_pairs();
        assert!(matches!(
            build_table(&adj, 6, (-1.0, 1.0), 5, NormalizerMethod::Exact, 0, None),
            Err(Error::NormalizerUnavailable(_))
        ));
    }

    #[test]
    fn grid_gains_zero() {
        let g = table_grid((-1.0, 2.0), 4).unwrap();
        assert_eq!(g, vec![-1.0, 0.0, 1.0, 2.0]);
        let g = table_grid((-1.0, 1.0), 4).unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.contains(&0.0));
        assert!(table_grid((1.0, 1.0), 4).is_err());
    }
}
