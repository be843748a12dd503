//! Sufficient statistics `T: S_n → ℝᵈ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One coordinate of a statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatisticKind {
    /// `#{i : σ(i) = i}`.
    FixedPoints,
    /// `#{i : σ(i+1) = σ(i) + 1}`.
    AdjacentPairs,
    /// `σ⁻¹(1)`, where the original top card ended up.
    TopCardPosition,
    /// `σ⁻¹(n)`, where the original bottom card ended up.
    BottomCardPosition,
}

impl StatisticKind {
    pub fn name(self) -> &'static str {
        match self {
            StatisticKind::FixedPoints => "fixed-points",
            StatisticKind::AdjacentPairs => "adjacent-pairs",
            StatisticKind::TopCardPosition => "top-card-position",
            StatisticKind::BottomCardPosition => "bottom-card-position",
        }
    }

    fn evaluate(self, sigma: &Permutation) -> f64 {
        let v = match self {
            StatisticKind::FixedPoints => sigma.fixed_points(),
            StatisticKind::AdjacentPairs => sigma.count_adjacent(),
            StatisticKind::TopCardPosition => sigma.find_card(1),
            StatisticKind::BottomCardPosition => sigma.find_card(sigma.n()),
        };
        v as f64
    }

    /// Attainable values on `S_n`.
    fn support(self, n: usize) -> Vec<f64> {
        match self {
            StatisticKind::FixedPoints => (0..=n)
                .filter(|&j| n < 2 || j + 1 != n)
                .map(|j| j as f64)
                .collect(),
            StatisticKind::AdjacentPairs => (0..n).map(|j| j as f64).collect(),
            StatisticKind::TopCardPosition | StatisticKind::BottomCardPosition => {
                (1..=n).map(|j| j as f64).collect()
            }
        }
    }

    /// `E₀[T]` under the uniform distribution.
    fn uniform_mean(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            StatisticKind::FixedPoints => 1.0,
            StatisticKind::AdjacentPairs => (n - 1.0) / n,
            StatisticKind::TopCardPosition | StatisticKind::BottomCardPosition => (n + 1.0) / 2.0,
        }
    }

    fn min_deck(self) -> usize {
        match self {
            StatisticKind::AdjacentPairs => 2,
            _ => 1,
        }
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fixed-points" | "F" => Ok(StatisticKind::FixedPoints),
            "adjacent-pairs" | "adjacency" => Ok(StatisticKind::AdjacentPairs),
            "top-card-position" => Ok(StatisticKind::TopCardPosition),
            "bottom-card-position" => Ok(StatisticKind::BottomCardPosition),
            other => Err(Error::InvalidArgument(format!(
                "unknown statistic '{other}'"
            ))),
        }
    }
}

/// A named, possibly vector-valued statistic.
///
/// Names are comma-joined component names, e.g.
/// `adjacent-pairs,top-card-position,bottom-card-position`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StatisticSpec {
    components: Vec<StatisticKind>,
}

impl StatisticSpec {
    pub fn new(components: Vec<StatisticKind>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument(
                "statistic needs at least one component".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn fixed_points() -> Self {
        Self {
            components: vec![StatisticKind::FixedPoints],
        }
    }

    pub fn adjacent_pairs() -> Self {
        Self {
            components: vec![StatisticKind::AdjacentPairs],
        }
    }

    /// Adjacency plus top and bottom card positions.
    pub fn wash_triple() -> Self {
        Self {
            components: vec![
                StatisticKind::AdjacentPairs,
                StatisticKind::TopCardPosition,
                StatisticKind::BottomCardPosition,
            ],
        }
    }

    pub fn name(&self) -> String {
        self.components
            .iter()
            .map(|c| c.name())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[StatisticKind] {
        &self.components
    }

    /// Whether this is the one-dimensional fixed-point statistic, the only one
    /// with exact level-set counts.
    pub fn is_fixed_points(&self) -> bool {
        self.components == [StatisticKind::FixedPoints]
    }

    pub fn check_deck(&self, n: usize) -> Result<()> {
        let need = self
            .components
            .iter()
            .map(|c| c.min_deck())
            .max()
            .unwrap_or(1);
        if n < need {
            return Err(Error::InvalidArgument(format!(
                "statistic {} needs n >= {need}, got {n}",
                self.name()
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, sigma: &Permutation) -> Vec<f64> {
        self.components.iter().map(|c| c.evaluate(sigma)).collect()
    }

    pub fn evaluate_into(&self, sigma: &Permutation, out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.evaluate(sigma);
        }
    }

    /// `θ·T(σ)`.
    pub fn dot(&self, theta: &[f64], sigma: &Permutation) -> f64 {
        self.components
            .iter()
            .zip(theta)
            .map(|(c, t)| t * c.evaluate(sigma))
            .sum()
    }

    /// Attainable values per coordinate on `S_n`.
    pub fn value_support(&self, n: usize) -> Vec<Vec<f64>> {
        self.components.iter().map(|c| c.support(n)).collect()
    }

    /// Per-coordinate open interval `(min, max)` of attainable values; the
    /// box they span is used as the hull for conjugate prior means.
    pub fn support_box(&self, n: usize) -> Vec<(f64, f64)> {
        self.value_support(n)
            .into_iter()
            .map(|s| {
                let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect()
    }

    /// `E₀[T] = ∇m(0)`.
    pub fn uniform_mean(&self, n: usize) -> Vec<f64> {
        self.components.iter().map(|c| c.uniform_mean(n)).collect()
    }

    /// Sum of `T` over a dataset.
    pub fn sum_over<'a, I>(&self, data: I) -> Vec<f64>
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        let mut total = vec![0.0; self.dimension()];
        let mut buf = vec![0.0; self.dimension()];
        for sigma in data {
            self.evaluate_into(sigma, &mut buf);
            for (t, b) in total.iter_mut().zip(&buf) {
                *t += b;
            }
        }
        total
    }
}

impl FromStr for StatisticSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let components = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<StatisticKind>>>()?;
        StatisticSpec::new(components)
    }
}

impl fmt::Display for StatisticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for StatisticSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for StatisticSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
