//! Shuffle simulators that produce the datasets the tests consume.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShuffleKind {
    /// `k` steps, each swapping positions `L` and `R` drawn independently
    /// and uniformly from `1..=n` (`L = R` leaves the deck unchanged).
    RandomTranspositions,
    /// Exactly uniform (Fisher-Yates); ignores `steps`.
    Uniform,
    /// Data ingested from external files; cannot be simulated.
    Smoosh,
}

impl fmt::Display for ShuffleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShuffleKind::RandomTranspositions => "random-transpositions",
            ShuffleKind::Uniform => "uniform",
            ShuffleKind::Smoosh => "smoosh",
        })
    }
}

impl FromStr for ShuffleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-transpositions" | "transpositions" => Ok(ShuffleKind::RandomTranspositions),
            "uniform" => Ok(ShuffleKind::Uniform),
            "smoosh" => Ok(ShuffleKind::Smoosh),
            other => Err(Error::InvalidArgument(format!(
                "unknown shuffle scheme '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleScheme {
    pub kind: ShuffleKind,
    pub steps: usize,
    pub n: usize,
    pub seed: u64,
}

impl ShuffleScheme {
    pub fn random_transpositions(n: usize, steps: usize, seed: u64) -> Self {
        Self {
            kind: ShuffleKind::RandomTranspositions,
            steps,
            n,
            seed,
        }
    }

    pub fn uniform(n: usize, seed: u64) -> Self {
        Self {
            kind: ShuffleKind::Uniform,
            steps: 0,
            n,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument(
                "deck size must be at least 1".into(),
            ));
        }
        if self.kind == ShuffleKind::Smoosh {
            return Err(Error::Unsupported(
                "smoosh shuffles are ingested from data files, not simulated".into(),
            ));
        }
        Ok(())
    }
}

/// One draw from the scheme, starting from the identity.
pub fn apply_shuffle<R: Rng + ?Sized>(scheme: &ShuffleScheme, rng: &mut R) -> Result<Permutation> {
    scheme.validate()?;
    let n = scheme.n;
    Ok(match scheme.kind {
        ShuffleKind::Uniform => Permutation::random_uniform(n, rng),
        ShuffleKind::RandomTranspositions => {
            let mut sigma = Permutation::identity(n);
            for _ in 0..scheme.steps {
                let l = rng.random_range(1..=n);
                let r = rng.random_range(1..=n);
                sigma.swap_positions(l, r);
            }
            sigma
        }
        ShuffleKind::Smoosh => unreachable!("rejected by validate"),
    })
}

/// `count` independent draws. Draw `i` uses its own stream derived from
/// `(scheme.seed, i)`, so the result does not depend on thread scheduling.
pub fn sample_dataset(scheme: &ShuffleScheme, count: usize) -> Result<Vec<Permutation>> {
    scheme.validate()?;
    if count == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    (0..count as u64)
        .into_par_iter()
        .map(|i| apply_shuffle(scheme, &mut stream_rng(scheme.seed, i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use std::collections::HashMap;

    #[test]
    fn zero_steps_is_identity() {
        let s = ShuffleScheme::random_transpositions(10, 0, 1);
        assert!(apply_shuffle(&s, &mut seeded_rng(3)).unwrap().is_identity());
        let d = sample_dataset(&ShuffleScheme::random_transpositions(52, 0, 9), 1).unwrap();
        assert_eq!(d, vec![Permutation::identity(52)]);
    }

    #[test]
    fn datasets_are_reproducible() {
        let s = ShuffleScheme::random_transpositions(52, 180, 42);
        assert_eq!(
            sample_dataset(&s, 50).unwrap(),
            sample_dataset(&s, 50).unwrap()
        );
        let t = ShuffleScheme::random_transpositions(52, 180, 43);
        assert_ne!(
            sample_dataset(&s, 50).unwrap(),
            sample_dataset(&t, 50).unwrap()
        );
    }

    #[test]
    fn independent_of_thread_count() {
        let s = ShuffleScheme::random_transpositions(20, 30, 5);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let single = pool.install(|| sample_dataset(&s, 64).unwrap());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let multi = pool.install(|| sample_dataset(&s, 64).unwrap());
        assert_eq!(single, multi);
    }

    #[test]
    fn one_step_on_three_cards_follows_q() {
        // Frequencies over many single steps approach 1/3 (identity) and 2/9
        // (each transposition).
        let s = ShuffleScheme::random_transpositions(3, 1, 0);
        let mut rng = seeded_rng(11);
        let trials = 90_000;
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..trials {
            let p = apply_shuffle(&s, &mut rng).unwrap();
            *counts.entry(p.images().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        for (img, c) in counts {
            let expected = if img == [1, 2, 3] {
                1.0 / 3.0
            } else {
                2.0 / 9.0
            };
            let sd = (expected * (1.0 - expected) / trials as f64).sqrt();
            assert!((c as f64 / trials as f64 - expected).abs() < 4.0 * sd);
        }
    }

    #[test]
    fn smoosh_cannot_be_simulated() {
        let s = ShuffleScheme {
            kind: ShuffleKind::Smoosh,
            steps: 0,
            n: 52,
            seed: 0,
        };
        assert!(matches!(sample_dataset(&s, 3), Err(Error::Unsupported(_))));
    }
}
