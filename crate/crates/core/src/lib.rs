//! Testing whether shuffled decks are uniform: permutation statistics, exact
//! combinatorial oracles, exponential families on the symmetric group,
//! normalizer estimation, exchange-algorithm MCMC and Bayes-factor and χ²
//! tests.

pub mod combinatorics;
pub mod diagnostics;
pub mod error;
pub mod expfam;
pub mod inference;
pub mod io;
pub mod normalizer;
pub mod numeric;
pub mod perm;
pub mod rng;
pub mod samplers;
pub mod shuffle;
pub mod statistic;

pub use error::{Error, Result};
pub use expfam::{ExpFamilyModel, NormalizerSource, PriorSpec};
pub use perm::Permutation;
pub use samplers::{ChainConfig, ParameterChain};
pub use shuffle::{ShuffleKind, ShuffleScheme};
pub use statistic::{StatisticKind, StatisticSpec};
