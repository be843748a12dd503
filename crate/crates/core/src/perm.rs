//! Permutations of a deck of `n` cards.
//!
//! Images are 1-based: entry `i` (counting from 1) holds `σ(i)`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{1, ..., n}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Validates that `images` is a permutation of `1..=n`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).collect(),
        }
    }

    /// The reversal `(n, n-1, ..., 1)`.
    pub fn reversal(n: usize) -> Self {
        Self {
            images: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for 1-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::InvalidArgument(format!(
                "cannot compose permutations of sizes {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(Self {
            images: other.images.iter().map(|&j| self.images[j - 1]).collect(),
        })
    }

    /// Exchanges the cards at 1-based positions `l` and `r`.
    pub fn swap_positions(&mut self, l: usize, r: usize) {
        self.images.swap(l - 1, r - 1);
    }

    /// Number of `i` with `σ(i) = i`.
    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v == i + 1)
            .count()
    }

    /// Number of `i < n` with `σ(i+1) = σ(i) + 1`.
    pub fn adjacent_pairs(&self) -> Result<usize> {
        if self.n() < 2 {
            return Err(Error::InvalidArgument(
                "adjacent pairs need a deck of at least 2 cards".into(),
            ));
        }
        Ok(self.count_adjacent())
    }

    pub(crate) fn count_adjacent(&self) -> usize {
        self.images.windows(2).filter(|w| w[1] == w[0] + 1).count()
    }

    /// The position `i` holding `card`, i.e. `σ⁻¹(card)`.
    pub fn position_of_card(&self, card: usize) -> Result<usize> {
        if card == 0 || card > self.n() {
            return Err(Error::OutOfRange {
                what: "card",
                value: card as f64,
                lo: 1.0,
                hi: self.n() as f64,
            });
        }
        Ok(self.find_card(card))
    }

    pub(crate) fn find_card(&self, card: usize) -> usize {
        self.images
            .iter()
            .position(|&v| v == card)
            .map_or(0, |p| p + 1)
    }

    /// Lexicographic rank in `0..n!` (Lehmer code). Only meaningful for small `n`.
    pub fn rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        let mut used = vec![false; n + 1];
        for (i, &v) in self.images.iter().enumerate() {
            let smaller_unused = (1..v).filter(|&u| !used[u]).count();
            rank = rank * (n - i) + smaller_unused;
            used[v] = true;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Self {
        let mut radices = vec![0; n];
        for (i, r) in radices.iter_mut().enumerate().rev() {
            let base = n - i;
            *r = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (1..=n).collect();
        let images = radices.into_iter().map(|r| pool.remove(r)).collect();
        Self { images }
    }

    /// Uniformly random permutation by Fisher-Yates.
    pub fn random_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            images.swap(i, j);
        }
        Self { images }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Every permutation of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let total: usize = (1..=n).product();
    (0..total).map(move |r| Permutation::unrank(n, r))
}

/// Free-function forms of the per-permutation statistics.
pub fn fixed_points(sigma: &Permutation) -> usize {
    sigma.fixed_points()
}

pub fn adjacent_pairs(sigma: &Permutation) -> Result<usize> {
    sigma.adjacent_pairs()
}

pub fn position_of_card(sigma: &Permutation, card: usize) -> Result<usize> {
    sigma.position_of_card(card)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn histogram(n: usize, f: impl Fn(&Permutation) -> usize) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for p in all_permutations(n) {
            *h.entry(f(&p)).or_insert(0) += 1;
        }
        h
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1, 3]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 4, 2]).is_err());
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![2, 3, 1]).is_ok());
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(Permutation::identity(52).fixed_points(), 52);
        let p = Permutation::new(vec![2, 1, 3, 4]).unwrap();
        assert_eq!(p.fixed_points(), 2);
        let h = histogram(4, |p| p.fixed_points());
        assert_eq!(h, BTreeMap::from([(0, 9), (1, 8), (2, 6), (4, 1)]));
    }

    #[test]
    fn adjacent_pair_examples() {
        assert_eq!(Permutation::identity(52).adjacent_pairs().unwrap(), 51);
        assert_eq!(Permutation::reversal(52).adjacent_pairs().unwrap(), 0);
        assert!(Permutation::identity(1).adjacent_pairs().is_err());
        let h = histogram(4, |p| p.adjacent_pairs().unwrap());
        assert_eq!(h, BTreeMap::from([(0, 11), (1, 9), (2, 3), (3, 1)]));
    }

    #[test]
    fn position_examples() {
        assert_eq!(Permutation::identity(5).position_of_card(1).unwrap(), 1);
        let p = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(p.position_of_card(1).unwrap(), 2);
        assert!(p.position_of_card(0).is_err());
        assert!(p.position_of_card(4).is_err());
        let h = histogram(5, |p| p.position_of_card(1).unwrap());
        assert_eq!(h, (1..=5).map(|i| (i, 24)).collect());
    }

    #[test]
    fn rank_round_trips() {
        for (r, p) in all_permutations(5).enumerate() {
            assert_eq!(p.rank(), r);
        }
        assert_eq!(Permutation::identity(6).rank(), 0);
        assert_eq!(Permutation::reversal(6).rank(), 719);
    }

    #[test]
    fn inverse_and_compose() {
        let p = Permutation::new(vec![3, 1, 4, 2]).unwrap();
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(p.inverse().compose(&p).unwrap().is_identity());
        assert!(p.compose(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn display_is_space_separated() {
        let p = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(p.to_string(), "3 1 2");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[3,1,2]");
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
