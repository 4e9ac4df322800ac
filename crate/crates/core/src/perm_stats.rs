//! Permutation statistics used as an independent oracle for the Boolean
//! and subspace lattices: counts of t-tuples of permutations by their
//! common ascent set, optionally weighted by `q^inv`.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poset::RankSelection;
use crate::shellability::{fold_signatures, positions_mask};

/// Tuple enumeration is used while `(n!)^t` stays below this.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;
/// The signature fold enumerates `S_n` once.
pub const MAX_DP_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    word: Vec<usize>,
    ascents: u64,
    inv: u32,
}

impl Permutation {
    /// `word` must be an arrangement of `1..=n`.
    pub fn new(word: Vec<usize>) -> Option<Self> {
        let n = word.len();
        if n > 64 || word.iter().copied().sorted().ne(1..=n) {
            return None;
        }
        let ascents = (1..n).filter(|&i| word[i - 1] < word[i]).fold(0, |m, i| m | 1 << i);
        let inv = word.iter().tuple_combinations().filter(|(a, b)| a > b).count() as u32;
        Some(Permutation { word, ascents, inv })
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Positions `i` with `σ(i) < σ(i+1)`.
    pub fn ascent_set(&self) -> Vec<usize> {
        (1..self.word.len()).filter(|i| self.ascents >> i & 1 == 1).collect()
    }

    pub fn descent_set(&self) -> Vec<usize> {
        (1..self.word.len()).filter(|i| self.ascents >> i & 1 == 0).collect()
    }

    pub fn ascent_mask(&self) -> u64 {
        self.ascents
    }

    pub fn inversions(&self) -> u32 {
        self.inv
    }
}

/// `S_n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Permutation> {
    (1..=n).permutations(n).map(|w| Permutation::new(w).expect("arrangement of 1..=n"))
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Number of permutations of `[n]` for each descent set (bit mask).
pub fn descent_census(n: usize) -> Result<BTreeMap<u64, u64>> {
    if n == 0 || n > MAX_DP_N {
        return Err(Error::OutOfBounds(format!("descent census of S_{n}")));
    }
    let all = positions_mask(n);
    let mut census = BTreeMap::new();
    for p in permutations(n) {
        *census.entry(all & !p.ascent_mask()).or_insert(0) += 1;
    }
    Ok(census)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Enumeration when affordable, otherwise the signature fold.
    #[default]
    Auto,
    Enumerate,
    SignatureFold,
}

fn target_common_ascents(n: usize, j: Option<&RankSelection>) -> Result<u64> {
    let all = positions_mask(n);
    match j {
        None => Ok(0),
        Some(j) => {
            j.validate(n)?;
            Ok(all & !j.mask().ok_or(Error::OutOfBounds("rank selection".into()))?)
        }
    }
}

fn weight(q: u64, inv: u32) -> Result<u64> {
    q.checked_pow(inv).ok_or(Error::Overflow("q^inv"))
}

/// `w_n^(t)(J)`: t-tuples of permutations whose common ascent set is
/// `[n−1] ∖ J`; `J = None` means no common ascent at all.
pub fn w_tuples(n: usize, t: usize, j: Option<&RankSelection>) -> Result<u64> {
    w_q_tuples(n, t, 1, j)
}

/// The `q^inv`-weighted version of [`w_tuples`].
pub fn w_q_tuples(n: usize, t: usize, q: u64, j: Option<&RankSelection>) -> Result<u64> {
    w_q_tuples_with(n, t, q, j, Strategy::Auto)
}

pub fn w_q_tuples_with(n: usize, t: usize, q: u64, j: Option<&RankSelection>, strategy: Strategy) -> Result<u64> {
    if n == 0 || t == 0 || q == 0 || n > 64 {
        return Err(Error::OutOfBounds(format!("tuple count n={n}, t={t}, q={q}")));
    }
    let target = target_common_ascents(n, j)?;
    let tuples = factorial(n).checked_pow(t as u32);
    let affordable = tuples.is_some_and(|c| c <= ENUMERATION_LIMIT);
    let strategy = match strategy {
        Strategy::Auto if affordable => Strategy::Enumerate,
        Strategy::Auto => Strategy::SignatureFold,
        s => s,
    };
    match strategy {
        Strategy::Enumerate if !affordable => Err(Error::BudgetExceeded {
            needed: tuples.unwrap_or(u128::MAX),
            budget: ENUMERATION_LIMIT as u64,
        }),
        Strategy::Enumerate => enumerate_tuples(n, t, q, target),
        _ if n > MAX_DP_N => Err(Error::BudgetExceeded {
            needed: factorial(n),
            budget: factorial(MAX_DP_N) as u64,
        }),
        _ => {
            let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
            for p in permutations(n) {
                let slot = groups.entry(p.ascent_mask()).or_insert(0);
                *slot = slot.checked_add(weight(q, p.inversions())?).ok_or(Error::Overflow("q-weights"))?;
            }
            fold_signatures(&groups, t, positions_mask(n), target)
        }
    }
}

fn enumerate_tuples(n: usize, t: usize, q: u64, target: u64) -> Result<u64> {
    let perms: Vec<(u64, u64)> = permutations(n)
        .map(|p| Ok((p.ascent_mask(), weight(q, p.inversions())?)))
        .collect::<Result<_>>()?;
    let all = positions_mask(n);
    let mut total = 0u64;
    for tuple in std::iter::repeat_n(perms.iter(), t).multi_cartesian_product() {
        let common = tuple.iter().fold(all, |m, &&(asc, _)| m & asc);
        if common == target {
            let w = tuple
                .iter()
                .try_fold(1u64, |acc, &&(_, w)| acc.checked_mul(w))
                .ok_or(Error::Overflow("tuple weight"))?;
            total = total.checked_add(w).ok_or(Error::Overflow("tuple count"))?;
        }
    }
    Ok(total)
}
