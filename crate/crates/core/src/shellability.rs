//! Maximal-chain enumeration and exhaustive EL verification.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::labeling::{ascent_mask, is_decreasing, is_increasing, lex_compare, EdgeLabeling, LabelId, LabelPoset, LexOrder};
use crate::poset::{Poset, RankSelection};

/// Default cap on the number of chains a single operation may enumerate.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Depth-first stream of the maximal chains of `[x, y]`, in lexicographic
/// order of their element-index sequences.
pub struct MaximalChains<'a> {
    p: &'a Poset,
    target: usize,
    path: Vec<usize>,
    cursor: Vec<usize>,
    pending_pop: bool,
}

impl Iterator for MaximalChains<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.pending_pop {
                self.path.pop();
                self.cursor.pop();
                self.pending_pop = false;
            }
            let &v = self.path.last()?;
            if v == self.target {
                self.pending_pop = true;
                return Some(self.path.clone());
            }
            let ups = self.p.upper_covers(v);
            let c = self.cursor.last_mut().expect("cursor tracks path");
            while *c < ups.len() && !self.p.less_or_equal(ups[*c].0, self.target) {
                *c += 1;
            }
            if let Some(&(u, _)) = ups.get(*c) {
                *c += 1;
                self.path.push(u);
                self.cursor.push(0);
            } else {
                self.path.pop();
                self.cursor.pop();
            }
        }
    }
}

pub fn maximal_chains(p: &Poset, x: usize, y: usize) -> Result<MaximalChains<'_>> {
    if x >= p.len() || y >= p.len() {
        return Err(Error::NoSuchElement(x.max(y)));
    }
    if !p.less_or_equal(x, y) {
        return Err(Error::NotComparable(x, y));
    }
    Ok(MaximalChains { p, target: y, path: vec![x], cursor: vec![0], pending_pop: false })
}

/// Callback form of [`maximal_chains`] that avoids allocating per chain.
/// The word slice holds the labels of the chain's cover steps.
fn visit_chains<B>(
    p: &Poset,
    lab: &EdgeLabeling,
    x: usize,
    y: usize,
    mut f: impl FnMut(&[usize], &[LabelId]) -> ControlFlow<B>,
) -> Option<B> {
    let mut path = vec![x];
    let mut word: Vec<LabelId> = Vec::new();
    let mut cursor = vec![0usize];
    while let Some(&v) = path.last() {
        if v == y {
            if let ControlFlow::Break(b) = f(&path, &word) {
                return Some(b);
            }
            path.pop();
            cursor.pop();
            word.pop();
            continue;
        }
        let ups = p.upper_covers(v);
        let c = cursor.last_mut().unwrap();
        while *c < ups.len() && !p.less_or_equal(ups[*c].0, y) {
            *c += 1;
        }
        if let Some(&(u, edge)) = ups.get(*c) {
            *c += 1;
            path.push(u);
            word.push(lab.label(edge));
            cursor.push(0);
        } else {
            path.pop();
            cursor.pop();
            word.pop();
        }
    }
    None
}

/// Number of maximal chains of `[x, z]` for every `z`, zero when `x ≰ z`.
pub fn chain_counts_from(p: &Poset, x: usize) -> Vec<u128> {
    let mut counts = vec![0u128; p.len()];
    counts[x] = 1;
    for z in p.linear_extension() {
        if z == x || !p.less_or_equal(x, z) {
            continue;
        }
        counts[z] = p
            .lower_covers(z)
            .iter()
            .fold(0u128, |acc, &(w, _)| acc.saturating_add(counts[w]));
    }
    counts
}

/// Number of maximal chains of the whole poset.
pub fn chain_count(p: &Poset) -> u128 {
    chain_counts_from(p, p.bottom())[p.top()]
}

/// Total chains enumerated by [`verify_el`]: the sum over all intervals.
pub fn el_enumeration_cost(p: &Poset) -> u128 {
    (0..p.len())
        .into_par_iter()
        .map(|x| chain_counts_from(p, x).into_iter().fold(0u128, u128::saturating_add))
        .reduce(|| 0, u128::saturating_add)
}

pub fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FailureKind {
    NoIncreasing,
    MultipleIncreasing,
    /// The increasing chain does not strictly precede some other chain.
    NotLexFirst,
    /// The increasing chain's first differing label is incomparable to the
    /// other chain's.
    IncomparableWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElFailure {
    pub lo: usize,
    pub hi: usize,
    pub kind: FailureKind,
    /// For the ordering failures the increasing chain comes first.
    pub witnesses: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElReport {
    pub ok: bool,
    pub failures: Vec<ElFailure>,
}

impl ElReport {
    /// JSON form with element display names.
    pub fn to_json(&self, p: &Poset) -> serde_json::Value {
        let names = |chain: &Vec<usize>| chain.iter().map(|&z| p.name(z)).collect::<Vec<_>>();
        json!({
            "ok": self.ok,
            "failures": self.failures.iter().map(|f| json!({
                "lo": p.name(f.lo),
                "hi": p.name(f.hi),
                "kind": f.kind,
                "witnesses": f.witnesses.iter().map(names).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn check_interval(p: &Poset, lab: &EdgeLabeling, x: usize, y: usize) -> Vec<ElFailure> {
    let lp = lab.label_poset();
    let mut increasing: Vec<(Vec<usize>, Vec<LabelId>)> = Vec::new();
    visit_chains::<()>(p, lab, x, y, |chain, word| {
        if is_increasing(word, lp) {
            increasing.push((chain.to_vec(), word.to_vec()));
        }
        ControlFlow::Continue(())
    });
    let failure = |kind, witnesses| ElFailure { lo: x, hi: y, kind, witnesses };
    match increasing.len() {
        0 => return vec![failure(FailureKind::NoIncreasing, Vec::new())],
        1 => {}
        _ => {
            let chains = increasing.into_iter().map(|(c, _)| c).collect();
            return vec![failure(FailureKind::MultipleIncreasing, chains)];
        }
    }
    let (inc_chain, inc_word) = increasing.pop().unwrap();
    let mut not_first = vec![inc_chain.clone()];
    let mut incomparable = vec![inc_chain.clone()];
    visit_chains::<()>(p, lab, x, y, |chain, word| {
        if chain != inc_chain.as_slice() {
            match lex_compare(&inc_word, word, lp).expect("chains of an interval have equal length") {
                LexOrder::Precedes => {}
                LexOrder::Incomparable => incomparable.push(chain.to_vec()),
                LexOrder::Follows | LexOrder::Equal => not_first.push(chain.to_vec()),
            }
        }
        ControlFlow::Continue(())
    });
    let mut out = Vec::new();
    if not_first.len() > 1 {
        out.push(failure(FailureKind::NotLexFirst, not_first));
    }
    if incomparable.len() > 1 {
        out.push(failure(FailureKind::IncomparableWitness, incomparable));
    }
    out
}

/// Checks every interval `[x, y]`, `x < y`, for a unique increasing chain
/// that strictly lex-precedes all others. Intervals are checked in
/// parallel; failures are reported in `(lo, hi)` order.
pub fn verify_el(p: &Poset, lab: &EdgeLabeling) -> ElReport {
    let failures: Vec<ElFailure> = (0..p.len())
        .into_par_iter()
        .flat_map_iter(|x| {
            p.up_set(x)
                .filter(move |&y| y != x)
                .flat_map(move |y| check_interval(p, lab, x, y))
                .collect::<Vec<_>>()
        })
        .collect();
    ElReport { ok: failures.is_empty(), failures }
}

/// [`verify_el`] after checking the enumeration cost against `budget`.
pub fn verify_el_budgeted(p: &Poset, lab: &EdgeLabeling, budget: u64) -> Result<ElReport> {
    check_budget(el_enumeration_cost(p), budget)?;
    Ok(verify_el(p, lab))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecreasingChains {
    pub count: u64,
    /// Filled only when requested.
    pub chains: Option<Vec<Vec<usize>>>,
}

/// Maximal chains of the whole poset whose word has no ascent.
pub fn decreasing_chains(p: &Poset, lab: &EdgeLabeling, collect: bool) -> DecreasingChains {
    let lp = lab.label_poset();
    let mut out = DecreasingChains { count: 0, chains: collect.then(Vec::new) };
    visit_chains::<()>(p, lab, p.bottom(), p.top(), |chain, word| {
        if is_decreasing(word, lp) {
            out.count += 1;
            if let Some(list) = out.chains.as_mut() {
                list.push(chain.to_vec());
            }
        }
        ControlFlow::Continue(())
    });
    out
}

/// How many maximal chains realize each label word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordMultiset {
    pub counts: BTreeMap<Vec<LabelId>, u64>,
}

impl WordMultiset {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, word: &[LabelId]) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }
}

pub fn el_counts(p: &Poset, lab: &EdgeLabeling) -> WordMultiset {
    let mut wm = WordMultiset::default();
    visit_chains::<()>(p, lab, p.bottom(), p.top(), |_, word| {
        *wm.counts.entry(word.to_vec()).or_insert(0) += 1;
        ControlFlow::Continue(())
    });
    wm
}

/// Number of maximal chains per descent set (bit mask over positions).
pub fn descent_set_census(p: &Poset, lab: &EdgeLabeling) -> Result<BTreeMap<u64, u64>> {
    let lp = lab.label_poset();
    let n = p.rank();
    if n > 64 {
        return Err(Error::OutOfBounds(format!("descent sets of a rank-{n} poset")));
    }
    let all = positions_mask(n);
    let mut census = BTreeMap::new();
    let mut err = None;
    visit_chains(p, lab, p.bottom(), p.top(), |_, word| match ascent_mask(word, lp) {
        Ok(asc) => {
            *census.entry(all & !asc).or_insert(0) += 1;
            ControlFlow::Continue(())
        }
        Err(e) => {
            err = Some(e);
            ControlFlow::Break(())
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(census),
    }
}

/// Bits `1..n-1` set.
pub(crate) fn positions_mask(n: usize) -> u64 {
    if n <= 1 { 0 } else { (u64::MAX >> (64 - (n - 1))) << 1 }
}

/// Folds `t` copies of a signature→weight table, intersecting signatures.
/// Returns the weight of tuples whose common signature equals `target`.
pub(crate) fn fold_signatures(
    groups: &BTreeMap<u64, u64>,
    t: usize,
    all: u64,
    target: u64,
) -> Result<u64> {
    let mut state: BTreeMap<u64, u64> = BTreeMap::from([(all, 1)]);
    for _ in 0..t {
        let mut next = BTreeMap::new();
        for (&sig, &w) in &state {
            for (&g, &gw) in groups {
                let add = w.checked_mul(gw).ok_or(Error::Overflow("signature fold"))?;
                let slot = next.entry(sig & g).or_insert(0u64);
                *slot = slot.checked_add(add).ok_or(Error::Overflow("signature fold"))?;
            }
        }
        state = next;
    }
    Ok(state.get(&target).copied().unwrap_or(0))
}

/// `Σ Π_i wm(σ^i)` over t-tuples of realized words whose tuple descent set
/// (the complement of their common ascents) is exactly `J`.
pub fn weighted_tuple_sum(wm: &WordMultiset, t: usize, j: &RankSelection, lp: &LabelPoset) -> Result<u64> {
    let mut lengths = wm.counts.keys().map(Vec::len);
    let Some(n) = lengths.next() else { return Ok(0) };
    if let Some(m) = lengths.find(|&m| m != n) {
        return Err(Error::LengthMismatch(n, m));
    }
    j.validate(n)?;
    let all = positions_mask(n);
    let jm = j.mask().ok_or(Error::OutOfBounds("rank selection".into()))?;
    let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
    for (word, &count) in &wm.counts {
        let slot = groups.entry(ascent_mask(word, lp)?).or_insert(0);
        *slot = slot.checked_add(count).ok_or(Error::Overflow("word multiset"))?;
    }
    fold_signatures(&groups, t, all, all & !jm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::{boolean_lattice, bundled_poset, subspace_lattice};

    #[test]
    fn chain_streams() {
        let (b3, _) = boolean_lattice(3).unwrap();
        let chains: Vec<_> = maximal_chains(&b3, b3.bottom(), b3.top()).unwrap().collect();
        assert_eq!(chains.len(), 6);
        let mut sorted = chains.clone();
        sorted.sort();
        assert_eq!(sorted, chains);
        let fig = bundled_poset("fig1").unwrap().poset;
        assert_eq!(maximal_chains(&fig, 0, 5).unwrap().count(), 3);
        assert_eq!(maximal_chains(&fig, 3, 3).unwrap().collect::<Vec<_>>(), vec![vec![3]]);
        assert!(matches!(maximal_chains(&fig, 2, 3), Err(Error::NotComparable(2, 3))));
        assert_eq!(chain_count(&b3), 6);
    }

    #[test]
    fn fig3_el_and_counts() {
        let fig = bundled_poset("fig3").unwrap();
        let lab = fig.labeling.as_ref().unwrap();
        assert!(verify_el(&fig.poset, lab).ok);
        assert_eq!(decreasing_chains(&fig.poset, lab, false).count, 0);
        let wm = el_counts(&fig.poset, lab);
        let words: BTreeMap<String, u64> = wm
            .counts
            .iter()
            .map(|(w, &c)| (lab.label_poset().display_word(w), c))
            .collect();
        assert_eq!(words, BTreeMap::from([("123".into(), 1), ("132".into(), 1), ("212".into(), 1)]));
        let lp = lab.label_poset();
        assert_eq!(weighted_tuple_sum(&wm, 2, &RankSelection::new([1, 2]), lp).unwrap(), 2);
    }

    #[test]
    fn repeated_bottom_labels_break_uniqueness() {
        let (b2, _) = boolean_lattice(2).unwrap();
        let bad = EdgeLabeling::from_triples(
            &b2,
            b2.covers().iter().map(|&(x, y)| (x, y, if x == 0 { 0 } else { 1 })),
            LabelPoset::chain(2),
        )
        .unwrap();
        let report = verify_el(&b2, &bad);
        assert!(!report.ok);
        assert_eq!(report.failures.len(), 1);
        let f = &report.failures[0];
        assert_eq!((f.lo, f.hi, f.kind), (b2.bottom(), b2.top(), FailureKind::MultipleIncreasing));
        assert_eq!(f.witnesses.len(), 2);
    }

    #[test]
    fn subspace_words() {
        let l = subspace_lattice(2, 2).unwrap();
        let wm = el_counts(&l.poset, &l.labeling);
        assert_eq!(wm.counts, BTreeMap::from([(vec![0, 1], 1), (vec![1, 0], 2)]));
        let l3 = subspace_lattice(3, 2).unwrap();
        let dec = decreasing_chains(&l3.poset, &l3.labeling, true);
        assert_eq!(dec.count, 8);
    }

    #[test]
    fn boolean_pairs_without_common_ascent() {
        let (b2, lab) = boolean_lattice(2).unwrap();
        let wm = el_counts(&b2, &lab);
        assert_eq!(weighted_tuple_sum(&wm, 2, &RankSelection::new([1]), lab.label_poset()).unwrap(), 3);
        let bad = WordMultiset { counts: BTreeMap::from([(vec![0], 1), (vec![0, 1], 1)]) };
        assert_eq!(
            weighted_tuple_sum(&bad, 2, &RankSelection::empty(), lab.label_poset()).unwrap_err(),
            Error::LengthMismatch(1, 2)
        );
    }

    #[test]
    fn budget_guard() {
        let (b3, lab) = boolean_lattice(3).unwrap();
        let cost = el_enumeration_cost(&b3);
        assert!(verify_el_budgeted(&b3, &lab, cost as u64).is_ok());
        assert!(matches!(
            verify_el_budgeted(&b3, &lab, cost as u64 - 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
