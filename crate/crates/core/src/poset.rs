//! Finite bounded posets given by their cover relation.
//!
//! A [`Poset`] is immutable once built. Construction validates the cover
//! list (no self covers, no duplicates, acyclic, one minimum and one
//! maximum, rank increases by exactly one along every cover) and computes
//! the reflexive transitive closure once, so order queries are a bit test.

use std::collections::{HashMap, HashSet, VecDeque};

use itertools::Itertools;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

/// Segre powers refuse to materialize more elements than this.
pub const MAX_SEGRE_ELEMENTS: u128 = 2_000_000;

#[derive(Clone, Debug)]
pub struct Poset {
    names: Vec<String>,
    covers: Vec<(usize, usize)>,
    /// `(upper, edge)` pairs per element, sorted by `upper`.
    up: Vec<Vec<(usize, usize)>>,
    /// `(lower, edge)` pairs per element, sorted by `lower`.
    down: Vec<Vec<(usize, usize)>>,
    rank: Vec<usize>,
    levels: Vec<Vec<usize>>,
    graded: bool,
    bottom: usize,
    top: usize,
    leq: BitMatrix,
}

/// Validates and builds a bounded graded poset from element names and
/// `(lower, upper)` cover pairs indexing into `names`.
pub fn build_poset<S: Into<String>>(
    names: impl IntoIterator<Item = S>,
    covers: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Poset> {
    Poset::assemble(
        names.into_iter().map(Into::into).collect(),
        covers.into_iter().collect(),
        true,
    )
}

impl Poset {
    fn assemble(names: Vec<String>, covers: Vec<(usize, usize)>, require_graded: bool) -> Result<Poset> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut seen = HashSet::with_capacity(covers.len());
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for (edge, &(x, y)) in covers.iter().enumerate() {
            if x >= n || y >= n {
                return Err(Error::InvalidIndex(x, y, n));
            }
            if x == y {
                return Err(Error::SelfCover(x));
            }
            if !seen.insert((x, y)) {
                return Err(Error::DuplicateCover(x, y));
            }
            up[x].push((y, edge));
            down[y].push((x, edge));
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }

        // Kahn's algorithm, smallest index first for a deterministic order.
        let mut indegree: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &(w, _) in &up[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::CyclicCovers);
        }

        let sources: Vec<usize> = (0..n).filter(|&v| down[v].is_empty()).collect();
        let sinks: Vec<usize> = (0..n).filter(|&v| up[v].is_empty()).collect();
        if sources.len() != 1 || sinks.len() != 1 {
            return Err(Error::NotBounded { sources: sources.len(), sinks: sinks.len() });
        }
        let (bottom, top) = (sources[0], sinks[0]);

        // Longest-path rank; in a graded poset every cover raises it by one.
        let mut rank = vec![0usize; n];
        for &v in &topo {
            for &(w, _) in &up[v] {
                rank[w] = rank[w].max(rank[v] + 1);
            }
        }
        let skipping = covers.iter().find(|&&(x, y)| rank[y] != rank[x] + 1);
        let graded = skipping.is_none();
        if let (true, Some(&(x, y))) = (require_graded, skipping) {
            return Err(Error::NotGraded(x, y));
        }

        let mut levels = vec![Vec::new(); rank[top] + 1];
        for v in 0..n {
            levels[rank[v]].push(v);
        }

        let mut leq = BitMatrix::new(n);
        for &v in topo.iter().rev() {
            leq.set(v, v);
            for &(w, _) in &up[v] {
                leq.union_rows(v, w);
            }
        }

        Ok(Poset { names, covers, up, down, rank, levels, graded, bottom, top, leq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Cover edges `(lower, upper)`; an edge's index is its position here.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Upper covers of `x` as `(element, edge index)`, ascending by element.
    pub fn upper_covers(&self, x: usize) -> &[(usize, usize)] {
        &self.up[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[(usize, usize)] {
        &self.down[x]
    }

    pub fn edge_index(&self, x: usize, y: usize) -> Option<usize> {
        let list = self.up.get(x)?;
        list.binary_search_by_key(&y, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.edge_index(x, y).is_some()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Rank of `x`. For a non-graded poset this is the longest chain
    /// length from the bottom.
    pub fn rank_of(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// Rank of the top element.
    pub fn rank(&self) -> usize {
        self.rank[self.top]
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    /// Elements of rank `k`, ascending by index.
    pub fn level(&self, k: usize) -> &[usize] {
        self.levels.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// Elements in a linear extension of the order (by rank, then index).
    pub fn linear_extension(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.iter().flatten().copied()
    }

    pub fn less_or_equal(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y)
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        x != y && self.leq.get(x, y)
    }

    /// All `z` with `x <= z`, ascending.
    pub fn up_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.leq.row_ones(x)
    }

    fn check(&self, x: usize) -> Result<()> {
        if x < self.len() { Ok(()) } else { Err(Error::NoSuchElement(x)) }
    }

    pub fn interval(&self, x: usize, y: usize) -> Result<Interval<'_>> {
        interval(self, x, y)
    }

    /// Structural equality up to renaming elements: same element count and
    /// identical cover sets under the identity map of indices.
    pub fn same_covers(&self, other: &Poset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let a: HashSet<_> = self.covers.iter().collect();
        let b: HashSet<_> = other.covers.iter().collect();
        a == b
    }
}

pub fn less_or_equal(p: &Poset, x: usize, y: usize) -> bool {
    p.less_or_equal(x, y)
}

/// The closed interval `[lo, hi]` of a parent poset.
#[derive(Clone, Debug)]
pub struct Interval<'a> {
    parent: &'a Poset,
    lo: usize,
    hi: usize,
    members: Vec<usize>,
}

pub fn interval(p: &Poset, x: usize, y: usize) -> Result<Interval<'_>> {
    p.check(x)?;
    p.check(y)?;
    if !p.less_or_equal(x, y) {
        return Err(Error::NotComparable(x, y));
    }
    let members = p.up_set(x).filter(|&z| p.less_or_equal(z, y)).collect();
    Ok(Interval { parent: p, lo: x, hi: y, members })
}

impl<'a> Interval<'a> {
    pub fn parent(&self) -> &'a Poset {
        self.parent
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    /// Parent indices of the members, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, z: usize) -> bool {
        self.members.binary_search(&z).is_ok()
    }

    /// The interval as a standalone poset; member `i` becomes index `i`.
    pub fn to_poset(&self) -> Poset {
        let local: HashMap<usize, usize> =
            self.members.iter().enumerate().map(|(i, &z)| (z, i)).collect();
        let names = self.members.iter().map(|&z| self.parent.names[z].clone()).collect();
        let covers = self
            .parent
            .covers
            .iter()
            .filter_map(|&(a, b)| Some((*local.get(&a)?, *local.get(&b)?)))
            .collect();
        Poset::assemble(names, covers, false).expect("an interval of a bounded poset is bounded")
    }
}

fn tuple_name<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    format!("({})", parts.format(","))
}

/// Cartesian product ordered componentwise. Element `(i, j)` has index
/// `i * r.len() + j`. The result is always bounded; it is graded whenever
/// both factors are.
pub fn product(p: &Poset, r: &Poset) -> Poset {
    let m = r.len();
    let mut names = Vec::with_capacity(p.len() * m);
    let mut covers = Vec::new();
    for i in 0..p.len() {
        for j in 0..m {
            names.push(tuple_name([p.name(i), r.name(j)].into_iter()));
            let mut targets: Vec<usize> = p.up[i]
                .iter()
                .map(|&(i2, _)| i2 * m + j)
                .chain(r.up[j].iter().map(|&(j2, _)| i * m + j2))
                .collect();
            targets.sort_unstable();
            covers.extend(targets.into_iter().map(|y| (i * m + j, y)));
        }
    }
    Poset::assemble(names, covers, false).expect("a product of bounded posets is bounded")
}

/// A t-fold Segre power together with the component tuple of each element.
#[derive(Clone, Debug)]
pub struct SegrePower {
    pub poset: Poset,
    /// `components[x]` lists the parent elements of tuple `x`.
    pub components: Vec<Vec<usize>>,
    pub t: usize,
}

/// Induced subposet of the t-fold product on tuples whose entries share a
/// rank. Tuples are indexed in lexicographic order of parent indices.
pub fn segre_power(p: &Poset, t: usize) -> Result<SegrePower> {
    if t == 0 {
        return Err(Error::OutOfBounds("Segre exponent 0".into()));
    }
    if !p.is_graded() {
        let &(x, y) = p.covers.iter().find(|&&(x, y)| p.rank[y] != p.rank[x] + 1).unwrap();
        return Err(Error::NotGraded(x, y));
    }
    if t == 1 {
        let components = (0..p.len()).map(|x| vec![x]).collect();
        return Ok(SegrePower { poset: p.clone(), components, t });
    }

    let mut total: u128 = 0;
    for level in &p.levels {
        let size = (level.len() as u128)
            .checked_pow(t as u32)
            .ok_or(Error::OutOfBounds("Segre power size".into()))?;
        total = total.saturating_add(size);
    }
    if total > MAX_SEGRE_ELEMENTS {
        return Err(Error::OutOfBounds(format!("Segre power with {total} elements")));
    }

    let mut tuples: Vec<Vec<usize>> = p
        .levels
        .iter()
        .flat_map(|level| std::iter::repeat_n(level.iter().copied(), t).multi_cartesian_product())
        .collect();
    tuples.sort_unstable();
    let index: HashMap<&[usize], usize> =
        tuples.iter().enumerate().map(|(i, tup)| (tup.as_slice(), i)).collect();

    let mut covers = Vec::new();
    for (x, tuple) in tuples.iter().enumerate() {
        let mut targets: Vec<usize> = tuple
            .iter()
            .map(|&c| p.up[c].iter().map(|&(u, _)| u))
            .multi_cartesian_product()
            .map(|upper| index[upper.as_slice()])
            .collect();
        targets.sort_unstable();
        covers.extend(targets.into_iter().map(|y| (x, y)));
    }
    let names = tuples
        .iter()
        .map(|tup| tuple_name(tup.iter().map(|&c| p.name(c))))
        .collect();
    let poset = Poset::assemble(names, covers, true)?;
    Ok(SegrePower { poset, components: tuples, t })
}

/// A set of proper ranks `J ⊆ {1, …, n−1}`, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankSelection(Vec<usize>);

impl RankSelection {
    pub fn new(ranks: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = ranks.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        RankSelection(v)
    }

    pub fn empty() -> Self {
        RankSelection(Vec::new())
    }

    /// `{1, …, n−1}`.
    pub fn full(n: usize) -> Self {
        RankSelection((1..n).collect())
    }

    /// Bit `i` of `mask` selects rank `i`.
    pub fn from_mask(mask: u64) -> Self {
        RankSelection((1..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn mask(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |m, &r| (r < 64).then(|| m | 1 << r))
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, r: usize) -> bool {
        self.0.binary_search(&r).is_ok()
    }

    /// Checks `J ⊆ [n−1]` for a poset of rank `n`.
    pub fn validate(&self, top: usize) -> Result<()> {
        match self.0.iter().find(|&&r| r == 0 || r >= top) {
            Some(&rank) => Err(Error::InvalidRankSelection { rank, top }),
            None => Ok(()),
        }
    }

    /// All subsets, in increasing order of their bit masks.
    pub fn subsets(&self) -> impl Iterator<Item = RankSelection> + '_ {
        let k = self.0.len();
        (0u64..1 << k).map(move |bits| {
            RankSelection((0..k).filter(|i| bits >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }

    /// All `J ⊆ [n−1]`, in increasing order of bit mask.
    pub fn all(n: usize) -> Vec<RankSelection> {
        RankSelection::full(n).subsets().collect()
    }
}

impl std::fmt::Display for RankSelection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.0.iter().format(","))
    }
}

/// Elements whose rank lies in `J`, plus bottom and top, with the induced
/// order. The result is graded of rank `|J| + 1`.
pub fn rank_selected(p: &Poset, j: &RankSelection) -> Result<Poset> {
    if !p.is_graded() {
        return Err(Error::NotGraded(p.bottom, p.top));
    }
    j.validate(p.rank())?;
    let mut chosen = vec![0];
    chosen.extend_from_slice(j.ranks());
    chosen.push(p.rank());
    if p.rank() == 0 {
        chosen.truncate(1);
    }
    let mut keep: Vec<(usize, usize)> = chosen
        .iter()
        .enumerate()
        .flat_map(|(lvl, &r)| p.level(r).iter().map(move |&x| (x, lvl)))
        .collect();
    keep.sort_unstable();
    let local: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &(x, _))| (x, i)).collect();
    let level_of: HashMap<usize, usize> = keep.iter().copied().collect();

    let mut covers = Vec::new();
    for &(x, lvl) in &keep {
        let Some(&next) = chosen.get(lvl + 1) else { continue };
        for &y in p.level(next) {
            if p.less_or_equal(x, y) {
                debug_assert_eq!(level_of[&y], lvl + 1);
                covers.push((local[&x], local[&y]));
            }
        }
    }
    let names = keep.iter().map(|&(x, _)| p.names[x].clone()).collect();
    Poset::assemble(names, covers, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fig1() -> Poset {
        build_poset(
            ["0̂", "a", "b", "c", "d", "1̂"],
            [(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap()
    }

    fn chain(k: usize) -> Poset {
        build_poset((0..k).map(|i| i.to_string()), (1..k).map(|i| (i - 1, i))).unwrap()
    }

    fn boolean2() -> Poset {
        build_poset(["∅", "1", "2", "12"], [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn two_chain() {
        let p = chain(2);
        assert_eq!(p.rank(), 1);
        assert_eq!((p.bottom(), p.top()), (0, 1));
    }

    #[test]
    fn fig1_rank_and_order() {
        let p = fig1();
        assert_eq!(p.rank(), 3);
        assert!(p.less_or_equal(0, 4));
        assert!(!p.less_or_equal(2, 3));
        assert!((0..6).all(|x| p.less_or_equal(x, x)));
    }

    #[test]
    fn rejects_bad_inputs() {
        let skip = build_poset(
            ["0̂", "a", "b", "c", "d", "1̂"],
            [(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (3, 5), (4, 5), (0, 3)],
        );
        assert_eq!(skip.unwrap_err(), Error::NotGraded(0, 3));
        assert_eq!(build_poset(["a", "b"], [(0, 1), (0, 1)]).unwrap_err(), Error::DuplicateCover(0, 1));
        assert_eq!(build_poset(["a", "b"], [(0, 0)]).unwrap_err(), Error::SelfCover(0));
        assert_eq!(build_poset(["a", "b"], [(0, 2)]).unwrap_err(), Error::InvalidIndex(0, 2, 2));
        assert_eq!(
            build_poset(["a", "b", "c"], [(0, 1), (1, 2), (2, 1)]).unwrap_err(),
            Error::CyclicCovers
        );
        assert_eq!(
            build_poset(["a", "b", "c"], [(0, 1), (0, 2)]).unwrap_err(),
            Error::NotBounded { sources: 1, sinks: 2 }
        );
        assert_eq!(build_poset(Vec::<String>::new(), []).unwrap_err(), Error::Empty);
    }

    #[test]
    fn intervals() {
        let p = fig1();
        let iv = p.interval(0, 4).unwrap();
        assert_eq!(iv.members(), &[0, 1, 2, 4]);
        let single = p.interval(3, 3).unwrap().to_poset();
        assert_eq!(single.len(), 1);
        assert_eq!(single.rank(), 0);
        assert_eq!(p.interval(2, 3).unwrap_err(), Error::NotComparable(2, 3));
        let whole = p.interval(p.bottom(), p.top()).unwrap().to_poset();
        assert!(whole.same_covers(&p));
    }

    #[test]
    fn products() {
        let p = fig1();
        assert_eq!(product(&p, &p).len(), 36);
        let d = product(&chain(2), &chain(2));
        assert_eq!(d.len(), 4);
        assert_eq!(d.covers().len(), 4);
        assert_eq!(d.rank(), 2);
        let b = product(&boolean2(), &boolean2());
        assert_eq!(b.len(), 16);
        assert!(b.is_graded());
        assert_eq!(b.rank(), 4);
    }

    #[test]
    fn segre_square_of_fig1() {
        let p = fig1();
        let sq = segre_power(&p, 2).unwrap();
        assert_eq!(sq.poset.len(), 10);
        assert_eq!(sq.poset.rank(), 3);
        for (x, comps) in sq.components.iter().enumerate() {
            assert_eq!(sq.poset.rank_of(x), p.rank_of(comps[0]));
        }
        let same = segre_power(&p, 1).unwrap();
        assert!(same.poset.same_covers(&p));
        let b = segre_power(&boolean2(), 2).unwrap();
        let sizes: Vec<usize> = b.poset.levels().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4, 1]);
    }

    #[test]
    fn rank_selection() {
        let p = boolean2();
        assert!(rank_selected(&p, &RankSelection::full(2)).unwrap().same_covers(&p));
        let empty = rank_selected(&p, &RankSelection::empty()).unwrap();
        assert_eq!((empty.len(), empty.rank()), (2, 1));
        assert!(rank_selected(&p, &RankSelection::new([2])).is_err());
        assert_eq!(RankSelection::new([3, 1, 3]).ranks(), &[1, 3]);
        assert_eq!(RankSelection::full(4).subsets().count(), 8);
        assert_eq!(RankSelection::from_mask(0b1010).ranks(), &[1, 3]);
    }
}
