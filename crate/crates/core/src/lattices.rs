//! Generators for Boolean lattices, subspace lattices over prime fields and
//! the small bundled example posets, each with its standard edge labeling.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::labeling::{BaseLabels, EdgeLabeling, LabelPoset, LabelValue, LabeledPoset};
use crate::poset::{build_poset, Poset};

pub const MAX_BOOLEAN_N: usize = 16;
pub const MAX_SUBSPACES: u128 = 100_000;

/// Display name of a subset of `[n]` given as a bit set (bit `i-1` for `i`).
pub fn subset_name(bits: u32, n: usize) -> String {
    if bits == 0 {
        return "∅".into();
    }
    let members = (1..=n).filter(|i| bits >> (i - 1) & 1 == 1);
    if n < 10 {
        members.map(|i| i.to_string()).collect()
    } else {
        members.format(",").to_string()
    }
}

/// Subsets of `[n]` under inclusion; the cover `A ⋖ A ∪ {a}` is labeled `a`
/// over the chain `[n]`. Elements are ordered by size, then numeric value
/// of the bit set.
pub fn boolean_lattice(n: usize) -> Result<(Poset, EdgeLabeling)> {
    if n == 0 || n > MAX_BOOLEAN_N {
        return Err(Error::OutOfBounds(format!("Boolean lattice B_{n}")));
    }
    let mut sets: Vec<u32> = (0..1u32 << n).collect();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    let mut index = vec![0usize; sets.len()];
    for (i, &s) in sets.iter().enumerate() {
        index[s as usize] = i;
    }
    let mut covers = Vec::new();
    let mut triples = Vec::new();
    for (i, &s) in sets.iter().enumerate() {
        let mut ups: Vec<(usize, usize)> = (0..n)
            .filter(|a| s >> a & 1 == 0)
            .map(|a| (index[(s | 1 << a) as usize], a))
            .collect();
        ups.sort_unstable();
        for (j, a) in ups {
            covers.push((i, j));
            triples.push((i, j, a));
        }
    }
    let p = build_poset(sets.iter().map(|&s| subset_name(s, n)), covers)?;
    let lab = EdgeLabeling::from_triples(&p, triples, LabelPoset::chain(n))?;
    Ok((p, lab))
}

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn inverse_mod(a: u8, q: u8) -> u8 {
    // q is prime and small: Fermat.
    let (mut base, mut exp, mut acc) = (a as u32, q as u32 - 2, 1u32);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q as u32;
        }
        base = base * base % q as u32;
        exp >>= 1;
    }
    acc as u8
}

/// Row-reduces in place over F_q, visiting columns in `order`. Returns the
/// pivot column of each nonzero row, in row order, and drops zero rows.
fn eliminate(rows: &mut Vec<Vec<u8>>, q: u8, order: impl Iterator<Item = usize>) -> Vec<usize> {
    let qq = q as u32;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in order {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, found);
        let inv = inverse_mod(rows[r][c], q) as u32;
        for v in rows[r].iter_mut() {
            *v = (*v as u32 * inv % qq) as u8;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let factor = rows[i][c] as u32;
            let (pivot_row, other) = if i < r {
                let (lo, hi) = rows.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (o, &p) in other.iter_mut().zip(pivot_row.iter()) {
                *o = ((*o as u32 + qq * qq - factor * p as u32) % qq) as u8;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A subspace of F_q^n stored as its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    q: u8,
    rows: Vec<Vec<u8>>,
}

/// Canonical RREF (left-most pivots) of the span of `vectors` over F_q.
/// Entries are reduced mod `q` first.
pub fn rref_canonical(n: usize, q: u8, vectors: &[Vec<u8>]) -> Subspace {
    let mut rows: Vec<Vec<u8>> = vectors
        .iter()
        .map(|v| {
            assert_eq!(v.len(), n, "vector length must equal the ambient dimension");
            v.iter().map(|&x| x % q).collect()
        })
        .collect();
    eliminate(&mut rows, q, 0..n);
    Subspace { n, q, rows }
}

impl Subspace {
    pub fn zero(n: usize, q: u8) -> Self {
        Subspace { n, q, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> u8 {
        self.q
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Canonical byte encoding; equal keys iff equal spans.
    pub fn key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(1 + self.n * self.rows.len());
        key.push(self.rows.len() as u8);
        key.extend(self.rows.iter().flatten());
        key
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let qq = self.q as u32;
        let mut v: Vec<u32> = v.iter().map(|&x| x as u32 % qq).collect();
        for row in &self.rows {
            let pivot = row.iter().position(|&x| x != 0).expect("RREF rows are nonzero");
            let factor = v[pivot];
            if factor != 0 {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = (*a + qq * qq - factor * b as u32) % qq;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// The span of `self` and `v`.
    pub fn extend(&self, v: &[u8]) -> Subspace {
        let mut vectors = self.rows.clone();
        vectors.push(v.to_vec());
        rref_canonical(self.n, self.q, &vectors)
    }

    /// Semicolon-joined rows, e.g. `"101;210"`; `"∅"` for the zero space.
    pub fn display_name(&self) -> String {
        if self.rows.is_empty() {
            return "∅".into();
        }
        let sep = if self.q > 10 { "," } else { "" };
        self.rows.iter().map(|r| r.iter().join(sep)).join(";")
    }
}

/// The set of indices (1-based) that occur as the right-most nonzero
/// coordinate of some nonzero vector of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FSet(pub BTreeSet<usize>);

impl FSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Right-most-pivot elimination: the pivots of the column-reversed echelon
/// form are exactly the achievable right-most nonzero coordinates.
pub fn f_set(x: &Subspace) -> FSet {
    let mut rows = x.rows.clone();
    let pivots = eliminate(&mut rows, x.q, (0..x.n).rev());
    FSet(pivots.into_iter().map(|c| c + 1).collect())
}

/// A generated subspace lattice; `subspaces[i]` is element `i`.
#[derive(Clone, Debug)]
pub struct SubspaceLattice {
    pub poset: Poset,
    pub labeling: EdgeLabeling,
    pub subspaces: Vec<Subspace>,
}

impl SubspaceLattice {
    pub fn index_of(&self, x: &Subspace) -> Option<usize> {
        self.subspaces.iter().position(|s| s == x)
    }

    pub fn into_labeled(self, name: String) -> LabeledPoset {
        LabeledPoset { name, poset: self.poset, labeling: Some(self.labeling) }
    }
}

fn subspace_count(n: usize, q: u64) -> Option<u128> {
    // Σ_k C_q(n, k) via the q-Pascal rule C(n,k) = C(n-1,k-1) + q^k C(n-1,k).
    let mut row: Vec<u128> = vec![1];
    for m in 1..=n {
        let mut next = vec![1u128; m + 1];
        for k in 1..m {
            next[k] = row[k - 1].checked_add((q as u128).checked_pow(k as u32)?.checked_mul(row[k])?)?;
        }
        row = next;
    }
    row.into_iter().try_fold(0u128, |a, b| a.checked_add(b))
}

/// All subspaces of F_q^n under inclusion. The cover `X ⋖ Y` is labeled by
/// the unique element of `f_set(Y) ∖ f_set(X)` over the chain `[n]`.
pub fn subspace_lattice(n: usize, q: u64) -> Result<SubspaceLattice> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if n == 0 || q > 251 {
        return Err(Error::OutOfBounds(format!("subspace lattice B_{n}({q})")));
    }
    match subspace_count(n, q) {
        Some(c) if c <= MAX_SUBSPACES => {}
        _ => return Err(Error::OutOfBounds(format!("subspace lattice B_{n}({q})"))),
    }
    let q8 = q as u8;
    let vectors: Vec<Vec<u8>> = std::iter::repeat_n(0..q8, n)
        .multi_cartesian_product()
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();

    let mut levels: Vec<Vec<Subspace>> = vec![vec![Subspace::zero(n, q8)]];
    let mut ups: Vec<HashMap<Subspace, Vec<Subspace>>> = Vec::new();
    for k in 0..n {
        let mut level_ups = HashMap::new();
        let mut next = BTreeSet::new();
        for x in &levels[k] {
            let mut covers = BTreeSet::new();
            for v in vectors.iter().filter(|v| !x.contains(v)) {
                covers.insert(x.extend(v));
            }
            next.extend(covers.iter().cloned());
            level_ups.insert(x.clone(), covers.into_iter().collect::<Vec<_>>());
        }
        ups.push(level_ups);
        levels.push(next.into_iter().collect());
    }

    let subspaces: Vec<Subspace> = levels.into_iter().flatten().collect();
    let index: HashMap<&Subspace, usize> = subspaces.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let fsets: Vec<FSet> = subspaces.iter().map(f_set).collect();

    let mut covers = Vec::new();
    let mut triples = Vec::new();
    for (i, x) in subspaces.iter().enumerate() {
        let Some(above) = ups.get(x.dim()).and_then(|m| m.get(x)) else { continue };
        let mut targets: Vec<usize> = above.iter().map(|y| index[y]).collect();
        targets.sort_unstable();
        for j in targets {
            let new: Vec<usize> = fsets[j].0.difference(&fsets[i].0).copied().collect();
            assert_eq!(new.len(), 1, "cover must add exactly one right-most index");
            covers.push((i, j));
            triples.push((i, j, new[0] - 1));
        }
    }
    let poset = build_poset(subspaces.iter().map(Subspace::display_name), covers)?;
    let labeling = EdgeLabeling::from_triples(&poset, triples, LabelPoset::chain(n))?;
    Ok(SubspaceLattice { poset, labeling, subspaces })
}

/// Names accepted by [`bundled_poset`].
pub const BUNDLED: [&str; 2] = ["fig1", "fig3"];

/// The six-element poset `0̂ < a, b < c, d < 1̂` with `a ⋖ c, a ⋖ d, b ⋖ d`.
/// `"fig3"` adds a labeling over `[3]` with a repeated label on one chain.
pub fn bundled_poset(name: &str) -> Result<LabeledPoset> {
    let covers = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (3, 5), (4, 5)];
    let poset = build_poset(["0̂", "a", "b", "c", "d", "1̂"], covers)?;
    let labeling = match name {
        "fig1" => None,
        "fig3" => {
            let labels = [1, 2, 2, 3, 1, 3, 2];
            let base = BaseLabels::new(
                (1..=3).map(LabelValue::Int).collect(),
                vec![(0, 1), (1, 2)],
            )?;
            let triples = covers.iter().zip(labels).map(|(&(x, y), l)| (x, y, l - 1));
            Some(EdgeLabeling::from_triples(&poset, triples, LabelPoset::Base(base))?)
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(LabeledPoset { name: name.to_string(), poset, labeling })
}
