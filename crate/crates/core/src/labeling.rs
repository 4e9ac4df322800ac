//! Edge labelings, chain words and their ascent/descent structure.
//!
//! Labels are interned as [`LabelId`]s into a [`LabelPoset`]. A t-fold
//! product label poset never materializes its order: a tuple label is a
//! mixed-radix number over the base labels (first component most
//! significant) and comparisons decode it digit by digit.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::poset::{Poset, SegrePower};

pub type LabelId = usize;

/// A label value as written in interchange documents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelValue {
    Int(i64),
    Text(String),
}

impl fmt::Display for LabelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelValue::Int(i) => write!(f, "{i}"),
            LabelValue::Text(s) => f.write_str(s),
        }
    }
}

/// A finite label poset given by explicit values and covering pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseLabels {
    values: Vec<LabelValue>,
    covers: Vec<(usize, usize)>,
    /// Strict order: `less.get(a, b)` iff `a < b`.
    less: BitMatrix,
}

impl BaseLabels {
    pub fn new(values: Vec<LabelValue>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let n = values.len();
        let mut less = BitMatrix::new(n);
        for &(a, b) in &covers {
            if a >= n || b >= n {
                return Err(Error::NoSuchLabel(a.max(b)));
            }
            less.set(a, b);
        }
        // Warshall over bit rows.
        for k in 0..n {
            for i in 0..n {
                if less.get(i, k) {
                    less.union_rows(i, k);
                }
            }
        }
        if (0..n).any(|i| less.get(i, i)) {
            return Err(Error::InvalidLabelOrder);
        }
        Ok(BaseLabels { values, covers, less })
    }

    /// The total order `1 < 2 < … < n`.
    pub fn chain(n: usize) -> Self {
        let values = (1..=n as i64).map(LabelValue::Int).collect();
        let covers = (1..n).map(|i| (i - 1, i)).collect();
        BaseLabels::new(values, covers).expect("a chain is a partial order")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[LabelValue] {
        &self.values
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn less(&self, a: LabelId, b: LabelId) -> bool {
        self.less.get(a, b)
    }

    /// Whether this is exactly `chain(len())`.
    pub fn is_standard_chain(&self) -> bool {
        self.values.iter().enumerate().all(|(i, v)| *v == LabelValue::Int(i as i64 + 1))
            && self.covers.len() + 1 == self.len().max(1)
            && self.covers.iter().enumerate().all(|(i, &c)| c == (i, i + 1))
    }

    pub fn is_total(&self) -> bool {
        (0..self.len()).tuple_combinations().all(|(a, b)| self.less(a, b) || self.less(b, a))
    }

    pub fn id_of(&self, value: &LabelValue) -> Option<LabelId> {
        self.values.iter().position(|v| v == value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelPoset {
    Base(BaseLabels),
    /// `base^t` under the componentwise order.
    Product { base: BaseLabels, t: usize },
}

impl LabelPoset {
    pub fn chain(n: usize) -> Self {
        LabelPoset::Base(BaseLabels::chain(n))
    }

    pub fn base(&self) -> &BaseLabels {
        match self {
            LabelPoset::Base(b) | LabelPoset::Product { base: b, .. } => b,
        }
    }

    /// Number of components of a label (1 for a base poset).
    pub fn arity(&self) -> usize {
        match self {
            LabelPoset::Base(_) => 1,
            LabelPoset::Product { t, .. } => *t,
        }
    }

    /// Number of labels, if it fits in a `usize`.
    pub fn len(&self) -> Option<usize> {
        self.base().len().checked_pow(self.arity() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.base().is_empty()
    }

    pub fn contains(&self, id: LabelId) -> bool {
        self.len().is_none_or(|n| id < n)
    }

    /// Component base labels of `id`, first component first.
    pub fn components(&self, id: LabelId) -> Vec<LabelId> {
        let radix = self.base().len();
        let t = self.arity();
        let mut digits = vec![0; t];
        let mut rest = id;
        for d in digits.iter_mut().rev() {
            *d = rest % radix;
            rest /= radix;
        }
        digits
    }

    /// Interns a tuple of base labels.
    pub fn compose(&self, components: &[LabelId]) -> Result<LabelId> {
        let radix = self.base().len();
        debug_assert_eq!(components.len(), self.arity());
        components.iter().try_fold(0usize, |acc, &c| {
            if c >= radix {
                return Err(Error::NoSuchLabel(c));
            }
            acc.checked_mul(radix)
                .and_then(|v| v.checked_add(c))
                .ok_or(Error::Overflow("product label index"))
        })
    }

    /// Strict order. For products: `a_i <= b_i` for all `i` and `a != b`.
    pub fn less(&self, a: LabelId, b: LabelId) -> bool {
        match self {
            LabelPoset::Base(base) => base.less(a, b),
            LabelPoset::Product { base, t } => {
                if a == b {
                    return false;
                }
                let radix = base.len();
                let (mut a, mut b) = (a, b);
                for _ in 0..*t {
                    let (da, db) = (a % radix, b % radix);
                    if da != db && !base.less(da, db) {
                        return false;
                    }
                    a /= radix;
                    b /= radix;
                }
                true
            }
        }
    }

    pub fn is_total(&self) -> bool {
        match self {
            LabelPoset::Base(b) => b.is_total(),
            LabelPoset::Product { base, t } => *t == 1 && base.is_total() || base.len() <= 1,
        }
    }

    pub fn display(&self, id: LabelId) -> String {
        match self {
            LabelPoset::Base(b) => b.values[id].to_string(),
            LabelPoset::Product { base, .. } => {
                format!("({})", self.components(id).into_iter().map(|c| &base.values[c]).format(","))
            }
        }
    }

    pub fn display_word(&self, word: &[LabelId]) -> String {
        let wide = self.arity() == 1 && self.base().values.iter().any(|v| v.to_string().chars().count() > 1);
        let sep = if wide { " " } else { "" };
        word.iter().map(|&l| self.display(l)).join(sep)
    }
}

/// `Λ^t`. Products of products flatten, which preserves both the mixed-radix
/// encoding and the componentwise order.
pub fn product_label_poset(lp: &LabelPoset, t: usize) -> LabelPoset {
    match (lp, t) {
        (_, 1) => lp.clone(),
        (LabelPoset::Base(base), t) => LabelPoset::Product { base: base.clone(), t },
        (LabelPoset::Product { base, t: inner }, t) => LabelPoset::Product { base: base.clone(), t: inner * t },
    }
}

/// A labeling of the cover edges of a poset, indexed by edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    label_of: Vec<LabelId>,
    label_poset: LabelPoset,
}

impl EdgeLabeling {
    pub fn new(p: &Poset, label_of: Vec<LabelId>, label_poset: LabelPoset) -> Result<Self> {
        if label_of.len() != p.covers().len() {
            let &(x, y) = p.covers().get(label_of.len()).unwrap_or(&(0, 0));
            return Err(Error::UnlabeledCover(x, y));
        }
        if let Some(&bad) = label_of.iter().find(|&&l| !label_poset.contains(l)) {
            return Err(Error::NoSuchLabel(bad));
        }
        Ok(EdgeLabeling { label_of, label_poset })
    }

    /// Builds a labeling from `(lower, upper, label)` triples.
    pub fn from_triples(
        p: &Poset,
        triples: impl IntoIterator<Item = (usize, usize, LabelId)>,
        label_poset: LabelPoset,
    ) -> Result<Self> {
        let mut label_of = vec![None; p.covers().len()];
        for (x, y, l) in triples {
            let edge = p.edge_index(x, y).ok_or(Error::NotACover(x, y))?;
            if label_of[edge].replace(l).is_some() {
                return Err(Error::RelabeledCover(x, y));
            }
        }
        let label_of = label_of
            .into_iter()
            .enumerate()
            .map(|(e, l)| l.ok_or_else(|| Error::UnlabeledCover(p.covers()[e].0, p.covers()[e].1)))
            .collect::<Result<_>>()?;
        EdgeLabeling::new(p, label_of, label_poset)
    }

    pub fn label_poset(&self) -> &LabelPoset {
        &self.label_poset
    }

    pub fn label(&self, edge: usize) -> LabelId {
        self.label_of[edge]
    }

    pub fn labels(&self) -> &[LabelId] {
        &self.label_of
    }

    pub fn label_between(&self, p: &Poset, x: usize, y: usize) -> Option<LabelId> {
        p.edge_index(x, y).map(|e| self.label_of[e])
    }
}

/// Label word of a saturated chain, kept alongside the chain itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainWord {
    pub letters: Vec<LabelId>,
    pub chain: Vec<usize>,
}

pub fn label_chain(p: &Poset, lab: &EdgeLabeling, chain: &[usize]) -> Result<ChainWord> {
    let letters = chain
        .iter()
        .tuple_windows()
        .map(|(&x, &y)| lab.label_between(p, x, y).ok_or(Error::NotSaturated(x, y)))
        .collect::<Result<_>>()?;
    Ok(ChainWord { letters, chain: chain.to_vec() })
}

/// Ascent and descent positions of a word, 1-indexed: position `i` sits
/// between letters `i` and `i + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AscentDescentProfile {
    pub ascents: Vec<usize>,
    pub descents: Vec<usize>,
}

impl AscentDescentProfile {
    pub fn ascent_mask(&self) -> u64 {
        self.ascents.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn descent_mask(&self) -> u64 {
        self.descents.iter().fold(0, |m, &i| m | 1 << i)
    }
}

pub fn ascent_descent(word: &[LabelId], lp: &LabelPoset) -> AscentDescentProfile {
    let mut profile = AscentDescentProfile::default();
    for (i, (&a, &b)) in word.iter().tuple_windows().enumerate() {
        if lp.less(a, b) {
            profile.ascents.push(i + 1);
        } else {
            profile.descents.push(i + 1);
        }
    }
    profile
}

/// Ascent set as a bit mask (bit `i` for position `i`). Words longer than
/// 64 letters do not fit.
pub fn ascent_mask(word: &[LabelId], lp: &LabelPoset) -> Result<u64> {
    if word.len() > 64 {
        return Err(Error::OutOfBounds(format!("word of length {}", word.len())));
    }
    Ok(word
        .iter()
        .tuple_windows()
        .enumerate()
        .filter(|(_, (&a, &b))| lp.less(a, b))
        .fold(0, |m, (i, _)| m | 1 << (i + 1)))
}

pub fn is_increasing(word: &[LabelId], lp: &LabelPoset) -> bool {
    word.iter().tuple_windows().all(|(&a, &b)| lp.less(a, b))
}

pub fn is_decreasing(word: &[LabelId], lp: &LabelPoset) -> bool {
    !word.iter().tuple_windows().any(|(&a, &b)| lp.less(a, b))
}

/// Outcome of comparing two words at their first differing letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexOrder {
    Precedes,
    Follows,
    Equal,
    /// The first differing letters are incomparable.
    Incomparable,
}

pub fn lex_compare(w1: &[LabelId], w2: &[LabelId], lp: &LabelPoset) -> Result<LexOrder> {
    if w1.len() != w2.len() {
        return Err(Error::LengthMismatch(w1.len(), w2.len()));
    }
    Ok(match w1.iter().zip(w2).find(|(a, b)| a != b) {
        None => LexOrder::Equal,
        Some((&a, &b)) if lp.less(a, b) => LexOrder::Precedes,
        Some((&a, &b)) if lp.less(b, a) => LexOrder::Follows,
        Some(_) => LexOrder::Incomparable,
    })
}

pub fn lex_precedes(w1: &[LabelId], w2: &[LabelId], lp: &LabelPoset) -> Result<bool> {
    Ok(lex_compare(w1, w2, lp)? == LexOrder::Precedes)
}

/// Labels each cover of the Segre power by the tuple of component labels.
pub fn lift_labeling(base: &Poset, lab: &EdgeLabeling, power: &SegrePower) -> Result<EdgeLabeling> {
    if power.t == 1 {
        return Ok(lab.clone());
    }
    let lp = product_label_poset(&lab.label_poset, power.t);
    let label_of = power
        .poset
        .covers()
        .iter()
        .map(|&(x, y)| {
            // Components of a composite base label flatten into the tuple.
            let mut digits = Vec::with_capacity(lp.arity());
            for (&cx, &cy) in power.components[x].iter().zip(&power.components[y]) {
                let l = lab.label_between(base, cx, cy).ok_or(Error::NotACover(cx, cy))?;
                digits.extend(lab.label_poset.components(l));
            }
            lp.compose(&digits)
        })
        .collect::<Result<_>>()?;
    EdgeLabeling::new(&power.poset, label_of, lp)
}

/// A poset together with an optional edge labeling and a display name.
#[derive(Clone, Debug)]
pub struct LabeledPoset {
    pub name: String,
    pub poset: Poset,
    pub labeling: Option<EdgeLabeling>,
}

impl LabeledPoset {
    /// The Segre power, with the lifted labeling when one is present.
    pub fn segre(&self, t: usize) -> Result<LabeledPoset> {
        if t == 1 {
            return Ok(self.clone());
        }
        let power = crate::poset::segre_power(&self.poset, t)?;
        let labeling = match &self.labeling {
            Some(lab) => Some(lift_labeling(&self.poset, lab, &power)?),
            None => None,
        };
        Ok(LabeledPoset { name: format!("{}^({t})", self.name), poset: power.poset, labeling })
    }
}
