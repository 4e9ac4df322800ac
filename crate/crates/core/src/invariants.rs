//! Möbius numbers and the rank-selected invariants α̃ and β̃.
//!
//! Every quantity here has at least two independent routes: the Möbius
//! recursion against a chain census of the order complex, and β̃ by
//! inclusion–exclusion over α̃, by descent counting under an EL-labeling,
//! and by the Möbius number of the rank-selected subposet.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::labeling::EdgeLabeling;
use crate::poset::{rank_selected, Poset, RankSelection};
use crate::shellability::{descent_set_census, ElReport};

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("Möbius function"))
}

/// `μ(x, z)` for every `z`; entries with `x ≰ z` are zero.
pub fn mobius_row(p: &Poset, x: usize) -> Result<Vec<i64>> {
    let mut mu = vec![0i64; p.len()];
    let mut seen: Vec<usize> = Vec::new();
    for z in p.linear_extension() {
        if !p.less_or_equal(x, z) {
            continue;
        }
        mu[z] = if z == x {
            1
        } else {
            let mut sum = 0i64;
            for &w in &seen {
                if p.less(w, z) {
                    sum = add(sum, mu[w])?;
                }
            }
            sum.checked_neg().ok_or(Error::Overflow("Möbius function"))?
        };
        seen.push(z);
    }
    Ok(mu)
}

pub fn mobius_interval(p: &Poset, x: usize, y: usize) -> Result<i64> {
    if x >= p.len() || y >= p.len() {
        return Err(Error::NoSuchElement(x.max(y)));
    }
    if !p.less_or_equal(x, y) {
        return Err(Error::NotComparable(x, y));
    }
    Ok(mobius_row(p, x)?[y])
}

/// `μ(0̂, 1̂)`.
pub fn mobius(p: &Poset) -> Result<i64> {
    Ok(mobius_row(p, p.bottom())?[p.top()])
}

/// All values `μ(x, y)` for comparable pairs.
#[derive(Clone, Debug)]
pub struct MobiusTable {
    rows: Vec<Vec<i64>>,
}

impl MobiusTable {
    pub fn new(p: &Poset) -> Result<Self> {
        let rows = (0..p.len()).map(|x| mobius_row(p, x)).collect::<Result<_>>()?;
        Ok(MobiusTable { rows })
    }

    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.rows[x][y]
    }
}

/// Reduced Euler characteristic of the order complex of the open interval
/// `(0̂, 1̂)`: `Σ_{k ≥ -1} (-1)^k f_k` with `f_k` the number of chains of
/// `k + 1` interior elements and `f_{-1} = 1`. Counts chains over the strict
/// order directly, without the Möbius recursion.
pub fn euler_oracle(p: &Poset) -> Result<i64> {
    if p.rank() == 0 {
        return Err(Error::OutOfBounds("order complex of a one-element poset".into()));
    }
    let interior: Vec<usize> =
        p.linear_extension().filter(|&z| z != p.bottom() && z != p.top()).collect();
    // Interior chains have at most rank - 1 elements.
    let width = p.rank().saturating_sub(1).max(1);
    // by_size[i][k]: chains of k+1 interior elements whose largest is interior[i].
    let mut by_size: Vec<Vec<i64>> = Vec::with_capacity(interior.len());
    let mut f = vec![0i64; interior.len() + 1];
    for (i, &z) in interior.iter().enumerate() {
        let mut counts = vec![0i64; width];
        counts[0] = 1;
        for (j, &w) in interior[..i].iter().enumerate() {
            if p.less(w, z) {
                for k in 1..counts.len() {
                    counts[k] = add(counts[k], by_size[j][k - 1])?;
                }
            }
        }
        for (k, &c) in counts.iter().enumerate() {
            f[k] = add(f[k], c)?;
        }
        by_size.push(counts);
    }
    let mut chi = -1i64;
    for (k, &fk) in f.iter().enumerate() {
        chi = if k % 2 == 0 { add(chi, fk)? } else { add(chi, -fk)? };
    }
    Ok(chi)
}

/// α̃(J): maximal chains of the rank-selected subposet, counted level by
/// level through the closure without building the subposet.
pub fn alpha(p: &Poset, j: &RankSelection) -> Result<u64> {
    j.validate(p.rank())?;
    let mut prev: Vec<(usize, u64)> = vec![(p.bottom(), 1)];
    for &r in j.ranks() {
        let mut cur = Vec::with_capacity(p.level(r).len());
        for &z in p.level(r) {
            let mut c = 0u64;
            for &(w, cw) in &prev {
                if p.less_or_equal(w, z) {
                    c = c.checked_add(cw).ok_or(Error::Overflow("α̃"))?;
                }
            }
            cur.push((z, c));
        }
        prev = cur;
    }
    prev.into_iter().try_fold(0u64, |acc, (_, c)| acc.checked_add(c).ok_or(Error::Overflow("α̃")))
}

/// β̃(J) = Σ_{U ⊆ J} (-1)^{|J|-|U|} α̃(U).
pub fn beta_from_alpha(p: &Poset, j: &RankSelection) -> Result<i64> {
    j.validate(p.rank())?;
    let mut beta = 0i64;
    for u in j.subsets() {
        let a = i64::try_from(alpha(p, &u)?).map_err(|_| Error::Overflow("β̃"))?;
        let term = if (j.len() - u.len()).is_multiple_of(2) { a } else { -a };
        beta = beta.checked_add(term).ok_or(Error::Overflow("β̃"))?;
    }
    Ok(beta)
}

/// β̃(J) as the number of maximal chains with descent set exactly `J`.
/// Only valid for EL-labelings, so a passing report is required.
pub fn beta_from_descents(
    p: &Poset,
    lab: &EdgeLabeling,
    j: &RankSelection,
    report: Option<&ElReport>,
) -> Result<i64> {
    match report {
        Some(r) if r.ok => beta_from_descents_unchecked(p, lab, j),
        _ => Err(Error::NotElVerified),
    }
}

/// [`beta_from_descents`] without the verification requirement.
pub fn beta_from_descents_unchecked(p: &Poset, lab: &EdgeLabeling, j: &RankSelection) -> Result<i64> {
    j.validate(p.rank())?;
    let census = descent_set_census(p, lab)?;
    let mask = j.mask().ok_or(Error::OutOfBounds("rank selection".into()))?;
    let count = census.get(&mask).copied().unwrap_or(0);
    i64::try_from(count).map_err(|_| Error::Overflow("β̃"))
}

/// `μ_{P_J}(0̂, 1̂)`.
pub fn rank_selected_mobius(p: &Poset, j: &RankSelection) -> Result<i64> {
    mobius(&rank_selected(p, j)?)
}

/// `(-1)^{|J|-1} μ_{P_J}`, the Möbius route to β̃.
pub fn beta_from_mobius(p: &Poset, j: &RankSelection) -> Result<i64> {
    let mu = rank_selected_mobius(p, j)?;
    Ok(if j.len() % 2 == 1 { mu } else { -mu })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankInvariants {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub alpha: u64,
    pub beta: i64,
    #[serde(rename = "mu_PJ")]
    pub mu_pj: i64,
    /// Present when a verified EL-labeling is available.
    pub beta_descents: Option<i64>,
    pub agree: bool,
}

/// α̃, β̃ and `μ(P_J)` for each `J`, with the routes cross-checked.
pub fn rank_sweep(
    p: &Poset,
    labeling: Option<(&EdgeLabeling, &ElReport)>,
    selections: &[RankSelection],
) -> Result<Vec<RankInvariants>> {
    let census: Option<BTreeMap<u64, u64>> = match labeling {
        Some((lab, report)) if report.ok => Some(descent_set_census(p, lab)?),
        _ => None,
    };
    selections
        .iter()
        .map(|j| {
            let alpha = alpha(p, j)?;
            let beta = beta_from_alpha(p, j)?;
            let mu_pj = rank_selected_mobius(p, j)?;
            let via_mu = if j.len() % 2 == 1 { mu_pj } else { -mu_pj };
            let beta_descents = match (&census, j.mask()) {
                (Some(c), Some(m)) => Some(c.get(&m).copied().unwrap_or(0) as i64),
                _ => None,
            };
            let agree = beta == via_mu && beta_descents.is_none_or(|b| b == beta);
            Ok(RankInvariants { j: j.ranks().to_vec(), alpha, beta, mu_pj, beta_descents, agree })
        })
        .collect()
}
