use serde::Serialize;
use serde_json::{json, Value};
use segre_core::format::{to_dot, to_json};
use segre_core::invariants::{euler_oracle, mobius as mobius_number, rank_sweep};
use segre_core::labeling::label_chain;
use segre_core::perm_stats::{w_q_tuples, MAX_DP_N};
use segre_core::shellability::{
    chain_count, check_budget, decreasing_chains, el_counts, maximal_chains, verify_el_budgeted, weighted_tuple_sum,
    ElReport,
};
use segre_core::{EdgeLabeling, LabeledPoset, RankSelection};

use crate::input::{parse_selection, InputArgs, Origin};
use crate::output::{emit, json, truncated, Format, Table};
use crate::{CliError, Settings, Status};

fn labeling_of(lp: &LabeledPoset) -> Result<&EdgeLabeling, CliError> {
    lp.labeling
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{} has no edge labeling", lp.name)))
}

fn chain_text(lp: &LabeledPoset, chain: &[usize]) -> String {
    chain.iter().map(|&x| lp.poset.name(x)).collect::<Vec<_>>().join(" ⋖ ")
}

fn word_text(lp: &LabeledPoset, chain: &[usize]) -> Option<String> {
    let lab = lp.labeling.as_ref()?;
    let word = label_chain(&lp.poset, lab, chain).expect("enumerated chains are saturated");
    Some(lab.label_poset().display_word(&word.letters))
}

pub fn gen(settings: &Settings, input: &InputArgs, dot: bool) -> Result<Status, CliError> {
    let lp = input.load()?.poset;
    let text = if dot {
        let highlight = match &lp.labeling {
            Some(lab) => {
                check_budget(chain_count(&lp.poset), settings.budget)?;
                decreasing_chains(&lp.poset, lab, true).chains.unwrap_or_default()
            }
            None => Vec::new(),
        };
        to_dot(&lp, &highlight)
    } else {
        to_json(&lp)
    };
    emit(settings, &text)?;
    Ok(Status::Pass)
}

pub fn check_el(settings: &Settings, input: &InputArgs) -> Result<Status, CliError> {
    let lp = input.load()?.poset;
    let lab = labeling_of(&lp)?;
    let report = verify_el_budgeted(&lp.poset, lab, settings.budget)?;
    let text = match settings.format {
        Format::Json => {
            let mut doc = report.to_json(&lp.poset);
            doc["poset"] = Value::String(lp.name.clone());
            json(&doc)
        }
        Format::Table => {
            let mut out = format!("{}: {}\n", lp.name, if report.ok { "EL-labeling" } else { "not an EL-labeling" });
            if !report.ok {
                let mut table = Table::new(["interval", "failure", "witnesses"]);
                for f in &report.failures {
                    let chains: Vec<String> = f.witnesses.iter().map(|c| chain_text(&lp, c)).collect();
                    table.row([
                        format!("[{}, {}]", lp.poset.name(f.lo), lp.poset.name(f.hi)),
                        format!("{:?}", f.kind),
                        truncated(&chains, "; "),
                    ]);
                }
                out.push_str(&table.render());
            }
            out
        }
    };
    emit(settings, &text)?;
    Ok(if report.ok { Status::Pass } else { Status::Fail })
}

#[derive(Serialize)]
struct ChainEntry {
    elements: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<String>,
}

pub fn chains(settings: &Settings, input: &InputArgs, decreasing: bool, list: bool) -> Result<Status, CliError> {
    let lp = input.load()?.poset;
    let p = &lp.poset;
    let (count, listed): (u128, Option<Vec<Vec<usize>>>) = if decreasing {
        let lab = labeling_of(&lp)?;
        check_budget(chain_count(p), settings.budget)?;
        let dec = decreasing_chains(p, lab, list);
        (dec.count as u128, dec.chains)
    } else if list {
        check_budget(chain_count(p), settings.budget)?;
        let all: Vec<Vec<usize>> = maximal_chains(p, p.bottom(), p.top())?.collect();
        (all.len() as u128, Some(all))
    } else {
        (chain_count(p), None)
    };
    let kind = if decreasing { "decreasing" } else { "maximal" };
    let text = match settings.format {
        Format::Json => {
            let mut doc = json!({ "poset": lp.name, "kind": kind, "count": count as u64 });
            if let Some(chains) = &listed {
                let entries: Vec<ChainEntry> = chains
                    .iter()
                    .map(|c| ChainEntry {
                        elements: c.iter().map(|&x| p.name(x).to_string()).collect(),
                        word: word_text(&lp, c),
                    })
                    .collect();
                doc["chains"] = serde_json::to_value(entries).expect("chains serialize");
            }
            json(&doc)
        }
        Format::Table => {
            let mut out = format!("{}: {count} {kind} chains\n", lp.name);
            if let Some(chains) = &listed {
                let mut table = Table::new(["chain", "word"]);
                for c in chains {
                    table.row([chain_text(&lp, c), word_text(&lp, c).unwrap_or_default()]);
                }
                out.push_str(&table.render());
            }
            out
        }
    };
    emit(settings, &text)?;
    Ok(Status::Pass)
}

pub fn mobius(settings: &Settings, input: &InputArgs) -> Result<Status, CliError> {
    let lp = input.load()?.poset;
    let mu = mobius_number(&lp.poset)?;
    let chi = euler_oracle(&lp.poset)?;
    let agree = mu == chi;
    let text = match settings.format {
        Format::Json => json(&json!({
            "poset": lp.name,
            "mobius": mu,
            "euler_characteristic": chi,
            "agree": agree,
        })),
        Format::Table => {
            let mut t = Table::new(["poset", "mobius", "euler", "agree"]);
            t.row([lp.name.clone(), mu.to_string(), chi.to_string(), agree.to_string()]);
            t.render()
        }
    };
    emit(settings, &text)?;
    Ok(if agree { Status::Pass } else { Status::Fail })
}

#[derive(Serialize)]
struct InvariantRow {
    #[serde(rename = "J")]
    j: Vec<usize>,
    alpha: u64,
    beta: i64,
    #[serde(rename = "mu_PJ")]
    mu_pj: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_descents: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tuple_sum: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutations: Option<u64>,
    agree: bool,
}

#[derive(Serialize)]
struct InvariantsReport {
    poset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    el_verified: Option<bool>,
    rows: Vec<InvariantRow>,
}

fn show(v: Option<impl ToString>) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

pub fn invariants(settings: &Settings, input: &InputArgs, selections: &[String]) -> Result<Status, CliError> {
    let loaded = input.load()?;
    let lp = &loaded.poset;
    let n = lp.poset.rank();
    let selections: Vec<RankSelection> = if selections.is_empty() {
        RankSelection::all(n)
    } else {
        selections.iter().map(|s| parse_selection(s)).collect::<Result<_, _>>()?
    };
    for j in &selections {
        j.validate(n)?;
    }

    let report: Option<ElReport> = match &lp.labeling {
        Some(lab) => Some(verify_el_budgeted(&lp.poset, lab, settings.budget)?),
        None => None,
    };
    let sweep = rank_sweep(&lp.poset, lp.labeling.as_ref().zip(report.as_ref()), &selections)?;

    // The weighted tuple sum over the base needs the base labeling to be EL.
    let words = match &loaded.base {
        Some((base, t)) => match &base.labeling {
            Some(lab) if verify_el_budgeted(&base.poset, lab, settings.budget)?.ok => {
                Some((el_counts(&base.poset, lab), *t, lab.label_poset().clone()))
            }
            _ => None,
        },
        None => None,
    };
    let t = loaded.base.as_ref().map_or(1, |(_, t)| *t);
    let weight = match loaded.origin {
        Some(Origin::Boolean { n }) if n <= MAX_DP_N => Some(1),
        Some(Origin::Subspace { n, q }) if n <= MAX_DP_N => Some(q),
        _ => None,
    };

    let mut rows = Vec::with_capacity(sweep.len());
    for (inv, j) in sweep.into_iter().zip(&selections) {
        let tuple_sum = match &words {
            Some((wm, t, lpo)) => Some(weighted_tuple_sum(wm, *t, j, lpo)? as i64),
            None => None,
        };
        let permutations = match weight {
            Some(q) => Some(w_q_tuples(n, t, q, Some(j))?),
            None => None,
        };
        let agree = inv.agree
            && tuple_sum.is_none_or(|s| s == inv.beta)
            && permutations.is_none_or(|w| w as i64 == inv.beta);
        rows.push(InvariantRow {
            j: inv.j,
            alpha: inv.alpha,
            beta: inv.beta,
            mu_pj: inv.mu_pj,
            beta_descents: inv.beta_descents,
            tuple_sum,
            permutations,
            agree,
        });
    }
    let all_agree = rows.iter().all(|r| r.agree);
    let doc = InvariantsReport { poset: lp.name.clone(), el_verified: report.map(|r| r.ok), rows };
    let text = match settings.format {
        Format::Json => json(&doc),
        Format::Table => {
            let mut t = Table::new(["J", "alpha", "beta", "mu_PJ", "descents", "tuple_sum", "permutations", "agree"]);
            for r in &doc.rows {
                t.row([
                    RankSelection::new(r.j.iter().copied()).to_string(),
                    r.alpha.to_string(),
                    r.beta.to_string(),
                    r.mu_pj.to_string(),
                    show(r.beta_descents),
                    show(r.tuple_sum),
                    show(r.permutations),
                    r.agree.to_string(),
                ]);
            }
            format!("{}\n{}", doc.poset, t.render())
        }
    };
    emit(settings, &text)?;
    Ok(if all_agree { Status::Pass } else { Status::Fail })
}

pub fn perm(settings: &Settings, n: usize, t: usize, q: Option<u64>, j: Option<&str>) -> Result<Status, CliError> {
    let selection = j.map(parse_selection).transpose()?;
    let value = w_q_tuples(n, t, q.unwrap_or(1), selection.as_ref())?;
    let text = match (settings.format, &selection) {
        (Format::Json, None) => json(&value),
        (Format::Json, Some(j)) => json(&json!({ "J": j.ranks(), "value": value })),
        (Format::Table, _) => {
            let mut table = Table::new(["n", "t", "q", "J", "value"]);
            table.row([
                n.to_string(),
                t.to_string(),
                show(q),
                selection.as_ref().map_or("-".into(), |j| j.to_string()),
                value.to_string(),
            ]);
            table.render()
        }
    };
    emit(settings, &text)?;
    Ok(Status::Pass)
}
