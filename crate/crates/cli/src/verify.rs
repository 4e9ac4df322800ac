//! The cross-check matrix behind `verify-all`.

use rayon::prelude::*;
use serde::Serialize;
use segre_core::invariants::{beta_from_mobius, euler_oracle, mobius};
use segre_core::lattices::{boolean_lattice, bundled_poset, subspace_lattice};
use segre_core::perm_stats::w_q_tuples;
use segre_core::shellability::{decreasing_chains, el_counts, el_enumeration_cost, verify_el, weighted_tuple_sum};
use segre_core::{LabeledPoset, RankSelection};

use crate::output::{emit, json, Format, Table};
use crate::{CliError, Settings, Status};

#[derive(Clone, Copy, Debug)]
enum Base {
    Boolean(usize),
    Subspace(usize, u64),
    Bundled(&'static str),
}

impl Base {
    fn family(self) -> &'static str {
        match self {
            Base::Boolean(_) => "boolean",
            Base::Subspace(..) => "subspace",
            Base::Bundled(name) => name,
        }
    }

    fn build(self) -> segre_core::Result<LabeledPoset> {
        match self {
            Base::Boolean(n) => {
                let (poset, lab) = boolean_lattice(n)?;
                Ok(LabeledPoset { name: format!("B_{n}"), poset, labeling: Some(lab) })
            }
            Base::Subspace(n, q) => Ok(subspace_lattice(n, q)?.into_labeled(format!("B_{n}({q})"))),
            Base::Bundled(name) => bundled_poset(name),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Subject {
    base: Base,
    t: usize,
}

impl Subject {
    fn name(&self) -> String {
        let base = match self.base {
            Base::Boolean(n) => format!("B_{n}"),
            Base::Subspace(n, q) => format!("B_{n}({q})"),
            Base::Bundled(name) => name.to_string(),
        };
        if self.t == 1 {
            base
        } else {
            format!("{base}^({})", self.t)
        }
    }
}

fn subjects() -> Vec<Subject> {
    let mut out = vec![Subject { base: Base::Bundled("fig1"), t: 2 }];
    out.extend((1..=3).map(|t| Subject { base: Base::Bundled("fig3"), t }));
    out.extend((1..=5).map(|n| Subject { base: Base::Boolean(n), t: 1 }));
    for n in 2..=4 {
        out.extend((2..=3).map(|t| Subject { base: Base::Boolean(n), t }));
    }
    out.extend((1..=4).map(|n| Subject { base: Base::Subspace(n, 2), t: 1 }));
    out.push(Subject { base: Base::Subspace(3, 3), t: 1 });
    out.extend((2..=3).map(|t| Subject { base: Base::Subspace(2, 2), t }));
    out.push(Subject { base: Base::Subspace(2, 3), t: 2 });
    out.push(Subject { base: Base::Subspace(3, 2), t: 2 });
    out.push(Subject { base: Base::Subspace(4, 2), t: 2 });
    out
}

#[derive(Debug, Serialize)]
struct Check {
    check: &'static str,
    expected: String,
    measured: String,
    pass: bool,
}

impl Check {
    fn new(check: &'static str, expected: impl ToString, measured: impl ToString) -> Self {
        let (expected, measured) = (expected.to_string(), measured.to_string());
        Check { check, pass: expected == measured, expected, measured }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Serialize)]
struct Row {
    subject: String,
    family: &'static str,
    status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
struct Summary {
    passed: usize,
    failed: usize,
    skipped: usize,
    rows: Vec<Row>,
}

fn run_checks(subject: Subject, budget: u64) -> segre_core::Result<Result<Vec<Check>, String>> {
    let base = subject.base.build()?;
    let lp = base.segre(subject.t)?;
    let p = &lp.poset;
    let cost = el_enumeration_cost(p).saturating_add(el_enumeration_cost(&base.poset));
    if lp.labeling.is_some() && cost > budget as u128 {
        return Ok(Err(format!("needs {cost} chains, budget {budget}")));
    }

    let mut checks = Vec::new();
    let mu = mobius(p)?;
    checks.push(Check::new("mobius = euler characteristic", mu, euler_oracle(p)?));
    if let Base::Bundled("fig1") = subject.base {
        checks.push(Check::new("elements", 10, p.len()));
    }
    if let (Base::Bundled("fig3"), 2) = (subject.base, subject.t) {
        checks.push(Check::new("mobius", -2, mu));
    }

    let Some(lab) = &lp.labeling else {
        return Ok(Ok(checks));
    };
    let report = verify_el(p, lab);
    checks.push(Check::new("EL-labeling", true, report.ok));
    let decreasing = decreasing_chains(p, lab, false).count as i64;
    let signed = if p.rank() % 2 == 0 { mu } else { -mu };
    checks.push(Check::new("decreasing chains = ±mobius", signed, decreasing));

    let weight = match subject.base {
        Base::Boolean(n) => Some((n, 1)),
        Base::Subspace(n, q) => Some((n, q)),
        Base::Bundled(_) => None,
    };
    if let Some((n, q)) = weight {
        checks.push(Check::new("tuple count = decreasing chains", w_q_tuples(n, subject.t, q, None)?, decreasing));
    }

    if subject.t > 1 {
        let base_lab = base.labeling.as_ref().expect("labeled base");
        let wm = el_counts(&base.poset, base_lab);
        let all = RankSelection::all(p.rank());
        let mut agreeing = 0;
        for j in &all {
            if weighted_tuple_sum(&wm, subject.t, j, base_lab.label_poset())? as i64 == beta_from_mobius(p, j)? {
                agreeing += 1;
            }
        }
        checks.push(Check::new("weighted tuple sum = rank-selected mobius (all J)", all.len(), agreeing));
    }
    Ok(Ok(checks))
}

fn row(subject: Subject, budget: u64) -> Row {
    let (status, reason, checks) = match run_checks(subject, budget) {
        Ok(Ok(checks)) if checks.iter().all(|c| c.pass) => (RowStatus::Pass, None, checks),
        Ok(Ok(checks)) => (RowStatus::Fail, None, checks),
        Ok(Err(reason)) => (RowStatus::Skipped, Some(reason), Vec::new()),
        Err(e) => (RowStatus::Fail, Some(e.to_string()), Vec::new()),
    };
    Row { subject: subject.name(), family: subject.base.family(), status, reason, checks }
}

pub fn verify_all(settings: &Settings, only: Option<&str>) -> Result<Status, CliError> {
    let chosen: Vec<Subject> = subjects()
        .into_iter()
        .filter(|s| only.is_none_or(|o| s.base.family() == o || s.name() == o))
        .collect();
    if chosen.is_empty() {
        return Err(CliError::Usage(format!(
            "--only {} matches nothing; families are fig1, fig3, boolean, subspace",
            only.unwrap_or_default()
        )));
    }
    let rows: Vec<Row> = chosen.par_iter().map(|&s| row(s, settings.budget)).collect();
    let count = |f: fn(&RowStatus) -> bool| rows.iter().filter(|r| f(&r.status)).count();
    let summary = Summary {
        passed: count(|s| matches!(s, RowStatus::Pass)),
        failed: count(|s| matches!(s, RowStatus::Fail)),
        skipped: count(|s| matches!(s, RowStatus::Skipped)),
        rows,
    };
    let text = match settings.format {
        Format::Json => json(&summary),
        Format::Table => {
            let mut t = Table::new(["subject", "status", "checks"]);
            for r in &summary.rows {
                let detail = match &r.reason {
                    Some(reason) => reason.clone(),
                    None => r
                        .checks
                        .iter()
                        .map(|c| {
                            if c.pass {
                                format!("{}: {}", c.check, c.measured)
                            } else {
                                format!("{}: {} (expected {})", c.check, c.measured, c.expected)
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("; "),
                };
                let status = match r.status {
                    RowStatus::Pass => "pass",
                    RowStatus::Fail => "FAIL",
                    RowStatus::Skipped => "skipped",
                };
                t.row([r.subject.clone(), status.to_string(), detail]);
            }
            format!(
                "{}{} passed, {} failed, {} skipped\n",
                t.render(),
                summary.passed,
                summary.failed,
                summary.skipped
            )
        }
    };
    emit(settings, &text)?;
    Ok(if summary.failed == 0 { Status::Pass } else { Status::Fail })
}
