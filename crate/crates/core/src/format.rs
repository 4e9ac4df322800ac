//! JSON interchange documents and Graphviz output.
//!
//! A document looks like
//!
//! ```json
//! {
//!   "name": "fig3",
//!   "elements": ["0̂","a","b","c","d","1̂"],
//!   "covers": [[0,1],[0,2],[1,3],[1,4],[2,4],[3,5],[4,5]],
//!   "label_poset": {"labels":"1..3"},
//!   "labels": {"edges":[[0,1,0],[0,2,1],[1,3,1],[1,4,2],[2,4,0],[3,5,2],[4,5,1]]}
//! }
//! ```
//!
//! Indices are 0-based. `"labels": "1..n"` is shorthand for the chain
//! `1 < … < n`; otherwise `labels` lists the values and `less` gives the
//! covering pairs of the label order. A `"power": t` entry makes the label
//! poset the t-fold product of that base, and an edge's label index is the
//! mixed-radix number of its component indices, first component most
//! significant.

use std::collections::HashSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labeling::{BaseLabels, EdgeLabeling, LabelPoset, LabelValue, LabeledPoset};
use crate::poset::build_poset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelList {
    /// `"1..n"`.
    Range(String),
    Values(Vec<LabelValue>),
}

fn default_power() -> usize {
    1
}

fn is_one(v: &usize) -> bool {
    *v == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelPosetDoc {
    pub labels: LabelList,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub less: Vec<[usize; 2]>,
    #[serde(default = "default_power", skip_serializing_if = "is_one")]
    pub power: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsDoc {
    pub edges: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDocument {
    pub name: String,
    pub elements: Vec<String>,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_poset: Option<LabelPosetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<LabelsDoc>,
}

fn base_to_doc(base: &BaseLabels, power: usize) -> LabelPosetDoc {
    if base.is_standard_chain() && !base.is_empty() {
        return LabelPosetDoc { labels: LabelList::Range(format!("1..{}", base.len())), less: Vec::new(), power };
    }
    LabelPosetDoc {
        labels: LabelList::Values(base.values().to_vec()),
        less: base.covers().iter().map(|&(a, b)| [a, b]).collect(),
        power,
    }
}

fn base_from_doc(doc: &LabelPosetDoc) -> Result<LabelPoset> {
    let base = match &doc.labels {
        LabelList::Range(s) => {
            let n = s
                .strip_prefix("1..")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Format(format!("label range {s:?} is not of the form 1..n")))?;
            if !doc.less.is_empty() {
                return Err(Error::Format("a label range cannot carry \"less\" pairs".into()));
            }
            BaseLabels::chain(n)
        }
        LabelList::Values(values) => {
            let mut seen = HashSet::new();
            if let Some(dup) = values.iter().find(|v| !seen.insert(*v)) {
                return Err(Error::Format(format!("duplicate label value {dup}")));
            }
            BaseLabels::new(values.clone(), doc.less.iter().map(|&[a, b]| (a, b)).collect())?
        }
    };
    match doc.power {
        0 => Err(Error::Format("label power must be positive".into())),
        1 => Ok(LabelPoset::Base(base)),
        t => Ok(LabelPoset::Product { base, t }),
    }
}

impl PosetDocument {
    pub fn from_labeled(lp: &LabeledPoset) -> Self {
        let p = &lp.poset;
        let (label_poset, labels) = match &lp.labeling {
            None => (None, None),
            Some(lab) => {
                let doc = base_to_doc(lab.label_poset().base(), lab.label_poset().arity());
                let edges = p
                    .covers()
                    .iter()
                    .enumerate()
                    .map(|(e, &(x, y))| [x, y, lab.label(e)])
                    .collect();
                (Some(doc), Some(LabelsDoc { edges }))
            }
        };
        PosetDocument {
            name: lp.name.clone(),
            elements: p.names().to_vec(),
            covers: p.covers().iter().map(|&(x, y)| [x, y]).collect(),
            label_poset,
            labels,
        }
    }

    pub fn into_labeled(self) -> Result<LabeledPoset> {
        let poset = build_poset(self.elements, self.covers.iter().map(|&[x, y]| (x, y)))?;
        let labeling = match (self.label_poset, self.labels) {
            (None, None) => None,
            (Some(_), None) | (None, Some(_)) => {
                return Err(Error::Format("\"labels\" and \"label_poset\" must appear together".into()))
            }
            (Some(lpd), Some(labels)) => {
                let lpo = base_from_doc(&lpd)?;
                let triples = labels.edges.iter().map(|&[x, y, l]| (x, y, l));
                Some(EdgeLabeling::from_triples(&poset, triples, lpo)?)
            }
        };
        Ok(LabeledPoset { name: self.name, poset, labeling })
    }

    /// One key per line, values compact.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let mut fields: Vec<(&str, String)> = vec![
            ("name", compact(&self.name)),
            ("elements", compact(&self.elements)),
            ("covers", compact(&self.covers)),
        ];
        if let Some(l) = &self.label_poset {
            fields.push(("label_poset", compact(l)));
        }
        if let Some(l) = &self.labels {
            fields.push(("labels", compact(l)));
        }
        for (i, (key, value)) in fields.iter().enumerate() {
            let comma = if i + 1 < fields.len() { "," } else { "" };
            writeln!(out, "  \"{key}\": {value}{comma}").unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

fn compact<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("document fields serialize")
}

pub fn to_json(lp: &LabeledPoset) -> String {
    PosetDocument::from_labeled(lp).to_json()
}

pub fn from_json(text: &str) -> Result<LabeledPoset> {
    PosetDocument::parse(text)?.into_labeled()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram in Graphviz `digraph` syntax, bottom at the bottom.
/// Edges on any of the `highlight` chains are drawn bold.
pub fn to_dot(lp: &LabeledPoset, highlight: &[Vec<usize>]) -> String {
    let p = &lp.poset;
    let bold: HashSet<(usize, usize)> =
        highlight.iter().flat_map(|c| c.windows(2).map(|w| (w[0], w[1]))).collect();
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", dot_escape(&lp.name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for (i, name) in p.names().iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(name)).unwrap();
    }
    for level in p.levels() {
        let ids: Vec<String> = level.iter().map(|i| format!("n{i}")).collect();
        writeln!(out, "  {{ rank=same; {} }}", ids.join("; ")).unwrap();
    }
    for (e, &(x, y)) in p.covers().iter().enumerate() {
        let mut attrs = vec!["arrowhead=none".to_string()];
        if let Some(lab) = &lp.labeling {
            attrs.push(format!("label=\"{}\"", dot_escape(&lab.label_poset().display(lab.label(e)))));
        }
        if bold.contains(&(x, y)) {
            attrs.push("penwidth=3".into());
        }
        writeln!(out, "  n{x} -> n{y} [{}];", attrs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    out
}
