use std::path::PathBuf;

use clap::{Args, ValueEnum};
use segre_core::format::from_json;
use segre_core::lattices::{boolean_lattice, bundled_poset, subspace_lattice, BUNDLED};
use segre_core::{LabeledPoset, RankSelection};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Boolean lattice B_n (needs --n).
    Boolean,
    /// Subspace lattice B_n(q) (needs --n and --q).
    Subspace,
    /// A bundled example poset (needs --name).
    Fig,
}

/// Exactly one of a generator or `--in` selects the poset.
#[derive(Clone, Debug, Args)]
pub struct InputArgs {
    /// Built-in family to generate.
    #[arg(value_enum)]
    pub kind: Option<GenKind>,

    /// Read a poset document instead of generating one.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,

    #[arg(long)]
    pub n: Option<usize>,

    /// Field size for subspace lattices (a prime).
    #[arg(long)]
    pub q: Option<u64>,

    /// Bundled poset name (fig1, fig3).
    #[arg(long)]
    pub name: Option<String>,

    /// Take the t-fold Segre power, lifting the labeling.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub segre: Option<u64>,
}

pub struct Loaded {
    pub poset: LabeledPoset,
    /// The poset before `--segre t` was applied, with `t`.
    pub base: Option<(LabeledPoset, usize)>,
    /// Generator parameters, when the poset came from one.
    pub origin: Option<Origin>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Boolean { n: usize },
    Subspace { n: usize, q: u64 },
    Bundled,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl InputArgs {
    fn reject(&self, flag: &str, present: bool, kind: &str) -> Result<(), CliError> {
        if present {
            Err(usage(format!("{flag} does not apply to {kind}")))
        } else {
            Ok(())
        }
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        let (base, origin) = match (&self.kind, &self.input) {
            (Some(_), Some(_)) => return Err(usage("give either a generator or --in, not both")),
            (None, None) => return Err(usage("give a generator (boolean, subspace, fig) or --in FILE")),
            (None, Some(path)) => {
                self.reject("--n", self.n.is_some(), "--in")?;
                self.reject("--q", self.q.is_some(), "--in")?;
                self.reject("--name", self.name.is_some(), "--in")?;
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.clone(), source })?;
                (from_json(&text)?, None)
            }
            (Some(GenKind::Boolean), None) => {
                self.reject("--q", self.q.is_some(), "boolean")?;
                self.reject("--name", self.name.is_some(), "boolean")?;
                let n = self.n.ok_or_else(|| usage("boolean needs --n"))?;
                let (poset, lab) = boolean_lattice(n)?;
                let lp = LabeledPoset { name: format!("B_{n}"), poset, labeling: Some(lab) };
                (lp, Some(Origin::Boolean { n }))
            }
            (Some(GenKind::Subspace), None) => {
                self.reject("--name", self.name.is_some(), "subspace")?;
                let n = self.n.ok_or_else(|| usage("subspace needs --n"))?;
                let q = self.q.ok_or_else(|| usage("subspace needs --q"))?;
                let lp = subspace_lattice(n, q)?.into_labeled(format!("B_{n}({q})"));
                (lp, Some(Origin::Subspace { n, q }))
            }
            (Some(GenKind::Fig), None) => {
                self.reject("--n", self.n.is_some(), "fig")?;
                self.reject("--q", self.q.is_some(), "fig")?;
                let name = self
                    .name
                    .as_deref()
                    .ok_or_else(|| usage(format!("fig needs --name ({})", BUNDLED.join(", "))))?;
                (bundled_poset(name)?, Some(Origin::Bundled))
            }
        };
        match self.segre {
            None | Some(1) => Ok(Loaded { poset: base, base: None, origin }),
            Some(t) => {
                let t = usize::try_from(t).map_err(|_| usage("--segre is too large"))?;
                let poset = base.segre(t)?;
                Ok(Loaded { poset, base: Some((base, t)), origin })
            }
        }
    }
}

/// `1,3`, `{1,3}`, and `∅` or the empty string for the empty selection.
pub fn parse_selection(text: &str) -> Result<RankSelection, CliError> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if inner.is_empty() || inner == "∅" {
        return Ok(RankSelection::empty());
    }
    let ranks = inner
        .split(',')
        .map(|r| r.trim().parse::<usize>().map_err(|_| usage(format!("bad rank {r:?} in --J {text:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankSelection::new(ranks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selections() {
        assert_eq!(parse_selection("1,3").unwrap(), RankSelection::new([1, 3]));
        assert_eq!(parse_selection("{2}").unwrap(), RankSelection::new([2]));
        assert_eq!(parse_selection("∅").unwrap(), RankSelection::empty());
        assert_eq!(parse_selection("").unwrap(), RankSelection::empty());
        assert!(parse_selection("1,x").is_err());
    }
}
