//! File formats: instances and inequalities as JSON with exact rationals.

use std::path::Path;

use mcpp::exactmath::{parse_rational, Rational, Subset};
use mcpp::hypergraph::Hypergraph;
use mcpp::instance::{Monomial, RawInstance};
use serde::Deserialize;

use crate::CliError;

/// A rational written as an integer or a `"p/q"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RationalField {
    Int(i64),
    Str(String),
}

impl RationalField {
    pub fn value(&self) -> Result<Rational, CliError> {
        match self {
            RationalField::Int(k) => Ok(Rational::from_integer((*k).into())),
            RationalField::Str(s) => {
                parse_rational(s).ok_or_else(|| CliError::Parse(format!("not an exact rational: {s:?}")))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub vars: Vec<usize>,
    pub coef: RationalField,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    pub terms: Vec<TermFile>,
}

impl InstanceFile {
    pub fn into_raw(self) -> Result<RawInstance, CliError> {
        let terms = self
            .terms
            .into_iter()
            .map(|t| Ok(Monomial::new(Subset::new(t.vars), t.coef.value()?)))
            .collect::<Result<_, CliError>>()?;
        Ok(RawInstance {
            n: self.n,
            blocks: self.blocks,
            terms,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum SpaceKind {
    /// `𝒥^H`, indices 1-based.
    #[serde(rename = "JH")]
    Family,
    /// `𝒥^H_≤(D)`, indices 1-based.
    #[serde(rename = "JHleq")]
    Leq,
    /// `L(V) ∪ E`, block numbers 1-based.
    #[serde(rename = "MP")]
    Multilinear,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coord {
    pub vars: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalityFile {
    pub coords: Vec<Coord>,
    pub a: Vec<RationalField>,
    pub delta: RationalField,
    pub space: SpaceKind,
}

impl InequalityFile {
    /// `(label, coefficient)` pairs; MP labels are shifted to 0-based blocks.
    pub fn pairs(&self) -> Result<Vec<(Subset, Rational)>, CliError> {
        if self.coords.len() != self.a.len() {
            return Err(CliError::Parse(format!(
                "{} coords but {} coefficients",
                self.coords.len(),
                self.a.len()
            )));
        }
        self.coords
            .iter()
            .zip(&self.a)
            .map(|(c, a)| {
                let label = match self.space {
                    SpaceKind::Multilinear => {
                        if c.vars.contains(&0) {
                            return Err(CliError::Parse("block numbers start at 1".into()));
                        }
                        Subset::new(c.vars.iter().map(|b| b - 1))
                    }
                    _ => Subset::new(c.vars.iter().copied()),
                };
                Ok((label, a.value()?))
            })
            .collect()
    }
}

/// One half of a decomposition, blocks numbered from 1.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartFile {
    pub vertices: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

impl PartFile {
    pub fn hypergraph(&self) -> Result<Hypergraph, CliError> {
        if self.vertices.contains(&0) || self.edges.iter().flatten().any(|&b| b == 0) {
            return Err(CliError::Parse("block numbers start at 1".into()));
        }
        Ok(Hypergraph::new(
            self.vertices.iter().map(|b| b - 1).collect(),
            self.edges
                .iter()
                .map(|e| Subset::new(e.iter().map(|b| b - 1)))
                .collect(),
        )?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// `"1,3,5"` as a set of 1-based indices.
pub fn parse_index_list(s: &str) -> Result<Subset, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Parse(format!("bad index {t:?} in {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Subset::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_accepts_ints_and_fractions() {
        let f: InstanceFile = parse_json(
            r#"{"n": 4, "blocks": [[1,2],[3,4]], "terms": [{"vars": [1,3], "coef": "3/2"}, {"vars": [2], "coef": -1}]}"#,
        )
        .unwrap();
        let raw = f.into_raw().unwrap();
        assert_eq!(raw.terms[0].coef, Rational::new(3.into(), 2.into()));
        assert_eq!(raw.terms[1].coef, Rational::from_integer((-1).into()));
    }

    #[test]
    fn rejects_floats_and_unknown_keys() {
        let bad = r#"{"n": 4, "blocks": [[1,2],[3,4]], "terms": [{"vars": [1,3], "coef": 1.5}]}"#;
        assert!(parse_json::<InstanceFile>(bad).is_err());
        let extra = r#"{"n": 4, "blocks": [[1,2],[3,4]], "terms": [], "name": "x"}"#;
        assert!(parse_json::<InstanceFile>(extra).is_err());
        let f: InstanceFile =
            parse_json(r#"{"n": 4, "blocks": [[1,2],[3,4]], "terms": [{"vars": [1,3], "coef": "0.5"}]}"#).unwrap();
        assert!(matches!(f.into_raw(), Err(CliError::Parse(_))));
    }

    #[test]
    fn inequality_labels() {
        let f: InequalityFile =
            parse_json(r#"{"coords": [{"vars":[1,2]}, {"vars":[1]}], "a": ["1", -1], "delta": "0", "space": "MP"}"#)
                .unwrap();
        let pairs = f.pairs().unwrap();
        assert_eq!(pairs[0].0, Subset::new([0, 1]));
        assert_eq!(pairs[1].0, Subset::new([0]));
        assert_eq!(f.space, SpaceKind::Multilinear);
    }
}
