//! Problem files: a JSON document giving `b1`, the cup form and the Rokhlin map.

use std::collections::BTreeMap;

use hsbar::f2core::{BitTable, SubsetIndex, MAX_DIM};
use hsbar::forms::{validate_rokhlin, CupForm, FormsError, RokhlinMap, ValidatedPair};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CupEntry {
    pub indices: Vec<usize>,
    pub value: i64,
}

/// The Rokhlin map, either as a value table or as ANF coefficients.
/// Keys are subset strings: the digits of the included indices, `""` for `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RokhlinSpec {
    Values(BTreeMap<String, u8>),
    Anf(BTreeMap<String, u8>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub b1: usize,
    #[serde(default)]
    pub cup: Vec<CupEntry>,
    pub rokhlin: RokhlinSpec,
}

/// A problem file together with its validated input.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub pair: ValidatedPair,
}

impl Problem {
    pub fn name(&self) -> &str {
        self.file.name.as_deref().unwrap_or("unnamed")
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let pair = file.validate()?;
    Ok(Problem { file, pair })
}

pub fn read_problem(path: &std::path::Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_problem(&text)
}

fn field(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Field {
        field: field.into(),
        message: message.into(),
    }
}

impl ProblemFile {
    pub fn cup_form(&self) -> Result<CupForm, CliError> {
        let n = self.b1;
        let mut cup = CupForm::zero(n);
        for (k, entry) in self.cup.iter().enumerate() {
            let at = format!("cup[{k}].indices");
            let [i, j, l] = entry.indices[..] else {
                return Err(field(at, "expected exactly three indices"));
            };
            if !(1 <= i && i < j && j < l && l <= n) {
                return Err(field(
                    at,
                    format!("indices must be strictly increasing in 1..={n}"),
                ));
            }
            cup = cup
                .with([i, j, l], entry.value)
                .map_err(CliError::Validation)?;
        }
        Ok(cup)
    }

    pub fn rokhlin_map(&self) -> Result<RokhlinMap, CliError> {
        let n = self.b1;
        let (name, table) = match &self.rokhlin {
            RokhlinSpec::Values(t) => ("values", t),
            RokhlinSpec::Anf(t) => ("anf", t),
        };
        let mut bits = BitTable::zeros(n);
        for (key, &bit) in table {
            let at = format!("rokhlin.{name}[\"{key}\"]");
            let s = SubsetIndex::from_digits(n, key)
                .ok_or_else(|| field(&at, format!("not a subset string for b1 = {n}")))?;
            if bit > 1 {
                return Err(field(&at, "expected 0 or 1"));
            }
            bits.set(s, bit == 1);
        }
        match &self.rokhlin {
            RokhlinSpec::Values(t) => {
                if t.len() != 1 << n {
                    return Err(field(
                        "rokhlin.values",
                        format!("expected {} entries, found {}", 1 << n, t.len()),
                    ));
                }
                Ok(RokhlinMap::from_values(bits))
            }
            RokhlinSpec::Anf(_) => Ok(RokhlinMap::from_anf(bits)),
        }
    }

    pub fn validate(&self) -> Result<ValidatedPair, CliError> {
        if self.b1 > MAX_DIM {
            return Err(CliError::Validation(FormsError::DimensionTooLarge {
                n: self.b1,
                max: MAX_DIM,
            }));
        }
        let cup = self.cup_form()?;
        let mu = self.rokhlin_map()?;
        validate_rokhlin(&mu, &cup).map_err(CliError::Validation)
    }

    /// The same input with the Rokhlin map written out as a value table.
    pub fn from_pair(name: Option<String>, pair: &ValidatedPair) -> ProblemFile {
        ProblemFile {
            name,
            b1: pair.n(),
            cup: cup_entries(pair.cup()),
            rokhlin: RokhlinSpec::Values(value_table(pair.mu())),
        }
    }
}

pub fn cup_entries(cup: &CupForm) -> Vec<CupEntry> {
    cup.coefficients()
        .map(|(t, value)| CupEntry {
            indices: t.to_vec(),
            value,
        })
        .collect()
}

pub fn value_table(mu: &RokhlinMap) -> BTreeMap<String, u8> {
    SubsetIndex::all(mu.n())
        .map(|s| (s.to_digits(), mu.value(s) as u8))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_and_anf_agree() {
        let by_values =
            parse_problem(r#"{"b1": 1, "rokhlin": {"values": {"": 0, "1": 1}}}"#).unwrap();
        let by_anf = parse_problem(r#"{"b1": 1, "rokhlin": {"anf": {"1": 1}}}"#).unwrap();
        assert_eq!(by_values.pair.mu(), by_anf.pair.mu());
        assert_eq!(by_values.name(), "unnamed");
    }

    #[test]
    fn syntax_error_has_a_line() {
        let err = parse_problem("{\n  \"b1\": 1,\n  \"rokhlin\": }").unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn field_errors() {
        let err =
            parse_problem(r#"{"b1": 2, "rokhlin": {"values": {"": 0, "1": 1, "12": 3, "2": 0}}}"#)
                .unwrap_err();
        assert!(err.to_string().contains("rokhlin.values[\"12\"]"), "{err}");
        let err = parse_problem(r#"{"b1": 2, "rokhlin": {"anf": {"3": 1}}}"#).unwrap_err();
        assert!(err.to_string().contains("rokhlin.anf[\"3\"]"), "{err}");
        let err = parse_problem(
            r#"{"b1": 3, "cup": [{"indices": [2, 1, 3], "value": 1}], "rokhlin": {"anf": {}}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("cup[0].indices"), "{err}");
        let err = parse_problem(r#"{"b1": 1, "rokhlin": {"anf": {}}, "extra": 1}"#).unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }));
    }

    #[test]
    fn round_trip_through_value_table() {
        let p = parse_problem(
            r#"{"name": "x", "b1": 3, "cup": [{"indices": [1, 2, 3], "value": 1}],
                "rokhlin": {"anf": {"123": 1, "1": 1}}}"#,
        )
        .unwrap();
        let again = ProblemFile::from_pair(Some("x".into()), &p.pair);
        assert_eq!(again.validate().unwrap().mu(), p.pair.mu());
        let text = serde_json::to_string(&again).unwrap();
        assert_eq!(parse_problem(&text).unwrap().file, again);
    }
}
