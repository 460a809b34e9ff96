//! Bundled example inputs.

use std::collections::BTreeMap;

use crate::problem::{CupEntry, ProblemFile, RokhlinSpec};

pub const EXAMPLE_NAMES: [&str; 7] = [
    "s3",
    "s2xs1",
    "trefoil0",
    "split2",
    "t3",
    "borromean-arf",
    "borromean-m",
];

/// Default cup value of `borromean-m`.
pub const DEFAULT_BORROMEAN_M: i64 = 2;

fn anf(b1: usize, name: &str, cup: i64, monomials: &[&str]) -> ProblemFile {
    ProblemFile {
        name: Some(name.to_string()),
        b1,
        cup: if cup == 0 {
            Vec::new()
        } else {
            vec![CupEntry {
                indices: vec![1, 2, 3],
                value: cup,
            }]
        },
        rokhlin: RokhlinSpec::Anf(monomials.iter().map(|m| (m.to_string(), 1)).collect()),
    }
}

/// Zero surgery on the band sum of `m` copies of the Borromean rings, with
/// all Rokhlin invariants equal; `m` must be even.
pub fn borromean_m(m: i64) -> Option<ProblemFile> {
    (m % 2 == 0).then(|| anf(3, "borromean-m", m, &[]))
}

pub fn example(name: &str) -> Option<ProblemFile> {
    Some(match name {
        "s3" => anf(0, name, 0, &[]),
        "s2xs1" => anf(1, name, 0, &[]),
        "trefoil0" => anf(1, name, 0, &["1"]),
        "split2" => anf(2, name, 0, &["1"]),
        "t3" => {
            let values: BTreeMap<String, u8> = ["", "1", "2", "3", "12", "13", "23", "123"]
                .iter()
                .map(|k| (k.to_string(), k.is_empty() as u8))
                .collect();
            ProblemFile {
                name: Some(name.to_string()),
                b1: 3,
                cup: vec![CupEntry {
                    indices: vec![1, 2, 3],
                    value: 1,
                }],
                rokhlin: RokhlinSpec::Values(values),
            }
        }
        "borromean-arf" => anf(3, name, 1, &["123", "1"]),
        "borromean-m" => borromean_m(DEFAULT_BORROMEAN_M)?,
        _ => return None,
    })
}

pub fn example_corpus() -> Vec<ProblemFile> {
    EXAMPLE_NAMES
        .iter()
        .map(|n| example(n).expect("bundled example"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_validates() {
        let corpus = example_corpus();
        assert!(corpus.len() >= 7);
        for p in &corpus {
            p.validate().unwrap();
        }
        assert!(example("nope").is_none());
        assert!(borromean_m(3).is_none());
        assert!(borromean_m(4).unwrap().validate().is_ok());
    }

    #[test]
    fn t3_is_the_origin_indicator() {
        let pair = example("t3").unwrap().validate().unwrap();
        assert_eq!(pair.mu(), &hsbar::forms::RokhlinMap::origin_indicator(3));
        assert_eq!(pair.cup().value(1, 2, 3), 1);
    }
}
