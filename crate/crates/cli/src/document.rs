//! The machine-readable result of `solve`.

use std::collections::BTreeMap;

use hsbar::forms::ValidatedPair;
use hsbar::hmbar::DegreeDiagnostic;
use hsbar::rmod::{GradedModule, RankGrid};
use hsbar::solver::{BranchNode, SolveReport, Verdict};
use serde::{Deserialize, Serialize};

use crate::problem::{cup_entries, value_table, CupEntry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub name: Option<String>,
    pub b1: usize,
    pub cup: Vec<CupEntry>,
    /// Values of the map the pages were built from.
    pub rokhlin: BTreeMap<String, u8>,
    pub anf: String,
    pub normalized: bool,
    pub discarded_constant: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandRecord {
    pub length: u8,
    pub top: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageStatus {
    Start,
    Interior,
    Eliminated,
    Survives,
}

/// One page of one branch. `path` lists the chosen candidate for `d₂, d₃, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub page: usize,
    pub path: Vec<usize>,
    /// Rank of the differential that produced this page.
    pub rank: usize,
    pub summands: usize,
    pub status: PageStatus,
    pub grid: RankGrid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub input: InputEcho,
    pub shift: u8,
    pub quota: usize,
    pub hm_ranks: [usize; 2],
    pub pages: Vec<PageRecord>,
    #[serde(rename = "final")]
    pub final_module: Option<Vec<SummandRecord>>,
    pub unique: bool,
    pub candidates: Vec<Vec<SummandRecord>>,
    pub diagnostics: Vec<DegreeDiagnostic>,
}

pub fn summand_records(m: &GradedModule) -> Vec<SummandRecord> {
    m.summands()
        .iter()
        .map(|s| SummandRecord {
            length: s.length,
            top: s.top.value(),
        })
        .collect()
}

fn collect_pages(node: &BranchNode, path: &mut Vec<usize>, out: &mut Vec<PageRecord>) {
    let status = match node.verdict {
        Verdict::Interior => PageStatus::Interior,
        Verdict::Leaf { .. } if node.survives() => PageStatus::Survives,
        Verdict::Leaf { .. } => PageStatus::Eliminated,
    };
    out.push(PageRecord {
        page: node.page + 1,
        path: path.clone(),
        rank: node.rank,
        summands: node.summands,
        status,
        grid: node.grid.clone(),
    });
    for child in &node.children {
        path.push(child.candidate);
        collect_pages(child, path, out);
        path.pop();
    }
}

impl ResultDocument {
    pub fn new(
        name: Option<String>,
        pair: &ValidatedPair,
        report: &SolveReport,
        normalized: bool,
    ) -> Self {
        let mut pages = vec![PageRecord {
            page: 1,
            path: Vec::new(),
            rank: 0,
            summands: report.e1.chains().len(),
            status: PageStatus::Start,
            grid: report.e1.grid(),
        }];
        collect_pages(&report.tree, &mut Vec::new(), &mut pages);
        ResultDocument {
            input: InputEcho {
                name,
                b1: pair.n(),
                cup: cup_entries(pair.cup()),
                rokhlin: value_table(&report.mu),
                anf: report.mu.anf_string(),
                normalized,
                discarded_constant: report.discarded_constant,
            },
            shift: report.shift.value(),
            quota: report.quota,
            hm_ranks: [report.hm_ranks.0, report.hm_ranks.1],
            pages,
            final_module: report.unique.as_ref().map(summand_records),
            unique: report.unique.is_some(),
            candidates: report.finals.iter().map(summand_records).collect(),
            diagnostics: report.diagnostics.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
