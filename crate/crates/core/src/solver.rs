//! Search over higher differentials and extensions, filtered by the Gysin quota.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2core::rank;
use crate::forms::{validate_rokhlin, CupForm, FormsError, RokhlinMap, ValidatedPair};
use crate::hmbar::{degree_diagnostic, gysin_quota, hm_ranks, DegreeDiagnostic, HmError};
use crate::pages::{
    build_e1, candidate_differentials, euler_characteristic, page_homology, ChainPage,
    FilteredSummand, PagesError, DEFAULT_CANDIDATE_CAP,
};
use crate::rmod::{CyclicSummand, Degree, GradedModule, RankGrid};

pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Hm(#[from] HmError),
    #[error(transparent)]
    Pages(#[from] PagesError),
    #[error("explored more than {budget} branches")]
    BudgetExceeded { budget: u64 },
    #[error("no branch produced a module with {quota} summands")]
    NoConsistentAnswer { quota: usize },
}

impl SolveError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            SolveError::BudgetExceeded { .. }
                | SolveError::Pages(PagesError::BudgetExceeded { .. })
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Maximum number of differential choices explored across all pages.
    pub budget: u64,
    /// Maximum number of candidates enumerated on a single page.
    pub candidate_cap: u64,
    /// Replace `μ` by `μ + μ(∅)` before solving.
    pub normalize: bool,
    /// Offsets for the HM degree diagnostic.
    pub diagnostic_offsets: (i64, i64),
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_BUDGET,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            normalize: true,
            diagnostic_offsets: (0, 0),
        }
    }
}

/// What became of one branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// Later pages still admit choices; see the children.
    Interior,
    /// `E^∞` reached; `survivors` lists the extension outcomes meeting the quota.
    Leaf {
        einfinity: Vec<FilteredSummand>,
        survivors: Vec<GradedModule>,
    },
}

/// One choice of differential and the page it produces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchNode {
    /// Index `r` of the chosen differential `d_r`.
    pub page: usize,
    /// Position of the choice in the candidate list (zero map first).
    pub candidate: usize,
    pub rank: usize,
    /// Summand count of the resulting page.
    pub summands: usize,
    pub grid: RankGrid,
    pub verdict: Verdict,
    pub children: Vec<BranchNode>,
}

impl BranchNode {
    /// Whether some leaf below this node meets the quota.
    pub fn survives(&self) -> bool {
        match &self.verdict {
            Verdict::Leaf { survivors, .. } => !survivors.is_empty(),
            Verdict::Interior => self.children.iter().any(BranchNode::survives),
        }
    }

    pub fn leaves(&self) -> Vec<&BranchNode> {
        match self.verdict {
            Verdict::Leaf { .. } => vec![self],
            Verdict::Interior => self.children.iter().flat_map(BranchNode::leaves).collect(),
        }
    }

    pub fn count(&self) -> usize {
        1 + self.children.iter().map(BranchNode::count).sum::<usize>()
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub cup: CupForm,
    /// The map actually used for the pages (normalized unless disabled).
    pub mu: RokhlinMap,
    /// `μ(∅)` of the input when normalization was applied.
    pub discarded_constant: bool,
    /// Grading shift `2·μ(∅) mod 4` recorded by normalization.
    pub shift: Degree,
    pub hm_ranks: (usize, usize),
    pub quota: usize,
    pub e1: ChainPage,
    pub e2: ChainPage,
    /// Root: the passage `E¹ → E²`; children are the choices of `d₂`, and so on.
    pub tree: BranchNode,
    pub einfinity: Vec<Vec<FilteredSummand>>,
    pub finals: Vec<GradedModule>,
    pub unique: Option<GradedModule>,
    /// All final candidates have the same total rank.
    pub rank_consistent: bool,
    pub diagnostics: Vec<DegreeDiagnostic>,
}

impl SolveReport {
    /// Nodes for the choices of `d_r` directly below the root, i.e. `r = 2`.
    pub fn d2_branches(&self) -> &[BranchNode] {
        &self.tree.children
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Piece {
    length: u8,
    top: Degree,
    upper: usize,
    lower: usize,
}

/// Every module obtained from the filtered summands by iterated merges of a
/// higher-filtration piece `(a, t)` with a strictly lower piece `(b, t - a)`
/// into `(a + b, t)`, `a + b ≤ 3`. Includes the unmerged module; sorted and
/// deduplicated.
pub fn resolve_extensions(einf: &[FilteredSummand]) -> Vec<GradedModule> {
    let mut start: Vec<Piece> = einf
        .iter()
        .map(|s| Piece {
            length: s.length,
            top: s.top,
            upper: s.filtration,
            lower: s.filtration,
        })
        .collect();
    start.sort();
    let mut seen: HashSet<Vec<Piece>> = HashSet::new();
    let mut out: BTreeSet<GradedModule> = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(state) = stack.pop() {
        if !seen.insert(state.clone()) {
            continue;
        }
        out.insert(GradedModule::new(state.iter().map(|p| CyclicSummand {
            length: p.length,
            top: p.top,
        })));
        for (i, a) in state.iter().enumerate() {
            for (j, b) in state.iter().enumerate() {
                if i == j
                    || a.lower <= b.upper
                    || a.length + b.length > 3
                    || b.top != a.top - a.length as i64
                {
                    continue;
                }
                let mut next: Vec<Piece> = state
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, p)| *p)
                    .collect();
                next.push(Piece {
                    length: a.length + b.length,
                    top: a.top,
                    upper: a.upper,
                    lower: b.lower,
                });
                next.sort();
                stack.push(next);
            }
        }
    }
    out.into_iter().collect()
}

/// The answer for a vanishing cup form and constant `μ`: `C(n, k)` copies of
/// `(3, k)`.
pub fn standard_answer(n: usize) -> GradedModule {
    let mut summands = Vec::new();
    let mut binom = 1usize;
    for k in 0..=n {
        summands.extend((0..binom).map(|_| CyclicSummand::new(3, k as i64)));
        binom = binom * (n - k) / (k + 1);
    }
    GradedModule::new(summands)
}

struct Search<'a> {
    options: &'a SolveOptions,
    quota: usize,
    euler: i64,
    explored: u64,
    einfinity: BTreeSet<Vec<FilteredSummand>>,
    finals: BTreeSet<GradedModule>,
}

impl Search<'_> {
    fn node(
        &mut self,
        page: usize,
        candidate: usize,
        rank: usize,
        next: ChainPage,
        previous_total: usize,
    ) -> Result<BranchNode, SolveError> {
        if euler_characteristic(&next) != self.euler {
            return Err(PagesError::InvariantViolation(format!(
                "Euler characteristic changed on page {}",
                next.index()
            ))
            .into());
        }
        if next.total_rank() > previous_total {
            return Err(PagesError::InvariantViolation(format!(
                "total rank grew on page {}",
                next.index()
            ))
            .into());
        }
        let summands = next.chains().len();
        let grid = next.grid();
        if next.index() > next.n() {
            let einfinity = next.filtered_summands();
            let survivors: Vec<GradedModule> = resolve_extensions(&einfinity)
                .into_iter()
                .filter(|m| m.len() == self.quota)
                .collect();
            self.einfinity.insert(einfinity.clone());
            self.finals.extend(survivors.iter().cloned());
            return Ok(BranchNode {
                page,
                candidate,
                rank,
                summands,
                grid,
                verdict: Verdict::Leaf {
                    einfinity,
                    survivors,
                },
                children: Vec::new(),
            });
        }
        let children = self.expand(&next)?;
        Ok(BranchNode {
            page,
            candidate,
            rank,
            summands,
            grid,
            verdict: Verdict::Interior,
            children,
        })
    }

    fn expand(&mut self, page: &ChainPage) -> Result<Vec<BranchNode>, SolveError> {
        let candidates = candidate_differentials(page, self.options.candidate_cap)?;
        let mut nodes = Vec::with_capacity(candidates.len());
        for (i, d) in candidates.into_iter().enumerate() {
            self.explored += 1;
            if self.explored > self.options.budget {
                return Err(SolveError::BudgetExceeded {
                    budget: self.options.budget,
                });
            }
            let r = rank(&d);
            let next = page_homology(&page.with_differential(d)?)?.page;
            nodes.push(self.node(page.index(), i, r, next, page.total_rank())?);
        }
        Ok(nodes)
    }
}

/// Runs the full search for a validated input.
pub fn solve(pair: &ValidatedPair, options: &SolveOptions) -> Result<SolveReport, SolveError> {
    let (mu, discarded) = if options.normalize {
        pair.mu().normalized()
    } else {
        (pair.mu().clone(), false)
    };
    let cup = pair.cup().clone();
    validate_rokhlin(&mu, &cup)?;
    let ranks = hm_ranks(&cup)?;
    let quota = gysin_quota(&cup)?;

    let e1 = build_e1(&mu);
    let d1_rank = rank(e1.differential());
    let e2 = page_homology(&e1)?.page;
    let mut search = Search {
        options,
        quota,
        euler: euler_characteristic(&e1),
        explored: 0,
        einfinity: BTreeSet::new(),
        finals: BTreeSet::new(),
    };
    let tree = search.node(1, 0, d1_rank, e2.clone(), e1.total_rank())?;

    let finals: Vec<GradedModule> = search.finals.into_iter().collect();
    if finals.is_empty() {
        return Err(SolveError::NoConsistentAnswer { quota });
    }
    let rank_consistent = finals
        .windows(2)
        .all(|w| w[0].total_rank() == w[1].total_rank());
    let unique = (finals.len() == 1).then(|| finals[0].clone());
    let diagnostics = finals
        .iter()
        .map(|m| degree_diagnostic(m, ranks, options.diagnostic_offsets))
        .collect();
    Ok(SolveReport {
        cup,
        mu,
        discarded_constant: discarded,
        shift: Degree::new(2 * discarded as i64),
        hm_ranks: ranks,
        quota,
        e1,
        e2,
        tree,
        einfinity: search.einfinity.into_iter().collect(),
        finals,
        unique,
        rank_consistent,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmod::Degree;

    fn fs(filtration: usize, length: u8, top: i64) -> FilteredSummand {
        FilteredSummand {
            filtration,
            length,
            top: Degree::new(top),
        }
    }

    fn run(mu: RokhlinMap, cup: CupForm) -> SolveReport {
        solve(
            &validate_rokhlin(&mu, &cup).unwrap(),
            &SolveOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn extension_examples() {
        assert_eq!(
            resolve_extensions(&[fs(0, 3, 0)]),
            vec![GradedModule::rtilde()]
        );
        let out = resolve_extensions(&[fs(3, 1, -1), fs(1, 2, -2)]);
        assert_eq!(
            out,
            vec![
                GradedModule::from_pairs(&[(1, -1), (2, -2)]),
                GradedModule::from_pairs(&[(3, -1)]),
            ]
        );
        assert_eq!(resolve_extensions(&[fs(2, 3, 0), fs(0, 3, 1)]).len(), 1);
        // The lower piece must sit strictly below.
        assert_eq!(resolve_extensions(&[fs(1, 1, 0), fs(1, 1, -1)]).len(), 1);
    }

    #[test]
    fn standard_answers() {
        assert_eq!(standard_answer(0), GradedModule::rtilde());
        assert_eq!(
            standard_answer(1),
            GradedModule::from_pairs(&[(3, 0), (3, 1)])
        );
        assert_eq!(
            standard_answer(2),
            GradedModule::from_pairs(&[(3, 0), (3, 1), (3, 1), (3, 2)])
        );
    }

    #[test]
    fn sphere() {
        let r = run(RokhlinMap::constant(0, false), CupForm::zero(0));
        assert_eq!(r.unique, Some(GradedModule::rtilde()));
        assert_eq!(r.quota, 1);
    }

    #[test]
    fn trefoil() {
        let r = run(RokhlinMap::from_monomials(1, &[&[1]]), CupForm::zero(1));
        assert_eq!(r.unique, Some(GradedModule::from_pairs(&[(2, 0), (2, 2)])));
        assert_eq!(r.tree.rank, 1);
    }

    #[test]
    fn standard_agrees_with_solver() {
        for n in 0..=2 {
            let r = run(RokhlinMap::constant(n, false), CupForm::zero(n));
            assert_eq!(r.unique, Some(standard_answer(n)), "n = {n}");
        }
        // From three coordinates on, a nonzero d₃ also meets the summand count.
        let r = run(RokhlinMap::constant(3, false), CupForm::zero(3));
        assert!(r.finals.contains(&standard_answer(3)));
        assert_eq!(r.finals.len(), 2);
        assert!(r.unique.is_none());
        assert!(!r.rank_consistent);
    }

    #[test]
    fn split_two() {
        let r = run(RokhlinMap::from_monomials(2, &[&[1]]), CupForm::zero(2));
        assert_eq!(
            r.unique,
            Some(GradedModule::from_pairs(&[(2, 0), (2, 1), (2, 2), (2, 3)]))
        );
    }

    #[test]
    fn three_torus() {
        let r = run(RokhlinMap::origin_indicator(3), CupForm::single(1));
        assert_eq!(r.quota, 6);
        assert_eq!(r.d2_branches().len(), 8);
        for b in &r.d2_branches()[1..] {
            assert!(b.rank > 0);
            assert!(!b.survives());
        }
        let zero = &r.d2_branches()[0];
        assert_eq!(zero.children.len(), 2);
        assert!(!zero.children[0].survives());
        assert!(zero.children[1].survives());
        let expected = GradedModule::from_pairs(&[(3, 0), (3, 0), (3, 0), (3, 3), (3, 3), (3, 3)]);
        assert_eq!(r.unique, Some(expected));
        assert!(r.diagnostics[0].consistent);
        assert_eq!(r.shift, Degree::new(2));
    }

    #[test]
    fn weight_three() {
        let mu = RokhlinMap::from_monomials(3, &[&[1], &[2], &[3], &[1, 2, 3]]);
        assert_eq!(mu.weight(), 3);
        let r = run(mu, CupForm::single(1));
        let zero = &r.d2_branches()[0];
        assert_eq!(zero.rank, 0);
        assert_eq!(zero.children.len(), 1);
        assert_eq!(zero.children[0].rank, 0);
        assert!(!zero.survives());
        // The free length-3 chain in filtration 2 can be neither hit nor cut.
        assert!(!r.finals.is_empty());
        for m in &r.finals {
            assert!(
                m.summands().iter().any(|s| s.length == 3),
                "{}",
                m.describe()
            );
        }
    }
}
