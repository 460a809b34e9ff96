//! Pages of the spectral sequence associated to the filtration by `|I|`.
//!
//! Every page is kept in a Jordan basis: its cells are grouped into chains
//! `g, Qg, Q²g` inside one filtration column, so the `Q`-action is the shift
//! along each chain. Cells also remember a representative in `E¹`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2core::{extend_to_basis, kernel_basis, Echelon, F2Matrix, F2Vec, SubsetIndex};
use crate::forms::RokhlinMap;
use crate::rmod::{
    decompose, jordan_basis, CyclicSummand, Degree, GradedModule, QModulePresentation, RankGrid,
};

/// Default cap on the number of differentials `candidate_differentials` may enumerate.
pub const DEFAULT_CANDIDATE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PagesError {
    #[error("page invariant violated: {0}")]
    InvariantViolation(String),
    #[error("{bits} free differential coefficients exceed the candidate cap of {cap}")]
    BudgetExceeded { bits: usize, cap: u64 },
    #[error("higher differentials start at page 2, got page {0}")]
    NotHigherPage(usize),
}

/// The label of an `E¹` cell `e_{I,q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct E1Label {
    pub subset: SubsetIndex,
    pub q: u8,
    /// Integer degree `|I| - 2μ(I) - q` before reduction mod 4.
    pub lift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub filtration: usize,
    pub degree: Degree,
    /// Integer degree of the first `E¹` cell of the representative.
    pub lift: i64,
    /// First `E¹` cell of the representative.
    pub origin: E1Label,
    pub chain: usize,
    /// Position in the chain: the cell is `Q^position` of the chain's top.
    pub position: u8,
    /// Representative as a combination of `E¹` cells.
    pub support: F2Vec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub filtration: usize,
    /// Cell indices, top first.
    pub cells: Vec<usize>,
}

impl Chain {
    pub fn length(&self) -> usize {
        self.cells.len()
    }

    pub fn top(&self) -> usize {
        self.cells[0]
    }
}

/// A cyclic summand of a page together with its filtration level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FilteredSummand {
    pub filtration: usize,
    pub length: u8,
    pub top: Degree,
}

impl FilteredSummand {
    pub fn summand(&self) -> CyclicSummand {
        CyclicSummand {
            length: self.length,
            top: self.top,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPage {
    n: usize,
    r: usize,
    e1: Vec<E1Label>,
    cells: Vec<Cell>,
    chains: Vec<Chain>,
    /// Column `j` is the image of cell `j`.
    differential: F2Matrix,
    /// Grid shift of filtration column `f`, fixed on `E¹` so that every page
    /// is drawn in the same frame.
    layout: Vec<i64>,
}

fn e1_index(s: SubsetIndex, q: u8) -> usize {
    3 * s.mask() as usize + q as usize
}

/// The `E¹` page: cells `e_{I,q}` with `d¹(e_{I,0}) = Σ e_{I',2}` over
/// codimension-one faces `I'` with `μ(I') ≠ μ(I)`.
pub fn build_e1(mu: &RokhlinMap) -> ChainPage {
    let n = mu.n();
    let count = 3usize << n;
    let mut e1 = Vec::with_capacity(count);
    let mut cells = Vec::with_capacity(count);
    let mut chains = Vec::with_capacity(1 << n);
    for s in SubsetIndex::all(n) {
        let chain = chains.len();
        let mut members = Vec::new();
        for q in 0..3u8 {
            let lift = s.cardinality() as i64 - 2 * mu.value(s) as i64 - q as i64;
            let label = E1Label { subset: s, q, lift };
            let index = e1_index(s, q);
            debug_assert_eq!(index, cells.len());
            e1.push(label);
            members.push(index);
            cells.push(Cell {
                filtration: s.cardinality(),
                degree: Degree::new(lift),
                lift,
                origin: label,
                chain,
                position: q,
                support: F2Vec::unit(count, index),
            });
        }
        chains.push(Chain {
            filtration: s.cardinality(),
            cells: members,
        });
    }
    let mut d = F2Matrix::zeros(count, count);
    for s in SubsetIndex::all(n) {
        for i in s.elements() {
            let face = SubsetIndex::new(n, s.mask() & !(1 << (i - 1)));
            let jumps = mu.value(face) != mu.value(s);
            let source = &cells[e1_index(s, 0)];
            let target = &cells[e1_index(face, 2)];
            // The adjacency rule and the degree rule must agree.
            assert_eq!(
                jumps,
                target.degree == source.degree - 1,
                "d¹ adjacency disagrees with degree bookkeeping at {s} -> {face}"
            );
            if jumps {
                d.set(e1_index(face, 2), e1_index(s, 0), true);
            }
        }
    }
    let mut page = ChainPage {
        n,
        r: 1,
        e1,
        cells,
        chains,
        differential: d,
        layout: vec![0; n + 1],
    };
    let shifts = RankGrid::layout_shifts(&page.grid_columns());
    for (f, k) in (0..=n).rev().zip(shifts) {
        page.layout[f] = k;
    }
    page
}

impl ChainPage {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The page index `r`; the differential drops filtration by `r`.
    pub fn index(&self) -> usize {
        self.r
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn e1_labels(&self) -> &[E1Label] {
        &self.e1
    }

    pub fn differential(&self) -> &F2Matrix {
        &self.differential
    }

    pub fn total_rank(&self) -> usize {
        self.cells.len()
    }

    /// The `Q`-action as a matrix on cells.
    pub fn q_action(&self) -> F2Matrix {
        let mut q = F2Matrix::zeros(self.cells.len(), self.cells.len());
        for chain in &self.chains {
            for w in chain.cells.windows(2) {
                q.set(w[1], w[0], true);
            }
        }
        q
    }

    /// Replaces the differential after checking every page invariant.
    pub fn with_differential(&self, d: F2Matrix) -> Result<ChainPage, PagesError> {
        let mut p = self.clone();
        p.differential = d;
        verify(&p)?;
        Ok(p)
    }

    pub fn filtered_summands(&self) -> Vec<FilteredSummand> {
        let mut out: Vec<FilteredSummand> = self
            .chains
            .iter()
            .map(|c| FilteredSummand {
                filtration: c.filtration,
                length: c.length() as u8,
                top: self.cells[c.top()].degree,
            })
            .collect();
        out.sort();
        out
    }

    /// The page as a module, forgetting filtrations.
    pub fn module(&self) -> GradedModule {
        GradedModule::new(
            self.filtered_summands()
                .iter()
                .map(FilteredSummand::summand),
        )
    }

    /// Ranks per (lifted degree, filtration), highest filtration leftmost.
    pub fn grid(&self) -> RankGrid {
        let shifts: Vec<i64> = (0..=self.n).rev().map(|f| self.layout[f]).collect();
        RankGrid::with_shifts(&self.grid_columns(), &shifts)
    }

    fn grid_columns(&self) -> Vec<(String, Vec<i64>)> {
        (0..=self.n)
            .rev()
            .map(|f| {
                let lifts = self
                    .cells
                    .iter()
                    .filter(|c| c.filtration == f)
                    .map(|c| c.lift)
                    .collect();
                (f.to_string(), lifts)
            })
            .collect()
    }

    fn column_degree(&self, f: usize, d: Degree) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].filtration == f && self.cells[i].degree == d)
            .collect()
    }
}

/// Checks `d² = 0`, `dQ = Qd`, `Q³ = 0` and the degree/filtration bookkeeping.
pub fn verify(p: &ChainPage) -> Result<(), PagesError> {
    let fail = |msg: String| Err(PagesError::InvariantViolation(msg));
    let d = &p.differential;
    let q = p.q_action();
    let size = p.cells.len();
    if d.rows() != size || d.cols() != size {
        return fail(format!(
            "differential is {}x{}, page has {size} cells",
            d.rows(),
            d.cols()
        ));
    }
    if !d.mul(d).is_zero() {
        return fail(format!("d∘d ≠ 0 on page {}", p.r));
    }
    if d.mul(&q) != q.mul(d) {
        return fail(format!("d does not commute with Q on page {}", p.r));
    }
    if !q.pow(3).is_zero() {
        return fail("Q³ ≠ 0".to_string());
    }
    for j in 0..size {
        let source = &p.cells[j];
        for i in d.column(j).iter_ones() {
            let target = &p.cells[i];
            if target.degree != source.degree - 1 {
                return fail(format!(
                    "differential entry {j} -> {i} does not lower degree by 1"
                ));
            }
            if target.filtration + p.r != source.filtration {
                return fail(format!(
                    "differential entry {j} -> {i} does not lower filtration by {}",
                    p.r
                ));
            }
        }
        for i in q.column(j).iter_ones() {
            let target = &p.cells[i];
            if target.degree != source.degree - 1 || target.filtration != source.filtration {
                return fail(format!("Q entry {j} -> {i} breaks the grading"));
            }
        }
    }
    Ok(())
}

/// Homology of a page with its differential, and the `Q`-module presentation
/// of each filtration column of the result.
#[derive(Clone, Debug)]
pub struct PageStep {
    pub page: ChainPage,
    pub presentations: Vec<(usize, QModulePresentation)>,
}

pub fn page_homology(p: &ChainPage) -> Result<PageStep, PagesError> {
    verify(p)?;
    let size = p.cells.len();
    let d = &p.differential;
    let q = p.q_action();
    let e1_count = p.e1.len();

    let mut cells = Vec::new();
    let mut chains = Vec::new();
    let mut presentations = Vec::new();
    for f in (0..=p.n).rev() {
        // Cycle representatives per degree, and boundaries per degree.
        let mut reps: [Vec<F2Vec>; 4] = Default::default();
        let mut boundaries: [Vec<F2Vec>; 4] = Default::default();
        for deg in Degree::all() {
            let here = p.column_degree(f, deg);
            let images: Vec<F2Vec> = here.iter().map(|&c| d.column(c)).collect();
            let local = F2Matrix::from_columns(size, &images);
            let cycles: Vec<F2Vec> = kernel_basis(&local)
                .iter()
                .map(|k| {
                    let mut v = F2Vec::zeros(size);
                    for i in k.iter_ones() {
                        v.set(here[i], true);
                    }
                    v
                })
                .collect();
            let bounds: Vec<F2Vec> = p
                .column_degree(f + p.r, deg + 1)
                .iter()
                .map(|&c| d.column(c))
                .collect();
            reps[deg.index()] = extend_to_basis(size, &bounds, &cycles);
            boundaries[deg.index()] = bounds;
        }
        let dims: [usize; 4] = std::array::from_fn(|i| reps[i].len());
        if dims.iter().all(|&k| k == 0) {
            continue;
        }
        // Q on homology in the chosen representatives.
        let qs: [F2Matrix; 4] = std::array::from_fn(|i| {
            let deg = Degree::new(i as i64);
            let below = (deg - 1).index();
            let mut e = Echelon::new(size, boundaries[below].len() + reps[below].len());
            for b in &boundaries[below] {
                e.insert(b);
            }
            for h in &reps[below] {
                e.insert(h);
            }
            let offset = boundaries[below].len();
            let columns: Vec<F2Vec> = reps[i]
                .iter()
                .map(|h| {
                    let image = q.mul_vec(h);
                    let coords = e
                        .coordinates(&image)
                        .expect("Q preserves cycles modulo boundaries");
                    let mut c = F2Vec::zeros(reps[below].len());
                    for k in coords.iter_ones().filter(|&k| k >= offset) {
                        c.set(k - offset, true);
                    }
                    c
                })
                .collect();
            F2Matrix::from_columns(reps[below].len(), &columns)
        });
        let presentation = QModulePresentation::new(dims, qs)
            .map_err(|e| PagesError::InvariantViolation(e.to_string()))?;
        for g in jordan_basis(&presentation) {
            let mut v = F2Vec::zeros(size);
            for k in g.vector.iter_ones() {
                v.xor_assign(&reps[g.degree.index()][k]);
            }
            let chain = chains.len();
            let mut members = Vec::new();
            for position in 0..g.length {
                let mut support = F2Vec::zeros(e1_count);
                for c in v.iter_ones() {
                    support.xor_assign(&p.cells[c].support);
                }
                let first = support
                    .first_one()
                    .expect("nonzero class has nonzero representative");
                let origin = p.e1[first];
                members.push(cells.len());
                cells.push(Cell {
                    filtration: f,
                    degree: g.degree - position as i64,
                    lift: origin.lift,
                    origin,
                    chain,
                    position,
                    support,
                });
                v = q.mul_vec(&v);
            }
            chains.push(Chain {
                filtration: f,
                cells: members,
            });
        }
        presentations.push((f, presentation));
    }
    let count = cells.len();
    let page = ChainPage {
        n: p.n,
        r: p.r + 1,
        e1: p.e1.clone(),
        cells,
        chains,
        differential: F2Matrix::zeros(count, count),
        layout: p.layout.clone(),
    };
    verify(&page)?;
    Ok(PageStep {
        page,
        presentations,
    })
}

/// The module presented by each filtration column.
pub fn column_modules(step: &PageStep) -> Result<Vec<(usize, GradedModule)>, PagesError> {
    step.presentations
        .iter()
        .map(|(f, p)| {
            decompose(p)
                .map(|m| (*f, m))
                .map_err(|e| PagesError::InvariantViolation(e.to_string()))
        })
        .collect()
}

/// One free coefficient of a candidate differential: the image of a chain
/// top may contain the given target cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateSlot {
    pub chain: usize,
    pub target: usize,
}

/// The free coefficients of degree `-1`, filtration `-r` module maps on `p`.
pub fn candidate_slots(p: &ChainPage) -> Vec<CandidateSlot> {
    let mut slots = Vec::new();
    for (c, chain) in p.chains.iter().enumerate() {
        if chain.filtration < p.r {
            continue;
        }
        let top = &p.cells[chain.top()];
        let length = chain.length();
        for (t, target) in p.cells.iter().enumerate() {
            let target_len = p.chains[target.chain].length();
            if target.filtration + p.r == chain.filtration
                && target.degree == top.degree - 1
                && target.position as usize + length >= target_len
            {
                slots.push(CandidateSlot {
                    chain: c,
                    target: t,
                });
            }
        }
    }
    slots
}

/// The module map determined by the slots selected in `mask`.
pub fn differential_from_mask(p: &ChainPage, slots: &[CandidateSlot], mask: u64) -> F2Matrix {
    let size = p.cells.len();
    let q = p.q_action();
    let mut d = F2Matrix::zeros(size, size);
    let mut images: Vec<F2Vec> = vec![F2Vec::zeros(size); p.chains.len()];
    for (i, s) in slots.iter().enumerate() {
        if mask >> i & 1 == 1 {
            images[s.chain].flip(s.target);
        }
    }
    for (c, chain) in p.chains.iter().enumerate() {
        let mut image = images[c].clone();
        for &cell in &chain.cells {
            for i in image.iter_ones() {
                d.set(i, cell, true);
            }
            image = q.mul_vec(&image);
        }
    }
    d
}

/// Every admissible `d_r` on `p`: `Q`-equivariant, degree `-1`, filtration
/// `-r`, squaring to zero. The zero map comes first.
pub fn candidate_differentials(p: &ChainPage, cap: u64) -> Result<Vec<F2Matrix>, PagesError> {
    if p.r < 2 {
        return Err(PagesError::NotHigherPage(p.r));
    }
    let slots = candidate_slots(p);
    if slots.len() >= 64 || (1u64 << slots.len()) > cap {
        return Err(PagesError::BudgetExceeded {
            bits: slots.len(),
            cap,
        });
    }
    Ok((0..1u64 << slots.len())
        .map(|mask| differential_from_mask(p, &slots, mask))
        .filter(|d| d.mul(d).is_zero())
        .collect())
}

/// `Σ_cells (-1)^degree`, unchanged by passing to homology.
pub fn euler_characteristic(p: &ChainPage) -> i64 {
    p.cells
        .iter()
        .map(|c| if c.degree.value() % 2 == 0 { 1 } else { -1 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2core::rank;

    fn t3_normalized() -> RokhlinMap {
        RokhlinMap::from_fn(3, |s| s.cardinality() > 0)
    }

    #[test]
    fn e1_of_a_point() {
        let p = build_e1(&RokhlinMap::constant(0, false));
        assert_eq!(p.total_rank(), 3);
        assert!(p.differential().is_zero());
        assert_eq!(p.module(), GradedModule::rtilde());
    }

    #[test]
    fn e1_trefoil() {
        let mu = RokhlinMap::from_monomials(1, &[&[1]]);
        let p = build_e1(&mu);
        verify(&p).unwrap();
        let one = SubsetIndex::full(1);
        let e = SubsetIndex::empty(1);
        assert!(p.differential().get(e1_index(e, 2), e1_index(one, 0)));
        assert_eq!(rank(p.differential()), 1);
        assert_eq!(p.cells()[e1_index(e, 0)].degree, Degree::new(0));
        assert_eq!(p.cells()[e1_index(one, 0)].degree, Degree::new(-1));
    }

    #[test]
    fn e1_t3_grid_and_differential() {
        let p = build_e1(&t3_normalized());
        verify(&p).unwrap();
        assert_eq!(
            p.grid().matrix(),
            &[
                vec![1, 0, 0, 0],
                vec![1, 3, 0, 1],
                vec![1, 3, 3, 1],
                vec![0, 3, 3, 1],
                vec![0, 0, 3, 0],
            ]
        );
        let d = p.differential();
        assert_eq!(d.column(e1_index(SubsetIndex::empty(3), 0)).count_ones(), 0);
        for i in 1..=3 {
            let col = d.column(e1_index(SubsetIndex::from_elements(3, &[i]), 0));
            assert_eq!(
                col.iter_ones().collect::<Vec<_>>(),
                vec![e1_index(SubsetIndex::empty(3), 2)]
            );
        }
        assert_eq!(rank(d), 1);
    }

    #[test]
    fn e2_trefoil_is_two_copies_of_i() {
        let mu = RokhlinMap::from_monomials(1, &[&[1]]);
        let step = page_homology(&build_e1(&mu)).unwrap();
        assert_eq!(
            step.page.module(),
            GradedModule::from_pairs(&[(2, 0), (2, 2)])
        );
        assert_eq!(step.page.index(), 2);
    }

    #[test]
    fn e2_t3_grid() {
        let step = page_homology(&build_e1(&t3_normalized())).unwrap();
        assert_eq!(
            step.page.grid().matrix(),
            &[
                vec![1, 0, 0, 0],
                vec![1, 3, 0, 1],
                vec![1, 3, 2, 1],
                vec![0, 3, 3, 0],
                vec![0, 0, 3, 0],
            ]
        );
    }

    #[test]
    fn weight_three_grids_share_a_frame() {
        let mu = RokhlinMap::from_monomials(3, &[&[1], &[2], &[3], &[1, 2, 3]]);
        let e1 = build_e1(&mu);
        assert_eq!(
            e1.grid().matrix(),
            &[
                vec![0, 0, 0, 1],
                vec![1, 0, 3, 1],
                vec![1, 3, 3, 1],
                vec![1, 3, 3, 0],
                vec![0, 3, 0, 0],
            ]
        );
        let e2 = page_homology(&e1).unwrap().page;
        assert_eq!(e2.grid().rows, e1.grid().rows);
        assert_eq!(
            e2.grid().matrix(),
            &[
                vec![0, 0, 0, 1],
                vec![1, 0, 2, 1],
                vec![1, 1, 3, 0],
                vec![1, 3, 1, 0],
                vec![0, 3, 0, 0],
            ]
        );
    }

    #[test]
    fn zero_differential_keeps_ranks() {
        let mu = RokhlinMap::constant(2, false);
        let e1 = build_e1(&mu);
        let e2 = page_homology(&e1).unwrap().page;
        assert_eq!(e2.module(), e1.module());
        assert_eq!(e2.grid(), e1.grid());
    }

    #[test]
    fn candidate_counts() {
        let e2 = page_homology(&build_e1(&RokhlinMap::constant(2, false)))
            .unwrap()
            .page;
        assert_eq!(
            candidate_differentials(&e2, DEFAULT_CANDIDATE_CAP)
                .unwrap()
                .len(),
            1
        );

        let e2 = page_homology(&build_e1(&t3_normalized())).unwrap().page;
        let cands = candidate_differentials(&e2, DEFAULT_CANDIDATE_CAP).unwrap();
        assert_eq!(cands.len(), 8);
        assert!(cands[0].is_zero());
        let e3 = page_homology(&e2).unwrap().page;
        assert_eq!(
            candidate_differentials(&e3, DEFAULT_CANDIDATE_CAP)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn candidate_budget_and_page_guard() {
        let e1 = build_e1(&t3_normalized());
        assert_eq!(
            candidate_differentials(&e1, DEFAULT_CANDIDATE_CAP),
            Err(PagesError::NotHigherPage(1))
        );
        let e2 = page_homology(&e1).unwrap().page;
        assert!(matches!(
            candidate_differentials(&e2, 4),
            Err(PagesError::BudgetExceeded { bits: 3, cap: 4 })
        ));
    }

    #[test]
    fn euler_characteristic_is_conserved() {
        let mu = t3_normalized();
        let e1 = build_e1(&mu);
        let e2 = page_homology(&e1).unwrap().page;
        assert_eq!(euler_characteristic(&e1), euler_characteristic(&e2));
        for d in candidate_differentials(&e2, DEFAULT_CANDIDATE_CAP).unwrap() {
            let e3 = page_homology(&e2.with_differential(d).unwrap())
                .unwrap()
                .page;
            assert_eq!(euler_characteristic(&e3), euler_characteristic(&e1));
        }
    }

    #[test]
    fn bad_differential_rejected() {
        let e2 = page_homology(&build_e1(&t3_normalized())).unwrap().page;
        let size = e2.total_rank();
        let mut d = F2Matrix::zeros(size, size);
        d.set(0, 1, true);
        assert!(matches!(
            e2.with_differential(d),
            Err(PagesError::InvariantViolation(_))
        ));
    }
}
