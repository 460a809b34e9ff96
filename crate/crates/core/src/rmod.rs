//! Graded modules over `F[Q]/Q³` with `Z/4` gradings: one `V`-periodic window
//! of an `R̃`-module.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2core::{kernel_basis, rank, Echelon, F2Matrix, F2Vec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RmodError {
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
}

/// A degree residue mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(u8);

impl Degree {
    pub fn new(d: i64) -> Self {
        Degree(d.rem_euclid(4) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> [Degree; 4] {
        [Degree(0), Degree(1), Degree(2), Degree(3)]
    }
}

impl Add<i64> for Degree {
    type Output = Degree;
    fn add(self, rhs: i64) -> Degree {
        Degree::new(self.0 as i64 + rhs)
    }
}

impl Sub<i64> for Degree {
    type Output = Degree;
    fn sub(self, rhs: i64) -> Degree {
        Degree::new(self.0 as i64 - rhs)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `F[Q]/Q^length` with generator in degree `top`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicSummand {
    pub length: u8,
    pub top: Degree,
}

impl CyclicSummand {
    pub fn new(length: u8, top: i64) -> Self {
        assert!(
            (1..=3).contains(&length),
            "summand length must be 1, 2 or 3"
        );
        CyclicSummand {
            length,
            top: Degree::new(top),
        }
    }

    /// Degrees `top, top-1, …, top-length+1`.
    pub fn degrees(self) -> impl Iterator<Item = Degree> {
        (0..self.length as i64).map(move |k| self.top - k)
    }

    pub fn shifted(self, d: i64) -> Self {
        CyclicSummand {
            length: self.length,
            top: self.top + d,
        }
    }
}

impl fmt::Display for CyclicSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, top {})", self.length, self.top)
    }
}

/// A multiset of cyclic summands, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedModule {
    summands: Vec<CyclicSummand>,
}

impl GradedModule {
    pub fn new(summands: impl IntoIterator<Item = CyclicSummand>) -> Self {
        let mut summands: Vec<CyclicSummand> = summands.into_iter().collect();
        summands.sort();
        GradedModule { summands }
    }

    /// Builds from `(length, top)` pairs.
    pub fn from_pairs(pairs: &[(u8, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(l, t)| CyclicSummand::new(l, t)))
    }

    pub fn empty() -> Self {
        GradedModule::default()
    }

    /// One window of `R̃`.
    pub fn rtilde() -> Self {
        Self::from_pairs(&[(3, 0)])
    }

    /// One window of `𝓘`.
    pub fn imod() -> Self {
        Self::from_pairs(&[(2, 0)])
    }

    pub fn summands(&self) -> &[CyclicSummand] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// `M⟨d⟩`: every top degree moved up by `d`.
    pub fn shift(&self, d: i64) -> Self {
        Self::new(self.summands.iter().map(|s| s.shifted(d)))
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Self {
        Self::new(self.summands.iter().chain(&other.summands).copied())
    }

    pub fn rank_vector(&self) -> [usize; 4] {
        let mut v = [0; 4];
        for s in &self.summands {
            for d in s.degrees() {
                v[d.index()] += 1;
            }
        }
        v
    }

    pub fn total_rank(&self) -> usize {
        self.summands.iter().map(|s| s.length as usize).sum()
    }

    /// The standard presentation: one basis vector per degree of each summand.
    pub fn presentation(&self) -> QModulePresentation {
        let mut dims = [0usize; 4];
        let mut slots: Vec<Vec<usize>> = Vec::new();
        for s in &self.summands {
            let mut chain = Vec::new();
            for d in s.degrees() {
                chain.push(dims[d.index()]);
                dims[d.index()] += 1;
            }
            slots.push(chain);
        }
        let mut q: [F2Matrix; 4] =
            std::array::from_fn(|d| F2Matrix::zeros(dims[(d + 3) % 4], dims[d]));
        for (s, chain) in self.summands.iter().zip(&slots) {
            for k in 0..chain.len().saturating_sub(1) {
                let d = (s.top - k as i64).index();
                q[d].set(chain[k + 1], chain[k], true);
            }
        }
        QModulePresentation { dims, q }
    }

    /// `"2 x F[Q]/Q^2 tops {0,2}"`, groups joined by `" + "`; `"0"` when empty.
    pub fn describe(&self) -> String {
        if self.summands.is_empty() {
            return "0".to_string();
        }
        let mut groups: BTreeMap<std::cmp::Reverse<u8>, Vec<u8>> = BTreeMap::new();
        for s in &self.summands {
            groups
                .entry(std::cmp::Reverse(s.length))
                .or_default()
                .push(s.top.value());
        }
        groups
            .into_iter()
            .map(|(std::cmp::Reverse(l), tops)| {
                let tops: Vec<String> = tops.iter().map(u8::to_string).collect();
                format!("{} x F[Q]/Q^{} tops {{{}}}", tops.len(), l, tops.join(","))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// A single-column grid with rows at degrees `3, 2, 1, 0`.
    pub fn grid(&self) -> RankGrid {
        if self.is_empty() {
            return RankGrid::default();
        }
        let lifts: Vec<i64> = self
            .summands
            .iter()
            .flat_map(|s| (0..s.length as i64).map(move |k| s.top.value() as i64 - k))
            .collect();
        RankGrid::from_columns(&[("M".to_string(), lifts)])
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Graded dimensions and the degree `-1` maps `Q: M_d → M_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QModulePresentation {
    pub dims: [usize; 4],
    /// `q[d]` has `dims[d]` columns and `dims[d-1]` rows.
    pub q: [F2Matrix; 4],
}

impl QModulePresentation {
    pub fn new(dims: [usize; 4], q: [F2Matrix; 4]) -> Result<Self, RmodError> {
        for d in 0..4 {
            let below = (d + 3) % 4;
            if q[d].cols() != dims[d] || q[d].rows() != dims[below] {
                return Err(RmodError::InconsistentPresentation(format!(
                    "Q out of degree {d} is {}x{}, expected {}x{}",
                    q[d].rows(),
                    q[d].cols(),
                    dims[below],
                    dims[d]
                )));
            }
        }
        let p = QModulePresentation { dims, q };
        for d in 0..4 {
            if !p.q_power(Degree(d as u8), 3).is_zero() {
                return Err(RmodError::InconsistentPresentation(format!(
                    "Q^3 is nonzero out of degree {d}"
                )));
            }
        }
        Ok(p)
    }

    /// `Q^k` out of degree `d`, landing in degree `d-k`.
    pub fn q_power(&self, d: Degree, k: usize) -> F2Matrix {
        let mut m = F2Matrix::identity(self.dims[d.index()]);
        for j in 0..k {
            let from = d - j as i64;
            m = self.q[from.index()].mul(&m);
        }
        m
    }

    /// Rank of `Q^k` out of degree `d`.
    pub fn rank_q(&self, d: Degree, k: usize) -> usize {
        if k == 0 {
            self.dims[d.index()]
        } else {
            rank(&self.q_power(d, k))
        }
    }
}

/// A generator of one cyclic summand in a Jordan basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanGenerator {
    pub degree: Degree,
    pub length: u8,
    /// Coordinates in the degree-`degree` basis of the presentation.
    pub vector: F2Vec,
}

/// Generators `g` such that the vectors `Qᵏ g` (`k < length`) form a basis.
pub fn jordan_basis(p: &QModulePresentation) -> Vec<JordanGenerator> {
    // kernels[j][d] = basis of ker Q^j in degree d.
    let kernels: Vec<[Vec<F2Vec>; 4]> = (0..=3)
        .map(|j| {
            std::array::from_fn(|d| {
                let d = Degree(d as u8);
                if j == 0 {
                    Vec::new()
                } else {
                    kernel_basis(&p.q_power(d, j))
                }
            })
        })
        .collect();
    let mut out = Vec::new();
    for length in (1..=3usize).rev() {
        for d in Degree::all() {
            let dim = p.dims[d.index()];
            if dim == 0 {
                continue;
            }
            let above = d + 1;
            let mut avoid: Vec<F2Vec> = kernels[length - 1][d.index()].clone();
            if length < 3 {
                let q = &p.q[above.index()];
                avoid.extend(
                    kernels[length + 1][above.index()]
                        .iter()
                        .map(|v| q.mul_vec(v)),
                );
            }
            let mut e = Echelon::new(dim, avoid.len() + kernels[length][d.index()].len());
            for v in &avoid {
                e.insert(v);
            }
            for v in &kernels[length][d.index()] {
                if e.insert(v) {
                    out.push(JordanGenerator {
                        degree: d,
                        length: length as u8,
                        vector: v.clone(),
                    });
                }
            }
        }
    }
    out
}

/// The unique cyclic decomposition of a presentation.
pub fn decompose(p: &QModulePresentation) -> Result<GradedModule, RmodError> {
    for d in Degree::all() {
        if !p.q_power(d, 3).is_zero() {
            return Err(RmodError::InconsistentPresentation(format!(
                "Q^3 is nonzero out of degree {d}"
            )));
        }
    }
    let mut summands = Vec::new();
    for d in Degree::all() {
        for length in 1..=3usize {
            // Chains of exact length ℓ starting in degree d.
            let count = p.rank_q(d, length - 1) as i64
                - p.rank_q(d, length) as i64
                - p.rank_q(d + 1, length) as i64
                + p.rank_q(d + 1, length + 1) as i64;
            if count < 0 {
                return Err(RmodError::InconsistentPresentation(format!(
                    "negative chain count at degree {d}, length {length}"
                )));
            }
            summands.extend((0..count).map(|_| CyclicSummand {
                length: length as u8,
                top: d,
            }));
        }
    }
    Ok(GradedModule::new(summands))
}

/// Number of cyclic summands; compared against the HM-derived quota.
pub fn gysin_summand_quota(m: &GradedModule) -> usize {
    m.len()
}

/// Ranks per (degree row, filtration column).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankGrid {
    pub columns: Vec<String>,
    /// Row degrees, descending.
    pub rows: Vec<i64>,
    /// `entries[row][column]`.
    pub entries: Vec<Vec<usize>>,
}

impl RankGrid {
    /// Lays out columns given as `(label, lifted degree of each basis vector)`.
    ///
    /// Each column may be moved by a multiple of 4 (the `V`-periodicity); see
    /// [`RankGrid::layout_shifts`].
    pub fn from_columns(columns: &[(String, Vec<i64>)]) -> RankGrid {
        let shifts = Self::layout_shifts(columns);
        Self::with_shifts(columns, &shifts)
    }

    /// Shifts (in units of 4) minimising the total row span, then the total
    /// move. Remaining ties keep the later columns in place.
    pub fn layout_shifts(columns: &[(String, Vec<i64>)]) -> Vec<i64> {
        best_shifts(columns)
    }

    /// Lays out columns with column `c` moved by `4 * shifts[c]`.
    pub fn with_shifts(columns: &[(String, Vec<i64>)], shifts: &[i64]) -> RankGrid {
        assert_eq!(columns.len(), shifts.len(), "one shift per column");
        if columns.iter().all(|(_, v)| v.is_empty()) {
            return RankGrid {
                columns: columns.iter().map(|(l, _)| l.clone()).collect(),
                rows: Vec::new(),
                entries: Vec::new(),
            };
        }
        let moved: Vec<Vec<i64>> = columns
            .iter()
            .zip(shifts)
            .map(|((_, v), k)| v.iter().map(|d| d + 4 * k).collect())
            .collect();
        let max = moved.iter().flatten().copied().max().unwrap_or(0);
        let min = moved.iter().flatten().copied().min().unwrap_or(0);
        let rows: Vec<i64> = (min..=max).rev().collect();
        let mut entries = vec![vec![0; columns.len()]; rows.len()];
        for (c, degs) in moved.iter().enumerate() {
            for d in degs {
                entries[(max - d) as usize][c] += 1;
            }
        }
        RankGrid {
            columns: columns.iter().map(|(l, _)| l.clone()).collect(),
            rows,
            entries,
        }
    }

    /// Entries only, top row first.
    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn render(&self) -> String {
        if self.rows.is_empty() {
            return String::new();
        }
        let cell = |k: usize| match k {
            0 => "0".to_string(),
            1 => "F".to_string(),
            k => format!("F^{k}"),
        };
        let label_width = self
            .rows
            .iter()
            .map(|r| r.to_string().len())
            .max()
            .unwrap_or(1);
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| {
                self.entries
                    .iter()
                    .map(|row| cell(row[c]).chars().count())
                    .chain(std::iter::once(self.columns[c].chars().count()))
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        let mut out = String::new();
        out.push_str(&" ".repeat(label_width));
        for (c, label) in self.columns.iter().enumerate() {
            out.push_str(&format!("  {:>w$}", label, w = widths[c]));
        }
        out.push('\n');
        for (r, row) in self.entries.iter().enumerate() {
            out.push_str(&format!("{:>w$}", self.rows[r], w = label_width));
            for (c, &k) in row.iter().enumerate() {
                out.push_str(&format!("  {:>w$}", cell(k), w = widths[c]));
            }
            out.push('\n');
        }
        out
    }
}

fn best_shifts(columns: &[(String, Vec<i64>)]) -> Vec<i64> {
    const CHOICES: [i64; 5] = [0, -1, 1, -2, 2];
    let count = columns.len();
    let mut best: Option<((i64, i64), Vec<i64>)> = None;
    let mut index = vec![0usize; count];
    loop {
        let shifts: Vec<i64> = index.iter().map(|&i| CHOICES[i]).collect();
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for ((_, degs), k) in columns.iter().zip(&shifts) {
            for d in degs {
                lo = lo.min(d + 4 * k);
                hi = hi.max(d + 4 * k);
            }
        }
        let cost = (hi - lo, shifts.iter().map(|k| k.abs()).sum::<i64>());
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, shifts));
        }
        // Odometer over the choices, first column fastest.
        let mut pos = 0;
        loop {
            if pos == count {
                return best.map(|(_, s)| s).unwrap_or_default();
            }
            index[pos] += 1;
            if index[pos] < CHOICES.len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}
