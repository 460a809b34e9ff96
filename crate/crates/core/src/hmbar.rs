//! The cup-contraction complex `Λ*(F₂ⁿ)` and the HM-bar ranks it computes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2core::{rank, F2Matrix, SubsetIndex};
use crate::forms::CupForm;
use crate::rmod::GradedModule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HmError {
    #[error("contraction boundary does not square to zero (Λ^{0} → Λ^{1})")]
    SquareNotZero(usize, usize),
}

/// `Λᵏ → Λᵏ⁻³`, `e_S ↦ Σ_{T ⊆ S, |T| = 3} c(T) e_{S∖T}`.
#[derive(Clone, Debug)]
pub struct ContractionComplex {
    n: usize,
    /// `basis[k]`: subsets of size `k` in mask order.
    basis: Vec<Vec<SubsetIndex>>,
    /// `boundary[k]`: the map out of `Λᵏ` (empty for `k < 3`).
    boundary: Vec<F2Matrix>,
}

impl ContractionComplex {
    pub fn new(cup: &CupForm) -> Self {
        let n = cup.n();
        let triples = cup.mod2_triples();
        let mut basis: Vec<Vec<SubsetIndex>> = vec![Vec::new(); n + 1];
        for s in SubsetIndex::all(n) {
            basis[s.cardinality()].push(s);
        }
        let position = |s: SubsetIndex, basis: &Vec<Vec<SubsetIndex>>| {
            basis[s.cardinality()]
                .binary_search(&s)
                .expect("subset present in its exterior degree")
        };
        let boundary = (0..=n)
            .map(|k| {
                if k < 3 {
                    return F2Matrix::zeros(0, basis[k].len());
                }
                let mut m = F2Matrix::zeros(basis[k - 3].len(), basis[k].len());
                for (j, s) in basis[k].iter().enumerate() {
                    for t in &triples {
                        if t.is_subset_of(s) {
                            let rest = SubsetIndex::new(n, s.mask() & !t.mask());
                            let i = position(rest, &basis);
                            m.set(i, j, !m.get(i, j));
                        }
                    }
                }
                m
            })
            .collect();
        ContractionComplex { n, basis, boundary }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self, k: usize) -> usize {
        self.basis[k].len()
    }

    pub fn boundary(&self, k: usize) -> &F2Matrix {
        &self.boundary[k]
    }

    pub fn check_square(&self) -> Result<(), HmError> {
        for k in 6..=self.n {
            if !self.boundary[k - 3].mul(&self.boundary[k]).is_zero() {
                return Err(HmError::SquareNotZero(k, k - 6));
            }
        }
        Ok(())
    }

    /// Homology dimension in exterior degree `k`.
    pub fn homology(&self, k: usize) -> usize {
        let out = if k >= 3 { rank(&self.boundary[k]) } else { 0 };
        let incoming = if k + 3 <= self.n {
            rank(&self.boundary[k + 3])
        } else {
            0
        };
        self.dimension(k) - out - incoming
    }
}

/// `(even, odd)` homology ranks of the contraction complex.
pub fn hm_ranks(cup: &CupForm) -> Result<(usize, usize), HmError> {
    let cx = ContractionComplex::new(cup);
    cx.check_square()?;
    let mut even = 0;
    let mut odd = 0;
    for k in 0..=cx.n() {
        if k % 2 == 0 {
            even += cx.homology(k);
        } else {
            odd += cx.homology(k);
        }
    }
    Ok((even, odd))
}

/// The number of cyclic summands per window of any consistent answer.
pub fn gysin_quota(cup: &CupForm) -> Result<usize, HmError> {
    hm_ranks(cup).map(|(e, o)| e + o)
}

/// Per-residue HM-bar ranks implied by a candidate module.
///
/// A summand `(ℓ, t)` contributes one generator in degree `t + offsets.0`
/// (from the cokernel of `Q`) and one in `t - ℓ + 1 + offsets.1` (from its
/// kernel). The module is consistent when each even residue carries one
/// parity's rank and each odd residue the other's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDiagnostic {
    pub offsets: (i64, i64),
    pub per_residue: [usize; 4],
    pub consistent: bool,
}

pub fn degree_diagnostic(
    module: &GradedModule,
    ranks: (usize, usize),
    offsets: (i64, i64),
) -> DegreeDiagnostic {
    let mut per_residue = [0usize; 4];
    for s in module.summands() {
        per_residue[(s.top + offsets.0).index()] += 1;
        per_residue[(s.top + (offsets.1 + 1 - s.length as i64)).index()] += 1;
    }
    let (even, odd) = ranks;
    let fits = |a: usize, b: usize| {
        per_residue[0] == a && per_residue[2] == a && per_residue[1] == b && per_residue[3] == b
    };
    DegreeDiagnostic {
        offsets,
        per_residue,
        consistent: fits(even, odd) || fits(odd, even),
    }
}
