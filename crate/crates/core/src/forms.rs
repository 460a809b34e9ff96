//! Triple cup forms and Rokhlin maps.
//!
//! A Rokhlin map is stored as a truth table on subsets of `{1..n}` (the spin
//! structures relative to a base structure at `∅`) together with its algebraic
//! normal form. A valid map is cubic and its cubic part is the mod-2 reduction
//! of the cup form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::f2core::{moebius_transform, BitTable, F2Matrix, F2Vec, SubsetIndex, MAX_DIM};

/// Largest `n` accepted by the brute-force equivalence search.
pub const MAX_EQUIVALENCE_DIM: usize = 4;
/// Largest `n` accepted by orbit classification.
pub const MAX_CLASSIFY_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {n} exceeds the limit {max} for this operation")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("Rokhlin map is not cubic: ANF contains the degree-{degree} monomial {monomial}")]
    NotCubic {
        degree: usize,
        monomial: SubsetIndex,
    },
    #[error("cubic part disagrees with the cup form on {triple:?}: ANF coefficient {anf}, cup value {cup}")]
    CubicPartMismatch {
        triple: [usize; 3],
        anf: bool,
        cup: i64,
    },
    #[error("invalid cup-form triple {triple:?} for b1 = {n}")]
    BadTriple { triple: [usize; 3], n: usize },
    #[error("quadratic form does not refine the standard intersection pairing at coordinates ({0}, {1})")]
    NotARefinement(usize, usize),
}

/// The integral triple cup product, stored on strictly increasing triples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CupForm {
    n: usize,
    coeffs: BTreeMap<[usize; 3], i64>,
}

impl CupForm {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds cap {MAX_DIM}");
        CupForm {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// `triple` is 1-based and must be strictly increasing.
    pub fn set(&mut self, triple: [usize; 3], value: i64) -> Result<(), FormsError> {
        let [i, j, k] = triple;
        if !(1 <= i && i < j && j < k && k <= self.n) {
            return Err(FormsError::BadTriple { triple, n: self.n });
        }
        if value == 0 {
            self.coeffs.remove(&triple);
        } else {
            self.coeffs.insert(triple, value);
        }
        Ok(())
    }

    pub fn with(mut self, triple: [usize; 3], value: i64) -> Result<Self, FormsError> {
        self.set(triple, value)?;
        Ok(self)
    }

    /// The `n = 3` form with `c₁₂₃ = m`.
    pub fn single(m: i64) -> Self {
        CupForm::zero(3).with([1, 2, 3], m).expect("valid triple")
    }

    /// The mod-2 form whose odd triples are exactly `triples`.
    pub fn from_mod2(n: usize, triples: &BTreeSet<SubsetIndex>) -> Self {
        let mut c = CupForm::zero(n);
        for t in triples {
            let e = t.elements();
            assert_eq!(e.len(), 3, "cup triples have three elements");
            c.set([e[0], e[1], e[2]], 1).expect("valid triple");
        }
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Integral value on arbitrary 1-based indices; alternating, so repeats give 0.
    pub fn value(&self, i: usize, j: usize, k: usize) -> i64 {
        if i == j || j == k || i == k {
            return 0;
        }
        let mut t = [i, j, k];
        let mut sign = 1;
        // Bubble sort counting transpositions.
        for a in 0..3 {
            for b in 0..2 - a {
                if t[b] > t[b + 1] {
                    t.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        sign * self.coeffs.get(&t).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = ([usize; 3], i64)> + '_ {
        self.coeffs.iter().map(|(t, v)| (*t, *v))
    }

    /// Triples with odd coefficient.
    pub fn mod2_triples(&self) -> BTreeSet<SubsetIndex> {
        self.coeffs
            .iter()
            .filter(|(_, v)| v.rem_euclid(2) == 1)
            .map(|(t, _)| SubsetIndex::from_elements(self.n, t))
            .collect()
    }

    pub fn is_zero_mod2(&self) -> bool {
        self.mod2_triples().is_empty()
    }

    /// Integral pullback along an integer matrix `L`:
    /// `c'_{ijk} = Σ_T c_T · det L[T; {i,j,k}]`.
    pub fn pullback_integral(&self, lift: &[Vec<i64>]) -> CupForm {
        let n = self.n;
        let mut out = CupForm::zero(n);
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let cols = [i - 1, j - 1, k - 1];
                    let mut acc = 0i64;
                    for (t, c) in &self.coeffs {
                        let mut det = 0i64;
                        for (p, sign) in PERMUTATIONS_3.iter().zip([1i64, -1, -1, 1, 1, -1]) {
                            det += sign
                                * lift[t[0] - 1][cols[p[0]]]
                                * lift[t[1] - 1][cols[p[1]]]
                                * lift[t[2] - 1][cols[p[2]]];
                        }
                        acc += c * det;
                    }
                    if acc != 0 {
                        out.coeffs.insert([i, j, k], acc);
                    }
                }
            }
        }
        out
    }

    /// Mod-2 pullback along `matrix`: the form `(x,y,z) ↦ c(Mx, My, Mz)`.
    pub fn pullback_mod2(&self, matrix: &F2Matrix) -> BTreeSet<SubsetIndex> {
        pullback_triples(
            self.n,
            &self.mod2_triples(),
            &LinearMap::from_matrix(matrix),
        )
    }
}

impl fmt::Display for CupForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(t, v)| format!("c{}{}{}={}", t[0], t[1], t[2], v))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A linear map on `F₂ⁿ` stored as column masks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct LinearMap {
    n: usize,
    columns: Vec<u32>,
}

impl LinearMap {
    fn from_matrix(m: &F2Matrix) -> Self {
        assert_eq!(m.rows(), m.cols());
        LinearMap {
            n: m.rows(),
            columns: (0..m.cols())
                .map(|c| m.column(c).to_mask() as u32)
                .collect(),
        }
    }

    fn to_matrix(&self) -> F2Matrix {
        let cols: Vec<F2Vec> = self
            .columns
            .iter()
            .map(|&c| F2Vec::from_mask(self.n, c as u64))
            .collect();
        F2Matrix::from_columns(self.n, &cols)
    }

    #[inline]
    fn apply(&self, x: u32) -> u32 {
        let mut out = 0;
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out ^= self.columns[i];
            bits &= bits - 1;
        }
        out
    }

    fn entry(&self, row: usize, col: usize) -> bool {
        self.columns[col] >> row & 1 == 1
    }
}

/// Every invertible `n × n` matrix over F₂, in a fixed deterministic order.
fn general_linear_group(n: usize) -> Vec<LinearMap> {
    fn extend(n: usize, prefix: &mut Vec<u32>, span: &mut Vec<bool>, out: &mut Vec<LinearMap>) {
        if prefix.len() == n {
            out.push(LinearMap {
                n,
                columns: prefix.clone(),
            });
            return;
        }
        for v in 1..(1u32 << n) {
            if span[v as usize] {
                continue;
            }
            let added: Vec<usize> = (0..span.len())
                .filter(|&s| span[s] && !span[s ^ v as usize])
                .map(|s| s ^ v as usize)
                .collect();
            for &a in &added {
                span[a] = true;
            }
            prefix.push(v);
            extend(n, prefix, span, out);
            prefix.pop();
            for &a in &added {
                span[a] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut span = vec![false; 1 << n];
    span[0] = true;
    extend(n, &mut Vec::new(), &mut span, &mut out);
    out
}

/// An integer matrix of determinant `±1` reducing to `m` modulo 2.
pub fn unimodular_lift(m: &F2Matrix) -> Vec<Vec<i64>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a = m.clone();
    let mut lift: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    // Row-reduce `a` to the identity; each elementary step is undone on the
    // right of `lift`, so that `lift ≡ m` throughout.
    for c in 0..n {
        let pivot = (c..n).find(|&r| a.get(r, c)).expect("matrix is invertible");
        if pivot != c {
            for k in 0..n {
                let (x, y) = (a.get(pivot, k), a.get(c, k));
                a.set(pivot, k, y);
                a.set(c, k, x);
            }
            for row in lift.iter_mut() {
                row.swap(pivot, c);
            }
        }
        for r in 0..n {
            if r != c && a.get(r, c) {
                for k in 0..n {
                    let v = a.get(r, k) ^ a.get(c, k);
                    a.set(r, k, v);
                }
                // Undo `row r += row c` with `column c += column r`.
                for row in lift.iter_mut() {
                    row[c] += row[r];
                }
            }
        }
    }
    lift
}

fn pullback_triples(
    n: usize,
    triples: &BTreeSet<SubsetIndex>,
    m: &LinearMap,
) -> BTreeSet<SubsetIndex> {
    // c'(e_i, e_j, e_k) = Σ_T c_T · det M[T; {i,j,k}]  (mod 2; det = permanent)
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let cols = [i - 1, j - 1, k - 1];
                let mut acc = false;
                for t in triples {
                    let rows: Vec<usize> = t.elements().iter().map(|e| e - 1).collect();
                    let mut perm = false;
                    for p in PERMUTATIONS_3 {
                        perm ^= m.entry(rows[0], cols[p[0]])
                            && m.entry(rows[1], cols[p[1]])
                            && m.entry(rows[2], cols[p[2]]);
                    }
                    acc ^= perm;
                }
                if acc {
                    out.insert(SubsetIndex::from_elements(n, &[i, j, k]));
                }
            }
        }
    }
    out
}

const PERMUTATIONS_3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// The Rokhlin map `μ` on spin structures, indexed by subsets relative to the
/// base structure at `∅`, with its ANF coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RokhlinMap {
    values: BitTable,
    anf: BitTable,
}

impl RokhlinMap {
    pub fn from_values(values: BitTable) -> Self {
        let anf = moebius_transform(&values);
        RokhlinMap { values, anf }
    }

    pub fn from_anf(anf: BitTable) -> Self {
        let values = moebius_transform(&anf);
        RokhlinMap { values, anf }
    }

    pub fn from_fn(n: usize, f: impl Fn(SubsetIndex) -> bool) -> Self {
        Self::from_values(BitTable::from_fn(n, f))
    }

    /// ANF from a list of monomials, each given by its 1-based variables.
    pub fn from_monomials(n: usize, monomials: &[&[usize]]) -> Self {
        let mut anf = BitTable::zeros(n);
        for m in monomials {
            let s = SubsetIndex::from_elements(n, m);
            anf.set(s, !anf.get(s));
        }
        Self::from_anf(anf)
    }

    pub fn constant(n: usize, value: bool) -> Self {
        Self::from_fn(n, |_| value)
    }

    /// `1` at `∅` and `0` elsewhere.
    pub fn origin_indicator(n: usize) -> Self {
        Self::from_fn(n, |s| s.cardinality() == 0)
    }

    pub fn n(&self) -> usize {
        self.values.n()
    }

    pub fn value(&self, s: SubsetIndex) -> bool {
        self.values.get(s)
    }

    pub fn values(&self) -> &BitTable {
        &self.values
    }

    pub fn anf(&self) -> &BitTable {
        &self.anf
    }

    /// Degree of the ANF; the zero function has degree 0.
    pub fn degree(&self) -> usize {
        self.anf
            .support()
            .iter()
            .map(SubsetIndex::cardinality)
            .max()
            .unwrap_or(0)
    }

    /// Number of spin structures with invariant 1.
    pub fn weight(&self) -> usize {
        self.values.weight()
    }

    pub fn base_value(&self) -> bool {
        self.value(SubsetIndex::empty(self.n()))
    }

    pub fn add_constant(&self, c: bool) -> RokhlinMap {
        if c {
            Self::from_values(self.values.complement())
        } else {
            self.clone()
        }
    }

    /// `μ + μ(∅)` and the discarded constant `μ(∅)`.
    pub fn normalized(&self) -> (RokhlinMap, bool) {
        let c = self.base_value();
        (self.add_constant(c), c)
    }

    /// ANF rendered as a polynomial in `x1..xn`, e.g. `1 + x1 + x1x2x3`.
    pub fn anf_string(&self) -> String {
        let mut terms: Vec<SubsetIndex> = self.anf.support();
        terms.sort_by_key(|s| (s.cardinality(), s.elements()));
        if terms.is_empty() {
            return "0".to_string();
        }
        terms
            .iter()
            .map(|s| {
                if s.cardinality() == 0 {
                    "1".to_string()
                } else {
                    s.elements().iter().map(|e| format!("x{e}")).collect()
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for RokhlinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RokhlinMap(n={}, μ = {})", self.n(), self.anf_string())
    }
}

/// A cup form and Rokhlin map that passed [`validate_rokhlin`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedPair {
    cup: CupForm,
    mu: RokhlinMap,
}

impl ValidatedPair {
    pub fn cup(&self) -> &CupForm {
        &self.cup
    }

    pub fn mu(&self) -> &RokhlinMap {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.cup.n()
    }
}

/// Checks that `μ` is cubic with cubic part equal to the cup form mod 2.
pub fn validate_rokhlin(mu: &RokhlinMap, cup: &CupForm) -> Result<ValidatedPair, FormsError> {
    if mu.n() != cup.n() {
        return Err(FormsError::DimensionMismatch {
            left: mu.n(),
            right: cup.n(),
        });
    }
    if let Some(s) = mu.anf().support().into_iter().find(|s| s.cardinality() > 3) {
        return Err(FormsError::NotCubic {
            degree: s.cardinality(),
            monomial: s,
        });
    }
    let n = mu.n();
    for s in SubsetIndex::all(n).filter(|s| s.cardinality() == 3) {
        let e = s.elements();
        let c = cup.value(e[0], e[1], e[2]);
        let a = mu.anf().get(s);
        if a != (c.rem_euclid(2) == 1) {
            return Err(FormsError::CubicPartMismatch {
                triple: [e[0], e[1], e[2]],
                anf: a,
                cup: c,
            });
        }
    }
    Ok(ValidatedPair {
        cup: cup.clone(),
        mu: mu.clone(),
    })
}

/// Degree-3 ANF monomials of `μ`.
pub fn cubic_part(mu: &RokhlinMap) -> BTreeSet<SubsetIndex> {
    mu.anf()
        .support()
        .into_iter()
        .filter(|s| s.cardinality() == 3)
        .collect()
}

/// Mod-2 spectral flow between the Dirac operators at two spin structures:
/// the difference of their Rokhlin invariants.
pub fn spectral_flow_mod2(mu: &RokhlinMap, a: SubsetIndex, b: SubsetIndex) -> bool {
    mu.value(a) ^ mu.value(b)
}

/// Complete invariant of the KQ¹ class of the Dirac family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyInvariant {
    /// Odd triples of the cup form.
    pub free: BTreeSet<SubsetIndex>,
    /// One spectral-flow bit per subset `I` with `|I| ≡ 1, 2 (mod 8)`.
    pub torsion: Vec<(SubsetIndex, bool)>,
    /// Set for `n > 7`, where the torsion census includes sizes 9 and 10.
    pub experimental: bool,
}

pub fn family_invariant(pair: &ValidatedPair) -> FamilyInvariant {
    let mu = pair.mu();
    let n = mu.n();
    let base = SubsetIndex::empty(n);
    let torsion = SubsetIndex::all(n)
        .filter(|s| matches!(s.cardinality() % 8, 1 | 2))
        .map(|s| (s, spectral_flow_mod2(mu, s, base)))
        .collect();
    FamilyInvariant {
        free: pair.cup().mod2_triples(),
        torsion,
        experimental: n > 7,
    }
}

/// An affine identification `x ↦ Mx + t` together with a constant shift `c`,
/// witnessing `μ₁(Mx + t) + c = μ₀(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceWitness {
    pub matrix: F2Matrix,
    pub translation: SubsetIndex,
    pub constant: bool,
}

impl EquivalenceWitness {
    pub fn identity(n: usize) -> Self {
        EquivalenceWitness {
            matrix: F2Matrix::identity(n),
            translation: SubsetIndex::empty(n),
            constant: false,
        }
    }

    fn map(&self) -> LinearMap {
        LinearMap::from_matrix(&self.matrix)
    }

    /// `x ↦ Mx + t` on subset masks.
    pub fn apply_point(&self, x: SubsetIndex) -> SubsetIndex {
        SubsetIndex::new(x.n(), self.map().apply(x.mask()) ^ self.translation.mask())
    }

    /// `μ₁ ∘ Φ + c`; equals `μ₀` when `self` witnesses `μ₀ ~ μ₁`.
    pub fn pull_back(&self, mu1: &RokhlinMap) -> RokhlinMap {
        RokhlinMap::from_fn(mu1.n(), |x| mu1.value(self.apply_point(x)) ^ self.constant)
    }

    /// The `μ₁` for which `self` witnesses `μ₀ ~ μ₁`: `μ₁(y) = μ₀(Φ⁻¹ y) + c`.
    pub fn push_forward(&self, mu0: &RokhlinMap) -> RokhlinMap {
        let inverse = self.inverse();
        RokhlinMap::from_fn(mu0.n(), |y| {
            mu0.value(inverse.apply_point(y)) ^ self.constant
        })
    }

    /// Cup form `c₁` with `c₁(Mx, My, Mz) = c₀(x, y, z)` mod 2.
    pub fn push_forward_cup(&self, cup0: &CupForm) -> CupForm {
        let inv = self.matrix.inverse().expect("witness matrix is invertible");
        let out = cup0.pullback_integral(&unimodular_lift(&inv));
        debug_assert_eq!(out.mod2_triples(), cup0.pullback_mod2(&inv));
        out
    }

    /// `Φ⁻¹(y) = M⁻¹(y + t)`, with the constant negated (a no-op over F₂).
    pub fn inverse(&self) -> EquivalenceWitness {
        let inv = self.matrix.inverse().expect("witness matrix is invertible");
        let t = LinearMap::from_matrix(&inv).apply(self.translation.mask());
        EquivalenceWitness {
            matrix: inv,
            translation: SubsetIndex::new(self.translation.n(), t),
            constant: self.constant,
        }
    }

    /// `self ∘ other`: if `self` witnesses `μ₀ ~ μ₁` and `other` witnesses
    /// `μ₁ ~ μ₂`, the result witnesses `μ₀ ~ μ₂`.
    pub fn then(&self, other: &EquivalenceWitness) -> EquivalenceWitness {
        // μ₂(M'(Mx+t)+t') + c' + c = μ₀(x)
        let m = other.matrix.mul(&self.matrix);
        let t = other.map().apply(self.translation.mask()) ^ other.translation.mask();
        EquivalenceWitness {
            matrix: m,
            translation: SubsetIndex::new(self.translation.n(), t),
            constant: self.constant ^ other.constant,
        }
    }
}

fn check_integral_cups(cup0: &CupForm, cup1: &CupForm) -> bool {
    // For n ≤ 3 there is at most one coefficient, determined up to sign.
    if cup0.n() <= 3 {
        cup0.value(1, 2, 3).abs() == cup1.value(1, 2, 3).abs()
    } else {
        true
    }
}

/// Brute-force search for an affine equivalence between two inputs.
pub fn equivalent(
    mu0: &RokhlinMap,
    cup0: &CupForm,
    mu1: &RokhlinMap,
    cup1: &CupForm,
) -> Result<Option<EquivalenceWitness>, FormsError> {
    let n = mu0.n();
    for other in [cup0.n(), mu1.n(), cup1.n()] {
        if other != n {
            return Err(FormsError::DimensionMismatch {
                left: n,
                right: other,
            });
        }
    }
    if n > MAX_EQUIVALENCE_DIM {
        return Err(FormsError::DimensionTooLarge {
            n,
            max: MAX_EQUIVALENCE_DIM,
        });
    }
    if !check_integral_cups(cup0, cup1) {
        return Ok(None);
    }
    let target_cup = cup0.mod2_triples();
    let source_cup = cup1.mod2_triples();
    let t0 = mu0.values();
    let t1 = mu1.values();
    // Invariants that are cheap to compare first.
    let (w0, w1) = (t0.weight(), t1.weight());
    let size = 1usize << n;
    if w0 != w1 && w0 != size - w1 {
        return Ok(None);
    }
    for m in general_linear_group(n) {
        if pullback_triples(n, &source_cup, &m) != target_cup {
            continue;
        }
        let images: Vec<u32> = (0..size as u32).map(|x| m.apply(x)).collect();
        for t in 0..size as u32 {
            for c in [false, true] {
                let ok = images
                    .iter()
                    .enumerate()
                    .all(|(x, &mx)| t1.get_mask(mx ^ t) ^ c == t0.get_mask(x as u32));
                if ok {
                    return Ok(Some(EquivalenceWitness {
                        matrix: m.to_matrix(),
                        translation: SubsetIndex::new(n, t),
                        constant: c,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// One orbit found by [`classify_orbits`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Member with the smallest truth table.
    pub representative: RokhlinMap,
    /// Number of enumerated functions in the orbit.
    pub size: usize,
    /// `{#μ⁻¹(0), #μ⁻¹(1)}` as an unordered pair, smaller first.
    pub weights: (usize, usize),
}

/// Enumerates every `μ` whose cubic part is `cubic` and whose remaining ANF
/// terms have degree at most `max_lower_degree`, grouped into equivalence
/// orbits (affine changes of variable plus a constant).
pub fn classify_orbits(
    n: usize,
    cubic: &BTreeSet<SubsetIndex>,
    max_lower_degree: usize,
) -> Result<Vec<Orbit>, FormsError> {
    if n > MAX_CLASSIFY_DIM {
        return Err(FormsError::DimensionTooLarge {
            n,
            max: MAX_CLASSIFY_DIM,
        });
    }
    let size = 1usize << n;
    let free: Vec<SubsetIndex> = SubsetIndex::all(n)
        .filter(|s| s.cardinality() <= max_lower_degree.min(2))
        .collect();
    let mut base = BitTable::zeros(n);
    for s in cubic {
        assert_eq!(s.cardinality(), 3, "cubic part must consist of triples");
        base.set(*s, true);
    }
    let group: Vec<LinearMap> = general_linear_group(n)
        .into_iter()
        .filter(|m| &pullback_triples(n, cubic, m) == cubic)
        .collect();
    let candidates: Vec<u64> = (0..(1u64 << free.len()))
        .map(|choice| {
            let mut anf = base.clone();
            for (i, s) in free.iter().enumerate() {
                if choice >> i & 1 == 1 {
                    anf.set(*s, true);
                }
            }
            RokhlinMap::from_anf(anf).values().truth_table()
        })
        .collect();
    let full = if size == 64 { !0 } else { (1u64 << size) - 1 };
    let mut orbits: BTreeMap<u64, usize> = BTreeMap::new();
    for &tt in &candidates {
        let mut canonical = u64::MAX;
        for m in &group {
            let images: Vec<u32> = (0..size as u32).map(|x| m.apply(x)).collect();
            for t in 0..size as u32 {
                let mut moved = 0u64;
                for (x, &mx) in images.iter().enumerate() {
                    moved |= (tt >> (mx ^ t) & 1) << x;
                }
                canonical = canonical.min(moved).min(!moved & full);
            }
        }
        *orbits.entry(canonical).or_default() += 1;
    }
    Ok(orbits
        .into_iter()
        .map(|(tt, count)| {
            let ones = (tt & full).count_ones() as usize;
            let zeros = size - ones;
            Orbit {
                representative: RokhlinMap::from_values(BitTable::from_truth_table(n, tt)),
                size: count,
                weights: (zeros.min(ones), zeros.max(ones)),
            }
        })
        .collect())
}

/// A quadratic function `q` on `F₂^{2g}`, coordinates paired as
/// `(x₁,x₂), (x₃,x₄), …` for the standard intersection form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    g: usize,
    quadratic: BTreeSet<(usize, usize)>,
    linear: BTreeSet<usize>,
}

impl QuadraticForm {
    /// `quadratic` lists 1-based pairs `(i, j)` with `i < j`; `linear` lists
    /// 1-based coordinates with a linear term.
    pub fn new(g: usize, quadratic: &[(usize, usize)], linear: &[usize]) -> Self {
        let dim = 2 * g;
        let mut q = BTreeSet::new();
        for &(i, j) in quadratic {
            assert!(1 <= i && i < j && j <= dim, "bad quadratic term ({i},{j})");
            if !q.remove(&(i, j)) {
                q.insert((i, j));
            }
        }
        let mut l = BTreeSet::new();
        for &i in linear {
            assert!((1..=dim).contains(&i), "bad linear term {i}");
            if !l.remove(&i) {
                l.insert(i);
            }
        }
        QuadraticForm {
            g,
            quadratic: q,
            linear: l,
        }
    }

    /// The standard refinement `Σ x_{2k-1} x_{2k}`.
    pub fn standard(g: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..g).map(|k| (2 * k + 1, 2 * k + 2)).collect();
        Self::new(g, &pairs, &[])
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// Evaluates on a vector given as a mask (bit `i-1` ↔ coordinate `i`).
    pub fn eval(&self, x: u64) -> bool {
        let bit = |i: usize| x >> (i - 1) & 1 == 1;
        let quad = self
            .quadratic
            .iter()
            .filter(|(i, j)| bit(*i) && bit(*j))
            .count();
        let lin = self.linear.iter().filter(|i| bit(**i)).count();
        (quad + lin) % 2 == 1
    }

    /// Checks that the polar form `q(x+y) + q(x) + q(y)` is the standard pairing.
    pub fn check_refinement(&self) -> Result<(), FormsError> {
        // The polar form of Σ a_ij x_i x_j is Σ a_ij (x_i y_j + x_j y_i).
        for i in 1..=2 * self.g {
            for j in i + 1..=2 * self.g {
                let paired = i % 2 == 1 && j == i + 1;
                if self.quadratic.contains(&(i, j)) != paired {
                    return Err(FormsError::NotARefinement(i, j));
                }
            }
        }
        Ok(())
    }

    /// Arf invariant: `Σ_k q(e_{2k-1}) q(e_{2k})` in a symplectic basis.
    pub fn arf(&self) -> Result<bool, FormsError> {
        self.check_refinement()?;
        Ok((0..self.g)
            .filter(|k| self.linear.contains(&(2 * k + 1)) && self.linear.contains(&(2 * k + 2)))
            .count()
            % 2
            == 1)
    }
}
