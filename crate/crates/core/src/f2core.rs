//! Dense linear algebra over the two-element field, plus subset indexing and
//! the Möbius (algebraic normal form) transform on truth tables.
//!
//! Everything here is exact: vectors are packed into `u64` words and all
//! arithmetic is XOR/AND.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Hard cap on the ambient dimension `n` of subset tables.
pub const MAX_DIM: usize = 16;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector in `F₂^len`, bit-packed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector of length `len` from the low bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "from_mask supports at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD { !0 } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &F2Vec) -> F2Vec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + t)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Returns the low word; only meaningful for `len <= 64`.
    pub fn to_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vec[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// A dense `rows × cols` matrix over F₂, stored row by row.
///
/// The column `j` is the image of the `j`-th basis vector, so `m.mul_vec(v)`
/// is the usual matrix-vector product.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[F2Vec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Parses rows of `0`/`1` characters; whitespace inside a row is ignored.
    pub fn from_strs(rows: &[&str]) -> Self {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c == '1')
                    .collect()
            })
            .collect();
        let cols = parsed.first().map_or(0, Vec::len);
        F2Matrix::from_rows(cols, parsed.iter().map(|r| F2Vec::from_bits(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &F2Vec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> F2Vec {
        let mut v = F2Vec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vec::is_zero)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = F2Vec::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let acc = &mut out.data[r];
            for k in row.iter_ones() {
                acc.xor_assign(&other.data[k]);
            }
        }
        out
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
        out
    }

    pub fn pow(&self, k: u32) -> F2Matrix {
        assert_eq!(self.rows, self.cols, "pow needs a square matrix");
        let mut out = F2Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> F2Matrix {
        let mut out = F2Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && rank(self) == self.rows
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv: Vec<F2Vec> = (0..n).map(|i| F2Vec::unit(n, i)).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r].get(col))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r].get(col) {
                    let (pa, pi) = (a[col].clone(), inv[col].clone());
                    a[r].xor_assign(&pa);
                    inv[r].xor_assign(&pi);
                }
            }
        }
        Some(F2Matrix::from_rows(n, inv))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            for c in 0..self.cols {
                write!(f, "{}", u8::from(row.get(c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An incrementally built basis in reduced echelon form.
///
/// Every stored row remembers which inserted vectors it is a combination of,
/// so membership queries can also return coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<(usize, F2Vec, F2Vec)>,
    inserted: usize,
    capacity: usize,
}

impl Echelon {
    /// `capacity` bounds how many vectors will be inserted (the width of the
    /// coordinate vectors returned by [`Echelon::coordinates`]).
    pub fn new(len: usize, capacity: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            inserted: 0,
            capacity,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, v: &F2Vec) -> (F2Vec, F2Vec) {
        let mut residual = v.clone();
        let mut combo = F2Vec::zeros(self.capacity);
        for (pivot, row, row_combo) in &self.rows {
            if residual.get(*pivot) {
                residual.xor_assign(row);
                combo.xor_assign(row_combo);
            }
        }
        (residual, combo)
    }

    pub fn reduce(&self, v: &F2Vec) -> F2Vec {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns `true` when it was independent of the current span.
    /// Dependent vectors still consume an insertion slot.
    pub fn insert(&mut self, v: &F2Vec) -> bool {
        assert_eq!(v.len(), self.len, "length mismatch");
        assert!(self.inserted < self.capacity, "echelon capacity exceeded");
        let slot = self.inserted;
        self.inserted += 1;
        let (residual, mut combo) = self.reduce_tracked(v);
        let Some(pivot) = residual.first_one() else {
            return false;
        };
        combo.flip(slot);
        for (_, row, row_combo) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&residual);
                row_combo.xor_assign(&combo);
            }
        }
        self.rows.push((pivot, residual, combo));
        true
    }

    /// Coefficients expressing `v` over the inserted vectors, if `v` is in the span.
    pub fn coordinates(&self, v: &F2Vec) -> Option<F2Vec> {
        let (residual, combo) = self.reduce_tracked(v);
        residual.is_zero().then_some(combo)
    }
}

/// Gaussian-elimination rank over F₂.
pub fn rank(m: &F2Matrix) -> usize {
    let mut e = Echelon::new(m.cols, m.rows);
    m.data.iter().filter(|r| e.insert(r)).count()
}

/// Rank of a family of vectors of a common length.
pub fn rank_of(len: usize, vectors: &[F2Vec]) -> usize {
    let mut e = Echelon::new(len, vectors.len());
    vectors.iter().filter(|v| e.insert(v)).count()
}

/// A basis of `{v : Mv = 0}`; its size is the nullity.
pub fn kernel_basis(m: &F2Matrix) -> Vec<F2Vec> {
    // Reduce the rows to RREF and read off free columns.
    let mut rows = m.data.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].get(col) {
                let pr = rows[r].clone();
                rows[i].xor_assign(&pr);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = F2Vec::unit(m.cols, free);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

/// Coset representatives (drawn from the standard basis) completing the span
/// of `subspace` to all of `F₂^space_dim`.
pub fn quotient_basis(space_dim: usize, subspace: &[F2Vec]) -> Vec<F2Vec> {
    let units: Vec<F2Vec> = (0..space_dim).map(|i| F2Vec::unit(space_dim, i)).collect();
    extend_to_basis(space_dim, subspace, &units)
}

/// Greedily picks vectors of `candidates` that are independent modulo the
/// span of `base` (and of each other).
pub fn extend_to_basis(len: usize, base: &[F2Vec], candidates: &[F2Vec]) -> Vec<F2Vec> {
    let mut e = Echelon::new(len, base.len() + candidates.len());
    for b in base {
        e.insert(b);
    }
    candidates.iter().filter(|c| e.insert(c)).cloned().collect()
}

/// A subset of `{1..n}` encoded as an `n`-bit mask (bit `i-1` ↔ element `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetIndex {
    n: u8,
    mask: u32,
}

impl SubsetIndex {
    pub fn new(n: usize, mask: u32) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds cap {MAX_DIM}");
        assert!(
            n == 32 || mask >> n == 0,
            "mask {mask:#b} has bits outside 1..={n}"
        );
        SubsetIndex { n: n as u8, mask }
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, 0)
    }

    pub fn full(n: usize) -> Self {
        Self::new(n, ((1u64 << n) - 1) as u32)
    }

    /// Builds from 1-based element indices.
    pub fn from_elements(n: usize, elements: &[usize]) -> Self {
        let mut mask = 0u32;
        for &e in elements {
            assert!((1..=n).contains(&e), "element {e} outside 1..={n}");
            mask |= 1 << (e - 1);
        }
        Self::new(n, mask)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn cardinality(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, element: usize) -> bool {
        (1..=self.n()).contains(&element) && self.mask >> (element - 1) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &SubsetIndex) -> bool {
        self.mask & !other.mask == 0
    }

    /// 1-based elements in increasing order.
    pub fn elements(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&e| self.contains(e)).collect()
    }

    /// All `2ⁿ` subsets in mask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetIndex> {
        assert!(n <= MAX_DIM);
        (0..(1u32 << n)).map(move |m| SubsetIndex::new(n, m))
    }

    /// Digits of the included indices in increasing order; `""` for ∅.
    /// Unambiguous for `n ≤ 9`.
    pub fn to_digits(&self) -> String {
        self.elements().iter().map(|e| e.to_string()).collect()
    }

    pub fn from_digits(n: usize, s: &str) -> Option<Self> {
        let mut elements = Vec::new();
        for ch in s.chars() {
            let e = ch.to_digit(10)? as usize;
            if e == 0 || e > n || elements.last().is_some_and(|&l| l >= e) {
                return None;
            }
            elements.push(e);
        }
        Some(Self::from_elements(n, &elements))
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elements = self.elements();
        if elements.is_empty() {
            write!(f, "∅")
        } else {
            let parts: Vec<String> = elements.iter().map(usize::to_string).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

/// A Boolean function on subsets of `{1..n}`: one bit per [`SubsetIndex`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitTable {
    n: usize,
    bits: F2Vec,
}

impl BitTable {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds cap {MAX_DIM}");
        BitTable {
            n,
            bits: F2Vec::zeros(1 << n),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(SubsetIndex) -> bool) -> Self {
        let mut t = Self::zeros(n);
        for s in SubsetIndex::all(n) {
            t.set(s, f(s));
        }
        t
    }

    /// Table whose entry at mask `m` is bit `m` of `truth`; `n ≤ 6`.
    pub fn from_truth_table(n: usize, truth: u64) -> Self {
        assert!(n <= 6, "truth-table encoding needs n <= 6");
        BitTable {
            n,
            bits: F2Vec::from_mask(1 << n, truth),
        }
    }

    /// Inverse of [`BitTable::from_truth_table`]; `n ≤ 6`.
    pub fn truth_table(&self) -> u64 {
        assert!(self.n <= 6, "truth-table encoding needs n <= 6");
        self.bits.to_mask()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: SubsetIndex) -> bool {
        debug_assert_eq!(s.n(), self.n);
        self.bits.get(s.mask() as usize)
    }

    pub fn get_mask(&self, mask: u32) -> bool {
        self.bits.get(mask as usize)
    }

    pub fn set(&mut self, s: SubsetIndex, value: bool) {
        debug_assert_eq!(s.n(), self.n);
        self.bits.set(s.mask() as usize, value);
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn bits(&self) -> &F2Vec {
        &self.bits
    }

    /// Subsets carrying a 1, in mask order.
    pub fn support(&self) -> Vec<SubsetIndex> {
        self.bits
            .iter_ones()
            .map(|m| SubsetIndex::new(self.n, m as u32))
            .collect()
    }

    pub fn complement(&self) -> BitTable {
        BitTable::from_fn(self.n, |s| !self.get(s))
    }
}

impl fmt::Debug for BitTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitTable(n={}, {:?})", self.n, self.bits)
    }
}

/// Möbius transform: values `f` ↦ ANF coefficients `a_S` with
/// `f(x) = Σ_{S ⊆ supp(x)} a_S (mod 2)`. The transform is an involution.
pub fn moebius_transform(values: &BitTable) -> BitTable {
    let n = values.n;
    let mut a: Vec<bool> = values.bits.to_bits();
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..a.len() {
            if m & bit != 0 {
                a[m] ^= a[m ^ bit];
            }
        }
    }
    BitTable {
        n,
        bits: F2Vec::from_bits(&a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&F2Matrix::identity(2)), 2);
        assert_eq!(rank(&F2Matrix::zeros(3, 5)), 0);
        assert_eq!(rank(&F2Matrix::from_strs(&["111"])), 1);
        assert_eq!(rank(&F2Matrix::from_strs(&["110", "011", "101"])), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&F2Matrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&F2Matrix::zeros(2, 2)).len(), 2);
        let m = F2Matrix::from_strs(&["111"]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        // Enumerate all 8 vectors: the kernel is exactly the 4 even-weight ones.
        let mut in_kernel = 0;
        for mask in 0..8u64 {
            let v = F2Vec::from_mask(3, mask);
            if m.mul_vec(&v).is_zero() {
                in_kernel += 1;
            }
        }
        assert_eq!(in_kernel, 1 << k.len());
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
        assert_eq!(rank_of(3, &k), 2);
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_basis(3, &[]).len(), 3);
        let full: Vec<F2Vec> = (0..3).map(|i| F2Vec::unit(3, i)).collect();
        assert!(quotient_basis(3, &full).is_empty());
        let sub = vec![F2Vec::from_bits(&[true, true])];
        let q = quotient_basis(2, &sub);
        assert_eq!(q.len(), 1);
        // span{(1,1)} = {00, 11}; the representative must be 10 or 01.
        assert_ne!(q[0], F2Vec::zeros(2));
        assert_ne!(q[0], sub[0]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = F2Matrix::from_strs(&["110", "011", "001"]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), F2Matrix::identity(3));
        assert!(F2Matrix::from_strs(&["11", "11"]).inverse().is_none());
    }

    #[test]
    fn echelon_coordinates() {
        let a = F2Vec::from_bits(&[true, true, false]);
        let b = F2Vec::from_bits(&[false, true, true]);
        let mut e = Echelon::new(3, 2);
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        let c = e.coordinates(&a.xor(&b)).unwrap();
        assert_eq!(c.to_bits(), vec![true, true]);
        assert!(e.coordinates(&F2Vec::unit(3, 0)).is_none());
    }

    #[test]
    fn moebius_origin_indicator() {
        let f = BitTable::from_fn(3, |s| s.cardinality() == 0);
        let a = moebius_transform(&f);
        assert_eq!(a.weight(), 8);
    }

    #[test]
    fn moebius_small_cases() {
        assert_eq!(moebius_transform(&BitTable::zeros(3)).weight(), 0);
        let f = BitTable::from_fn(2, |s| s.mask() == 0b11);
        let a = moebius_transform(&f);
        assert_eq!(a.support(), vec![SubsetIndex::full(2)]);
    }

    #[test]
    fn moebius_is_involution_exhaustive() {
        for n in 0..=3usize {
            for truth in 0..(1u64 << (1 << n)) {
                let t = BitTable::from_truth_table(n, truth);
                assert_eq!(moebius_transform(&moebius_transform(&t)), t);
            }
        }
    }

    #[test]
    fn subset_digits() {
        let s = SubsetIndex::from_digits(3, "13").unwrap();
        assert_eq!(s.elements(), vec![1, 3]);
        assert_eq!(s.to_digits(), "13");
        assert_eq!(
            SubsetIndex::from_digits(3, "").unwrap(),
            SubsetIndex::empty(3)
        );
        assert!(SubsetIndex::from_digits(3, "31").is_none());
        assert!(SubsetIndex::from_digits(3, "4").is_none());
        assert!(SubsetIndex::from_digits(3, "11").is_none());
    }
}
