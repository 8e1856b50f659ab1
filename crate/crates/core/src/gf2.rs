//! Dense linear algebra over GF(2).
//!
//! Bits are packed little-endian into `u64` words. Every public method speaks
//! in logical bit positions, so the packing never leaks out of this module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Vector with ones exactly at `indices`. Repeated indices cancel.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `len` bits of `value`, bit `i` of the integer at position `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    /// Bits packed into a single integer; `None` when longer than 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVector {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn ones(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Copy with one extra zero bit at the end.
    pub fn extended(&self, extra: usize) -> BitVector {
        let mut out = BitVector::zeros(self.len + extra);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out
    }

    /// Copy with position `i` deleted; higher bits shift down by one.
    pub fn without(&self, i: usize) -> BitVector {
        assert!(i < self.len);
        let mut out = BitVector::zeros(self.len - 1);
        for j in self.iter_ones() {
            match j.cmp(&i) {
                std::cmp::Ordering::Less => out.set(j, true),
                std::cmp::Ordering::Greater => out.set(j - 1, true),
                std::cmp::Ordering::Equal => {}
            }
        }
        out
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

impl Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let bits: Vec<u8> = (0..self.len).map(|i| u8::from(self.get(i))).collect();
        bits.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(serde::de::Error::custom(format!("bit value {bad} is not 0 or 1")));
        }
        Ok(BitVector::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()))
    }
}

/// A rectangular matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(BitMatrix { rows, cols })
    }

    /// Convenience constructor from 0/1 literals; panics on ragged input.
    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                BitVector::from_bools(&r.iter().map(|&b| b != 0).collect::<Vec<_>>())
            })
            .collect();
        BitMatrix { rows, cols }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "pushing row of length {} onto matrix with {} columns",
                row.len(),
                self.cols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(c) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// In-place Gauss-Jordan elimination. Returns pivot columns in increasing order.
    fn eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows.len() {
                break;
            }
            let Some(p) = (next..self.rows.len()).find(|&r| self.rows[r].get(c)) else {
                continue;
            };
            self.rows.swap(next, p);
            let pivot_row = self.rows[next].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    /// Basis of the right null space `{x : self · x = 0}`, one row per basis
    /// vector, in reduced row-echelon form.
    pub fn null_space(&self) -> BitMatrix {
        let (reduced, pivots) = rref(self);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (row, &p) in pivots.iter().enumerate() {
                if reduced.rows[row].get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        let m = BitMatrix {
            rows: basis,
            cols: self.cols,
        };
        if m.rows.is_empty() {
            m
        } else {
            rref(&m).0
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form. Zero rows are kept at the bottom so the shape is
/// unchanged.
pub fn rref(m: &BitMatrix) -> (BitMatrix, Vec<usize>) {
    let mut out = m.clone();
    let pivots = out.eliminate();
    (out, pivots)
}

pub fn rank(m: &BitMatrix) -> usize {
    rref(m).1.len()
}

/// Solves `a · x = b`. Free variables are fixed to zero; `Ok(None)` means the
/// system is inconsistent.
pub fn solve(a: &BitMatrix, b: &BitVector) -> Result<Option<BitVector>> {
    if a.num_rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            a.num_rows(),
            b.len()
        )));
    }
    // Augment with b as the last column.
    let cols = a.num_cols();
    let rows = a
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut ext = r.extended(1);
            ext.set(cols, b.get(i));
            ext
        })
        .collect();
    let aug = BitMatrix { rows, cols: cols + 1 };
    let (reduced, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = BitVector::zeros(cols);
    for (row, &p) in pivots.iter().enumerate() {
        if reduced.rows[row].get(cols) {
            x.set(p, true);
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_two_step_elimination() {
        let m = BitMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let (r, p) = rref(&m);
        assert_eq!(r, BitMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = BitMatrix::identity(5);
        let (r, p) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn rref_duplicate_rows_cancel() {
        let m = BitMatrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        let (r, p) = rref(&m);
        assert_eq!(r, BitMatrix::from_dense(&[vec![1, 1], vec![0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn solve_cases() {
        let id = BitMatrix::identity(3);
        let b = BitVector::from_indices(3, &[0, 2]);
        assert_eq!(solve(&id, &b).unwrap(), Some(b));

        let a = BitMatrix::from_dense(&[vec![1, 1]]);
        let x = solve(&a, &BitVector::from_indices(1, &[0])).unwrap().unwrap();
        assert_eq!(x, BitVector::from_indices(2, &[0]));

        let a = BitMatrix::from_dense(&[vec![1, 0], vec![1, 0]]);
        assert_eq!(solve(&a, &BitVector::from_indices(2, &[0])).unwrap(), None);

        assert!(matches!(
            solve(&a, &BitVector::zeros(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(rank(&BitMatrix::identity(7)), 7);
        assert_eq!(rank(&BitMatrix::zeros(3, 4)), 0);
        let m = BitMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn packing_crosses_word_boundary() {
        let mut v = BitVector::zeros(130);
        v.set(63, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.ones(), vec![63, 64, 129]);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.without(64).ones(), vec![63, 128]);
        assert_eq!(v.extended(2).len(), 132);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = BitMatrix::from_dense(&[vec![1, 1, 1, 0], vec![0, 1, 1, 1]]);
        let ns = m.null_space();
        assert_eq!(ns.num_rows(), 2);
        for v in ns.rows() {
            assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    fn matrix_strategy() -> impl Strategy<Value = BitMatrix> {
        (1usize..12, 1usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
                .prop_map(|rows| BitMatrix::from_dense(&rows))
        })
    }

    proptest! {
        #[test]
        fn rank_matches_rref_rank(m in matrix_strategy()) {
            let (r, _) = rref(&m);
            prop_assert_eq!(rank(&m), rank(&r));
            prop_assert!(rank(&m) <= m.num_rows().min(m.num_cols()));
        }

        #[test]
        fn rref_is_idempotent(m in matrix_strategy()) {
            let (r, p) = rref(&m);
            let (rr, pp) = rref(&r);
            prop_assert_eq!(r, rr);
            prop_assert_eq!(p, pp);
        }

        #[test]
        fn rref_preserves_row_space(m in matrix_strategy()) {
            let (r, _) = rref(&m);
            let mut stacked = m.clone();
            for row in r.rows() {
                stacked.push_row(row.clone()).unwrap();
            }
            prop_assert_eq!(rank(&stacked), rank(&m));
        }

        #[test]
        fn solve_satisfies_system(m in matrix_strategy(), seed in any::<u64>()) {
            let mut b = BitVector::zeros(m.num_rows());
            for i in 0..m.num_rows() {
                if (seed >> (i % 64)) & 1 == 1 {
                    b.set(i, true);
                }
            }
            if let Some(x) = solve(&m, &b).unwrap() {
                prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
            } else {
                // Inconsistent: b is outside the column space.
                let cols = m.transpose();
                let mut aug = cols.clone();
                aug.push_row(b.clone()).unwrap();
                prop_assert_eq!(rank(&aug), rank(&cols) + 1);
            }
        }

        #[test]
        fn self_xor_is_zero(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let v = BitVector::from_bools(&bits);
            prop_assert!(v.xor(&v).is_zero());
            prop_assert_eq!(v.xor(&v).len(), v.len());
        }
    }
}
