//! Exhaustive minimum-weight X-error decoding for classical parity codes.

use crate::code::{ClassicalParityCode, LabelAssignment};
use crate::error::{Error, Result};
use crate::gf2::{solve, BitMatrix, BitVector};

/// Largest code the lookup table is built for.
pub const DECODER_MAX_QUBITS: usize = 20;

/// Syndrome → lowest-weight X correction, ties broken by the
/// lexicographically first sorted qubit list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoderTable {
    n: usize,
    /// Syndrome contribution of an X on each qubit.
    columns: Vec<u64>,
    corrections: Vec<u64>,
}

impl DecoderTable {
    pub fn build(code: &ClassicalParityCode) -> Result<Self> {
        let n = code.n();
        if n > DECODER_MAX_QUBITS {
            return Err(Error::GuardExceeded(format!(
                "decoder table needs n <= {DECODER_MAX_QUBITS}, got {n}"
            )));
        }
        let m = code.stabilizers().len();
        let mut columns = vec![0u64; n];
        for (j, s) in code.stabilizers().iter().enumerate() {
            for &q in s {
                columns[q] |= 1 << j;
            }
        }
        let size = 1usize << m;
        let mut corrections = vec![u64::MAX; size];
        let mut filled = 0;
        'weights: for w in 0..=n {
            let mut idx: Vec<usize> = (0..w).collect();
            loop {
                let (mut syn, mut mask) = (0u64, 0u64);
                for &q in &idx {
                    syn ^= columns[q];
                    mask |= 1 << q;
                }
                if corrections[syn as usize] == u64::MAX {
                    corrections[syn as usize] = mask;
                    filled += 1;
                    if filled == size {
                        break 'weights;
                    }
                }
                // Next combination in lexicographic order.
                let Some(i) = (0..w).rev().find(|&i| idx[i] < n - w + i) else {
                    break;
                };
                idx[i] += 1;
                for j in i + 1..w {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        debug_assert_eq!(filled, size, "full-rank stabilizers reach every syndrome");
        Ok(DecoderTable {
            n,
            columns,
            corrections,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_syndromes(&self) -> usize {
        self.corrections.len()
    }

    /// Bit `j` is the parity of stabilizer `j` under the X pattern `x`.
    pub fn syndrome(&self, x: u64) -> u64 {
        let mut s = 0;
        let mut rest = x;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            s ^= self.columns[q];
            rest &= rest - 1;
        }
        s
    }

    pub fn correction(&self, syndrome: u64) -> u64 {
        self.corrections[syndrome as usize]
    }

    /// `x` followed by its correction; always has a trivial syndrome.
    pub fn decode(&self, x: u64) -> u64 {
        x ^ self.correction(self.syndrome(x))
    }
}

pub fn build_decoder_table(code: &ClassicalParityCode) -> Result<DecoderTable> {
    DecoderTable::build(code)
}

/// Which logicals a syndrome-free X pattern flips.
#[derive(Clone, Debug)]
pub struct LogicalReadout {
    n: usize,
    /// Base qubit of each logical when every logical has one.
    bases: Option<Vec<usize>>,
    labels: BitMatrix,
}

impl LogicalReadout {
    pub fn new(assignment: &LabelAssignment) -> Self {
        let bases: Option<Vec<usize>> = (0..assignment.k()).map(|i| assignment.base_qubit(i)).collect();
        LogicalReadout {
            n: assignment.n(),
            bases,
            labels: assignment.label_matrix(),
        }
    }

    /// Bit `i` set when logical `i` is flipped. `x` must be a codeword.
    pub fn flips(&self, x: u64) -> u64 {
        if let Some(bases) = &self.bases {
            return bases
                .iter()
                .enumerate()
                .filter(|(_, &q)| x >> q & 1 == 1)
                .fold(0, |acc, (i, _)| acc | 1 << i);
        }
        let e = BitVector::from_u64(self.n, x);
        let delta = solve(&self.labels, &e)
            .expect("label matrix has n rows")
            .expect("syndrome-free patterns are codewords");
        delta.to_u64().expect("k <= 64")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::lhz_layout;

    #[test]
    fn repetition_three_is_majority_vote() {
        let t = DecoderTable::build(&ClassicalParityCode::repetition(3)).unwrap();
        assert_eq!(t.num_syndromes(), 4);
        for q in 0..3 {
            assert_eq!(t.decode(1 << q), 0);
        }
        assert_eq!(t.decode(0b011), 0b111);
        assert_eq!(t.decode(0b101), 0b111);
    }

    #[test]
    fn lhz3_corrects_every_single_flip() {
        let code = lhz_layout(3).unwrap();
        let t = DecoderTable::build(&code).unwrap();
        for q in 0..code.n() {
            assert_eq!(t.decode(1 << q), 0, "qubit {q}");
        }
    }

    #[test]
    fn ties_pick_lexicographically_first() {
        let t = DecoderTable::build(&ClassicalParityCode::repetition(2)).unwrap();
        assert_eq!(t.correction(1), 0b01);
        assert_eq!(t.decode(0b10), 0b11);
        let t4 = DecoderTable::build(&ClassicalParityCode::repetition(4)).unwrap();
        // X0X1 and X2X3 share a syndrome; {0,1} comes first.
        assert_eq!(t4.correction(t4.syndrome(0b1100)), 0b0011);
    }

    #[test]
    fn readout_with_and_without_base_qubits() {
        let code = lhz_layout(3).unwrap();
        let r = LogicalReadout::new(&code.assignment().unwrap());
        // X̄ on logical 0 flips qubits whose label contains 0: 0, 3, 5.
        assert_eq!(r.flips(0b101001), 0b001);

        let l = crate::ParityLabel::from_indices;
        let a = LabelAssignment::from_labels(3, vec![l(&[0, 1]), l(&[1, 2]), l(&[0, 1, 2])]);
        assert_eq!(LogicalReadout::new(&a).flips(0b101), 0b001);
        assert_eq!(LogicalReadout::new(&a).flips(0b010), 0b011);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            DecoderTable::build(&ClassicalParityCode::repetition(21)),
            Err(Error::GuardExceeded(_))
        ));
    }
}
