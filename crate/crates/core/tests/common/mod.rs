#![allow(dead_code)]

use parity_core::code::lhz_layout;
use parity_core::faults::CodeBlock;
use parity_core::gates::BlockPair;
use parity_core::{ClassicalParityCode, ParityLabel};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn l(ix: &[usize]) -> ParityLabel {
    ParityLabel::from_indices(ix)
}

/// Three qubits, one stabilizer, labels {0}, {1}, {0,1}.
pub fn three_qubit_code() -> ClassicalParityCode {
    ClassicalParityCode::new(3, vec![vec![0, 1, 2]])
        .unwrap()
        .with_labels(vec![l(&[0]), l(&[1]), l(&[0, 1])])
        .unwrap()
}

/// LHZ k = 3 with `c` qubits carrying {0,1}: the original plus `c - 1`
/// copies, each tied to it by a two-body stabilizer.
pub fn control_block(c: usize) -> ClassicalParityCode {
    let base = lhz_layout(3).unwrap();
    let label = l(&[0, 1]);
    let src = base.qubits_with_label(&label)[0];
    let n = base.n();
    let mut stabs = base.stabilizers().to_vec();
    let mut labels = base.labels().unwrap().to_vec();
    for j in 0..c - 1 {
        stabs.push(vec![src, n + j]);
        labels.push(label.clone());
    }
    ClassicalParityCode::new(n + c - 1, stabs).unwrap().with_labels(labels).unwrap()
}

pub fn pcnot_pair(c: usize, d: usize) -> BlockPair {
    BlockPair::new(control_block(c), ClassicalParityCode::repetition(d)).unwrap()
}

pub fn fault_blocks(pair: &BlockPair) -> Vec<CodeBlock> {
    vec![
        CodeBlock {
            code: pair.control.clone(),
            offset: 0,
        },
        CodeBlock {
            code: pair.target.clone(),
            offset: pair.target_offset(),
        },
    ]
}

/// A random nonempty set of partners whose labels XOR to a nonempty label.
pub fn random_partners<R: Rng>(code: &ClassicalParityCode, rng: &mut R) -> (ParityLabel, Vec<usize>) {
    let labels = code.labels().unwrap();
    loop {
        let size = rng.gen_range(1..=code.n().min(4));
        let mut qs: Vec<usize> = (0..code.n()).collect();
        qs.shuffle(rng);
        qs.truncate(size);
        qs.sort_unstable();
        let label = qs
            .iter()
            .fold(ParityLabel::empty(), |acc, &q| acc.symmetric_difference(&labels[q]));
        if !label.is_empty() {
            return (label, qs);
        }
    }
}
