//! Measurement-based code deformation: adding and removing parity qubits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::code::{ClassicalParityCode, ParityLabel};
use crate::error::{Error, Result};
use crate::flow::conjugate_forward_gate;
use crate::gf2::BitVector;
use crate::pauli::{Pauli, PauliString, Sign};
use crate::sim::{Measurement, Outcomes, Simulator};
use crate::trace::{DeformationKind, DeformationStep};

/// Pending Pauli corrections. The physical state equals the ideal state
/// with this Pauli applied; applying it again restores the ideal state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliFrame {
    x: BitVector,
    z: BitVector,
}

impl PauliFrame {
    pub fn new(n: usize) -> Self {
        PauliFrame {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn is_clear(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    /// Composes `p` into the frame; signs are irrelevant.
    pub fn record(&mut self, p: &PauliString) {
        self.x.xor_assign(p.x_bits());
        self.z.xor_assign(p.z_bits());
    }

    pub fn compose(&mut self, other: &PauliFrame) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn to_pauli(&self) -> PauliString {
        PauliString::from_parts(self.x.clone(), self.z.clone(), Sign::Plus).expect("equal widths")
    }

    /// Whether the frame flips the outcome of measuring `p`.
    pub fn flips(&self, p: &PauliString) -> bool {
        self.x.dot(p.z_bits()) != self.z.dot(p.x_bits())
    }

    /// Moves the frame through a Clifford gate.
    pub fn conjugate(&mut self, gate: &Gate) -> Result<()> {
        let mut p = self.to_pauli();
        conjugate_forward_gate(&mut p, gate)?;
        self.x = p.x_bits().clone();
        self.z = p.z_bits().clone();
        Ok(())
    }

    /// Frame restricted to one qubit, cleared from `self`.
    fn take_qubit(&mut self, q: usize) -> PauliString {
        let n = self.num_qubits();
        let mut p = PauliString::identity(n);
        p.set_pauli(q, Pauli::from_bits(self.x.get(q), self.z.get(q)));
        self.x.set(q, false);
        self.z.set(q, false);
        p
    }

    fn push_qubit(&mut self) {
        self.x = self.x.extended(1);
        self.z = self.z.extended(1);
    }

    fn remove_qubit(&mut self, q: usize) {
        self.x = self.x.without(q);
        self.z = self.z.without(q);
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionMode {
    #[default]
    Physical,
    Frame,
}

/// A simulator together with its Pauli frame and correction policy.
#[derive(Clone, Debug)]
pub struct Register<S> {
    pub sim: S,
    pub frame: PauliFrame,
    pub mode: CorrectionMode,
}

impl<S: Simulator> Register<S> {
    pub fn new(sim: S, mode: CorrectionMode) -> Self {
        let frame = PauliFrame::new(sim.num_qubits());
        Register { sim, frame, mode }
    }

    pub fn num_qubits(&self) -> usize {
        self.sim.num_qubits()
    }

    /// Clifford gates move the frame along; other gates first flush the
    /// frame on the qubits they touch.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if gate.is_clifford_unitary() {
            self.frame.conjugate(gate)?;
        } else {
            for q in gate.qubits() {
                let p = self.frame.take_qubit(q);
                self.apply_pauli(&p)?;
            }
        }
        self.sim.apply_gate(gate)
    }

    fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        for q in p.support() {
            let (x, z) = (p.x_bits().get(q), p.z_bits().get(q));
            if z {
                self.sim.apply_gate(&Gate::z(q))?;
            }
            if x {
                self.sim.apply_gate(&Gate::x(q))?;
            }
        }
        Ok(())
    }

    /// Applies `p` physically or records it, per the correction mode.
    /// Returns whether it went into the frame.
    pub fn correct(&mut self, p: &PauliString) -> Result<bool> {
        match self.mode {
            CorrectionMode::Physical => {
                self.apply_pauli(p)?;
                Ok(false)
            }
            CorrectionMode::Frame => {
                self.frame.record(p);
                Ok(true)
            }
        }
    }

    /// Applies and clears the whole frame.
    pub fn flush_frame(&mut self) -> Result<()> {
        let p = self.frame.to_pauli();
        self.frame = PauliFrame::new(self.num_qubits());
        self.apply_pauli(&p)
    }

    /// Measures `p`; returns the physical measurement and the frame-adjusted outcome.
    pub fn measure(&mut self, p: &PauliString, outcomes: &mut Outcomes) -> Result<(Measurement, Sign)> {
        let m = outcomes.measure(&mut self.sim, p)?;
        let effective = if self.frame.flips(p) {
            m.outcome.flipped()
        } else {
            m.outcome
        };
        Ok((m, effective))
    }

    /// Frame-adjusted eigenvalue of `p`, if determined.
    pub fn peek(&self, p: &PauliString) -> Result<Option<Sign>> {
        let s = self.sim.peek(p)?;
        Ok(s.map(|s| if self.frame.flips(p) { s.flipped() } else { s }))
    }

    pub fn append_qubit(&mut self) -> Result<()> {
        self.sim.append_qubit()?;
        self.frame.push_qubit();
        Ok(())
    }

    /// Discards a qubit physically in `|0⟩`; its frame entry is dropped.
    pub fn discard_qubit(&mut self, q: usize) -> Result<()> {
        self.sim.discard_qubit(q)?;
        self.frame.remove_qubit(q);
        Ok(())
    }

    /// Stabilizers of `code` that do not read `+1` after frame adjustment.
    pub fn violated(&self, code: &ClassicalParityCode) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for (i, s) in code.stabilizers().iter().enumerate() {
            let p = PauliString::z_on(code.n(), s);
            if self.peek(&p)? != Some(Sign::Plus) {
                bad.push(i);
            }
        }
        Ok(bad)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSpaceCheck {
    pub pass: bool,
    pub violated: Vec<usize>,
}

/// Checks every code stabilizer without disturbing the state.
pub fn in_code_space<S: Simulator + ?Sized>(sim: &S, code: &ClassicalParityCode) -> Result<CodeSpaceCheck> {
    if sim.num_qubits() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "register has {} qubits, code {}",
            sim.num_qubits(),
            code.n()
        )));
    }
    let mut violated = Vec::new();
    for (i, s) in code.stabilizers().iter().enumerate() {
        if sim.peek(&PauliString::z_on(code.n(), s))? != Some(Sign::Plus) {
            violated.push(i);
        }
    }
    Ok(CodeSpaceCheck {
        pass: violated.is_empty(),
        violated,
    })
}

fn check_register<S: Simulator>(reg: &Register<S>, code: &ClassicalParityCode) -> Result<()> {
    if reg.num_qubits() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "register has {} qubits, code {}",
            reg.num_qubits(),
            code.n()
        )));
    }
    Ok(())
}

/// Adds a qubit carrying `label`, linked to `partners` by a new Z-stabilizer.
///
/// The qubit is prepared in `|+⟩` and the stabilizer on `partners ∪ {new}`
/// is measured; a `−1` is fixed with `X` on the new qubit.
pub fn add_parity_qubit<S: Simulator>(
    reg: &mut Register<S>,
    code: &ClassicalParityCode,
    label: &ParityLabel,
    partners: &[usize],
    outcomes: &mut Outcomes,
) -> Result<(ClassicalParityCode, DeformationStep)> {
    check_register(reg, code)?;
    let labels = code.labels().ok_or(Error::MissingLabels)?;
    let n = code.n();
    let set: BTreeSet<usize> = partners.iter().copied().collect();
    if set.is_empty() || set.len() != partners.len() {
        return Err(Error::Deformation("partners must be a nonempty set of distinct qubits".into()));
    }
    if let Some(&q) = set.iter().find(|&&q| q >= n) {
        return Err(Error::OutOfRange(format!("partner {q} of {n}")));
    }
    let xor = set
        .iter()
        .fold(ParityLabel::empty(), |acc, &q| acc.symmetric_difference(&labels[q]));
    if &xor != label {
        return Err(Error::LabelMismatch(format!(
            "partners carry {} but the new qubit would carry {}",
            xor.render(1),
            label.render(1)
        )));
    }

    reg.append_qubit()?;
    reg.sim.apply_gate(&Gate::h(n))?;
    let mut support: Vec<usize> = set.into_iter().collect();
    support.push(n);
    let (m, effective) = reg.measure(&PauliString::z_on(n + 1, &support), outcomes)?;
    let (correction, in_frame) = if effective.is_minus() {
        let p = PauliString::x_on(n + 1, &[n]);
        let f = reg.correct(&p)?;
        (Some(p), f)
    } else {
        (None, false)
    };

    let mut stabs = code.stabilizers().to_vec();
    stabs.push(support.clone());
    let mut new_labels = labels.to_vec();
    new_labels.push(label.clone());
    let new_code = ClassicalParityCode::new(n + 1, stabs)?.with_labels(new_labels)?;
    Ok((
        new_code,
        DeformationStep {
            kind: DeformationKind::Add,
            qubit: n,
            label: label.clone(),
            connecting_stabilizer: support,
            outcome: m.outcome,
            correction,
            in_frame,
        },
    ))
}

/// Replaces every stabilizer other than `linking` that contains `qubit` by
/// its symmetric difference with `linking`.
pub fn rebase_stabilizers(
    code: &ClassicalParityCode,
    qubit: usize,
    linking: usize,
) -> Result<Vec<Vec<usize>>> {
    let stabs = code.stabilizers();
    let link = stabs
        .get(linking)
        .ok_or_else(|| Error::OutOfRange(format!("stabilizer {linking} of {}", stabs.len())))?;
    if !link.contains(&qubit) {
        return Err(Error::Deformation(format!(
            "linking stabilizer {linking} does not contain qubit {qubit}"
        )));
    }
    Ok(stabs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if i != linking && s.contains(&qubit) {
                let a: BTreeSet<usize> = s.iter().copied().collect();
                let b: BTreeSet<usize> = link.iter().copied().collect();
                a.symmetric_difference(&b).copied().collect()
            } else {
                s.clone()
            }
        })
        .collect())
}

/// Removes `qubit` by measuring it in X, using the lowest-index stabilizer
/// that contains it as the linking stabilizer.
pub fn remove_parity_qubit<S: Simulator>(
    reg: &mut Register<S>,
    code: &ClassicalParityCode,
    qubit: usize,
    outcomes: &mut Outcomes,
) -> Result<(ClassicalParityCode, DeformationStep)> {
    let linking = code
        .stabilizers()
        .iter()
        .position(|s| s.contains(&qubit))
        .ok_or_else(|| {
            Error::Deformation(format!(
                "qubit {qubit} is in no stabilizer; removing it would change k"
            ))
        })?;
    remove_parity_qubit_via(reg, code, qubit, linking, outcomes)
}

/// [`remove_parity_qubit`] with an explicit linking stabilizer.
pub fn remove_parity_qubit_via<S: Simulator>(
    reg: &mut Register<S>,
    code: &ClassicalParityCode,
    qubit: usize,
    linking: usize,
    outcomes: &mut Outcomes,
) -> Result<(ClassicalParityCode, DeformationStep)> {
    check_register(reg, code)?;
    let labels = code.labels().ok_or(Error::MissingLabels)?;
    let n = code.n();
    if qubit >= n {
        return Err(Error::OutOfRange(format!("qubit {qubit} of {n}")));
    }
    let rebased = rebase_stabilizers(code, qubit, linking)?;
    let link = rebased[linking].clone();

    let (m, effective) = reg.measure(&PauliString::x_on(n, &[qubit]), outcomes)?;
    let (correction, in_frame) = if effective.is_minus() {
        let rest: Vec<usize> = link.iter().copied().filter(|&q| q != qubit).collect();
        let p = PauliString::z_on(n, &rest);
        let f = reg.correct(&p)?;
        (Some(p), f)
    } else {
        (None, false)
    };
    reg.sim.apply_gate(&Gate::h(qubit))?;
    if m.outcome.is_minus() {
        reg.sim.apply_gate(&Gate::x(qubit))?;
    }
    reg.discard_qubit(qubit)?;

    let shift = |q: usize| if q > qubit { q - 1 } else { q };
    let stabs: Vec<Vec<usize>> = rebased
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != linking)
        .map(|(_, s)| s.iter().map(|&q| shift(q)).collect())
        .collect();
    let new_labels: Vec<ParityLabel> = labels
        .iter()
        .enumerate()
        .filter(|&(q, _)| q != qubit)
        .map(|(_, l)| l.clone())
        .collect();
    let new_code = ClassicalParityCode::new(n - 1, stabs)?.with_labels(new_labels)?;
    Ok((
        new_code,
        DeformationStep {
            kind: DeformationKind::Remove,
            qubit,
            label: labels[qubit].clone(),
            connecting_stabilizer: link,
            outcome: m.outcome,
            correction,
            in_frame,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::lhz_layout;
    use crate::tableau::{prepare_code_state, StabilizerTableau};

    fn l(ix: &[usize]) -> ParityLabel {
        ParityLabel::from_indices(ix)
    }

    #[test]
    fn rebase_examples() {
        let code = ClassicalParityCode::new(5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        assert_eq!(
            rebase_stabilizers(&code, 2, 0).unwrap(),
            vec![vec![0, 1, 2], vec![0, 1, 3, 4]]
        );
        assert_eq!(rebase_stabilizers(&code, 0, 0).unwrap(), code.stabilizers().to_vec());
        assert!(matches!(rebase_stabilizers(&code, 0, 1), Err(Error::Deformation(_))));
    }

    #[test]
    fn add_builds_the_three_qubit_code() {
        let code = ClassicalParityCode::trivial(2);
        for forced in [Sign::Plus, Sign::Minus] {
            for mode in [CorrectionMode::Physical, CorrectionMode::Frame] {
                let mut reg = Register::new(prepare_code_state(&code, &[true, false]).unwrap(), mode);
                let mut o = Outcomes::replay([forced]);
                let (c2, step) = add_parity_qubit(&mut reg, &code, &l(&[0, 1]), &[0, 1], &mut o).unwrap();
                assert_eq!(c2.stabilizers(), &[vec![0, 1, 2]]);
                assert_eq!(step.connecting_stabilizer, vec![0, 1, 2]);
                assert_eq!(step.correction.is_some(), forced.is_minus());
                assert!(reg.violated(&c2).unwrap().is_empty());
                reg.flush_frame().unwrap();
                assert!(in_code_space(&reg.sim, &c2).unwrap().pass);
                assert!(reg.sim.same_state(&prepare_code_state(&c2, &[true, false]).unwrap()));
            }
        }
    }

    #[test]
    fn add_rejects_wrong_label() {
        let code = ClassicalParityCode::trivial(2);
        let mut reg = Register::new(StabilizerTableau::new(2), CorrectionMode::Physical);
        let err = add_parity_qubit(&mut reg, &code, &l(&[0]), &[0, 1], &mut Outcomes::seeded(0));
        assert!(matches!(err, Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn remove_from_lhz3() {
        let code = lhz_layout(3).unwrap();
        let q13 = code.qubits_with_label(&l(&[0, 2]))[0];
        for seed in 0..4 {
            let mut reg = Register::new(prepare_code_state(&code, &[true, true, false]).unwrap(), CorrectionMode::Physical);
            let (c2, step) = remove_parity_qubit(&mut reg, &code, q13, &mut Outcomes::seeded(seed)).unwrap();
            assert_eq!((c2.n(), c2.stabilizers().len()), (5, 2));
            assert!(crate::code::validate_labels(&c2, &c2.assignment().unwrap()).valid);
            assert!(step.connecting_stabilizer.contains(&q13));
            assert!(reg.sim.same_state(&prepare_code_state(&c2, &[true, true, false]).unwrap()));
        }
    }

    #[test]
    fn remove_requires_a_stabilizer() {
        let code = ClassicalParityCode::trivial(2);
        let mut reg = Register::new(StabilizerTableau::new(2), CorrectionMode::Physical);
        let err = remove_parity_qubit(&mut reg, &code, 0, &mut Outcomes::seeded(0));
        assert!(matches!(err, Err(Error::Deformation(_))));
    }

    #[test]
    fn frame_follows_cliffords_and_flips_outcomes() {
        let mut f = PauliFrame::new(2);
        f.record(&PauliString::x_on(2, &[0]));
        f.conjugate(&Gate::cnot(0, 1)).unwrap();
        assert_eq!(f.to_pauli(), PauliString::x_on(2, &[0, 1]));
        assert!(f.flips(&PauliString::z_on(2, &[1])));
        assert!(!f.flips(&PauliString::z_on(2, &[0, 1])));
        let mut g = f.clone();
        g.compose(&f);
        assert!(g.is_clear());
    }
}
