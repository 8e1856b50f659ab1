//! Logical gates on parity codes: parity-controlled NOT, S/T teleportation
//! onto parity qubits, and the protected-copy rotation protocol.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::code::{logical_x_support, ClassicalParityCode, ParityLabel};
use crate::deformation::{add_parity_qubit, remove_parity_qubit, CorrectionMode, Register};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, Sign};
use crate::sim::{Outcomes, Simulator};
use crate::statevector::{self, CMatrix, LogicalActionReport, StateVector};
use crate::trace::{ProtocolTrace, TraceEvent};

/// Largest joint logical register for dense reference unitaries.
pub const MAX_REFERENCE_K: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Tableau,
    Statevector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Pcnot,
    Rotation,
    TeleportS,
    TeleportT,
}

/// A logical gate to run on a code; logical indices are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRequest {
    pub kind: GateKind,
    #[serde(default)]
    pub control_label: Option<ParityLabel>,
    #[serde(default)]
    pub target_logical: Option<usize>,
    #[serde(default)]
    pub rotation_label: Option<ParityLabel>,
    #[serde(default)]
    pub angle: Option<f64>,
    #[serde(default)]
    pub backend: Backend,
}

impl GateRequest {
    pub fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Unsupported(format!("{:?} request needs {what}", self.kind)))
            }
        };
        match self.kind {
            GateKind::Pcnot => {
                need(self.control_label.as_ref().is_some_and(|l| !l.is_empty()), "a nonempty control label")?;
                need(self.target_logical.is_some(), "a target logical")
            }
            GateKind::Rotation => {
                need(self.rotation_label.as_ref().is_some_and(|l| !l.is_empty()), "a nonempty rotation label")?;
                need(self.angle.is_some_and(f64::is_finite), "a finite angle")
            }
            GateKind::TeleportS | GateKind::TeleportT => {
                need(self.rotation_label.as_ref().is_some_and(|l| !l.is_empty()), "a nonempty label")
            }
        }
    }
}

/// Two labelled code blocks side by side: control qubits first, then target.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPair {
    pub control: ClassicalParityCode,
    pub target: ClassicalParityCode,
}

impl BlockPair {
    pub fn new(control: ClassicalParityCode, target: ClassicalParityCode) -> Result<Self> {
        for c in [&control, &target] {
            if c.labels().is_none() {
                return Err(Error::MissingLabels);
            }
        }
        Ok(BlockPair { control, target })
    }

    pub fn target_offset(&self) -> usize {
        self.control.n()
    }

    pub fn n(&self) -> usize {
        self.control.n() + self.target.n()
    }

    pub fn k(&self) -> usize {
        self.control.k() + self.target.k()
    }

    /// Joint code with target logicals numbered after the control's.
    pub fn joint(&self) -> ClassicalParityCode {
        self.control.direct_sum(&self.target)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcnotMode {
    /// Transversal when the control copies match the target weight, else
    /// a single control.
    #[default]
    Auto,
    Transversal,
    Single,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PcnotCircuit {
    pub circuit: Circuit,
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    /// Each physical CNOT uses its own control and its own target.
    pub transversal: bool,
}

/// CNOTs from the control-label qubits onto the support of logical `X̄_i`
/// in the target block.
pub fn pcnot_circuit(
    blocks: &BlockPair,
    control_label: &ParityLabel,
    i: usize,
    mode: PcnotMode,
) -> Result<PcnotCircuit> {
    let copies = blocks.control.qubits_with_label(control_label);
    if copies.is_empty() {
        return Err(Error::LabelMismatch(format!(
            "no control qubit carries {}",
            control_label.render(1)
        )));
    }
    if i >= blocks.target.k() {
        return Err(Error::OutOfRange(format!("target logical {i} of {}", blocks.target.k())));
    }
    let off = blocks.target_offset();
    let targets: Vec<usize> = logical_x_support(&blocks.target.assignment()?, i)?
        .into_iter()
        .map(|q| q + off)
        .collect();
    let (c, d) = (copies.len(), targets.len());
    let transversal = match mode {
        PcnotMode::Auto if c == d => true,
        PcnotMode::Auto if c == 1 => false,
        PcnotMode::Auto => {
            return Err(Error::Unsupported(format!(
                "{c} control copies for a target of weight {d}; need 1 or {d}"
            )))
        }
        PcnotMode::Transversal if c == d => true,
        PcnotMode::Transversal => {
            return Err(Error::Unsupported(format!(
                "transversal pcnot needs {d} control copies, found {c}"
            )))
        }
        PcnotMode::Single => d == 1,
    };
    let controls = if transversal { copies } else { vec![copies[0]] };
    let mut circuit = Circuit::new(blocks.n());
    for (j, &t) in targets.iter().enumerate() {
        let ctl = if transversal { controls[j] } else { controls[0] };
        circuit.push(Gate::cnot(ctl, t))?;
    }
    Ok(PcnotCircuit {
        circuit,
        controls,
        targets,
        transversal,
    })
}

/// `∏_{j∈label} CNOT_{j,i}` on `k` logical qubits: flips `i` when the
/// parity of the control logicals is odd.
pub fn pcnot_reference_unitary(control_label: &ParityLabel, i: usize, k: usize) -> Result<CMatrix> {
    if k > MAX_REFERENCE_K {
        return Err(Error::GuardExceeded(format!("k = {k} exceeds {MAX_REFERENCE_K}")));
    }
    if i >= k || control_label.max_index().is_some_and(|m| m >= k) {
        return Err(Error::OutOfRange(format!("indices must be below k = {k}")));
    }
    if control_label.contains(i) {
        return Err(Error::Unsupported(format!(
            "target {} lies inside its own control label",
            i + 1
        )));
    }
    let mask = control_label.to_mask() as usize;
    let dim = 1usize << k;
    let mut u = CMatrix::zeros(dim, dim);
    for x in 0..dim {
        let y = if (x & mask).count_ones() % 2 == 1 { x ^ (1 << i) } else { x };
        u[(y, x)] = Complex64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Logical action of a pcnot circuit on the joint code and its fidelity to
/// the reference unitary.
pub fn verify_pcnot(
    blocks: &BlockPair,
    control_label: &ParityLabel,
    i: usize,
    mode: PcnotMode,
) -> Result<(LogicalActionReport, f64)> {
    let pc = pcnot_circuit(blocks, control_label, i, mode)?;
    let joint = blocks.joint().assignment()?;
    let report = statevector::logical_action(&joint, &pc.circuit)?;
    let reference = pcnot_reference_unitary(control_label, blocks.control.k() + i, blocks.k())?;
    let f = statevector::fidelity_up_to_phase(&report.logical_unitary, &reference)?;
    Ok((report, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeleportKind {
    S,
    T,
}

impl TeleportKind {
    pub fn angle(self) -> f64 {
        match self {
            TeleportKind::S => FRAC_PI_2,
            TeleportKind::T => FRAC_PI_4,
        }
    }
}

fn gate_event<S: Simulator>(reg: &mut Register<S>, trace: &mut ProtocolTrace, g: Gate) -> Result<()> {
    reg.apply_gate(&g)?;
    trace.push(TraceEvent::Gate { gate: g });
    Ok(())
}

/// One-bit teleportation of `RZ(π/2)` or `RZ(π/4)` onto `qubit`, consuming an
/// ideal resource `RZ(θ)|+⟩` appended to the register.
pub fn teleport_diagonal<S: Simulator>(
    reg: &mut Register<S>,
    code: &ClassicalParityCode,
    qubit: usize,
    kind: TeleportKind,
    outcomes: &mut Outcomes,
) -> Result<ProtocolTrace> {
    let n = code.n();
    if reg.num_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "register has {} qubits, code {n}",
            reg.num_qubits()
        )));
    }
    if qubit >= n {
        return Err(Error::OutOfRange(format!("qubit {qubit} of {n}")));
    }
    let mut trace = ProtocolTrace::new(match kind {
        TeleportKind::S => "teleport_s",
        TeleportKind::T => "teleport_t",
    });
    trace.set_meta("qubit", qubit);
    if let Some(l) = code.label(qubit) {
        trace.set_meta("label", l);
    }
    let r = n;
    reg.append_qubit()?;
    reg.sim.apply_gate(&Gate::h(r))?;
    reg.sim.apply_gate(&Gate::rz(kind.angle(), r))?;
    gate_event(reg, &mut trace, Gate::cnot(qubit, r))?;
    let p = PauliString::z_on(n + 1, &[r]);
    let (m, effective) = reg.measure(&p, outcomes)?;
    trace.push(TraceEvent::Measurement {
        pauli: p,
        outcome: m.outcome,
        deterministic: m.deterministic,
    });
    if effective.is_minus() {
        match kind {
            TeleportKind::S => {
                let z = PauliString::z_on(n + 1, &[qubit]);
                let in_frame = reg.correct(&z)?;
                trace.push(TraceEvent::Correction { pauli: z, in_frame });
            }
            TeleportKind::T => gate_event(reg, &mut trace, Gate::s(qubit))?,
        }
    }
    if m.outcome.is_minus() {
        reg.sim.apply_gate(&Gate::x(r))?;
    }
    reg.discard_qubit(r)?;
    Ok(trace)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SyndromeRecord {
    pub stabilizers: Vec<Vec<usize>>,
    /// Frame-adjusted outcomes.
    pub outcomes: Vec<Sign>,
    pub raw: Vec<Sign>,
}

impl SyndromeRecord {
    pub fn all_plus(&self) -> bool {
        self.outcomes.iter().all(|s| *s == Sign::Plus)
    }

    fn event(&self) -> TraceEvent {
        TraceEvent::Syndrome {
            stabilizers: self.stabilizers.clone(),
            outcomes: self.outcomes.clone(),
            raw: self.raw.clone(),
        }
    }
}

/// Measures every code stabilizer whose support is not in `excluded`.
pub fn syndrome_sweep<S: Simulator>(
    reg: &mut Register<S>,
    code: &ClassicalParityCode,
    excluded: &BTreeSet<Vec<usize>>,
    outcomes: &mut Outcomes,
) -> Result<SyndromeRecord> {
    let mut rec = SyndromeRecord {
        stabilizers: Vec::new(),
        outcomes: Vec::new(),
        raw: Vec::new(),
    };
    for s in code.stabilizers() {
        if excluded.contains(s) {
            continue;
        }
        let (m, e) = reg.measure(&PauliString::z_on(code.n(), s), outcomes)?;
        rec.stabilizers.push(s.clone());
        rec.outcomes.push(e);
        rec.raw.push(m.outcome);
    }
    Ok(rec)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationOptions {
    /// Qubits in the protected copy; more than one forms a repetition chain.
    pub copies: usize,
    /// Syndrome sweeps after adding the copy and after each step-3 gate.
    pub rounds: usize,
    /// Gates applied in step 3, written on qubit 0 (the copy). `None` applies
    /// `RZ(α)` exactly.
    pub sequence: Option<Vec<Gate>>,
    /// Reactivate the connecting stabilizer before removing the copy.
    pub reactivate: bool,
    /// Which qubit with the label to copy; lowest index by default.
    pub source: Option<usize>,
}

impl Default for RotationOptions {
    fn default() -> Self {
        RotationOptions {
            copies: 1,
            rounds: 1,
            sequence: None,
            reactivate: false,
            source: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Start,
    CopyAdded,
    Excluded,
    Rotated,
    Reactivated,
    Done,
}

/// The four-step protected-copy rotation, one step per method call.
///
/// 1. [`add_copy`](Self::add_copy) duplicates a qubit carrying the label.
/// 2. [`exclude_connecting`](Self::exclude_connecting) stops measuring the
///    stabilizer linking it to the original.
/// 3. [`rotate`](Self::rotate) acts on the copy.
/// 4. [`remove_copy`](Self::remove_copy) measures the copy out.
pub struct RotationSession<'a, S: Simulator> {
    reg: &'a mut Register<S>,
    outcomes: &'a mut Outcomes,
    code: ClassicalParityCode,
    options: RotationOptions,
    source: usize,
    copies: Vec<usize>,
    connecting: Vec<usize>,
    excluded: BTreeSet<Vec<usize>>,
    stage: Stage,
    trace: ProtocolTrace,
    sweeps_clean: bool,
}

impl<'a, S: Simulator> RotationSession<'a, S> {
    pub fn new(
        reg: &'a mut Register<S>,
        code: &ClassicalParityCode,
        label: &ParityLabel,
        options: RotationOptions,
        outcomes: &'a mut Outcomes,
    ) -> Result<Self> {
        if options.copies == 0 {
            return Err(Error::Unsupported("the protected copy needs at least one qubit".into()));
        }
        let holders = code.qubits_with_label(label);
        let source = match options.source {
            Some(q) if holders.contains(&q) => q,
            Some(q) => {
                return Err(Error::LabelMismatch(format!(
                    "qubit {q} does not carry {}",
                    label.render(1)
                )))
            }
            None => *holders.first().ok_or_else(|| {
                Error::LabelMismatch(format!("no qubit carries {}", label.render(1)))
            })?,
        };
        if let Some(seq) = &options.sequence {
            for g in seq {
                if g.is_measurement() || g.qubits() != [0] {
                    return Err(Error::Unsupported(format!(
                        "step-3 gate {g} must be a single-qubit gate on qubit 0"
                    )));
                }
                if options.copies > 1 && !matches!(g, Gate::Z { .. } | Gate::S { .. } | Gate::Rz { .. }) {
                    return Err(Error::Unsupported(format!(
                        "{g} is not diagonal; a repetition-coded copy only supports Z-axis gates"
                    )));
                }
            }
        }
        let mut trace = ProtocolTrace::new("rotation");
        trace.set_meta("label", label);
        trace.set_meta("source", source);
        trace.set_meta("copies", options.copies);
        trace.set_meta("rounds", options.rounds);
        Ok(RotationSession {
            reg,
            outcomes,
            code: code.clone(),
            options,
            source,
            copies: Vec::new(),
            connecting: Vec::new(),
            excluded: BTreeSet::new(),
            stage: Stage::Start,
            trace,
            sweeps_clean: true,
        })
    }

    pub fn code(&self) -> &ClassicalParityCode {
        &self.code
    }

    pub fn excluded(&self) -> &BTreeSet<Vec<usize>> {
        &self.excluded
    }

    fn expect(&self, stages: &[Stage], step: &str) -> Result<()> {
        if stages.contains(&self.stage) {
            Ok(())
        } else {
            Err(Error::ProtocolViolation(format!("{step} is not allowed after {:?}", self.stage)))
        }
    }

    fn sweeps(&mut self) -> Result<()> {
        for _ in 0..self.options.rounds {
            let rec = syndrome_sweep(&mut *self.reg, &self.code, &self.excluded, &mut *self.outcomes)?;
            self.sweeps_clean &= rec.all_plus();
            self.trace.push(rec.event());
        }
        Ok(())
    }

    /// Step 1.
    pub fn add_copy(&mut self) -> Result<()> {
        self.expect(&[Stage::Start], "adding the copy")?;
        let label = self.code.labels().ok_or(Error::MissingLabels)?[self.source].clone();
        let mut partner = self.source;
        for j in 0..self.options.copies {
            let (code, step) = add_parity_qubit(&mut *self.reg, &self.code, &label, &[partner], &mut *self.outcomes)?;
            if j == 0 {
                self.connecting = step.connecting_stabilizer.clone();
            }
            partner = step.qubit;
            self.copies.push(step.qubit);
            self.trace.push(TraceEvent::Deformation(step));
            self.code = code;
        }
        self.stage = Stage::CopyAdded;
        self.sweeps()
    }

    /// Step 2.
    pub fn exclude_connecting(&mut self) -> Result<()> {
        self.expect(&[Stage::CopyAdded], "excluding the connecting stabilizer")?;
        self.excluded.insert(self.connecting.clone());
        self.trace.push(TraceEvent::Exclude {
            stabilizer: self.connecting.clone(),
        });
        self.stage = Stage::Excluded;
        Ok(())
    }

    /// Step 3: `RZ(α)` on the copy, or the configured gate sequence, with
    /// syndrome sweeps after every gate.
    pub fn rotate(&mut self, alpha: f64) -> Result<()> {
        self.expect(&[Stage::Excluded], "rotating the copy")?;
        let copy = self.copies[0];
        let gates = match &self.options.sequence {
            Some(seq) => seq.iter().map(|g| g.remapped(self.code.n(), |_| copy)).collect(),
            None => vec![Gate::rz(alpha, copy)],
        };
        for g in gates {
            gate_event(&mut *self.reg, &mut self.trace, g)?;
            self.sweeps()?;
        }
        self.stage = Stage::Rotated;
        Ok(())
    }

    /// Optional: resume measuring the connecting stabilizer.
    pub fn reactivate(&mut self) -> Result<()> {
        self.expect(&[Stage::Rotated], "reactivating the connecting stabilizer")?;
        self.excluded.remove(&self.connecting);
        self.trace.push(TraceEvent::Reactivate {
            stabilizer: self.connecting.clone(),
        });
        self.stage = Stage::Reactivated;
        self.sweeps()
    }

    /// Step 4. The connecting stabilizer is not measured again.
    pub fn remove_copy(&mut self) -> Result<()> {
        if self.stage == Stage::CopyAdded {
            return Err(Error::ProtocolViolation(
                "copy removal attempted while the connecting stabilizer is still active and the copy unrotated"
                    .into(),
            ));
        }
        self.expect(&[Stage::Rotated, Stage::Reactivated], "removing the copy")?;
        for &q in self.copies.iter().rev() {
            let (code, step) = remove_parity_qubit(&mut *self.reg, &self.code, q, &mut *self.outcomes)?;
            self.trace.push(TraceEvent::Deformation(step));
            self.code = code;
        }
        self.excluded.clear();
        self.stage = Stage::Done;
        Ok(())
    }

    /// Whether every sweep so far read all `+1`.
    pub fn sweeps_clean(&self) -> bool {
        self.sweeps_clean
    }

    pub fn finish(mut self) -> Result<(ClassicalParityCode, ProtocolTrace)> {
        self.expect(&[Stage::Done], "finishing")?;
        self.trace.set_meta("sweeps_clean", self.sweeps_clean);
        Ok((self.code, self.trace))
    }
}

/// Runs all four steps of the rotation protocol.
pub fn rotation_protocol<S: Simulator>(
    reg: &mut Register<S>,
    code: &ClassicalParityCode,
    label: &ParityLabel,
    alpha: f64,
    options: &RotationOptions,
    outcomes: &mut Outcomes,
) -> Result<(ClassicalParityCode, ProtocolTrace)> {
    let mut s = RotationSession::new(reg, code, label, options.clone(), outcomes)?;
    s.trace.set_meta("alpha", alpha);
    s.add_copy()?;
    s.exclude_connecting()?;
    s.rotate(alpha)?;
    if options.reactivate {
        s.reactivate()?;
    }
    s.remove_copy()?;
    s.finish()
}

/// Logical action of [`rotation_protocol`] on the state-vector backend and
/// its fidelity to `exp(−iα/2 ∏ Z̄)`.
pub fn verify_rotation(
    code: &ClassicalParityCode,
    label: &ParityLabel,
    alpha: f64,
    options: &RotationOptions,
    mode: CorrectionMode,
    seed: u64,
) -> Result<(LogicalActionReport, f64)> {
    let a = code.assignment()?;
    let report = statevector::protocol_action(&a, &a, Outcomes::seeded(seed), |sv, o| {
        run_on_statevector(sv, mode, |reg| {
            rotation_protocol(reg, code, label, alpha, options, o).map(|_| ())
        })
    })?;
    let target = statevector::zz_rotation(code.k(), label.to_mask(), alpha);
    let f = statevector::fidelity_up_to_phase(&report.logical_unitary, &target)?;
    Ok((report, f))
}

/// Logical action of [`teleport_diagonal`] replayed with the given outcomes.
pub fn teleport_action(
    code: &ClassicalParityCode,
    qubit: usize,
    kind: TeleportKind,
    mode: CorrectionMode,
    first: Outcomes,
) -> Result<LogicalActionReport> {
    let a = code.assignment()?;
    statevector::protocol_action(&a, &a, first, |sv, o| {
        run_on_statevector(sv, mode, |reg| teleport_diagonal(reg, code, qubit, kind, o).map(|_| ()))
    })
}

/// Runs `f` on a register borrowing `sv`, then applies any pending frame.
pub fn run_on_statevector<F>(sv: &mut StateVector, mode: CorrectionMode, f: F) -> Result<()>
where
    F: FnOnce(&mut Register<&mut StateVector>) -> Result<()>,
{
    let mut reg = Register::new(sv, mode);
    f(&mut reg)?;
    reg.flush_frame()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::lhz_layout;
    use crate::statevector::fidelity_up_to_phase;
    use crate::tableau::{prepare_code_state, StabilizerTableau};

    fn l(ix: &[usize]) -> ParityLabel {
        ParityLabel::from_indices(ix)
    }

    fn three_qubit_code() -> ClassicalParityCode {
        ClassicalParityCode::new(3, vec![vec![0, 1, 2]])
            .unwrap()
            .with_labels(vec![l(&[0]), l(&[1]), l(&[0, 1])])
            .unwrap()
    }

    #[test]
    fn reference_unitary_truth_table() {
        let u = pcnot_reference_unitary(&l(&[0, 1]), 2, 3).unwrap();
        for x in 0..8usize {
            let parity = (x & 1) ^ (x >> 1 & 1);
            let y = x ^ (parity << 2);
            assert_eq!(u[(y, x)].re, 1.0);
        }
        assert_eq!(pcnot_reference_unitary(&ParityLabel::empty(), 1, 2).unwrap(), CMatrix::identity(4, 4));
        let cnot = pcnot_reference_unitary(&l(&[0]), 1, 2).unwrap();
        assert_eq!(cnot[(3, 1)].re, 1.0);
        assert_eq!(cnot[(1, 3)].re, 1.0);
        assert!(matches!(pcnot_reference_unitary(&l(&[0, 1]), 1, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn single_control_from_parity_qubit() {
        let blocks = BlockPair::new(three_qubit_code(), ClassicalParityCode::trivial(1)).unwrap();
        let pc = pcnot_circuit(&blocks, &l(&[0, 1]), 0, PcnotMode::Auto).unwrap();
        assert_eq!(pc.circuit.gates(), &[Gate::cnot(2, 3)]);
        let (r, f) = verify_pcnot(&blocks, &l(&[0, 1]), 0, PcnotMode::Auto).unwrap();
        assert!(r.block_preserving);
        assert!((f - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transversal_copies_pair_up() {
        let mut control = ClassicalParityCode::trivial(1);
        for _ in 0..2 {
            let n = control.n();
            let mut stabs = control.stabilizers().to_vec();
            stabs.push(vec![n - 1, n]);
            let mut labels = control.labels().unwrap().to_vec();
            labels.push(l(&[0]));
            control = ClassicalParityCode::new(n + 1, stabs).unwrap().with_labels(labels).unwrap();
        }
        let blocks = BlockPair::new(control, ClassicalParityCode::repetition(3)).unwrap();
        let pc = pcnot_circuit(&blocks, &l(&[0]), 0, PcnotMode::Auto).unwrap();
        assert!(pc.transversal);
        assert_eq!(pc.circuit.gates(), &[Gate::cnot(0, 3), Gate::cnot(1, 4), Gate::cnot(2, 5)]);
        let single = pcnot_circuit(&blocks, &l(&[0]), 0, PcnotMode::Single).unwrap();
        assert!(!single.transversal);
        assert_eq!(single.controls, vec![0]);
        for mode in [PcnotMode::Auto, PcnotMode::Single] {
            let (_, f) = verify_pcnot(&blocks, &l(&[0]), 0, mode).unwrap();
            assert!((f - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn pcnot_errors() {
        let blocks = BlockPair::new(three_qubit_code(), ClassicalParityCode::repetition(3)).unwrap();
        assert!(matches!(
            pcnot_circuit(&blocks, &l(&[0, 1]), 0, PcnotMode::Transversal),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            pcnot_circuit(&blocks, &l(&[2]), 0, PcnotMode::Auto),
            Err(Error::LabelMismatch(_))
        ));
    }

    #[test]
    fn teleport_s_and_t_on_parity_qubit() {
        let code = three_qubit_code();
        for seed in 0..4 {
            for (kind, angle) in [(TeleportKind::S, FRAC_PI_2), (TeleportKind::T, FRAC_PI_4)] {
                for mode in [CorrectionMode::Physical, CorrectionMode::Frame] {
                    let r = teleport_action(&code, 2, kind, mode, Outcomes::seeded(seed)).unwrap();
                    let want = statevector::zz_rotation(2, 0b11, angle);
                    assert!((fidelity_up_to_phase(&r.logical_unitary, &want).unwrap() - 1.0).abs() < 1e-9);
                }
            }
        }
        let mut reg = Register::new(StabilizerTableau::new(3), CorrectionMode::Physical);
        let err = teleport_diagonal(&mut reg, &code, 2, TeleportKind::T, &mut Outcomes::seeded(0));
        assert!(matches!(err, Err(Error::UnsupportedGate { .. })));
    }

    #[test]
    fn rotation_on_lhz3() {
        let code = lhz_layout(3).unwrap();
        for (seed, alpha) in [(0, 0.3), (1, 0.0), (2, 2.0), (3, -1.1)] {
            let (r, f) =
                verify_rotation(&code, &l(&[0, 2]), alpha, &RotationOptions::default(), CorrectionMode::Physical, seed)
                    .unwrap();
            assert!(r.block_preserving);
            assert!((f - 1.0).abs() < 1e-9, "alpha {alpha}: fidelity {f}");
        }
    }

    #[test]
    fn rotation_trace_and_code_restored() {
        let code = lhz_layout(3).unwrap();
        let mut reg = Register::new(prepare_code_state(&code, &[true, false, true]).unwrap(), CorrectionMode::Frame);
        let mut o = Outcomes::seeded(9);
        let opts = RotationOptions {
            rounds: 2,
            reactivate: true,
            ..Default::default()
        };
        let (after, trace) = rotation_protocol(&mut reg, &code, &l(&[0, 2]), FRAC_PI_2, &opts, &mut o).unwrap();
        assert_eq!(after.stabilizers(), code.stabilizers());
        assert_eq!(after.labels(), code.labels());
        assert_eq!(trace.deformations().count(), 2);
        assert_eq!(trace.metadata["sweeps_clean"], serde_json::json!(true));
        assert_eq!(trace.outcomes(), o.record());
        assert!(reg.violated(&after).unwrap().is_empty());
    }

    #[test]
    fn removal_before_rotation_is_a_violation() {
        let code = three_qubit_code();
        let mut reg = Register::new(prepare_code_state(&code, &[false, false]).unwrap(), CorrectionMode::Physical);
        let mut o = Outcomes::seeded(0);
        let mut s = RotationSession::new(&mut reg, &code, &l(&[0, 1]), RotationOptions::default(), &mut o).unwrap();
        s.add_copy().unwrap();
        assert!(matches!(s.remove_copy(), Err(Error::ProtocolViolation(_))));
        assert!(matches!(s.rotate(0.1), Err(Error::ProtocolViolation(_))));
    }

    #[test]
    fn repetition_copy_rejects_non_diagonal_sequence() {
        let code = three_qubit_code();
        let mut reg = Register::new(StabilizerTableau::new(3), CorrectionMode::Physical);
        let mut o = Outcomes::seeded(0);
        let opts = RotationOptions {
            copies: 3,
            sequence: Some(vec![Gate::h(0)]),
            ..Default::default()
        };
        assert!(matches!(
            RotationSession::new(&mut reg, &code, &l(&[0, 1]), opts, &mut o),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn repetition_copy_rotation() {
        let code = three_qubit_code();
        let opts = RotationOptions {
            copies: 3,
            ..Default::default()
        };
        let (_, f) = verify_rotation(&code, &l(&[0, 1]), 0.7, &opts, CorrectionMode::Physical, 5).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }
}
