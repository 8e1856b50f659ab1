//! Dense state-vector simulation and logical-action extraction.
//!
//! Qubit `q` is bit `q` of the amplitude index. `RZ(θ) = exp(−iθ/2 Z)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::code::LabelAssignment;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, Sign};
use crate::sim::{Measurement, Outcomes, Simulator};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 14;

/// Outcome probabilities at or below this are treated as impossible.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// `|⟨P⟩ ∓ 1|` within this counts as an eigenstate in [`Simulator::peek`].
pub const EIGEN_TOL: f64 = 1e-9;

/// Column leakage above this makes an action not block-preserving.
pub const LEAKAGE_TOL: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
    /// Product of the probabilities of every outcome taken so far.
    branch_probability: f64,
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::GuardExceeded(format!(
            "{n} qubits exceeds the state-vector limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn new(n: usize) -> Result<Self> {
        StateVector::basis(n, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        guard(n)?;
        if index >> n != 0 {
            return Err(Error::OutOfRange(format!("basis index {index} on {n} qubits")));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(StateVector {
            n,
            amps,
            branch_probability: 1.0,
        })
    }

    /// Normalises `amps` (length must be a power of two).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        guard(n)?;
        let mut sv = StateVector {
            n,
            amps,
            branch_probability: 1.0,
        };
        let norm = sv.norm_sqr();
        if norm <= PROBABILITY_FLOOR {
            return Err(Error::NormUnderflow(norm));
        }
        sv.scale(1.0 / norm.sqrt());
        Ok(sv)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn branch_probability(&self) -> f64 {
        self.branch_probability
    }

    fn scale(&mut self, f: f64) {
        for a in &mut self.amps {
            *a *= f;
        }
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} qubits", self.n, other.n)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::OutOfRange(format!("qubit {q} of {}", self.n)));
        }
        Ok(())
    }

    fn single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn diagonal(&mut self, q: usize, d0: Complex64, d1: Complex64) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit == 0 { d0 } else { d1 };
        }
    }

    /// `P|ψ⟩` for a signed Pauli string.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.amps = self.pauli_image(p)?;
        Ok(())
    }

    fn pauli_image(&self, p: &PauliString) -> Result<Vec<Complex64>> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "Pauli on {} qubits, state on {}",
                p.num_qubits(),
                self.n
            )));
        }
        let xmask = p.x_bits().to_u64().expect("n ≤ 14") as usize;
        let zmask = p.z_bits().to_u64().expect("n ≤ 14") as usize;
        let ys = (xmask & zmask).count_ones();
        let mut phase = [ONE, Complex64::i(), -ONE, -Complex64::i()][(ys % 4) as usize];
        if p.sign().is_minus() {
            phase = -phase;
        }
        let mut out = vec![ZERO; self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let s = if (b & zmask).count_ones() % 2 == 1 { -phase } else { phase };
            out[b ^ xmask] = s * a;
        }
        Ok(out)
    }

    /// `⟨ψ|P|ψ⟩`, real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        let img = self.pauli_image(p)?;
        Ok(self.amps.iter().zip(&img).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// Applies every gate of a measurement-free circuit.
    pub fn apply_unitary_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "circuit on {} qubits, state on {}",
                c.num_qubits(),
                self.n
            )));
        }
        for g in c.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }
}

impl Simulator for StateVector {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::i();
        match *gate {
            Gate::Cnot { control, target } => {
                let (cb, tb) = (1usize << control, 1usize << target);
                for idx in 0..self.amps.len() {
                    if idx & cb != 0 && idx & tb == 0 {
                        self.amps.swap(idx, idx | tb);
                    }
                }
            }
            Gate::H { qubit } => {
                let a = Complex64::new(h, 0.0);
                self.single(qubit, [[a, a], [a, -a]]);
            }
            Gate::S { qubit } => self.diagonal(qubit, ONE, i),
            Gate::X { qubit } => self.single(qubit, [[ZERO, ONE], [ONE, ZERO]]),
            Gate::Z { qubit } => self.diagonal(qubit, ONE, -ONE),
            Gate::Rz { angle, qubit } => self.diagonal(
                qubit,
                Complex64::from_polar(1.0, -angle / 2.0),
                Complex64::from_polar(1.0, angle / 2.0),
            ),
            Gate::Mx { .. } | Gate::Mz { .. } | Gate::Mpp { .. } => {
                return Err(Error::UnsupportedGate {
                    gate: gate.to_string(),
                })
            }
        }
        Ok(())
    }

    fn measure(
        &mut self,
        p: &PauliString,
        forced: Option<Sign>,
        rng: &mut dyn RngCore,
    ) -> Result<Measurement> {
        let img = self.pauli_image(p)?;
        let ev: f64 = self.amps.iter().zip(&img).map(|(a, b)| (a.conj() * b).re).sum();
        let p_plus = ((1.0 + ev) / 2.0).clamp(0.0, 1.0);
        let p_minus = 1.0 - p_plus;
        let deterministic = p_plus.min(p_minus) <= PROBABILITY_FLOOR;
        let outcome = match forced {
            Some(f) => f,
            None if deterministic => Sign::from_bit(p_minus > p_plus),
            None => Sign::from_bit(rng.gen::<f64>() >= p_plus),
        };
        let prob = if outcome.is_minus() { p_minus } else { p_plus };
        if prob <= PROBABILITY_FLOOR {
            if deterministic {
                return Err(Error::ForcedContradiction {
                    forced: outcome.to_i8(),
                    actual: outcome.flipped().to_i8(),
                });
            }
            return Err(Error::NormUnderflow(prob));
        }
        let o = if outcome.is_minus() { -1.0 } else { 1.0 };
        let f = 0.5 / prob.sqrt();
        for (a, b) in self.amps.iter_mut().zip(&img) {
            *a = (*a + b * o) * f;
        }
        self.branch_probability *= prob;
        Ok(Measurement {
            outcome,
            deterministic,
        })
    }

    fn peek(&self, p: &PauliString) -> Result<Option<Sign>> {
        let ev = self.expectation(p)?;
        Ok(if (ev - 1.0).abs() <= EIGEN_TOL {
            Some(Sign::Plus)
        } else if (ev + 1.0).abs() <= EIGEN_TOL {
            Some(Sign::Minus)
        } else {
            None
        })
    }

    fn append_qubit(&mut self) -> Result<()> {
        guard(self.n + 1)?;
        self.amps.resize(1 << (self.n + 1), ZERO);
        self.n += 1;
        Ok(())
    }

    fn discard_qubit(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let stray: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if stray > PROBABILITY_FLOOR {
            return Err(Error::ProtocolViolation(format!(
                "qubit {q} is not in |0⟩ and cannot be discarded"
            )));
        }
        let low = bit - 1;
        self.amps = (0..1usize << (self.n - 1))
            .map(|j| self.amps[(j & low) | ((j & !low) << 1)])
            .collect();
        self.n -= 1;
        Ok(())
    }
}

/// Physical basis index encoding logical basis state `x` (bit `i` = logical `i`).
pub fn encode_index(assignment: &LabelAssignment, x: usize) -> usize {
    assignment
        .masks()
        .iter()
        .enumerate()
        .filter(|(_, &m)| (m & x as u64).count_ones() % 2 == 1)
        .fold(0, |acc, (q, _)| acc | 1 << q)
}

/// Encoding isometry `E` as a dense `2^n × 2^k` matrix.
pub fn encoding_isometry(assignment: &LabelAssignment) -> Result<CMatrix> {
    guard(assignment.n())?;
    let k = assignment.k();
    let mut e = CMatrix::zeros(1 << assignment.n(), 1 << k);
    for x in 0..1usize << k {
        e[(encode_index(assignment, x), x)] = ONE;
    }
    Ok(e)
}

#[derive(Clone, Debug, Serialize)]
pub struct LogicalActionReport {
    #[serde(serialize_with = "serialize_matrix")]
    pub logical_unitary: CMatrix,
    pub block_preserving: bool,
    /// Largest out-of-code-space norm over logical basis inputs.
    pub leakage: f64,
    /// Measurement outcomes the action is conditioned on.
    pub outcomes: Vec<Sign>,
}

fn serialize_matrix<S: serde::Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for r in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

impl LogicalActionReport {
    /// `U†U = 1` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        is_unitary(&self.logical_unitary, tol)
    }
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    if !u.is_square() {
        return false;
    }
    let prod = u.adjoint() * u;
    let id = CMatrix::identity(u.nrows(), u.nrows());
    (prod - id).iter().all(|e| e.norm() <= tol)
}

/// Logical action of a measurement-free circuit on an encoded register.
pub fn logical_action(assignment: &LabelAssignment, c: &Circuit) -> Result<LogicalActionReport> {
    if c.gates().iter().any(Gate::is_measurement) {
        return Err(Error::Unsupported(
            "circuit contains measurements; run it as a protocol".into(),
        ));
    }
    protocol_action(assignment, assignment, Outcomes::seeded(0), |sv, _| {
        sv.apply_unitary_circuit(c)
    })
}

/// Logical action of an arbitrary protocol, mapping the code of `input` to
/// the code of `output`.
///
/// The protocol runs once per logical basis input. The first run draws its
/// measurement outcomes from `first`; later runs are forced to the same
/// outcomes, so the matrix is the action of one fixed outcome branch,
/// rescaled by the average branch probability.
pub fn protocol_action<F>(
    input: &LabelAssignment,
    output: &LabelAssignment,
    first: Outcomes,
    mut run: F,
) -> Result<LogicalActionReport>
where
    F: FnMut(&mut StateVector, &mut Outcomes) -> Result<()>,
{
    if input.k() != output.k() {
        return Err(Error::DimensionMismatch(format!(
            "input has k = {}, output k = {}",
            input.k(),
            output.k()
        )));
    }
    guard(input.n())?;
    let dim = 1usize << input.k();
    let mut record: Option<Vec<Sign>> = None;
    let mut finals = Vec::with_capacity(dim);
    let mut first = Some(first);
    for x in 0..dim {
        let mut sv = StateVector::basis(input.n(), encode_index(input, x))?;
        let mut outcomes = match (&record, first.take()) {
            (None, Some(o)) => o,
            (Some(r), _) => Outcomes::replay(r.iter().copied()),
            (None, None) => unreachable!("first run consumes the initial source"),
        };
        run(&mut sv, &mut outcomes)?;
        if sv.n() != output.n() {
            return Err(Error::DimensionMismatch(format!(
                "protocol left {} qubits, output code has {}",
                sv.n(),
                output.n()
            )));
        }
        match &record {
            None => record = Some(outcomes.record().to_vec()),
            Some(r) if r.as_slice() != outcomes.record() => {
                return Err(Error::ProtocolViolation(
                    "protocol measured a different sequence for another logical input".into(),
                ))
            }
            Some(_) => {}
        }
        finals.push(sv);
    }
    let mean_prob = finals.iter().map(|s| s.branch_probability()).sum::<f64>() / dim as f64;
    let mut u = CMatrix::zeros(dim, dim);
    let mut leakage: f64 = 0.0;
    let codewords: Vec<usize> = (0..dim).map(|y| encode_index(output, y)).collect();
    let mut in_code = vec![false; 1 << output.n()];
    for &c in &codewords {
        in_code[c] = true;
    }
    for (x, sv) in finals.iter().enumerate() {
        let w = (sv.branch_probability() / mean_prob).sqrt();
        for (y, &c) in codewords.iter().enumerate() {
            u[(y, x)] = sv.amps[c] * w;
        }
        let outside: f64 = sv
            .amps
            .iter()
            .zip(&in_code)
            .filter(|(_, &inside)| !inside)
            .map(|(a, _)| a.norm_sqr())
            .sum();
        leakage = leakage.max(w * outside.sqrt());
    }
    Ok(LogicalActionReport {
        logical_unitary: u,
        block_preserving: leakage <= LEAKAGE_TOL,
        leakage,
        outcomes: record.unwrap_or_default(),
    })
}

/// `|tr(U†V)| / dim`.
pub fn fidelity_up_to_phase(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    if u.shape() != v.shape() || !u.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            u.shape(),
            v.shape()
        )));
    }
    Ok((u.adjoint() * v).trace().norm() / u.nrows() as f64)
}

/// `exp(−iα/2 ∏_{i∈mask} Z_i)` on `k` qubits.
pub fn zz_rotation(k: usize, mask: u64, alpha: f64) -> CMatrix {
    CMatrix::from_fn(1 << k, 1 << k, |r, c| {
        if r != c {
            return ZERO;
        }
        let odd = (r as u64 & mask).count_ones() % 2 == 1;
        Complex64::from_polar(1.0, if odd { alpha / 2.0 } else { -alpha / 2.0 })
    })
}

/// `∏_{i∈mask} Z_i` on `k` qubits.
pub fn z_product(k: usize, mask: u64) -> CMatrix {
    CMatrix::from_fn(1 << k, 1 << k, |r, c| match (r == c, (r as u64 & mask).count_ones() % 2) {
        (false, _) => ZERO,
        (true, 0) => ONE,
        (true, _) => -ONE,
    })
}
