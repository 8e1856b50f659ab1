//! Backend-independent simulator interface and measurement outcome sources.

use std::collections::VecDeque;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, QubitInit};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub outcome: Sign,
    pub deterministic: bool,
}

/// A pure-state register that supports Clifford gates, Pauli measurements
/// and growing/shrinking by one qubit at a time.
pub trait Simulator {
    fn num_qubits(&self) -> usize;

    /// Applies a unitary gate. Measurement gates go through [`Simulator::measure`].
    fn apply_gate(&mut self, gate: &Gate) -> Result<()>;

    /// Measures `p`. `forced` picks the outcome when it is random; forcing a
    /// deterministic outcome to the other value is an error.
    fn measure(
        &mut self,
        p: &PauliString,
        forced: Option<Sign>,
        rng: &mut dyn RngCore,
    ) -> Result<Measurement>;

    /// The eigenvalue of `p` if the state is an eigenstate, without disturbing it.
    fn peek(&self, p: &PauliString) -> Result<Option<Sign>>;

    /// Appends a fresh qubit in `|0⟩` at index `num_qubits()`.
    fn append_qubit(&mut self) -> Result<()>;

    /// Removes qubit `q`, which must be in `|0⟩` and unentangled.
    fn discard_qubit(&mut self, q: usize) -> Result<()>;
}

impl<S: Simulator + ?Sized> Simulator for &mut S {
    fn num_qubits(&self) -> usize {
        (**self).num_qubits()
    }

    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        (**self).apply_gate(gate)
    }

    fn measure(
        &mut self,
        p: &PauliString,
        forced: Option<Sign>,
        rng: &mut dyn RngCore,
    ) -> Result<Measurement> {
        (**self).measure(p, forced, rng)
    }

    fn peek(&self, p: &PauliString) -> Result<Option<Sign>> {
        (**self).peek(p)
    }

    fn append_qubit(&mut self) -> Result<()> {
        (**self).append_qubit()
    }

    fn discard_qubit(&mut self, q: usize) -> Result<()> {
        (**self).discard_qubit(q)
    }
}

/// Where measurement outcomes come from: a queue of forced values, consumed
/// first, then a seeded generator.
#[derive(Clone, Debug)]
pub struct Outcomes {
    rng: ChaCha8Rng,
    forced: VecDeque<Sign>,
    record: Vec<Sign>,
}

impl Outcomes {
    pub fn seeded(seed: u64) -> Self {
        Outcomes {
            rng: ChaCha8Rng::seed_from_u64(seed),
            forced: VecDeque::new(),
            record: Vec::new(),
        }
    }

    /// Replays a recorded outcome list; measurements past its end fall back
    /// to a generator seeded with 0.
    pub fn replay(outcomes: impl IntoIterator<Item = Sign>) -> Self {
        let mut o = Outcomes::seeded(0);
        o.forced = outcomes.into_iter().collect();
        o
    }

    pub fn push_forced(&mut self, s: Sign) {
        self.forced.push_back(s);
    }

    /// Every outcome returned so far, in order.
    pub fn record(&self) -> &[Sign] {
        &self.record
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn measure<S: Simulator + ?Sized>(
        &mut self,
        sim: &mut S,
        p: &PauliString,
    ) -> Result<Measurement> {
        let forced = self.forced.pop_front();
        let m = sim.measure(p, forced, &mut self.rng)?;
        self.record.push(m.outcome);
        Ok(m)
    }
}

/// Runs `c` on `sim`. `|+⟩` inits are prepared with `H` on the assumption the
/// register starts in `|0⟩`; `L<i>` inputs are left as they are.
pub fn run_circuit<S: Simulator + ?Sized>(
    sim: &mut S,
    c: &Circuit,
    outcomes: &mut Outcomes,
) -> Result<Vec<Measurement>> {
    if c.num_qubits() != sim.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "circuit on {} qubits, register has {}",
            c.num_qubits(),
            sim.num_qubits()
        )));
    }
    for (q, init) in c.init().iter().enumerate() {
        if *init == QubitInit::Plus {
            sim.apply_gate(&Gate::h(q))?;
        }
    }
    let n = c.num_qubits();
    let mut record = Vec::new();
    for g in c.gates() {
        let p = match g {
            Gate::Mx { qubit } => PauliString::single(n, *qubit, Pauli::X),
            Gate::Mz { qubit } => PauliString::single(n, *qubit, Pauli::Z),
            Gate::Mpp { pauli } => pauli.clone(),
            _ => {
                sim.apply_gate(g)?;
                continue;
            }
        };
        record.push(outcomes.measure(sim, &p)?);
    }
    Ok(record)
}

/// Indices of `stabilizers` that do not read a deterministic `+1`.
pub fn violated_stabilizers<S: Simulator + ?Sized>(
    sim: &S,
    stabilizers: &[PauliString],
) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for (i, s) in stabilizers.iter().enumerate() {
        if sim.peek(s)? != Some(Sign::Plus) {
            bad.push(i);
        }
    }
    Ok(bad)
}
