//! Ordered event log of a protocol run.
//!
//! Every measurement a protocol makes appears in exactly one event, in the
//! order it was made, so [`ProtocolTrace::outcomes`] fed back through
//! [`Outcomes::replay`](crate::sim::Outcomes::replay) reproduces the run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::code::ParityLabel;
use crate::error::Result;
use crate::pauli::{PauliString, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformationKind {
    Add,
    Remove,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationStep {
    pub kind: DeformationKind,
    pub qubit: usize,
    pub label: ParityLabel,
    /// Support of the stabilizer created (add) or consumed (remove); contains `qubit`.
    pub connecting_stabilizer: Vec<usize>,
    /// Physical measurement outcome.
    pub outcome: Sign,
    /// Pauli correction triggered by the frame-adjusted outcome, on the
    /// register as it was after the measurement.
    pub correction: Option<PauliString>,
    /// Whether the correction went into the Pauli frame instead of the qubits.
    pub in_frame: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Deformation(DeformationStep),
    Gate {
        gate: Gate,
    },
    Measurement {
        pauli: PauliString,
        outcome: Sign,
        deterministic: bool,
    },
    /// One sweep over the active stabilizers; outcomes are frame-adjusted,
    /// `raw` are the physical values.
    Syndrome {
        stabilizers: Vec<Vec<usize>>,
        outcomes: Vec<Sign>,
        raw: Vec<Sign>,
    },
    Exclude {
        stabilizer: Vec<usize>,
    },
    Reactivate {
        stabilizer: Vec<usize>,
    },
    Correction {
        pauli: PauliString,
        in_frame: bool,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub protocol: String,
    pub events: Vec<TraceEvent>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl ProtocolTrace {
    pub fn new(protocol: impl Into<String>) -> Self {
        ProtocolTrace {
            protocol: protocol.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    pub fn set_meta(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("metadata is plain data");
        self.metadata.insert(key.to_string(), v);
    }

    /// Physical measurement outcomes in the order they were taken.
    pub fn outcomes(&self) -> Vec<Sign> {
        let mut out = Vec::new();
        for e in &self.events {
            match e {
                TraceEvent::Deformation(step) => out.push(step.outcome),
                TraceEvent::Measurement { outcome, .. } => out.push(*outcome),
                TraceEvent::Syndrome { raw, .. } => out.extend(raw),
                _ => {}
            }
        }
        out
    }

    pub fn deformations(&self) -> impl Iterator<Item = &DeformationStep> {
        self.events.iter().filter_map(|e| match e {
            TraceEvent::Deformation(s) => Some(s),
            _ => None,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
