//! Classical parity codes, their physical-to-logical label calculus, and
//! simulators for checking logical gate protocols on parity qubits.

pub mod circuit;
pub mod code;
pub mod deformation;
pub mod decoder;
pub mod error;
pub mod faults;
pub mod flow;
pub mod gates;
pub mod gf2;
pub mod pauli;
pub mod sim;
pub mod statevector;
pub mod tableau;
pub mod testkit;
pub mod trace;

pub use code::{ClassicalParityCode, LabelAssignment, ParityLabel};
pub use deformation::{CorrectionMode, PauliFrame, Register};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use pauli::{Pauli, PauliString, Sign};
pub use sim::{Measurement, Outcomes, Simulator};
pub use statevector::{LogicalActionReport, StateVector};
pub use tableau::StabilizerTableau;
pub use trace::{DeformationStep, ProtocolTrace, TraceEvent};
