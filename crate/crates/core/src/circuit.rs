//! Gate-level circuits and their line-oriented text format.
//!
//! ```text
//! # three-body encoder
//! QUBITS 3
//! INIT 0 L1
//! INIT 1 L2
//! INIT 2 0
//! CNOT 0 2
//! CNOT 1 2
//! ```
//!
//! `INIT q L<i>` marks qubit `q` as the input of logical `i`, numbered from 1
//! like rendered labels. Qubits without an `INIT` line start in `|0⟩`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::DEFAULT_LABEL_OFFSET;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Angles closer than this to a multiple of π/2 are treated as Clifford.
pub const CLIFFORD_ANGLE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "UPPERCASE")]
pub enum Gate {
    Cnot { control: usize, target: usize },
    H { qubit: usize },
    S { qubit: usize },
    X { qubit: usize },
    Z { qubit: usize },
    /// `exp(-i angle/2 Z)`
    Rz { angle: f64, qubit: usize },
    Mx { qubit: usize },
    Mz { qubit: usize },
    Mpp { pauli: PauliString },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn h(qubit: usize) -> Self {
        Gate::H { qubit }
    }

    pub fn s(qubit: usize) -> Self {
        Gate::S { qubit }
    }

    pub fn x(qubit: usize) -> Self {
        Gate::X { qubit }
    }

    pub fn z(qubit: usize) -> Self {
        Gate::Z { qubit }
    }

    pub fn rz(angle: f64, qubit: usize) -> Self {
        Gate::Rz { angle, qubit }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Cnot { .. } => "CNOT",
            Gate::H { .. } => "H",
            Gate::S { .. } => "S",
            Gate::X { .. } => "X",
            Gate::Z { .. } => "Z",
            Gate::Rz { .. } => "RZ",
            Gate::Mx { .. } => "MX",
            Gate::Mz { .. } => "MZ",
            Gate::Mpp { .. } => "MPP",
        }
    }

    /// Qubits touched, control before target.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::H { qubit }
            | Gate::S { qubit }
            | Gate::X { qubit }
            | Gate::Z { qubit }
            | Gate::Rz { qubit, .. }
            | Gate::Mx { qubit }
            | Gate::Mz { qubit } => vec![*qubit],
            Gate::Mpp { pauli } => pauli.support(),
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::Mx { .. } | Gate::Mz { .. } | Gate::Mpp { .. })
    }

    /// Unitary and in the Clifford group. `RZ` qualifies at multiples of π/2.
    pub fn is_clifford_unitary(&self) -> bool {
        match self {
            Gate::Rz { angle, .. } => quarter_turns(*angle).is_some(),
            g => !g.is_measurement(),
        }
    }

    /// Copy with every qubit index passed through `f`, on an `n`-qubit register.
    pub fn remapped(&self, n: usize, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::H { qubit } => Gate::H { qubit: f(*qubit) },
            Gate::S { qubit } => Gate::S { qubit: f(*qubit) },
            Gate::X { qubit } => Gate::X { qubit: f(*qubit) },
            Gate::Z { qubit } => Gate::Z { qubit: f(*qubit) },
            Gate::Rz { angle, qubit } => Gate::Rz {
                angle: *angle,
                qubit: f(*qubit),
            },
            Gate::Mx { qubit } => Gate::Mx { qubit: f(*qubit) },
            Gate::Mz { qubit } => Gate::Mz { qubit: f(*qubit) },
            Gate::Mpp { pauli } => {
                let mut out = PauliString::identity(n);
                for q in pauli.support() {
                    out.set_pauli(f(q), pauli.pauli(q));
                }
                out.set_sign(pauli.sign());
                Gate::Mpp { pauli: out }
            }
        }
    }
}

/// `angle / (π/2)` reduced mod 4 when the angle is a multiple of π/2.
pub fn quarter_turns(angle: f64) -> Option<u8> {
    let t = angle / FRAC_PI_2;
    let r = t.round();
    if ((t - r) * FRAC_PI_2).abs() <= CLIFFORD_ANGLE_TOL {
        Some(r.rem_euclid(4.0) as u8)
    } else {
        None
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Rz { angle, qubit } => write!(f, "RZ {angle} {qubit}"),
            Gate::Mpp { pauli } => write!(f, "MPP {}", pauli.to_product_string()),
            g => write!(f, "{} {}", g.name(), g.qubits()[0]),
        }
    }
}

/// Initial state of a qubit before the first gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum QubitInit {
    #[default]
    Zero,
    Plus,
    /// Carries the input of logical qubit `i` (0-based).
    Logical(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    init: Vec<QubitInit>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            init: vec![QubitInit::Zero; num_qubits],
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn init(&self) -> &[QubitInit] {
        &self.init
    }

    pub fn set_init(&mut self, qubit: usize, init: QubitInit) -> Result<()> {
        self.check_qubit(qubit)?;
        self.init[qubit] = init;
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        match &gate {
            Gate::Cnot { control, target } if control == target => {
                return Err(Error::OutOfRange(format!("CNOT with control = target = {control}")));
            }
            Gate::Mpp { pauli } if pauli.num_qubits() != self.num_qubits => {
                return Err(Error::DimensionMismatch(format!(
                    "MPP on {} qubits in a {}-qubit circuit",
                    pauli.num_qubits(),
                    self.num_qubits
                )));
            }
            Gate::Rz { angle, .. } if !angle.is_finite() => {
                return Err(Error::OutOfRange(format!("non-finite angle {angle}")));
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn is_clifford_unitary(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford_unitary)
    }

    /// Logical inputs as `(qubit, logical)` pairs, ascending by qubit.
    pub fn logical_inputs(&self) -> Vec<(usize, usize)> {
        self.init
            .iter()
            .enumerate()
            .filter_map(|(q, i)| match i {
                QubitInit::Logical(l) => Some((q, *l)),
                _ => None,
            })
            .collect()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::OutOfRange(format!(
                "qubit {q} in a {}-qubit circuit",
                self.num_qubits
            )));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let op = parts[0].to_ascii_uppercase();
            let arg = |i: usize| -> Result<&str> {
                parts
                    .get(i)
                    .copied()
                    .ok_or_else(|| err(format!("{op} expects more arguments")))
            };
            let qubit = |i: usize| -> Result<usize> {
                let a = arg(i)?;
                a.parse().map_err(|_| err(format!("bad qubit index '{a}'")))
            };
            let expect_args = |count: usize| -> Result<()> {
                if parts.len() != count + 1 {
                    return Err(err(format!("{op} takes {count} argument(s)")));
                }
                Ok(())
            };

            if op == "QUBITS" {
                expect_args(1)?;
                if circuit.is_some() {
                    return Err(err("duplicate QUBITS header".into()));
                }
                circuit = Some(Circuit::new(qubit(1)?));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err("QUBITS header must come first".into()))?;
            let wrap = |e: Error| match e {
                Error::Parse { msg, .. } => err(msg),
                other => err(other.to_string()),
            };
            let gate = match op.as_str() {
                "INIT" => {
                    expect_args(2)?;
                    let q = qubit(1)?;
                    let state = match arg(2)? {
                        "0" => QubitInit::Zero,
                        "+" => QubitInit::Plus,
                        s if s.starts_with('L') => {
                            let i: usize = s[1..]
                                .parse()
                                .map_err(|_| err(format!("bad logical input '{s}'")))?;
                            let i = i
                                .checked_sub(DEFAULT_LABEL_OFFSET)
                                .ok_or_else(|| err(format!("logical inputs start at L{DEFAULT_LABEL_OFFSET}")))?;
                            QubitInit::Logical(i)
                        }
                        s => return Err(err(format!("unknown initial state '{s}'"))),
                    };
                    c.set_init(q, state).map_err(wrap)?;
                    continue;
                }
                "CNOT" => {
                    expect_args(2)?;
                    Gate::cnot(qubit(1)?, qubit(2)?)
                }
                "H" | "S" | "X" | "Z" | "MX" | "MZ" => {
                    expect_args(1)?;
                    let q = qubit(1)?;
                    match op.as_str() {
                        "H" => Gate::h(q),
                        "S" => Gate::s(q),
                        "X" => Gate::x(q),
                        "Z" => Gate::z(q),
                        "MX" => Gate::Mx { qubit: q },
                        _ => Gate::Mz { qubit: q },
                    }
                }
                "RZ" => {
                    expect_args(2)?;
                    let a = arg(1)?;
                    let angle: f64 = a.parse().map_err(|_| err(format!("bad angle '{a}'")))?;
                    Gate::rz(angle, qubit(2)?)
                }
                "MPP" => {
                    expect_args(1)?;
                    let pauli = PauliString::parse_product(arg(1)?, c.num_qubits).map_err(wrap)?;
                    Gate::Mpp { pauli }
                }
                other => return Err(err(format!("unknown instruction '{other}'"))),
            };
            c.push(gate).map_err(wrap)?;
        }
        circuit.ok_or(Error::Parse {
            line: 0,
            msg: "missing QUBITS header".into(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.num_qubits);
        for (q, init) in self.init.iter().enumerate() {
            match init {
                QubitInit::Zero => {}
                QubitInit::Plus => out.push_str(&format!("INIT {q} +\n")),
                QubitInit::Logical(i) => {
                    out.push_str(&format!("INIT {q} L{}\n", i + DEFAULT_LABEL_OFFSET))
                }
            }
        }
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "# encoder\nQUBITS 4\nINIT 0 L1\nINIT 1 L2\nINIT 3 +\nCNOT 0 2\ncnot 1 2  # lower case ok\nH 3\nS 3\nRZ 0.3 3\nMX 3\nMZ 2\nMPP Z0*Z1*Z2\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.num_qubits(), 4);
        assert_eq!(c.len(), 8);
        assert_eq!(c.init()[1], QubitInit::Logical(1));
        assert_eq!(c.init()[3], QubitInit::Plus);
        assert_eq!(c.logical_inputs(), vec![(0, 0), (1, 1)]);
        let again = Circuit::parse(&c.to_text()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = Circuit::parse("QUBITS 2\nCNOT 0 5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(matches!(Circuit::parse("H 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Circuit::parse("QUBITS 2\nFOO 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Circuit::parse("QUBITS 2\nRZ x 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(Circuit::parse("QUBITS 2\nINIT 0 L0\n"), Err(Error::Parse { .. })));
        assert!(matches!(Circuit::parse("QUBITS 2\nCNOT 1 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(Circuit::parse("# nothing\n"), Err(Error::Parse { line: 0, .. })));
    }

    #[test]
    fn clifford_classification() {
        use std::f64::consts::PI;
        assert!(Gate::rz(PI / 2.0, 0).is_clifford_unitary());
        assert!(Gate::rz(-PI, 0).is_clifford_unitary());
        assert!(!Gate::rz(PI / 4.0, 0).is_clifford_unitary());
        assert!(!Gate::Mz { qubit: 0 }.is_clifford_unitary());
        assert_eq!(quarter_turns(3.0 * PI / 2.0), Some(3));
        assert_eq!(quarter_turns(-PI / 2.0), Some(3));
        assert_eq!(quarter_turns(0.3), None);
    }
}
