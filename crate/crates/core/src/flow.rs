//! Z-basis label tracking through encoding circuits.
//!
//! A physical Pauli `P` applied after an encoder `C` acts like `C†PC` applied
//! before it. For CNOT-only encoders the image of a physical `Z_q` is a
//! Z-string; factors on `|0⟩` ancillas act trivially and drop out, and the
//! logical inputs that keep a `Z` form the label of `q`.

use crate::circuit::{quarter_turns, Circuit, Gate, QubitInit};
use crate::code::{ClassicalParityCode, LabelAssignment, ParityLabel};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::pauli::{PauliString, Sign};

/// In-place update `P -> G P G†`.
pub fn conjugate_forward_gate(p: &mut PauliString, gate: &Gate) -> Result<()> {
    conjugate_gate(p, gate, false)
}

/// In-place update `P -> G† P G`.
pub fn conjugate_backward_gate(p: &mut PauliString, gate: &Gate) -> Result<()> {
    conjugate_gate(p, gate, true)
}

fn conjugate_gate(p: &mut PauliString, gate: &Gate, inverse: bool) -> Result<()> {
    match *gate {
        Gate::Cnot { control, target } => {
            let (xc, zc) = (p.x_bits().get(control), p.z_bits().get(control));
            let (xt, zt) = (p.x_bits().get(target), p.z_bits().get(target));
            let flip = xc && zt && !(xt ^ zc);
            let (x, z) = parts_mut(p);
            x.set(target, xt ^ xc);
            z.set(control, zc ^ zt);
            if flip {
                negate(p);
            }
        }
        Gate::H { qubit } => {
            let (x, z) = (p.x_bits().get(qubit), p.z_bits().get(qubit));
            let (xs, zs) = parts_mut(p);
            xs.set(qubit, z);
            zs.set(qubit, x);
            if x && z {
                negate(p);
            }
        }
        Gate::S { qubit } => apply_s(p, qubit, inverse),
        Gate::X { qubit } => {
            if p.z_bits().get(qubit) {
                negate(p);
            }
        }
        Gate::Z { qubit } => {
            if p.x_bits().get(qubit) {
                negate(p);
            }
        }
        Gate::Rz { angle, qubit } => {
            let turns = quarter_turns(angle).ok_or_else(|| Error::NonClifford(gate.to_string()))?;
            for _ in 0..turns {
                apply_s(p, qubit, inverse);
            }
        }
        Gate::Mx { .. } | Gate::Mz { .. } | Gate::Mpp { .. } => {
            return Err(Error::NonClifford(gate.to_string()));
        }
    }
    Ok(())
}

/// `S X S† = Y`, `S Y S† = -X`; the inverse maps `X -> -Y`, `Y -> X`.
fn apply_s(p: &mut PauliString, qubit: usize, inverse: bool) {
    let (x, z) = (p.x_bits().get(qubit), p.z_bits().get(qubit));
    if !x {
        return;
    }
    let (_, zs) = parts_mut(p);
    zs.set(qubit, !z);
    if z != inverse {
        negate(p);
    }
}

fn negate(p: &mut PauliString) {
    p.set_sign(p.sign().flipped());
}

fn parts_mut(p: &mut PauliString) -> (&mut BitVector, &mut BitVector) {
    p.bits_mut()
}

/// `C† P C`: the pre-circuit operator equivalent to `P` applied after `c`.
pub fn conjugate_pauli(c: &Circuit, p: &PauliString) -> Result<PauliString> {
    check_size(c, p)?;
    let mut out = p.clone();
    for g in c.gates().iter().rev() {
        conjugate_backward_gate(&mut out, g)?;
    }
    Ok(out)
}

/// `C P C†`: where a Pauli inserted before `c` ends up after it.
pub fn conjugate_forward(c: &Circuit, p: &PauliString) -> Result<PauliString> {
    check_size(c, p)?;
    let mut out = p.clone();
    for g in c.gates() {
        conjugate_forward_gate(&mut out, g)?;
    }
    Ok(out)
}

fn check_size(c: &Circuit, p: &PauliString) -> Result<()> {
    if p.num_qubits() != c.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Pauli on {} qubits, circuit on {}",
            p.num_qubits(),
            c.num_qubits()
        )));
    }
    Ok(())
}

/// Labels of every physical qubit after a CNOT-style Z-basis encoder.
///
/// Qubits initialised as `L<i>` are the logical inputs; `|0⟩` qubits are
/// ancillas whose Z factors are dropped.
pub fn labels_from_encoding_circuit(c: &Circuit) -> Result<LabelAssignment> {
    let inputs = c.logical_inputs();
    let k = inputs.len();
    let mut logical_of = vec![None; c.num_qubits()];
    let mut seen = vec![false; k];
    for &(q, i) in &inputs {
        if i >= k || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidSeeds(format!(
                "logical inputs must be numbered 1..={k} without repeats"
            )));
        }
        logical_of[q] = Some(i);
    }

    let n = c.num_qubits();
    let mut labels = Vec::with_capacity(n);
    for q in 0..n {
        let image = conjugate_pauli(c, &PauliString::z_on(n, &[q]))?;
        if let Some(bad) = image.x_bits().first_one() {
            return Err(Error::ResidualX {
                source_qubit: q,
                qubit: bad,
            });
        }
        let mut label = Vec::new();
        for a in image.z_bits().iter_ones() {
            match (c.init()[a], logical_of[a]) {
                (_, Some(i)) => label.push(i),
                (QubitInit::Zero, None) => {}
                _ => {
                    return Err(Error::Unsupported(format!(
                        "image of Z{q} acts on |+⟩ qubit {a}; only |0⟩ ancillas are traced out"
                    )))
                }
            }
        }
        labels.push(ParityLabel::new(label)?);
    }
    Ok(LabelAssignment::from_labels(k, labels))
}

/// Stabilizers of the encoded state: images `C Z_a C†` of every `|0⟩`
/// ancilla and `C X_a C†` of every `|+⟩` qubit.
pub fn encoded_stabilizers(c: &Circuit) -> Result<Vec<PauliString>> {
    let n = c.num_qubits();
    let mut out = Vec::new();
    for (q, init) in c.init().iter().enumerate() {
        let p = match init {
            QubitInit::Zero => PauliString::z_on(n, &[q]),
            QubitInit::Plus => PauliString::x_on(n, &[q]),
            QubitInit::Logical(_) => continue,
        };
        out.push(conjugate_forward(c, &p)?);
    }
    Ok(out)
}

/// Z-type code defined by an encoder's ancilla stabilizers.
pub fn code_from_encoder(c: &Circuit) -> Result<ClassicalParityCode> {
    let stabs = encoded_stabilizers(c)?;
    let mut supports = Vec::with_capacity(stabs.len());
    for s in stabs {
        if !s.x_bits().is_zero() || s.sign() != Sign::Plus {
            return Err(Error::Unsupported(format!(
                "encoder stabilizer {s} is not a positive Z-string"
            )));
        }
        supports.push(s.z_bits().ones());
    }
    ClassicalParityCode::new(c.num_qubits(), supports)
}

/// Fan-out encoder for a labelled code: every non-base qubit starts in `|0⟩`
/// and receives a CNOT from the base qubit of each index in its label.
pub fn canonical_encoder(assignment: &LabelAssignment) -> Result<Circuit> {
    let n = assignment.n();
    let k = assignment.k();
    let mut base = vec![None; k];
    for (&q, &i) in assignment.seeds() {
        base[i] = Some(q);
    }
    let mut c = Circuit::new(n);
    for (i, q) in base.iter().enumerate() {
        let q = q.ok_or_else(|| {
            Error::Unsupported(format!("logical {i} has no base qubit to encode from"))
        })?;
        c.set_init(q, QubitInit::Logical(i))?;
    }
    for q in 0..n {
        if assignment.seeds().contains_key(&q) {
            continue;
        }
        for &i in assignment.label(q).indices() {
            c.push(Gate::cnot(base[i].expect("checked above"), q))?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{derive_labels, lhz_layout, validate_labels};

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn two_input_encoder() -> Circuit {
        let mut c = Circuit::new(3);
        c.set_init(0, QubitInit::Logical(0)).unwrap();
        c.set_init(1, QubitInit::Logical(1)).unwrap();
        c.extend([Gate::cnot(0, 2), Gate::cnot(1, 2)]).unwrap();
        c
    }

    #[test]
    fn cnot_pushes_z_to_control() {
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1)]).unwrap();
        assert_eq!(conjugate_pauli(&c, &p("_Z")).unwrap(), p("ZZ"));
        assert_eq!(conjugate_pauli(&c, &p("X_")).unwrap(), p("XX"));
        assert_eq!(conjugate_pauli(&c, &p("Z_")).unwrap(), p("Z_"));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3);
        assert_eq!(conjugate_pauli(&c, &p("-XYZ")).unwrap(), p("-XYZ"));
    }

    #[test]
    fn fan_in_encoder_image() {
        let c = two_input_encoder();
        assert_eq!(conjugate_pauli(&c, &p("__Z")).unwrap(), p("ZZZ"));
    }

    #[test]
    fn single_qubit_rules() {
        let h = Circuit::from_gates(1, vec![Gate::h(0)]).unwrap();
        assert_eq!(conjugate_forward(&h, &p("X")).unwrap(), p("Z"));
        assert_eq!(conjugate_forward(&h, &p("Y")).unwrap(), p("-Y"));
        let s = Circuit::from_gates(1, vec![Gate::s(0)]).unwrap();
        assert_eq!(conjugate_forward(&s, &p("X")).unwrap(), p("Y"));
        assert_eq!(conjugate_forward(&s, &p("Y")).unwrap(), p("-X"));
        assert_eq!(conjugate_pauli(&s, &p("X")).unwrap(), p("-Y"));
        assert_eq!(conjugate_pauli(&s, &p("Y")).unwrap(), p("X"));
        let x = Circuit::from_gates(1, vec![Gate::x(0)]).unwrap();
        assert_eq!(conjugate_forward(&x, &p("Z")).unwrap(), p("-Z"));
        let z = Circuit::from_gates(1, vec![Gate::z(0)]).unwrap();
        assert_eq!(conjugate_forward(&z, &p("Y")).unwrap(), p("-Y"));
        let rz = Circuit::from_gates(1, vec![Gate::rz(std::f64::consts::PI, 0)]).unwrap();
        assert_eq!(conjugate_forward(&rz, &p("X")).unwrap(), p("-X"));
        let t = Circuit::from_gates(1, vec![Gate::rz(0.3, 0)]).unwrap();
        assert!(matches!(conjugate_forward(&t, &p("X")), Err(Error::NonClifford(_))));
    }

    #[test]
    fn cnot_sign_rule() {
        // CNOT (Y ⊗ Y) CNOT = -X ⊗ Z
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1)]).unwrap();
        assert_eq!(conjugate_forward(&c, &p("YY")).unwrap(), p("-XZ"));
    }

    #[test]
    fn two_input_encoder_labels() {
        let a = labels_from_encoding_circuit(&two_input_encoder()).unwrap();
        assert_eq!(a.rendered(1), vec![vec![1], vec![2], vec![1, 2]]);
    }

    #[test]
    fn no_gates_gives_identity_labels() {
        let mut c = Circuit::new(3);
        for q in 0..3 {
            c.set_init(q, QubitInit::Logical(q)).unwrap();
        }
        let a = labels_from_encoding_circuit(&c).unwrap();
        assert_eq!(a.labels(), &(0..3).map(ParityLabel::singleton).collect::<Vec<_>>());
    }

    #[test]
    fn lhz_encoder_matches_derived_labels() {
        let code = lhz_layout(3).unwrap();
        let derived = derive_labels(&code.clone().without_labels(), None).unwrap();
        let enc = canonical_encoder(&derived).unwrap();
        let traced = labels_from_encoding_circuit(&enc).unwrap();
        assert_eq!(traced.labels(), derived.labels());
        let enc_code = code_from_encoder(&enc).unwrap();
        assert!(validate_labels(&enc_code, &traced).valid);
    }

    #[test]
    fn residual_x_is_rejected() {
        let mut c = Circuit::new(2);
        c.set_init(0, QubitInit::Logical(0)).unwrap();
        c.push(Gate::h(1)).unwrap();
        assert!(matches!(
            labels_from_encoding_circuit(&c),
            Err(Error::ResidualX { source_qubit: 1, qubit: 1 })
        ));
    }
}
