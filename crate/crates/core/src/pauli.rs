//! Signed Pauli strings in symplectic form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A ±1 value: operator signs and measurement eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn from_bit(minus: bool) -> Self {
        if minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        Sign::from_bit(!self.is_minus())
    }

    pub fn times(self, other: Sign) -> Sign {
        Sign::from_bit(self.is_minus() ^ other.is_minus())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.to_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!("sign must be 1 or -1, got {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

/// Phase exponent (power of `i`, mod 4) picked up when multiplying the
/// unsigned Paulis `(x1, z1) · (x2, z2)`, word by word.
pub(crate) fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u32 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for i in 0..x1.len() {
        let (a, b, c, d) = (x1[i], z1[i], x2[i], z2[i]);
        let y1 = a & b;
        let xo1 = a & !b;
        let zo1 = !a & b;
        let y2 = c & d;
        let xo2 = c & !d;
        let zo2 = !c & d;
        plus += ((y1 & zo2) | (xo1 & y2) | (zo1 & xo2)).count_ones();
        minus += ((y1 & xo2) | (xo1 & zo2) | (zo1 & y2)).count_ones();
    }
    (plus + 3 * minus) % 4
}

/// An n-qubit Pauli operator `sign · ⊗ P_q`, with `(x, z) = (1, 1)` meaning `Y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVector,
    z: BitVector,
    sign: Sign,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
            sign: Sign::Plus,
        }
    }

    pub fn from_parts(x: BitVector, z: BitVector, sign: Sign) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch(format!(
                "x part has {} qubits, z part has {}",
                x.len(),
                z.len()
            )));
        }
        Ok(PauliString { x, z, sign })
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        Self::from_sparse(n, &[(qubit, p)])
    }

    /// Product of single-qubit Paulis. Panics on out-of-range or repeated qubits.
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in terms {
            assert!(s.pauli(q) == Pauli::I, "qubit {q} repeated in Pauli string");
            s.set_pauli(q, p);
        }
        s
    }

    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        PauliString {
            x: BitVector::zeros(n),
            z: BitVector::from_indices(n, qubits),
            sign: Sign::Plus,
        }
    }

    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        PauliString {
            x: BitVector::from_indices(n, qubits),
            z: BitVector::zeros(n),
            sign: Sign::Plus,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    pub(crate) fn bits_mut(&mut self) -> (&mut BitVector, &mut BitVector) {
        (&mut self.x, &mut self.z)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn set_sign(&mut self, sign: Sign) {
        self.sign = sign;
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.sign = out.sign.flipped();
        out
    }

    pub fn pauli(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set_pauli(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x.xor(&self.z).weight() + self.x.and(&self.z).weight()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s = self.x.ones();
        s.extend(self.z.iter_ones());
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Symplectic inner product is zero.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// `self · other`. Returns `None` when the operators anticommute, since the
    /// product then carries an imaginary phase.
    pub fn product(&self, other: &PauliString) -> Option<PauliString> {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let phase = product_phase(self.x.words(), self.z.words(), other.x.words(), other.z.words());
        if phase % 2 == 1 {
            return None;
        }
        let sign = self.sign.times(other.sign).times(Sign::from_bit(phase == 2));
        Some(PauliString {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            sign,
        })
    }

    /// Copy with an extra identity qubit appended.
    pub fn extended(&self, extra: usize) -> Self {
        PauliString {
            x: self.x.extended(extra),
            z: self.z.extended(extra),
            sign: self.sign,
        }
    }

    /// Copy acting on `n` qubits with qubit `q` mapped to `offset + q`.
    pub fn embedded(&self, n: usize, offset: usize) -> Self {
        let mut out = PauliString::identity(n);
        for q in self.support() {
            out.set_pauli(q + offset, self.pauli(q));
        }
        out.sign = self.sign;
        out
    }

    /// Restriction to qubits `range`, renumbered from zero; sign dropped.
    pub fn restricted(&self, range: std::ops::Range<usize>) -> Self {
        let mut out = PauliString::identity(range.len());
        for q in range.clone() {
            out.set_pauli(q - range.start, self.pauli(q));
        }
        out
    }

    /// Product notation used by the circuit format, e.g. `-X0*Z3`.
    pub fn to_product_string(&self) -> String {
        let body: Vec<String> = self
            .support()
            .into_iter()
            .map(|q| format!("{:?}{q}", self.pauli(q)))
            .collect();
        let body = if body.is_empty() { "I".to_string() } else { body.join("*") };
        match self.sign {
            Sign::Plus => body,
            Sign::Minus => format!("-{body}"),
        }
    }

    /// Parses product notation (`Z0*Z1*Z2`, optional leading sign) on `n` qubits.
    pub fn parse_product(s: &str, n: usize) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        let s = s.trim();
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (Sign::Minus, &s[1..]),
            Some(b'+') => (Sign::Plus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let mut out = PauliString::identity(n);
        out.sign = sign;
        if body == "I" {
            return Ok(out);
        }
        for term in body.split('*') {
            let term = term.trim();
            let mut chars = term.chars();
            let p = match chars.next() {
                Some('X') => Pauli::X,
                Some('Y') => Pauli::Y,
                Some('Z') => Pauli::Z,
                _ => return Err(bad(format!("bad Pauli term '{term}'"))),
            };
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| bad(format!("bad qubit index in '{term}'")))?;
            if q >= n {
                return Err(bad(format!("qubit {q} out of range for {n} qubits")));
            }
            if out.pauli(q) != Pauli::I {
                return Err(bad(format!("qubit {q} repeated in '{s}'")));
            }
            out.set_pauli(q, p);
        }
        Ok(out)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign.is_minus() { "-" } else { "+" })?;
        for q in 0..self.num_qubits() {
            f.write_str(match self.pauli(q) {
                Pauli::I => "_",
                Pauli::X => "X",
                Pauli::Y => "Y",
                Pauli::Z => "Z",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// Dense form: `+XZ_Y`, with `_` or `I` for identity.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (Sign::Minus, &s[1..]),
            Some(b'+') => (Sign::Plus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let mut out = PauliString::identity(body.chars().count());
        out.sign = sign;
        for (q, c) in body.chars().enumerate() {
            let p = match c {
                '_' | 'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unexpected character '{other}' in Pauli string"),
                    })
                }
            };
            out.set_pauli(q, p);
        }
        Ok(out)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
