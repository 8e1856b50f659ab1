//! Stabilizer tableau with destabilizers.
//!
//! Rows `0..n` are destabilizers and rows `n..2n` stabilizers; row `i`
//! anticommutes with row `n + i` and commutes with every other row. Bits are
//! stored row-major, one packed `x` and `z` slice per row.

use rand::RngCore;

use crate::circuit::{quarter_turns, Gate};
use crate::code::ClassicalParityCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::pauli::{product_phase, PauliString, Sign};
use crate::sim::{Measurement, Simulator};

/// Above this size the pairing invariant is not re-checked in debug builds.
const DEBUG_CHECK_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    w: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    minus: Vec<bool>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn bit(row: &[u64], q: usize) -> bool {
    (row[q / 64] >> (q % 64)) & 1 == 1
}

fn anticommutes(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> bool {
    let mut acc = 0u64;
    for i in 0..x1.len() {
        acc ^= (x1[i] & z2[i]) ^ (z1[i] & x2[i]);
    }
    acc.count_ones() % 2 == 1
}

/// Copy of a packed row of `len` bits with bit `q` removed.
fn remove_bit(row: &[u64], q: usize, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; words_for(len - 1)];
    for (j, word) in out.iter_mut().enumerate() {
        for b in 0..64 {
            let dst = j * 64 + b;
            if dst >= len - 1 {
                break;
            }
            let src = if dst < q { dst } else { dst + 1 };
            if bit(row, src) {
                *word |= 1 << b;
            }
        }
    }
    out
}

impl StabilizerTableau {
    /// `|0…0⟩` on `n` qubits.
    pub fn new(n: usize) -> Self {
        let w = words_for(n);
        let mut t = StabilizerTableau {
            n,
            w,
            x: vec![0; 2 * n * w],
            z: vec![0; 2 * n * w],
            minus: vec![false; 2 * n],
        };
        for q in 0..n {
            t.x[q * w + q / 64] |= 1 << (q % 64);
            t.z[(n + q) * w + q / 64] |= 1 << (q % 64);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn xr(&self, r: usize) -> &[u64] {
        &self.x[r * self.w..(r + 1) * self.w]
    }

    fn zr(&self, r: usize) -> &[u64] {
        &self.z[r * self.w..(r + 1) * self.w]
    }

    fn row_pauli(&self, r: usize) -> PauliString {
        let to_bv = |words: &[u64]| {
            let mut v = BitVector::zeros(self.n);
            for q in 0..self.n {
                if bit(words, q) {
                    v.set(q, true);
                }
            }
            v
        };
        PauliString::from_parts(
            to_bv(self.xr(r)),
            to_bv(self.zr(r)),
            Sign::from_bit(self.minus[r]),
        )
        .expect("row widths match")
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|r| self.row_pauli(r)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|r| self.row_pauli(r)).collect()
    }

    /// Row `h` becomes `row_h · row_i`. Imaginary phases only arise on
    /// destabilizer rows, whose signs carry no meaning.
    fn rowmul(&mut self, h: usize, i: usize) {
        debug_assert_ne!(h, i);
        let w = self.w;
        let phase = product_phase(self.xr(h), self.zr(h), self.xr(i), self.zr(i));
        for j in 0..w {
            self.x[h * w + j] ^= self.x[i * w + j];
            self.z[h * w + j] ^= self.z[i * w + j];
        }
        self.minus[h] ^= self.minus[i] ^ (phase >= 2);
    }

    fn anticommutes_with(&self, r: usize, p: &PauliString) -> bool {
        anticommutes(self.xr(r), self.zr(r), p.x_bits().words(), p.z_bits().words())
    }

    fn check_size(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "Pauli on {} qubits, tableau on {}",
                p.num_qubits(),
                self.n
            )));
        }
        Ok(())
    }

    /// Sign of `p` within the stabilizer group, given that `p` commutes with
    /// every stabilizer.
    fn deterministic_sign(&self, p: &PauliString) -> Sign {
        let w = self.w;
        let mut sx = vec![0u64; w];
        let mut sz = vec![0u64; w];
        let mut minus = false;
        for i in 0..self.n {
            if !self.anticommutes_with(i, p) {
                continue;
            }
            let r = self.n + i;
            let phase = product_phase(&sx, &sz, self.xr(r), self.zr(r));
            debug_assert_eq!(phase % 2, 0);
            for j in 0..w {
                sx[j] ^= self.x[r * w + j];
                sz[j] ^= self.z[r * w + j];
            }
            minus ^= self.minus[r] ^ (phase == 2);
        }
        debug_assert!(sx == p.x_bits().words() && sz == p.z_bits().words());
        Sign::from_bit(minus).times(p.sign())
    }

    fn first_anticommuting_stabilizer(&self, p: &PauliString) -> Option<usize> {
        (self.n..2 * self.n).find(|&r| self.anticommutes_with(r, p))
    }

    /// Measures `p`; see [`Simulator::measure`].
    pub fn measure_pauli(
        &mut self,
        p: &PauliString,
        forced: Option<Sign>,
        rng: &mut dyn RngCore,
    ) -> Result<Measurement> {
        self.check_size(p)?;
        let Some(s) = self.first_anticommuting_stabilizer(p) else {
            let outcome = self.deterministic_sign(p);
            if let Some(f) = forced {
                if f != outcome {
                    return Err(Error::ForcedContradiction {
                        forced: f.to_i8(),
                        actual: outcome.to_i8(),
                    });
                }
            }
            return Ok(Measurement {
                outcome,
                deterministic: true,
            });
        };
        let outcome = forced.unwrap_or_else(|| Sign::from_bit(rng.next_u32() & 1 == 1));
        for r in 0..2 * self.n {
            if r != s && r != s - self.n && self.anticommutes_with(r, p) {
                self.rowmul(r, s);
            }
        }
        let (w, d) = (self.w, s - self.n);
        self.x.copy_within(s * w..(s + 1) * w, d * w);
        self.z.copy_within(s * w..(s + 1) * w, d * w);
        self.minus[d] = self.minus[s];
        self.x[s * w..(s + 1) * w].copy_from_slice(p.x_bits().words());
        self.z[s * w..(s + 1) * w].copy_from_slice(p.z_bits().words());
        self.minus[s] = p.sign().times(outcome).is_minus();
        self.debug_check();
        Ok(Measurement {
            outcome,
            deterministic: false,
        })
    }

    /// Eigenvalue of `p` if it lies in the stabilizer group up to sign.
    pub fn peek_pauli(&self, p: &PauliString) -> Result<Option<Sign>> {
        self.check_size(p)?;
        Ok(match self.first_anticommuting_stabilizer(p) {
            Some(_) => None,
            None => Some(self.deterministic_sign(p)),
        })
    }

    /// Same stabilizer group, including signs.
    pub fn same_state(&self, other: &StabilizerTableau) -> bool {
        self.n == other.n
            && other
                .stabilizers()
                .iter()
                .all(|s| self.peek_pauli(s) == Ok(Some(Sign::Plus)))
    }

    /// Every row commutes with every other row except its partner.
    pub fn check_invariants(&self) -> bool {
        let n = self.n;
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                let anti = anticommutes(self.xr(a), self.zr(a), self.xr(b), self.zr(b));
                if anti != (a < n && b == a + n) {
                    return false;
                }
            }
        }
        true
    }

    fn debug_check(&self) {
        if cfg!(debug_assertions) && self.n <= DEBUG_CHECK_LIMIT {
            assert!(self.check_invariants(), "tableau pairing broken");
        }
    }

    fn for_each_row(&mut self, mut f: impl FnMut(&mut [u64], &mut [u64], &mut bool)) {
        let w = self.w;
        for r in 0..2 * self.n {
            f(
                &mut self.x[r * w..(r + 1) * w],
                &mut self.z[r * w..(r + 1) * w],
                &mut self.minus[r],
            );
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::OutOfRange(format!("qubit {q} of {}", self.n)));
        }
        Ok(())
    }

    pub fn h(&mut self, q: usize) {
        let (i, m) = (q / 64, 1u64 << (q % 64));
        self.for_each_row(|x, z, s| {
            let (xb, zb) = (x[i] & m, z[i] & m);
            *s ^= xb != 0 && zb != 0;
            x[i] = (x[i] & !m) | zb;
            z[i] = (z[i] & !m) | xb;
        });
    }

    pub fn s(&mut self, q: usize) {
        let (i, m) = (q / 64, 1u64 << (q % 64));
        self.for_each_row(|x, z, s| {
            if x[i] & m != 0 {
                *s ^= z[i] & m != 0;
                z[i] ^= m;
            }
        });
    }

    pub fn x(&mut self, q: usize) {
        let (i, m) = (q / 64, 1u64 << (q % 64));
        self.for_each_row(|_, z, s| *s ^= z[i] & m != 0);
    }

    pub fn z(&mut self, q: usize) {
        let (i, m) = (q / 64, 1u64 << (q % 64));
        self.for_each_row(|x, _, s| *s ^= x[i] & m != 0);
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let (ci, cm, cb) = (c / 64, 1u64 << (c % 64), c % 64);
        let (ti, tm, tb) = (t / 64, 1u64 << (t % 64), t % 64);
        self.for_each_row(|x, z, s| {
            let xc = (x[ci] >> cb) & 1;
            let zc = (z[ci] >> cb) & 1;
            let xt = (x[ti] >> tb) & 1;
            let zt = (z[ti] >> tb) & 1;
            *s ^= xc & zt & (xt ^ zc ^ 1) == 1;
            if xc == 1 {
                x[ti] ^= tm;
            }
            if zt == 1 {
                z[ci] ^= cm;
            }
        });
    }
}

impl Simulator for StabilizerTableau {
    fn num_qubits(&self) -> usize {
        self.n
    }

    /// Clifford gates only; `RZ` is accepted at multiples of π/2.
    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        match *gate {
            Gate::Cnot { control, target } => self.cnot(control, target),
            Gate::H { qubit } => self.h(qubit),
            Gate::S { qubit } => self.s(qubit),
            Gate::X { qubit } => self.x(qubit),
            Gate::Z { qubit } => self.z(qubit),
            Gate::Rz { angle, qubit } => {
                let turns = quarter_turns(angle).ok_or_else(|| Error::UnsupportedGate {
                    gate: gate.to_string(),
                })?;
                for _ in 0..turns {
                    self.s(qubit);
                }
            }
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
        self.measure_pauli(p, forced, rng)
    }

    fn peek(&self, p: &PauliString) -> Result<Option<Sign>> {
        self.peek_pauli(p)
    }

    fn append_qubit(&mut self) -> Result<()> {
        let (n, w) = (self.n, self.w);
        let (n2, w2) = (n + 1, words_for(n + 1));
        let mut x = vec![0u64; 2 * n2 * w2];
        let mut z = vec![0u64; 2 * n2 * w2];
        let mut minus = vec![false; 2 * n2];
        for r in 0..2 * n {
            let r2 = if r < n { r } else { r + 1 };
            x[r2 * w2..r2 * w2 + w].copy_from_slice(self.xr(r));
            z[r2 * w2..r2 * w2 + w].copy_from_slice(self.zr(r));
            minus[r2] = self.minus[r];
        }
        x[n * w2 + n / 64] |= 1 << (n % 64);
        z[(n2 + n) * w2 + n / 64] |= 1 << (n % 64);
        *self = StabilizerTableau {
            n: n2,
            w: w2,
            x,
            z,
            minus,
        };
        self.debug_check();
        Ok(())
    }

    fn discard_qubit(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let n = self.n;
        if self.peek_pauli(&PauliString::z_on(n, &[q]))? != Some(Sign::Plus) {
            return Err(Error::ProtocolViolation(format!(
                "qubit {q} is not in |0⟩ and cannot be discarded"
            )));
        }
        // Make stabilizer p equal Z_q and clear qubit q from every other row.
        let t: Vec<usize> = (0..n).filter(|&i| bit(self.xr(i), q)).collect();
        let p = t[0];
        for &i in &t[1..] {
            self.rowmul(n + p, n + i);
            self.rowmul(i, p);
        }
        for i in 0..n {
            if i != p && bit(self.zr(n + i), q) {
                self.rowmul(n + i, n + p);
                self.rowmul(p, i);
            }
        }
        for i in 0..n {
            if i != p && bit(self.zr(i), q) {
                self.rowmul(i, n + p);
            }
        }
        debug_assert_eq!(self.row_pauli(n + p), PauliString::z_on(n, &[q]));

        let w2 = words_for(n - 1);
        let mut x = Vec::with_capacity(2 * (n - 1) * w2);
        let mut z = Vec::with_capacity(2 * (n - 1) * w2);
        let mut minus = Vec::with_capacity(2 * (n - 1));
        for r in (0..2 * n).filter(|&r| r != p && r != n + p) {
            x.extend(remove_bit(self.xr(r), q, n));
            z.extend(remove_bit(self.zr(r), q, n));
            minus.push(self.minus[r]);
        }
        *self = StabilizerTableau {
            n: n - 1,
            w: w2,
            x,
            z,
            minus,
        };
        self.debug_check();
        Ok(())
    }
}

/// Encoded computational-basis state: each qubit holds the XOR of the
/// logical bits in its label.
pub fn prepare_code_state(code: &ClassicalParityCode, logical: &[bool]) -> Result<StabilizerTableau> {
    let labels = code.labels().ok_or(Error::MissingLabels)?;
    if logical.len() != code.k() {
        return Err(Error::DimensionMismatch(format!(
            "{} logical bits for k = {}",
            logical.len(),
            code.k()
        )));
    }
    let mut t = StabilizerTableau::new(code.n());
    for (q, label) in labels.iter().enumerate() {
        if label.indices().iter().filter(|&&i| logical[i]).count() % 2 == 1 {
            t.x(q);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn fresh_register() {
        let t = StabilizerTableau::new(3);
        assert_eq!(t.stabilizers(), vec![ps("+Z__"), ps("+_Z_"), ps("+__Z")]);
        assert!(t.check_invariants());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut t1 = StabilizerTableau::new(1);
        let m = t1.measure_pauli(&ps("Z"), None, &mut rng).unwrap();
        assert_eq!((m.outcome, m.deterministic), (Sign::Plus, true));
    }

    #[test]
    fn gate_images() {
        let mut t = StabilizerTableau::new(1);
        t.h(0);
        assert_eq!(t.stabilizers(), vec![ps("+X")]);
        t.s(0);
        t.s(0);
        assert_eq!(t.stabilizers(), vec![ps("-X")]);

        let mut b = StabilizerTableau::new(2);
        b.h(0);
        b.cnot(0, 1);
        assert_eq!(b.peek_pauli(&ps("XX")).unwrap(), Some(Sign::Plus));
        assert_eq!(b.peek_pauli(&ps("ZZ")).unwrap(), Some(Sign::Plus));
        assert_eq!(b.peek_pauli(&ps("YY")).unwrap(), Some(Sign::Minus));
        assert_eq!(b.peek_pauli(&ps("Z_")).unwrap(), None);
    }

    #[test]
    fn forced_and_seeded_measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = StabilizerTableau::new(1);
        t.h(0);
        let m = t.measure_pauli(&ps("Z"), Some(Sign::Plus), &mut rng).unwrap();
        assert_eq!((m.outcome, m.deterministic), (Sign::Plus, false));
        assert!(t.same_state(&StabilizerTableau::new(1)));
        assert_eq!(
            t.measure_pauli(&ps("Z"), Some(Sign::Minus), &mut rng),
            Err(Error::ForcedContradiction { forced: -1, actual: 1 })
        );

        let sample = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..16)
                .map(|_| {
                    let mut t = StabilizerTableau::new(1);
                    t.measure_pauli(&ps("X"), None, &mut rng).unwrap().outcome
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(sample(5), sample(5));
    }

    #[test]
    fn measuring_a_group_element_is_a_no_op() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut t = StabilizerTableau::new(3);
        t.h(0);
        t.cnot(0, 1);
        t.s(1);
        t.cnot(1, 2);
        let before = t.clone();
        for s in before.stabilizers() {
            let prod = s.product(&before.stabilizers()[0]).unwrap();
            let m = t.measure_pauli(&prod, None, &mut rng).unwrap();
            assert!(m.deterministic);
            assert_eq!(m.outcome, Sign::Plus);
        }
        assert!(t.same_state(&before));
    }

    #[test]
    fn random_measurement_updates_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = StabilizerTableau::new(2);
        t.h(0);
        t.cnot(0, 1);
        let m = t.measure_pauli(&ps("-XZ"), Some(Sign::Minus), &mut rng).unwrap();
        assert!(!m.deterministic);
        assert_eq!(t.peek_pauli(&ps("XZ")).unwrap(), Some(Sign::Plus));
        assert!(t.check_invariants());
    }

    #[test]
    fn append_and_discard() {
        let mut t = StabilizerTableau::new(2);
        t.h(0);
        t.cnot(0, 1);
        t.append_qubit().unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.peek_pauli(&ps("__Z")).unwrap(), Some(Sign::Plus));
        assert_eq!(t.peek_pauli(&ps("XX_")).unwrap(), Some(Sign::Plus));
        t.cnot(0, 2);
        t.cnot(1, 2);
        t.discard_qubit(2).unwrap();
        let mut bell = StabilizerTableau::new(2);
        bell.h(0);
        bell.cnot(0, 1);
        assert!(t.same_state(&bell));

        let mut u = StabilizerTableau::new(2);
        u.h(1);
        assert!(matches!(u.discard_qubit(1), Err(Error::ProtocolViolation(_))));
        u.x(0);
        u.x(0);
        u.discard_qubit(0).unwrap();
        assert_eq!(u.stabilizers(), vec![ps("+X")]);
    }

    #[test]
    fn discard_middle_qubit_of_entangled_register() {
        let mut t = StabilizerTableau::new(4);
        t.h(0);
        t.cnot(0, 3);
        t.cnot(0, 1);
        t.cnot(3, 1);
        t.s(3);
        t.discard_qubit(1).unwrap();
        let mut r = StabilizerTableau::new(3);
        r.h(0);
        r.cnot(0, 2);
        r.s(2);
        assert!(t.same_state(&r));
    }

    #[test]
    fn code_states() {
        let code = ClassicalParityCode::new(3, vec![vec![0, 1, 2]])
            .unwrap()
            .with_labels(vec![
                crate::ParityLabel::singleton(0),
                crate::ParityLabel::singleton(1),
                crate::ParityLabel::from_indices(&[0, 1]),
            ])
            .unwrap();
        let t = prepare_code_state(&code, &[true, false]).unwrap();
        for (q, want) in [(0, Sign::Minus), (1, Sign::Plus), (2, Sign::Minus)] {
            assert_eq!(t.peek_pauli(&PauliString::single(3, q, Pauli::Z)).unwrap(), Some(want));
        }
        assert_eq!(t.peek_pauli(&ps("ZZZ")).unwrap(), Some(Sign::Plus));
        assert_eq!(
            prepare_code_state(&code.without_labels(), &[false, false]),
            Err(Error::MissingLabels)
        );
    }

    #[test]
    fn wide_register_crosses_word_boundaries() {
        let n = 130;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut t = StabilizerTableau::new(n);
        t.h(0);
        for q in 1..n {
            t.cnot(q - 1, q);
        }
        let all_x = PauliString::x_on(n, &(0..n).collect::<Vec<_>>());
        assert_eq!(t.peek_pauli(&all_x).unwrap(), Some(Sign::Plus));
        let m = t.measure_pauli(&PauliString::z_on(n, &[64]), None, &mut rng).unwrap();
        assert!(!m.deterministic);
        let m2 = t.measure_pauli(&PauliString::z_on(n, &[129]), None, &mut rng).unwrap();
        assert!(m2.deterministic);
        assert_eq!(m2.outcome, m.outcome);
        for _ in 0..n - 1 {
            let last = t.n() - 1;
            t.cnot(last - 1, last);
            t.discard_qubit(last).unwrap();
        }
        assert_eq!(t.n(), 1);
        let want = if m.outcome.is_minus() { ps("-Z") } else { ps("+Z") };
        assert_eq!(t.stabilizers(), vec![want]);
    }
}
