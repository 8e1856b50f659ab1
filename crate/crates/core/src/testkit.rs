//! Seeded generators and cross-checks shared by tests, benches and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::circuit::{Circuit, Gate, QubitInit};
use crate::code::{validate_labels, ClassicalParityCode, LabelAssignment, ParityLabel};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::sim::{run_circuit, Outcomes, Simulator};
use crate::statevector::StateVector;
use crate::tableau::StabilizerTableau;

pub use crate::decoder::build_decoder_table;

/// Largest register [`cross_backend_check`] accepts.
pub const CROSS_CHECK_MAX_QUBITS: usize = 8;

/// Threshold, in standard deviations, for a single check.
pub const CROSS_CHECK_SIGMAS: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeGeneratorSpec {
    /// Inclusive range of physical qubit counts.
    pub n: (usize, usize),
    /// Inclusive range of logical qubit counts.
    pub k: (usize, usize),
    pub max_weight: Option<usize>,
    pub seed: u64,
}

impl CodeGeneratorSpec {
    pub fn new(n: (usize, usize), k: (usize, usize)) -> Self {
        CodeGeneratorSpec {
            n,
            k,
            max_weight: None,
            seed: 0,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn feasible(&self, n: usize, k: usize) -> bool {
        let w = self.max_weight.unwrap_or(usize::MAX);
        k >= 1 && k <= n && k <= 64 && (n == k || w >= 2)
    }
}

/// A random labelled code: `k` base qubits at random positions, every other
/// qubit a random nonempty label, then one stabilizer per non-base qubit
/// tying it to the bases of its label. Stabilizers are afterwards mixed by
/// random row additions that stay within the weight bound.
pub fn random_code<R: Rng + ?Sized>(
    spec: &CodeGeneratorSpec,
    rng: &mut R,
) -> Result<(ClassicalParityCode, LabelAssignment)> {
    let pairs: Vec<(usize, usize)> = (spec.n.0..=spec.n.1)
        .flat_map(|n| (spec.k.0..=spec.k.1).map(move |k| (n, k)))
        .filter(|&(n, k)| spec.feasible(n, k))
        .collect();
    let &(n, k) = pairs
        .choose(rng)
        .ok_or_else(|| Error::Infeasible(format!("no feasible (n, k) in {spec:?}")))?;
    let max_label = spec.max_weight.map_or(k, |w| (w - 1).min(k)).max(1);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let bases = &order[..k];
    let mut labels = vec![ParityLabel::empty(); n];
    for (i, &q) in bases.iter().enumerate() {
        labels[q] = ParityLabel::singleton(i);
    }
    let mut stabilizers = Vec::with_capacity(n - k);
    for &q in &order[k..] {
        let size = rng.gen_range(1..=max_label);
        let mut idx: Vec<usize> = (0..k).collect();
        idx.shuffle(rng);
        idx.truncate(size);
        let label = ParityLabel::new(idx)?;
        let mut s: Vec<usize> = label.indices().iter().map(|&i| bases[i]).collect();
        s.push(q);
        stabilizers.push(s);
        labels[q] = label;
    }

    let w = spec.max_weight.unwrap_or(n);
    let masks: Vec<Vec<bool>> = stabilizers
        .iter()
        .map(|s| (0..n).map(|q| s.contains(&q)).collect())
        .collect();
    let mut masks = masks;
    for _ in 0..masks.len() {
        if masks.len() < 2 {
            break;
        }
        let a = rng.gen_range(0..masks.len());
        let b = rng.gen_range(0..masks.len());
        if a == b {
            continue;
        }
        let sum: Vec<bool> = masks[a].iter().zip(&masks[b]).map(|(x, y)| x ^ y).collect();
        if sum.iter().filter(|&&x| x).count() <= w {
            masks[a] = sum;
        }
    }
    let stabilizers = masks
        .iter()
        .map(|m| (0..n).filter(|&q| m[q]).collect())
        .collect();

    let code = ClassicalParityCode::new(n, stabilizers)?.with_labels(labels)?;
    let assignment = code.assignment()?;
    debug_assert!(validate_labels(&code, &assignment).valid);
    Ok((code, assignment))
}

/// Random circuit over `H, S, X, Z, CNOT` with a fraction `measure` of
/// single-qubit `MX`/`MZ` and `MPP` measurements mixed in.
pub fn random_clifford_circuit<R: Rng + ?Sized>(
    n: usize,
    len: usize,
    measure: f64,
    rng: &mut R,
) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let g = if rng.gen_bool(measure) {
            match rng.gen_range(0..3) {
                0 => Gate::Mx { qubit: q },
                1 => Gate::Mz { qubit: q },
                _ => Gate::Mpp {
                    pauli: random_pauli(n, rng),
                },
            }
        } else {
            match rng.gen_range(0..if n > 1 { 5 } else { 4 }) {
                0 => Gate::h(q),
                1 => Gate::s(q),
                2 => Gate::x(q),
                3 => Gate::z(q),
                _ => {
                    let t = (q + rng.gen_range(1..n)) % n;
                    Gate::cnot(q, t)
                }
            }
        };
        c.push(g).expect("generated gates are in range");
    }
    c
}

/// A random non-identity Pauli string with a `+` sign.
pub fn random_pauli<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliString {
    loop {
        let mut p = PauliString::identity(n);
        for q in 0..n {
            p.set_pauli(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)]);
        }
        if !p.is_identity() {
            return p;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossBackendReport {
    pub pass: bool,
    pub trials: usize,
    pub measurements: usize,
    /// `|Σ(outcome − predicted)| / σ` summed over every measurement of every trial.
    pub z_score: f64,
    pub threshold: f64,
    pub failure: Option<String>,
}

/// Rewrites each unitary gate before it reaches the tableau. The identity
/// rewrite is the honest check; anything else is a mutation.
pub type GateRewrite = fn(&Gate) -> Vec<Gate>;

fn unchanged(g: &Gate) -> Vec<Gate> {
    vec![g.clone()]
}

pub fn cross_backend_check(c: &Circuit, trials: usize, seed: u64) -> Result<CrossBackendReport> {
    cross_backend_check_at(c, trials, seed, unchanged, CROSS_CHECK_SIGMAS)
}

/// Threshold for each of `checks` independent checks such that correct
/// backends fail any of them as rarely as a single check fails at
/// `sigmas` (Šidák correction).
pub fn familywise_sigmas(sigmas: f64, checks: usize) -> f64 {
    let normal = Normal::standard();
    let alpha = 2.0 * normal.sf(sigmas);
    let per_check = 1.0 - (1.0 - alpha).powf(1.0 / checks.max(1) as f64);
    normal.inverse_cdf(1.0 - per_check / 2.0)
}

pub fn cross_backend_check_with(
    c: &Circuit,
    trials: usize,
    seed: u64,
    rewrite: GateRewrite,
) -> Result<CrossBackendReport> {
    cross_backend_check_at(c, trials, seed, rewrite, CROSS_CHECK_SIGMAS)
}

/// Runs `c` on the tableau with random outcomes and replays each trial on the
/// state vector, which predicts the probability of every outcome the tableau
/// produced. Fails when the tableau calls a measurement deterministic that
/// the state vector does not (or vice versa), when the state vector finds a
/// tableau outcome impossible, or when the outcome counts drift more than
/// `sigmas` standard deviations from the predicted ones.
pub fn cross_backend_check_at(
    c: &Circuit,
    trials: usize,
    seed: u64,
    rewrite: GateRewrite,
    sigmas: f64,
) -> Result<CrossBackendReport> {
    let n = c.num_qubits();
    if n > CROSS_CHECK_MAX_QUBITS {
        return Err(Error::GuardExceeded(format!(
            "cross-backend check needs n <= {CROSS_CHECK_MAX_QUBITS}, got {n}"
        )));
    }
    if c.init().iter().any(|i| matches!(i, QubitInit::Logical(_))) {
        return Err(Error::Unsupported("logical inputs in a cross-backend check".into()));
    }
    let mut mutated = Circuit::new(n);
    for (q, &init) in c.init().iter().enumerate() {
        mutated.set_init(q, init)?;
    }
    for g in c.gates() {
        if g.is_measurement() {
            mutated.push(g.clone())?;
        } else {
            mutated.extend(rewrite(g))?;
        }
    }

    let mut report = CrossBackendReport {
        pass: true,
        trials,
        measurements: 0,
        z_score: 0.0,
        threshold: sigmas,
        failure: None,
    };
    let (mut deviation, mut variance) = (0.0f64, 0.0f64);
    for t in 0..trials {
        let mut outcomes = Outcomes::seeded(seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut tab = StabilizerTableau::new(n);
        let record = run_circuit(&mut tab, &mutated, &mut outcomes)?;
        report.measurements = record.len();

        let mut sv = StateVector::new(n)?;
        for (q, init) in c.init().iter().enumerate() {
            if *init == QubitInit::Plus {
                sv.apply_gate(&Gate::h(q))?;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut next = record.iter();
        for g in c.gates() {
            let p = match g {
                Gate::Mx { qubit } => PauliString::single(n, *qubit, Pauli::X),
                Gate::Mz { qubit } => PauliString::single(n, *qubit, Pauli::Z),
                Gate::Mpp { pauli } => pauli.clone(),
                _ => {
                    sv.apply_gate(g)?;
                    continue;
                }
            };
            let m = next.next().expect("one record per measurement");
            let p_plus = ((1.0 + sv.expectation(&p)?) / 2.0).clamp(0.0, 1.0);
            let sv_deterministic = !(1e-9..=1.0 - 1e-9).contains(&p_plus);
            if sv_deterministic != m.deterministic {
                report.pass = false;
                report.failure = Some(format!(
                    "trial {t}: {g} is {} on the tableau but has P(+1) = {p_plus:.6}",
                    if m.deterministic { "deterministic" } else { "random" }
                ));
                return Ok(report);
            }
            if let Err(e) = sv.measure(&p, Some(m.outcome), &mut rng) {
                report.pass = false;
                report.failure = Some(format!("trial {t}: {g} gave {:?}: {e}", m.outcome));
                return Ok(report);
            }
            deviation += f64::from(u8::from(!m.outcome.is_minus())) - p_plus;
            variance += p_plus * (1.0 - p_plus);
        }
    }
    if variance > 0.0 {
        report.z_score = deviation.abs() / variance.sqrt();
        if report.z_score > sigmas {
            report.pass = false;
            report.failure = Some(format!("outcome counts {:.2}σ from prediction", report.z_score));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_codes_are_valid() {
        let spec = CodeGeneratorSpec::new((3, 10), (1, 4));
        let mut rng = spec.rng();
        for _ in 0..200 {
            let (code, a) = random_code(&spec, &mut rng).unwrap();
            assert!(validate_labels(&code, &a).valid);
        }
    }

    #[test]
    fn generator_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (code, _) = random_code(&CodeGeneratorSpec::new((4, 4), (4, 4)), &mut rng).unwrap();
        assert!(code.stabilizers().is_empty());

        let spec = CodeGeneratorSpec {
            max_weight: Some(3),
            ..CodeGeneratorSpec::new((6, 9), (2, 3))
        };
        for _ in 0..50 {
            let (code, _) = random_code(&spec, &mut rng).unwrap();
            assert!(code.stabilizers().iter().all(|s| s.len() <= 3));
        }

        let spec = CodeGeneratorSpec {
            max_weight: Some(1),
            ..CodeGeneratorSpec::new((5, 6), (2, 3))
        };
        assert!(matches!(random_code(&spec, &mut rng), Err(Error::Infeasible(_))));
        let spec = CodeGeneratorSpec::new((2, 3), (4, 5));
        assert!(matches!(random_code(&spec, &mut rng), Err(Error::Infeasible(_))));
    }

    #[test]
    fn bell_pair_passes() {
        let mut c = Circuit::new(2);
        c.extend([Gate::h(0), Gate::cnot(0, 1), Gate::Mz { qubit: 0 }, Gate::Mz { qubit: 1 }])
            .unwrap();
        let r = cross_backend_check(&c, 500, 3).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.measurements, 2);
    }

    #[test]
    fn familywise_threshold() {
        assert!((familywise_sigmas(3.0, 1) - 3.0).abs() < 1e-9);
        let z = familywise_sigmas(3.0, 500);
        assert!(z > 4.5 && z < 4.6, "{z}");
    }

    #[test]
    fn corrupted_hadamard_is_caught() {
        let mut c = Circuit::new(1);
        c.extend([Gate::h(0), Gate::Mx { qubit: 0 }]).unwrap();
        let r = cross_backend_check_with(&c, 50, 0, |g| match g {
            Gate::H { qubit } => vec![Gate::h(*qubit), Gate::z(*qubit)],
            g => vec![g.clone()],
        })
        .unwrap();
        assert!(!r.pass);
    }
}
