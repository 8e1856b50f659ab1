mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parity_core::circuit::Circuit;
use parity_core::code::{code_distance, validate_labels};
use parity_core::decoder::{DecoderTable, LogicalReadout};
use parity_core::deformation::{add_parity_qubit, rebase_stabilizers, remove_parity_qubit, remove_parity_qubit_via};
use parity_core::faults::{propagate_fault, FaultConfig, FaultLocation};
use parity_core::gates::{pcnot_circuit, verify_rotation, BlockPair, PcnotMode, RotationOptions};
use parity_core::gf2::rank;
use parity_core::pauli::Pauli;
use parity_core::statevector::{fidelity_up_to_phase, logical_action};
use parity_core::tableau::prepare_code_state;
use parity_core::testkit::{random_clifford_circuit, random_code, CodeGeneratorSpec};
use parity_core::{
    ClassicalParityCode, CorrectionMode, Outcomes, PauliString, Register, Sign, Simulator, StabilizerTableau,
};

use common::{l, random_partners};

fn mode(frame: bool) -> CorrectionMode {
    if frame {
        CorrectionMode::Frame
    } else {
        CorrectionMode::Physical
    }
}

/// Every qubit reads the parity of the logical bits in its label, and every
/// stabilizer reads +1.
fn holds_basis_state(reg: &Register<StabilizerTableau>, code: &ClassicalParityCode, bits: &[bool]) -> bool {
    let n = code.n();
    let labels = code.labels().unwrap();
    let qubits_ok = (0..n).all(|q| {
        let parity = labels[q].indices().iter().filter(|&&i| bits[i]).count() % 2 == 1;
        reg.peek(&PauliString::z_on(n, &[q])).unwrap() == Some(Sign::from_bit(parity))
    });
    qubits_ok && reg.violated(code).unwrap().is_empty()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_then_remove_restores_the_state(seed in any::<u64>(), frame in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (code, _) = random_code(&CodeGeneratorSpec::new((2, 30), (1, 8)), &mut rng).unwrap();
        let bits: Vec<bool> = (0..code.k()).map(|_| rng.gen()).collect();
        let (label, partners) = random_partners(&code, &mut rng);
        let mut reg = Register::new(prepare_code_state(&code, &bits).unwrap(), mode(frame));
        let mut o = Outcomes::seeded(seed);
        let (grown, step) = add_parity_qubit(&mut reg, &code, &label, &partners, &mut o).unwrap();
        prop_assert_eq!(grown.label(code.n()), Some(&label));
        prop_assert!(step.connecting_stabilizer.contains(&code.n()));
        prop_assert!(holds_basis_state(&reg, &grown, &bits));
        let (back, _) = remove_parity_qubit(&mut reg, &grown, code.n(), &mut o).unwrap();
        prop_assert_eq!(back.labels(), code.labels());
        prop_assert!(holds_basis_state(&reg, &back, &bits));
    }

    #[test]
    fn remove_then_add_with_random_linking(seed in any::<u64>(), frame in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (code, _) = random_code(&CodeGeneratorSpec::new((3, 30), (1, 8)), &mut rng).unwrap();
        prop_assume!(!code.stabilizers().is_empty());
        let bits: Vec<bool> = (0..code.k()).map(|_| rng.gen()).collect();
        let candidates: Vec<(usize, usize)> = code
            .stabilizers()
            .iter()
            .enumerate()
            .flat_map(|(j, s)| s.iter().map(move |&q| (q, j)))
            .collect();
        let (q, linking) = candidates[rng.gen_range(0..candidates.len())];
        let partners: Vec<usize> = rebase_stabilizers(&code, q, linking).unwrap()[linking]
            .iter()
            .filter(|&&p| p != q)
            .map(|&p| if p > q { p - 1 } else { p })
            .collect();
        let label = code.label(q).unwrap().clone();

        let mut reg = Register::new(prepare_code_state(&code, &bits).unwrap(), mode(frame));
        let mut o = Outcomes::seeded(seed);
        let (shrunk, _) = remove_parity_qubit_via(&mut reg, &code, q, linking, &mut o).unwrap();
        prop_assert_eq!(shrunk.n(), code.n() - 1);
        prop_assert_eq!(shrunk.k(), code.k());
        prop_assert!(holds_basis_state(&reg, &shrunk, &bits));
        let (regrown, _) = add_parity_qubit(&mut reg, &shrunk, &label, &partners, &mut o).unwrap();
        prop_assert!(holds_basis_state(&reg, &regrown, &bits));
        prop_assert!(reg.sim.check_invariants());
    }

    #[test]
    fn pcnots_on_one_target_commute_and_square_to_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (control, _) = random_code(&CodeGeneratorSpec::new((2, 6), (2, 3)), &mut rng).unwrap();
        let (target, _) = random_code(&CodeGeneratorSpec::new((1, 4), (1, 2)), &mut rng).unwrap();
        let pair = BlockPair::new(control, target).unwrap();
        let labels = pair.control.labels().unwrap();
        let a = &labels[rng.gen_range(0..labels.len())];
        let b = &labels[rng.gen_range(0..labels.len())];
        let i = rng.gen_range(0..pair.target.k());
        let ca = pcnot_circuit(&pair, a, i, PcnotMode::Single).unwrap().circuit;
        let cb = pcnot_circuit(&pair, b, i, PcnotMode::Single).unwrap().circuit;
        let joint = pair.joint().assignment().unwrap();
        let n = pair.n();
        let seq = |x: &Circuit, y: &Circuit| {
            let mut c = x.clone();
            c.extend(y.gates().iter().cloned()).unwrap();
            logical_action(&joint, &c).unwrap().logical_unitary
        };
        let ab = seq(&ca, &cb);
        let ba = seq(&cb, &ca);
        prop_assert!(fidelity_up_to_phase(&ab, &ba).unwrap() > 1.0 - 1e-10);
        let aa = seq(&ca, &ca);
        let id = logical_action(&joint, &Circuit::new(n)).unwrap().logical_unitary;
        prop_assert!(fidelity_up_to_phase(&aa, &id).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn rotations_compose(alpha in 0.0..std::f64::consts::TAU, beta in 0.0..std::f64::consts::TAU, seed in any::<u64>()) {
        let code = parity_core::code::lhz_layout(3).unwrap();
        let label = l(&[0, 1]);
        let opts = RotationOptions::default();
        let (ra, _) = verify_rotation(&code, &label, alpha, &opts, CorrectionMode::Physical, seed).unwrap();
        let (rb, _) = verify_rotation(&code, &label, beta, &opts, CorrectionMode::Frame, seed ^ 1).unwrap();
        let (rab, f) = verify_rotation(&code, &label, alpha + beta, &opts, CorrectionMode::Physical, seed ^ 2).unwrap();
        prop_assert!(f > 1.0 - 1e-9);
        let composed = &rb.logical_unitary * &ra.logical_unitary;
        prop_assert!(fidelity_up_to_phase(&composed, &rab.logical_unitary).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn fault_propagation_matches_the_tableau() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..500 {
        let n = rng.gen_range(1..=8);
        let len = rng.gen_range(1..=30);
        let c = random_clifford_circuit(n, len, 0.0, &mut rng);
        let faults: Vec<FaultLocation> = (0..rng.gen_range(1..=3))
            .map(|_| FaultLocation {
                position: rng.gen_range(0..=len),
                qubit: rng.gen_range(0..n),
            })
            .collect();
        let residual = propagate_fault(
            &c,
            &FaultConfig {
                locations: faults.clone(),
                p: None,
                seed: None,
            },
        )
        .unwrap();

        let prefix = random_clifford_circuit(n, 20, 0.0, &mut rng);
        let mut start = StabilizerTableau::new(n);
        for g in prefix.gates() {
            start.apply_gate(g).unwrap();
        }
        let mut faulty = start.clone();
        for j in 0..=len {
            for f in faults.iter().filter(|f| f.position == j) {
                faulty.x(f.qubit);
            }
            if let Some(g) = c.gates().get(j) {
                faulty.apply_gate(g).unwrap();
            }
        }
        let mut clean = start;
        for g in c.gates() {
            clean.apply_gate(g).unwrap();
        }
        for q in residual.support() {
            match residual.pauli(q) {
                Pauli::X => clean.x(q),
                Pauli::Z => clean.z(q),
                Pauli::Y => {
                    clean.x(q);
                    clean.z(q);
                }
                Pauli::I => {}
            }
        }
        assert!(faulty.same_state(&clean), "circuit {i}: residual {residual} for {faults:?}");
    }
}

#[test]
fn generated_codes_satisfy_invariants() {
    let spec = CodeGeneratorSpec {
        max_weight: Some(5),
        ..CodeGeneratorSpec::new((1, 24), (1, 8))
    };
    let mut rng = spec.rng();
    for _ in 0..10_000 {
        let (code, a) = random_code(&spec, &mut rng).unwrap();
        let v = validate_labels(&code, &a);
        assert!(v.valid, "{code:?}");
        assert_eq!(rank(&code.stabilizer_matrix()), code.n() - code.k());
        assert_eq!(v.rank, code.k());
        assert!(code.stabilizers().iter().all(|s| s.len() <= 5));
    }
}

#[test]
fn decoder_corrects_everything_below_half_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let spec = CodeGeneratorSpec::new((2, 12), (1, 4));
    for _ in 0..200 {
        let (code, a) = random_code(&spec, &mut rng).unwrap();
        let d = code_distance(&code, &a).unwrap().overall;
        let table = DecoderTable::build(&code).unwrap();
        let readout = LogicalReadout::new(&a);
        for e in 0u64..1 << code.n() {
            if 2 * (e.count_ones() as usize) < d {
                let net = table.decode(e);
                assert_eq!(table.syndrome(net), 0);
                assert_eq!(readout.flips(net), 0, "{code:?}: error {e:b}");
            }
        }
    }
}
