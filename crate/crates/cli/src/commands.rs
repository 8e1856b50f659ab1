use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use parity_core::circuit::{quarter_turns, Circuit, Gate, QubitInit};
use parity_core::code::{derive_labels, lhz_layout, validate_labels, CodeJson};
use parity_core::faults::{exhaustive_ft_check, monte_carlo, CodeBlock, FaultReport};
use parity_core::flow::{canonical_encoder, code_from_encoder, labels_from_encoding_circuit};
use parity_core::gates::{
    pcnot_circuit, run_on_statevector, teleport_action, teleport_diagonal, verify_pcnot, BlockPair, PcnotMode,
    RotationOptions, RotationSession, TeleportKind,
};
use parity_core::sim::{run_circuit, Measurement};
use parity_core::statevector::{fidelity_up_to_phase, protocol_action, zz_rotation};
use parity_core::{
    ClassicalParityCode, CorrectionMode, Error, LabelAssignment, Outcomes, ParityLabel, ProtocolTrace, Register,
    Simulator, StabilizerTableau, StateVector,
};

use crate::CliError;

/// Labels and logical indices on the command line count from 1.
const OFFSET: usize = 1;
const PCNOT_TOL: f64 = 1e-10;
const ROTATION_TOL: f64 = 1e-9;

pub struct Report {
    pub body: String,
    pub verified: bool,
    pub summary: String,
}

fn report(body: &impl Serialize, verified: bool, summary: String) -> Result<Report, CliError> {
    Ok(Report {
        body: serde_json::to_string_pretty(body).map_err(Error::from)?,
        verified,
        summary,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn read_code(path: &Path) -> Result<ClassicalParityCode, CliError> {
    Ok(ClassicalParityCode::from_json(&read(path)?, OFFSET)?)
}

/// `1,3` → logical indices {0, 2}.
pub fn parse_label(s: &str) -> Result<ParityLabel, String> {
    let idx = s
        .split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= OFFSET => Ok(i - OFFSET),
            _ => Err(format!("`{t}` is not a logical index (they start at {OFFSET})")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    ParityLabel::new(idx).map_err(|e| e.to_string())
}

/// `0:1,1:2` → base qubit 0 carries logical 1, qubit 1 logical 2.
pub fn parse_bases(s: &str) -> Result<BTreeMap<usize, usize>, String> {
    s.split(',')
        .map(|pair| {
            let (q, i) = pair
                .split_once(':')
                .ok_or_else(|| format!("`{pair}` is not of the form qubit:logical"))?;
            let q = q.trim().parse::<usize>().map_err(|e| format!("qubit `{q}`: {e}"))?;
            match i.trim().parse::<usize>() {
                Ok(i) if i >= OFFSET => Ok((q, i - OFFSET)),
                _ => Err(format!("logical `{i}` must be an integer >= {OFFSET}")),
            }
        })
        .collect()
}

/// A number, or a multiple of pi such as `pi/2`, `-3pi/4`, `0.5*pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || format!("`{s}` is not an angle");
    let v = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| bad())?,
        Some(at) => {
            let coef = t[..at].trim_end_matches('*');
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let rest = &t[at + 2..];
            let den = match rest.strip_prefix('/') {
                Some(d) => d.parse::<f64>().map_err(|_| bad())?,
                None if rest.is_empty() => 1.0,
                None => return Err(bad()),
            };
            coef * PI / den
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn correction_mode(frame: bool) -> CorrectionMode {
    if frame {
        CorrectionMode::Frame
    } else {
        CorrectionMode::Physical
    }
}

#[derive(Args, Debug, Clone)]
pub struct LayoutArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=64))]
    pub k: u64,
    /// Also write the code JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn layout(a: &LayoutArgs) -> Result<Report, CliError> {
    let code = lhz_layout(a.k as usize)?;
    let body = code.to_json_pretty(OFFSET)?;
    if let Some(path) = &a.out {
        fs::write(path, format!("{body}\n")).map_err(|e| CliError::io(path, e))?;
    }
    Ok(Report {
        body,
        verified: true,
        summary: format!(
            "LHZ layout k = {}: {} qubits, {} stabilizers",
            a.k,
            code.n(),
            code.stabilizers().len()
        ),
    })
}

#[derive(Args, Debug, Clone)]
pub struct LabelsArgs {
    pub code: PathBuf,
    /// Base qubits as qubit:logical pairs, e.g. `0:1,1:2`; chosen automatically if omitted.
    #[arg(long, value_parser = parse_bases)]
    pub bases: Option<BTreeMap<usize, usize>>,
}

#[derive(Serialize)]
struct LabelsReport {
    labels: Option<Vec<Vec<usize>>>,
    bases: BTreeMap<usize, usize>,
    valid: bool,
    violated: Vec<usize>,
    rank: Option<usize>,
}

pub fn labels(a: &LabelsArgs) -> Result<Report, CliError> {
    let code = read_code(&a.code)?.without_labels();
    match derive_labels(&code, a.bases.as_ref()) {
        Ok(assignment) => {
            let v = validate_labels(&code, &assignment);
            let summary = format!(
                "{} qubits labelled from {} bases; {}",
                code.n(),
                assignment.seeds().len(),
                if v.valid { "valid" } else { "INVALID" }
            );
            let body = LabelsReport {
                labels: Some(assignment.rendered(OFFSET)),
                bases: assignment.seeds().iter().map(|(&q, &i)| (q, i + OFFSET)).collect(),
                valid: v.valid,
                violated: v.violated,
                rank: Some(v.rank),
            };
            report(&body, v.valid, summary)
        }
        Err(Error::InconsistentSeeds { stabilizers }) => {
            let summary = format!("bases contradict stabilizers {stabilizers:?}");
            let body = LabelsReport {
                labels: None,
                bases: a.bases.clone().unwrap_or_default().into_iter().map(|(q, i)| (q, i + OFFSET)).collect(),
                valid: false,
                violated: stabilizers,
                rank: None,
            };
            report(&body, false, summary)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Args, Debug, Clone)]
pub struct EncodeLabelsArgs {
    pub circuit: PathBuf,
}

#[derive(Serialize)]
struct EncodeLabelsReport {
    labels: Vec<Vec<usize>>,
    stabilizers: Option<Vec<Vec<usize>>>,
}

pub fn encode_labels(a: &EncodeLabelsArgs) -> Result<Report, CliError> {
    let c = Circuit::parse(&read(&a.circuit)?)?;
    let assignment = labels_from_encoding_circuit(&c)?;
    let stabilizers = code_from_encoder(&c).ok().map(|code| code.stabilizers().to_vec());
    let summary = format!("{} qubits, {} logical inputs", c.num_qubits(), assignment.k());
    report(
        &EncodeLabelsReport {
            labels: assignment.rendered(OFFSET),
            stabilizers,
        },
        true,
        summary,
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlocksFile {
    control: CodeJson,
    target: CodeJson,
}

fn read_blocks(path: &Path) -> Result<BlockPair, CliError> {
    let raw: BlocksFile = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    Ok(BlockPair::new(raw.control.into_code(OFFSET)?, raw.target.into_code(OFFSET)?)?)
}

fn fault_blocks(pair: &BlockPair) -> Vec<CodeBlock> {
    vec![
        CodeBlock {
            code: pair.control.clone(),
            offset: 0,
        },
        CodeBlock {
            code: pair.target.clone(),
            offset: pair.target_offset(),
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Oracle,
    Faults,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct PcnotArgs {
    /// JSON file with `control` and `target` codes.
    pub blocks: PathBuf,
    /// Control label, e.g. `1,2`.
    #[arg(long, value_parser = parse_label)]
    pub label: ParityLabel,
    /// Target logical within the target block, from 1.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub target: u64,
    #[arg(long, conflicts_with = "single")]
    pub transversal: bool,
    #[arg(long)]
    pub single: bool,
    #[arg(long, value_enum, default_value = "both")]
    pub check: CheckKind,
}

#[derive(Serialize)]
struct PcnotReport {
    circuit: String,
    controls: Vec<usize>,
    targets: Vec<usize>,
    transversal: bool,
    fidelity: Option<f64>,
    block_preserving: Option<bool>,
    ft: Option<bool>,
    faults: Option<FaultReport>,
}

pub fn pcnot(a: &PcnotArgs) -> Result<Report, CliError> {
    let pair = read_blocks(&a.blocks)?;
    let i = a.target as usize - OFFSET;
    let mode = match (a.transversal, a.single) {
        (true, _) => PcnotMode::Transversal,
        (_, true) => PcnotMode::Single,
        _ => PcnotMode::Auto,
    };
    let pc = pcnot_circuit(&pair, &a.label, i, mode)?;
    let mut body = PcnotReport {
        circuit: pc.circuit.to_text(),
        controls: pc.controls.clone(),
        targets: pc.targets.clone(),
        transversal: pc.transversal,
        fidelity: None,
        block_preserving: None,
        ft: None,
        faults: None,
    };
    if a.check != CheckKind::Faults {
        let (rep, f) = verify_pcnot(&pair, &a.label, i, mode)?;
        body.fidelity = Some(f);
        body.block_preserving = Some(rep.block_preserving);
    }
    if a.check != CheckKind::Oracle {
        let faults = exhaustive_ft_check(&pc.circuit, &fault_blocks(&pair))?;
        body.ft = faults.pass;
        body.faults = Some(faults);
    }
    let oracle_ok = body.fidelity.is_none_or(|f| f >= 1.0 - PCNOT_TOL) && body.block_preserving != Some(false);
    let verified = oracle_ok && body.ft != Some(false);
    let summary = format!(
        "pcnot {} -> target {}: {} CNOTs, {}; fidelity {}; ft {}",
        a.label.render(OFFSET),
        a.target,
        pc.circuit.len(),
        if pc.transversal { "transversal" } else { "not transversal" },
        body.fidelity.map_or("unchecked".into(), |f| format!("{f:.12}")),
        body.ft.map_or("unchecked".into(), |ft| ft.to_string()),
    );
    report(&body, verified, summary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BackendArg {
    #[default]
    Statevector,
    Tableau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Step {
    Add,
    Exclude,
    Rotate,
    Reactivate,
    Remove,
}

#[derive(Args, Debug, Clone)]
pub struct RotateArgs {
    pub code: PathBuf,
    /// Label of the rotation, e.g. `1,3`.
    #[arg(long, value_parser = parse_label)]
    pub label: ParityLabel,
    /// Angle in radians; `pi/2` style multiples of pi are accepted.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "statevector")]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    /// Keep corrections in a Pauli frame.
    #[arg(long)]
    pub frame: bool,
    /// Protocol steps in order.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "add,exclude,rotate,remove")]
    pub steps: Vec<Step>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn rotation_steps<S: Simulator>(
    reg: &mut Register<S>,
    code: &ClassicalParityCode,
    a: &RotateArgs,
    outcomes: &mut Outcomes,
) -> parity_core::Result<(ClassicalParityCode, ProtocolTrace)> {
    let options = RotationOptions {
        copies: a.copies,
        rounds: a.rounds,
        ..RotationOptions::default()
    };
    let mut s = RotationSession::new(reg, code, &a.label, options, outcomes)?;
    for step in &a.steps {
        match step {
            Step::Add => s.add_copy()?,
            Step::Exclude => s.exclude_connecting()?,
            Step::Rotate => s.rotate(a.alpha)?,
            Step::Reactivate => s.reactivate()?,
            Step::Remove => s.remove_copy()?,
        }
    }
    s.finish()
}

#[derive(Serialize)]
struct RotateReport {
    backend: BackendArg,
    label: Vec<usize>,
    alpha: f64,
    fidelity: Option<f64>,
    block_preserving: Option<bool>,
    reference: Option<&'static str>,
    matches_reference: Option<bool>,
    sweeps_clean: bool,
    trace: ProtocolTrace,
}

/// `|+⟩` on every base qubit followed by the fan-out encoder.
fn plus_state_prep(a: &LabelAssignment) -> parity_core::Result<Circuit> {
    let enc = canonical_encoder(a)?;
    let mut c = Circuit::new(a.n());
    for &q in a.seeds().keys() {
        c.set_init(q, QubitInit::Plus)?;
    }
    c.extend(enc.gates().iter().cloned())?;
    Ok(c)
}

fn sweeps_clean(trace: &ProtocolTrace) -> bool {
    trace.metadata.get("sweeps_clean") == Some(&serde_json::Value::Bool(true))
}

pub fn rotate(a: &RotateArgs) -> Result<Report, CliError> {
    let code = read_code(&a.code)?;
    let assignment = code.assignment()?;
    let mode = correction_mode(a.frame);
    let seed = a.seed.expect("seed resolved before dispatch");
    let mut body = RotateReport {
        backend: a.backend,
        label: a.label.shifted(OFFSET).indices().to_vec(),
        alpha: a.alpha,
        fidelity: None,
        block_preserving: None,
        reference: None,
        matches_reference: None,
        sweeps_clean: true,
        trace: ProtocolTrace::default(),
    };
    let verified = match a.backend {
        BackendArg::Statevector => {
            let mut first: Option<ProtocolTrace> = None;
            let mut clean = true;
            let rep = protocol_action(&assignment, &assignment, Outcomes::seeded(seed), |sv, o| {
                run_on_statevector(sv, mode, |reg| {
                    let (_, trace) = rotation_steps(reg, &code, a, o)?;
                    clean &= sweeps_clean(&trace);
                    first.get_or_insert(trace);
                    Ok(())
                })
            })?;
            let target = zz_rotation(code.k(), a.label.to_mask(), a.alpha);
            let f = fidelity_up_to_phase(&rep.logical_unitary, &target)?;
            body.fidelity = Some(f);
            body.block_preserving = Some(rep.block_preserving);
            body.sweeps_clean = clean;
            body.trace = first.unwrap_or_default();
            f >= 1.0 - ROTATION_TOL && rep.block_preserving && clean
        }
        BackendArg::Tableau => {
            if quarter_turns(a.alpha).is_none() {
                return Err(Error::UnsupportedGate {
                    gate: format!("RZ({}) on the tableau backend", a.alpha),
                }
                .into());
            }
            let prep = plus_state_prep(&assignment)?;
            let fresh = || -> parity_core::Result<Register<StabilizerTableau>> {
                let mut t = StabilizerTableau::new(code.n());
                run_circuit(&mut t, &prep, &mut Outcomes::seeded(0))?;
                Ok(Register::new(t, mode))
            };
            let mut reg = fresh()?;
            let (_, trace) = rotation_steps(&mut reg, &code, a, &mut Outcomes::seeded(seed))?;
            reg.flush_frame()?;

            let source = trace
                .metadata
                .get("source")
                .and_then(|v| v.as_u64())
                .expect("rotation traces record their source") as usize;
            let mut reference = fresh()?;
            if quarter_turns(a.alpha) == Some(1) {
                teleport_diagonal(&mut reference, &code, source, TeleportKind::S, &mut Outcomes::seeded(seed))?;
                body.reference = Some("teleport_s");
            } else {
                reference.apply_gate(&Gate::rz(a.alpha, source))?;
                body.reference = Some("direct_rz");
            }
            reference.flush_frame()?;
            let matches = reg.sim.same_state(&reference.sim);
            body.matches_reference = Some(matches);
            body.sweeps_clean = sweeps_clean(&trace);
            body.trace = trace;
            matches && body.sweeps_clean
        }
    };
    let summary = format!(
        "rotation {} by {:.6} on {:?}: {}",
        a.label.render(OFFSET),
        a.alpha,
        a.backend,
        match (body.fidelity, body.matches_reference) {
            (Some(f), _) => format!("fidelity {f:.12}"),
            (_, Some(m)) => format!("matches {}: {m}", body.reference.unwrap_or("reference")),
            _ => "unchecked".into(),
        }
    );
    report(&body, verified, summary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TeleportArg {
    S,
    T,
}

#[derive(Args, Debug, Clone)]
pub struct TeleportArgs {
    pub code: PathBuf,
    #[arg(long)]
    pub qubit: usize,
    #[arg(long, value_enum)]
    pub kind: TeleportArg,
    #[arg(long)]
    pub frame: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct TeleportReport {
    qubit: usize,
    label: Vec<usize>,
    angle: f64,
    outcomes: Vec<parity_core::Sign>,
    fidelity: f64,
    block_preserving: bool,
}

pub fn teleport(a: &TeleportArgs) -> Result<Report, CliError> {
    let code = read_code(&a.code)?;
    let kind = match a.kind {
        TeleportArg::S => TeleportKind::S,
        TeleportArg::T => TeleportKind::T,
    };
    let label = code
        .label(a.qubit)
        .ok_or_else(|| Error::OutOfRange(format!("qubit {} of {}", a.qubit, code.n())))?
        .clone();
    let seed = a.seed.expect("seed resolved before dispatch");
    let rep = teleport_action(&code, a.qubit, kind, correction_mode(a.frame), Outcomes::seeded(seed))?;
    let target = zz_rotation(code.k(), label.to_mask(), kind.angle());
    let f = fidelity_up_to_phase(&rep.logical_unitary, &target)?;
    let body = TeleportReport {
        qubit: a.qubit,
        label: label.shifted(OFFSET).indices().to_vec(),
        angle: kind.angle(),
        outcomes: rep.outcomes.clone(),
        fidelity: f,
        block_preserving: rep.block_preserving,
    };
    let summary = format!("{:?} teleported onto qubit {}: fidelity {f:.12}", a.kind, a.qubit);
    report(&body, f >= 1.0 - ROTATION_TOL && rep.block_preserving, summary)
}

/// What `inject` runs faults through.
#[derive(Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
enum ProtocolSpec {
    Pcnot {
        control: CodeJson,
        target: CodeJson,
        control_label: Vec<usize>,
        target_logical: usize,
        #[serde(default)]
        layout: PcnotMode,
    },
    Circuit {
        circuit: String,
        blocks: Vec<BlockSpec>,
    },
}

#[derive(Deserialize)]
struct BlockSpec {
    code: CodeJson,
    offset: usize,
}

fn read_protocol(path: &Path) -> Result<(Circuit, Vec<CodeBlock>), CliError> {
    let spec: ProtocolSpec = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    match spec {
        ProtocolSpec::Pcnot {
            control,
            target,
            control_label,
            target_logical,
            layout,
        } => {
            let pair = BlockPair::new(control.into_code(OFFSET)?, target.into_code(OFFSET)?)?;
            let label = parse_label(
                &control_label.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
            )
            .map_err(CliError::Usage)?;
            let i = target_logical
                .checked_sub(OFFSET)
                .ok_or_else(|| CliError::Usage(format!("target_logical starts at {OFFSET}")))?;
            let pc = pcnot_circuit(&pair, &label, i, layout)?;
            Ok((pc.circuit, fault_blocks(&pair)))
        }
        ProtocolSpec::Circuit { circuit, blocks } => {
            let c = Circuit::parse(&circuit)?;
            let blocks = blocks
                .into_iter()
                .map(|b| {
                    Ok(CodeBlock {
                        code: b.code.into_code(OFFSET)?,
                        offset: b.offset,
                    })
                })
                .collect::<Result<_, Error>>()?;
            Ok((c, blocks))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InjectMode {
    Exhaustive,
    Mc,
}

#[derive(Args, Debug, Clone)]
pub struct InjectArgs {
    /// JSON protocol spec: `{"protocol":"pcnot", ...}` or `{"protocol":"circuit", ...}`.
    pub spec: PathBuf,
    #[arg(long, value_enum)]
    pub mode: InjectMode,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn inject(a: &InjectArgs) -> Result<Report, CliError> {
    let (circuit, blocks) = read_protocol(&a.spec)?;
    let rep = match a.mode {
        InjectMode::Exhaustive => exhaustive_ft_check(&circuit, &blocks)?,
        InjectMode::Mc => {
            let p = a.p.ok_or_else(|| CliError::Usage("--mode mc needs --p".into()))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("--p {p} is outside [0, 1]")));
            }
            let seed = a.seed.expect("seed resolved before dispatch");
            monte_carlo(&circuit, &blocks, p, a.trials, seed)?
        }
    };
    let summary = match a.mode {
        InjectMode::Exhaustive => format!(
            "{} single-fault locations, {} not tolerated",
            rep.locations, rep.failures
        ),
        InjectMode::Mc => format!(
            "{} failures in {} trials, rate {:.3e}",
            rep.failures,
            a.trials,
            rep.rate.unwrap_or(0.0)
        ),
    };
    let verified = rep.pass != Some(false);
    report(&rep, verified, summary)
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value = "tableau")]
    pub backend: BackendArg,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct RunReport {
    backend: BackendArg,
    measurements: Vec<Measurement>,
}

pub fn run(a: &RunArgs) -> Result<Report, CliError> {
    let c = Circuit::parse(&read(&a.circuit)?)?;
    let mut outcomes = Outcomes::seeded(a.seed.expect("seed resolved before dispatch"));
    let measurements = match a.backend {
        BackendArg::Tableau => run_circuit(&mut StabilizerTableau::new(c.num_qubits()), &c, &mut outcomes)?,
        BackendArg::Statevector => run_circuit(&mut StateVector::new(c.num_qubits())?, &c, &mut outcomes)?,
    };
    let summary = format!("{} gates, {} measurements", c.len(), measurements.len());
    report(
        &RunReport {
            backend: a.backend,
            measurements,
        },
        true,
        summary,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.3").unwrap(), 0.3);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("3pi/2").unwrap(), 1.5 * PI);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    fn labels_and_bases() {
        assert_eq!(parse_label("1,3").unwrap(), ParityLabel::from_indices(&[0, 2]));
        assert!(parse_label("0,1").is_err());
        let b = parse_bases("0:1, 1:2").unwrap();
        assert_eq!(b, BTreeMap::from([(0, 0), (1, 1)]));
        assert!(parse_bases("0-1").is_err());
    }
}
