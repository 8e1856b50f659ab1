//! Single-X fault enumeration and Monte Carlo sampling through Clifford circuits.
//!
//! Faults are X flips at gate boundaries: one per qubit before the first
//! gate, then one per touched qubit after every gate. Residuals are
//! classified per code block with an exhaustive minimum-weight decoder.
//! Only the X part of a residual is decoded; Z components are outside the
//! error model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::code::{code_distance, ClassicalParityCode};
use crate::decoder::{DecoderTable, LogicalReadout};
use crate::error::{Error, Result};
use crate::flow::conjugate_forward_gate;
use crate::gf2::BitVector;
use crate::pauli::{Pauli, PauliString};

/// Largest location count for exact enumeration over all fault subsets.
pub const EXACT_RATE_MAX_LOCATIONS: usize = 24;

/// An X flip after the first `position` gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaultLocation {
    pub position: usize,
    pub qubit: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaultConfig {
    pub locations: Vec<FaultLocation>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl FaultConfig {
    pub fn single(loc: FaultLocation) -> Self {
        FaultConfig {
            locations: vec![loc],
            p: None,
            seed: None,
        }
    }
}

fn check_clifford(c: &Circuit) -> Result<()> {
    if let Some(g) = c.gates().iter().find(|g| !g.is_clifford_unitary()) {
        return Err(Error::NonClifford(g.to_string()));
    }
    Ok(())
}

/// Every gate-boundary location in deterministic order: inputs by qubit,
/// then each gate's qubits in gate order.
pub fn fault_locations(c: &Circuit) -> Result<Vec<FaultLocation>> {
    check_clifford(c)?;
    let mut out: Vec<FaultLocation> = (0..c.num_qubits())
        .map(|qubit| FaultLocation { position: 0, qubit })
        .collect();
    for (j, g) in c.gates().iter().enumerate() {
        out.extend(g.qubits().into_iter().map(|qubit| FaultLocation {
            position: j + 1,
            qubit,
        }));
    }
    Ok(out)
}

pub fn enumerate_single_faults(c: &Circuit) -> Result<Vec<FaultConfig>> {
    Ok(fault_locations(c)?.into_iter().map(FaultConfig::single).collect())
}

/// The Pauli the fault leaves at the end of the circuit (signs dropped).
pub fn propagate_fault(c: &Circuit, fault: &FaultConfig) -> Result<PauliString> {
    check_clifford(c)?;
    let n = c.num_qubits();
    let mut total = PauliString::identity(n);
    for loc in &fault.locations {
        if loc.position > c.len() || loc.qubit >= n {
            return Err(Error::OutOfRange(format!(
                "fault at position {} on qubit {} in a {}-gate circuit on {n} qubits",
                loc.position,
                loc.qubit,
                c.len()
            )));
        }
        let mut p = PauliString::single(n, loc.qubit, Pauli::X);
        for g in &c.gates()[loc.position..] {
            conjugate_forward_gate(&mut p, g)?;
        }
        total = PauliString::from_parts(
            total.x_bits().xor(p.x_bits()),
            total.z_bits().xor(p.z_bits()),
            crate::pauli::Sign::Plus,
        )?;
    }
    Ok(total)
}

/// A labelled code occupying qubits `offset..offset + code.n()`.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeBlock {
    pub code: ClassicalParityCode,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    NoError,
    Correctable,
    /// Decoding leaves these logicals flipped. `detected` when every failing
    /// block saw a nonzero syndrome from an error lighter than its distance.
    LogicalError { logicals: Vec<usize>, detected: bool },
}

impl Classification {
    pub fn is_logical_error(&self) -> bool {
        matches!(self, Classification::LogicalError { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedResidual {
    pub residual: PauliString,
    /// One syndrome per block, bit `j` for stabilizer `j`.
    pub syndrome: Vec<BitVector>,
    pub classification: Classification,
}

#[derive(Clone, Debug)]
struct PreparedBlock {
    offset: usize,
    n: usize,
    m: usize,
    logical_offset: usize,
    distance: usize,
    table: DecoderTable,
    readout: LogicalReadout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BlockOutcome {
    Clean,
    Corrected,
    /// Flipped logicals (block-local mask) and whether it was detectable.
    Failed(u64, bool),
}

impl PreparedBlock {
    fn new(b: &CodeBlock, logical_offset: usize) -> Result<Self> {
        let a = b.code.assignment()?;
        Ok(PreparedBlock {
            offset: b.offset,
            n: b.code.n(),
            m: b.code.stabilizers().len(),
            logical_offset,
            distance: code_distance(&b.code, &a)?.overall,
            table: DecoderTable::build(&b.code)?,
            readout: LogicalReadout::new(&a),
        })
    }

    fn mask(&self, x: &BitVector) -> u64 {
        (0..self.n)
            .filter(|&q| x.get(self.offset + q))
            .fold(0, |acc, q| acc | 1 << q)
    }

    fn outcome(&self, x: u64) -> BlockOutcome {
        if x == 0 {
            return BlockOutcome::Clean;
        }
        let net = self.table.decode(x);
        let flips = if net == 0 { 0 } else { self.readout.flips(net) };
        if flips == 0 {
            BlockOutcome::Corrected
        } else {
            let detected = self.table.syndrome(x) != 0 && (x.count_ones() as usize) < self.distance;
            BlockOutcome::Failed(flips, detected)
        }
    }

    /// A single fault is tolerated when it is corrected, or merely detected
    /// on a block that can only detect.
    fn tolerates(&self, o: BlockOutcome) -> bool {
        match o {
            BlockOutcome::Clean | BlockOutcome::Corrected => true,
            BlockOutcome::Failed(_, detected) => detected && self.distance <= 2,
        }
    }
}

/// A Clifford circuit, its fault locations and the code blocks it acts on,
/// with each location's residual precomputed.
#[derive(Clone, Debug)]
pub struct FaultModel {
    circuit: Circuit,
    blocks: Vec<PreparedBlock>,
    locations: Vec<FaultLocation>,
    residuals: Vec<PauliString>,
    /// `masks[l][b]`: X residual of location `l` on block `b`.
    masks: Vec<Vec<u64>>,
}

impl FaultModel {
    pub fn new(c: &Circuit, blocks: &[CodeBlock]) -> Result<Self> {
        let mut prepared = Vec::with_capacity(blocks.len());
        let mut logical_offset = 0;
        for b in blocks {
            if b.offset + b.code.n() > c.num_qubits() {
                return Err(Error::DimensionMismatch(format!(
                    "block at offset {} with {} qubits exceeds the {}-qubit circuit",
                    b.offset,
                    b.code.n(),
                    c.num_qubits()
                )));
            }
            prepared.push(PreparedBlock::new(b, logical_offset)?);
            logical_offset += b.code.k();
        }
        let locations = fault_locations(c)?;
        let residuals = locations
            .iter()
            .map(|&l| propagate_fault(c, &FaultConfig::single(l)))
            .collect::<Result<Vec<_>>>()?;
        let masks = residuals
            .iter()
            .map(|r| prepared.iter().map(|b| b.mask(r.x_bits())).collect())
            .collect();
        Ok(FaultModel {
            circuit: c.clone(),
            blocks: prepared,
            locations,
            residuals,
            masks,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn locations(&self) -> &[FaultLocation] {
        &self.locations
    }

    pub fn residual(&self, location: usize) -> &PauliString {
        &self.residuals[location]
    }

    fn outcomes(&self, masks: &[u64]) -> Vec<BlockOutcome> {
        self.blocks.iter().zip(masks).map(|(b, &x)| b.outcome(x)).collect()
    }

    fn classification(&self, outcomes: &[BlockOutcome]) -> Classification {
        let mut logicals = Vec::new();
        let mut detected = true;
        let mut any = false;
        for (b, o) in self.blocks.iter().zip(outcomes) {
            match *o {
                BlockOutcome::Clean => {}
                BlockOutcome::Corrected => any = true,
                BlockOutcome::Failed(flips, d) => {
                    detected &= d;
                    logicals.extend((0..64).filter(|i| flips >> i & 1 == 1).map(|i| b.logical_offset + i));
                }
            }
        }
        if !logicals.is_empty() {
            Classification::LogicalError { logicals, detected }
        } else if any {
            Classification::Correctable
        } else {
            Classification::NoError
        }
    }

    /// Decodes every block of a residual on the circuit's register.
    pub fn classify_residual(&self, residual: &PauliString) -> Result<ClassifiedResidual> {
        if residual.num_qubits() != self.circuit.num_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "residual on {} qubits, circuit on {}",
                residual.num_qubits(),
                self.circuit.num_qubits()
            )));
        }
        let masks: Vec<u64> = self.blocks.iter().map(|b| b.mask(residual.x_bits())).collect();
        Ok(self.classified(residual.clone(), &masks))
    }

    fn classified(&self, residual: PauliString, masks: &[u64]) -> ClassifiedResidual {
        let syndrome = self
            .blocks
            .iter()
            .zip(masks)
            .map(|(b, &x)| BitVector::from_u64(b.m, b.table.syndrome(x)))
            .collect();
        ClassifiedResidual {
            residual,
            syndrome,
            classification: self.classification(&self.outcomes(masks)),
        }
    }

    fn combined(&self, fired: impl Iterator<Item = usize>) -> Vec<u64> {
        let mut acc = vec![0u64; self.blocks.len()];
        for l in fired {
            for (a, m) in acc.iter_mut().zip(&self.masks[l]) {
                *a ^= m;
            }
        }
        acc
    }

    fn fails(&self, masks: &[u64]) -> bool {
        self.blocks
            .iter()
            .zip(masks)
            .any(|(b, &x)| matches!(b.outcome(x), BlockOutcome::Failed(..)))
    }

    /// Exact logical-error probability under i.i.d. faults, by summing over
    /// every subset of locations.
    pub fn exact_failure_rate(&self, p: f64) -> Result<f64> {
        let l = self.locations.len();
        if l > EXACT_RATE_MAX_LOCATIONS {
            return Err(Error::GuardExceeded(format!(
                "{l} locations exceeds {EXACT_RATE_MAX_LOCATIONS} for exact enumeration"
            )));
        }
        let mut rate = 0.0;
        for subset in 0u64..1 << l {
            let masks = self.combined((0..l).filter(|i| subset >> i & 1 == 1));
            if self.fails(&masks) {
                let w = subset.count_ones() as i32;
                rate += p.powi(w) * (1.0 - p).powi(l as i32 - w);
            }
        }
        Ok(rate)
    }
}

/// Classifies a residual on a single labelled code.
pub fn classify(residual: &PauliString, code: &ClassicalParityCode) -> Result<ClassifiedResidual> {
    let c = Circuit::new(code.n());
    let model = FaultModel::new(
        &c,
        &[CodeBlock {
            code: code.clone(),
            offset: 0,
        }],
    )?;
    model.classify_residual(residual)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultMode {
    Exhaustive,
    Mc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub location: FaultLocation,
    #[serde(flatten)]
    pub result: ClassifiedResidual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaultReport {
    pub mode: FaultMode,
    pub p: Option<f64>,
    pub trials: Option<u64>,
    pub rate: Option<f64>,
    pub ci95: Option<[f64; 2]>,
    pub counterexample: Option<Counterexample>,
    /// Exhaustive mode: every single fault was tolerated.
    pub pass: Option<bool>,
    pub locations: usize,
    pub failures: u64,
}

/// Checks every single-fault location; fails on the first location whose
/// residual some block cannot handle.
pub fn exhaustive_ft_check(c: &Circuit, blocks: &[CodeBlock]) -> Result<FaultReport> {
    let model = FaultModel::new(c, blocks)?;
    Ok(exhaustive_report(&model))
}

pub fn exhaustive_report(model: &FaultModel) -> FaultReport {
    let mut counterexample = None;
    let mut failures = 0;
    for (l, loc) in model.locations.iter().enumerate() {
        let masks = &model.masks[l];
        let outcomes = model.outcomes(masks);
        let ok = model.blocks.iter().zip(&outcomes).all(|(b, &o)| b.tolerates(o));
        if !ok {
            failures += 1;
            if counterexample.is_none() {
                counterexample = Some(Counterexample {
                    location: *loc,
                    result: model.classified(model.residuals[l].clone(), masks),
                });
            }
        }
    }
    FaultReport {
        mode: FaultMode::Exhaustive,
        p: None,
        trials: None,
        rate: None,
        ci95: None,
        pass: Some(counterexample.is_none()),
        counterexample,
        locations: model.locations.len(),
        failures,
    }
}

/// I.i.d. X faults with probability `p` at every location. Trial `t` draws
/// from its own ChaCha stream `(seed, t)`, so results do not depend on how
/// trials are spread over threads.
pub fn monte_carlo(c: &Circuit, blocks: &[CodeBlock], p: f64, trials: u64, seed: u64) -> Result<FaultReport> {
    let model = FaultModel::new(c, blocks)?;
    monte_carlo_model(&model, p, trials, seed)
}

pub fn monte_carlo_model(model: &FaultModel, p: f64, trials: u64, seed: u64) -> Result<FaultReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("fault probability {p} outside [0, 1]")));
    }
    if trials == 0 {
        return Err(Error::OutOfRange("at least one trial is required".into()));
    }
    let l = model.locations.len();
    let failures: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let fired: Vec<usize> = (0..l).filter(|_| rng.gen::<f64>() < p).collect();
            u64::from(model.fails(&model.combined(fired.into_iter())))
        })
        .sum();
    Ok(FaultReport {
        mode: FaultMode::Mc,
        p: Some(p),
        trials: Some(trials),
        rate: Some(failures as f64 / trials as f64),
        ci95: Some(wilson_interval(failures, trials)),
        counterexample: None,
        pass: None,
        locations: l,
        failures,
    })
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> [f64; 2] {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let denom = 1.0 + Z * Z / n;
    let centre = (phat + Z * Z / (2.0 * n)) / denom;
    let half = Z * (phat * (1.0 - phat) / n + Z * Z / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    [lo, hi]
}

/// Least-squares fit of `log rate = e · log p + log C`; returns `(e, C)`.
/// Points with a zero rate are skipped; `None` with fewer than two left.
pub fn fit_power_law(ps: &[f64], rates: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = ps
        .iter()
        .zip(rates)
        .filter(|(_, &r)| r > 0.0)
        .map(|(&p, &r)| (p.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let e = sxy / sxx;
    Some((e, (my - e * mx).exp()))
}
