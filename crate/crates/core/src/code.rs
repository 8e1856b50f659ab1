//! Classical parity codes and the label calculus.
//!
//! A code is a set of Z-type stabilizer supports on `n` physical qubits. Each
//! physical qubit carries a [`ParityLabel`]: the set of logical indices whose
//! Z-product its physical Z implements. Labels compose by symmetric difference,
//! and a labelling is valid when every stabilizer support XORs to the empty
//! label.
//!
//! Logical indices are 0-based in memory. The JSON format and [`ParityLabel::render`]
//! shift them by a configurable offset (1 by default), so the two-logical code
//! with a single three-body stabilizer reads `[[1],[2],[1,2]]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector};

/// Offset applied when labels are written for people rather than code.
pub const DEFAULT_LABEL_OFFSET: usize = 1;

/// Largest logical count handled by exhaustive enumeration over label subsets.
pub const EXHAUSTIVE_K_LIMIT: usize = 20;

/// Sorted, duplicate-free set of logical indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParityLabel(Vec<usize>);

impl ParityLabel {
    pub fn empty() -> Self {
        ParityLabel(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        ParityLabel(vec![i])
    }

    /// Builds a label from indices; duplicates are rejected.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        let len = v.len();
        v.dedup();
        if v.len() != len {
            return Err(Error::LabelMismatch("duplicate index in label".into()));
        }
        Ok(ParityLabel(v))
    }

    /// Label from indices that are known to be distinct. Panics otherwise.
    pub fn from_indices(indices: &[usize]) -> Self {
        Self::new(indices.iter().copied()).expect("duplicate index in label literal")
    }

    pub fn from_mask(mask: u64) -> Self {
        ParityLabel((0..64).filter(|i| (mask >> i) & 1 == 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Label of the product of the two physical Z operators.
    pub fn symmetric_difference(&self, other: &ParityLabel) -> ParityLabel {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ParityLabel(out)
    }

    /// Bitmask form; indices must be below 64.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &i| {
            assert!(i < 64, "label index {i} too large for a mask");
            m | (1u64 << i)
        })
    }

    pub fn to_bits(&self, k: usize) -> BitVector {
        BitVector::from_indices(k, &self.0)
    }

    pub fn shifted(&self, offset: usize) -> ParityLabel {
        ParityLabel(self.0.iter().map(|i| i + offset).collect())
    }

    /// Renders as `{1,3}` with indices shifted by `offset`.
    pub fn render(&self, offset: usize) -> String {
        let inner: Vec<String> = self.0.iter().map(|i| (i + offset).to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

impl fmt::Debug for ParityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.render(0))
    }
}

/// Z-type stabilizer code with optional labels and layout coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalParityCode {
    n: usize,
    k: usize,
    stabilizers: Vec<Vec<usize>>,
    labels: Option<Vec<ParityLabel>>,
    coords: Option<Vec<(i64, i64)>>,
}

impl ClassicalParityCode {
    /// Code from stabilizer supports. Supports are sorted; they must be
    /// non-empty, in range, and linearly independent.
    pub fn new(n: usize, stabilizers: Vec<Vec<usize>>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(stabilizers.len());
        for (idx, s) in stabilizers.into_iter().enumerate() {
            let mut s = s;
            s.sort_unstable();
            let len = s.len();
            s.dedup();
            if s.len() != len {
                return Err(Error::InvalidCode(format!("stabilizer {idx} repeats a qubit")));
            }
            if s.is_empty() {
                return Err(Error::InvalidCode(format!("stabilizer {idx} is empty")));
            }
            if let Some(&q) = s.iter().find(|&&q| q >= n) {
                return Err(Error::InvalidCode(format!(
                    "stabilizer {idx} touches qubit {q} but n = {n}"
                )));
            }
            sorted.push(s);
        }
        let code = ClassicalParityCode {
            n,
            k: n.checked_sub(sorted.len()).ok_or_else(|| {
                Error::InvalidCode(format!("{} stabilizers on {n} qubits", sorted.len()))
            })?,
            stabilizers: sorted,
            labels: None,
            coords: None,
        };
        if gf2::rank(&code.stabilizer_matrix()) != code.stabilizers.len() {
            return Err(Error::InvalidCode("stabilizers are linearly dependent".into()));
        }
        Ok(code)
    }

    /// `n` unencoded qubits, each its own logical.
    pub fn trivial(k: usize) -> Self {
        let mut code = Self::new(k, Vec::new()).expect("trivial code is valid");
        code.labels = Some((0..k).map(ParityLabel::singleton).collect());
        code
    }

    /// Length-`n` repetition code: stabilizers `{i, i+1}`, every label `{0}`.
    pub fn repetition(n: usize) -> Self {
        assert!(n >= 1);
        let stabs = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        let mut code = Self::new(n, stabs).expect("repetition code is valid");
        code.labels = Some(vec![ParityLabel::singleton(0); n]);
        code
    }

    /// Attaches labels after checking them against the stabilizers.
    pub fn with_labels(mut self, labels: Vec<ParityLabel>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LabelMismatch(format!(
                "{} labels for {} qubits",
                labels.len(),
                self.n
            )));
        }
        if let Some(bad) = labels.iter().find(|l| l.max_index().is_some_and(|m| m >= self.k)) {
            return Err(Error::LabelMismatch(format!(
                "label {} uses an index beyond k = {}",
                bad.render(0),
                self.k
            )));
        }
        let assignment = LabelAssignment::from_labels(self.k, labels.clone());
        let check = validate_labels(&self, &assignment);
        if !check.valid {
            return Err(Error::LabelMismatch(format!(
                "labels violate stabilizers {:?} (label rank {} of {})",
                check.violated, check.rank, self.k
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_coords(mut self, coords: Vec<(i64, i64)>) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::InvalidCode(format!(
                "{} coordinates for {} qubits",
                coords.len(),
                self.n
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn stabilizers(&self) -> &[Vec<usize>] {
        &self.stabilizers
    }

    pub fn labels(&self) -> Option<&[ParityLabel]> {
        self.labels.as_deref()
    }

    pub fn coords(&self) -> Option<&[(i64, i64)]> {
        self.coords.as_deref()
    }

    pub fn label(&self, q: usize) -> Option<&ParityLabel> {
        self.labels.as_ref().map(|l| &l[q])
    }

    /// Assignment view of the stored labels.
    pub fn assignment(&self) -> Result<LabelAssignment> {
        let labels = self.labels.clone().ok_or(Error::MissingLabels)?;
        Ok(LabelAssignment::from_labels(self.k, labels))
    }

    /// Qubits whose label equals `label`, ascending.
    pub fn qubits_with_label(&self, label: &ParityLabel) -> Vec<usize> {
        match &self.labels {
            Some(ls) => (0..self.n).filter(|&q| &ls[q] == label).collect(),
            None => Vec::new(),
        }
    }

    /// One row per stabilizer, one column per qubit.
    pub fn stabilizer_matrix(&self) -> BitMatrix {
        let rows = self
            .stabilizers
            .iter()
            .map(|s| BitVector::from_indices(self.n, s))
            .collect();
        BitMatrix::from_rows(rows, self.n).expect("supports are in range")
    }

    /// Block-diagonal union: `other`'s qubits follow ours and its logical
    /// indices are shifted by `self.k()`.
    pub fn direct_sum(&self, other: &ClassicalParityCode) -> ClassicalParityCode {
        let n = self.n + other.n;
        let mut stabs = self.stabilizers.clone();
        stabs.extend(other.stabilizers.iter().map(|s| s.iter().map(|q| q + self.n).collect()));
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => {
                let mut l = a.clone();
                l.extend(b.iter().map(|x| x.shifted(self.k)));
                Some(l)
            }
            _ => None,
        };
        ClassicalParityCode {
            n,
            k: self.k + other.k,
            stabilizers: stabs,
            labels,
            coords: None,
        }
    }

    pub fn to_json(&self, offset: usize) -> Result<String> {
        Ok(serde_json::to_string(&CodeJson::from_code(self, offset))?)
    }

    pub fn to_json_pretty(&self, offset: usize) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CodeJson::from_code(self, offset))?)
    }

    pub fn from_json(s: &str, offset: usize) -> Result<Self> {
        let raw: CodeJson = serde_json::from_str(s)?;
        raw.into_code(offset)
    }
}

/// On-disk layout of a code. Field order is part of the format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeJson {
    pub n: usize,
    pub k: usize,
    pub stabilizers: Vec<Vec<usize>>,
    pub labels: Option<Vec<Vec<usize>>>,
    pub coords: Option<Vec<[i64; 2]>>,
}

impl CodeJson {
    pub fn from_code(code: &ClassicalParityCode, offset: usize) -> Self {
        CodeJson {
            n: code.n,
            k: code.k,
            stabilizers: code.stabilizers.clone(),
            labels: code
                .labels
                .as_ref()
                .map(|ls| ls.iter().map(|l| l.shifted(offset).0).collect()),
            coords: code.coords.as_ref().map(|c| c.iter().map(|&(x, y)| [x, y]).collect()),
        }
    }

    pub fn into_code(self, offset: usize) -> Result<ClassicalParityCode> {
        let code = ClassicalParityCode::new(self.n, self.stabilizers)?;
        if code.k != self.k {
            return Err(Error::InvalidCode(format!(
                "declared k = {} but n - stabilizers = {}",
                self.k, code.k
            )));
        }
        let code = match self.labels {
            Some(ls) => {
                let mut labels = Vec::with_capacity(ls.len());
                for l in ls {
                    if l.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::InvalidCode(format!(
                            "label {l:?} is not sorted ascending without repeats"
                        )));
                    }
                    let shifted = l
                        .iter()
                        .map(|&i| {
                            i.checked_sub(offset).ok_or_else(|| {
                                Error::InvalidCode(format!("label index {i} below offset {offset}"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    labels.push(ParityLabel(shifted));
                }
                code.with_labels(labels)?
            }
            None => code,
        };
        match self.coords {
            Some(c) => code.with_coords(c.into_iter().map(|[x, y]| (x, y)).collect()),
            None => Ok(code),
        }
    }
}

/// Per-qubit labels together with the qubits declared as base qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAssignment {
    k: usize,
    labels: Vec<ParityLabel>,
    /// qubit -> logical index
    seeds: BTreeMap<usize, usize>,
    /// Qubits whose physical Z lies in the stabilizer group.
    empty_label_qubits: Vec<usize>,
}

impl LabelAssignment {
    /// Wraps labels; seeds are the lowest-index qubit carrying each singleton.
    pub fn from_labels(k: usize, labels: Vec<ParityLabel>) -> Self {
        let mut seeds = BTreeMap::new();
        let mut seen = vec![false; k];
        for (q, l) in labels.iter().enumerate() {
            if let [i] = l.indices() {
                if *i < k && !seen[*i] {
                    seen[*i] = true;
                    seeds.insert(q, *i);
                }
            }
        }
        let empty_label_qubits = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_empty())
            .map(|(q, _)| q)
            .collect();
        LabelAssignment {
            k,
            labels,
            seeds,
            empty_label_qubits,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[ParityLabel] {
        &self.labels
    }

    pub fn label(&self, q: usize) -> &ParityLabel {
        &self.labels[q]
    }

    pub fn seeds(&self) -> &BTreeMap<usize, usize> {
        &self.seeds
    }

    /// Seed qubit of logical `i`, if any.
    pub fn base_qubit(&self, i: usize) -> Option<usize> {
        self.seeds.iter().find(|(_, &l)| l == i).map(|(&q, _)| q)
    }

    pub fn empty_label_qubits(&self) -> &[usize] {
        &self.empty_label_qubits
    }

    pub fn into_labels(self) -> Vec<ParityLabel> {
        self.labels
    }

    /// `n × k` matrix whose row `q` is the indicator of `label(q)`.
    pub fn label_matrix(&self) -> BitMatrix {
        let rows = self.labels.iter().map(|l| l.to_bits(self.k)).collect();
        BitMatrix::from_rows(rows, self.k).expect("labels fit in k")
    }

    /// Bitmask per qubit; requires `k <= 64`.
    pub fn masks(&self) -> Vec<u64> {
        self.labels.iter().map(ParityLabel::to_mask).collect()
    }

    /// Labels rendered as nested lists, e.g. `[[1],[2],[1,2]]` for offset 1.
    pub fn rendered(&self, offset: usize) -> Vec<Vec<usize>> {
        self.labels.iter().map(|l| l.shifted(offset).0).collect()
    }
}

/// Outcome of [`validate_labels`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelValidation {
    pub valid: bool,
    /// Indices of stabilizers whose label XOR is not empty.
    pub violated: Vec<usize>,
    pub rank: usize,
}

/// Checks every stabilizer's label XOR is empty and the label matrix has rank `k`.
pub fn validate_labels(code: &ClassicalParityCode, assignment: &LabelAssignment) -> LabelValidation {
    let violated: Vec<usize> = if assignment.n() == code.n {
        code.stabilizers
            .iter()
            .enumerate()
            .filter(|(_, s)| !label_of_z(assignment, s).is_empty())
            .map(|(i, _)| i)
            .collect()
    } else {
        (0..code.stabilizers.len()).collect()
    };
    let rank = if assignment.k == code.k {
        gf2::rank(&assignment.label_matrix())
    } else {
        0
    };
    LabelValidation {
        valid: violated.is_empty() && rank == code.k && assignment.n() == code.n,
        violated,
        rank,
    }
}

/// Logical effect of the physical Z-product on `qubits`.
pub fn label_of_z(assignment: &LabelAssignment, qubits: &[usize]) -> ParityLabel {
    qubits
        .iter()
        .fold(ParityLabel::empty(), |acc, &q| acc.symmetric_difference(&assignment.labels[q]))
}

/// Support of the logical X̄_i representative: every qubit whose label contains `i`.
pub fn logical_x_support(assignment: &LabelAssignment, i: usize) -> Result<Vec<usize>> {
    if i >= assignment.k {
        return Err(Error::OutOfRange(format!(
            "logical index {i} with k = {}",
            assignment.k
        )));
    }
    Ok((0..assignment.n()).filter(|&q| assignment.labels[q].contains(i)).collect())
}

/// Base qubits chosen from the stabilizers alone: pivot columns of the
/// reduced null-space basis of the stabilizer matrix.
pub fn auto_seeds(code: &ClassicalParityCode) -> BTreeMap<usize, usize> {
    let ns = code.stabilizer_matrix().null_space();
    let (_, pivots) = gf2::rref(&ns);
    pivots.into_iter().enumerate().map(|(i, q)| (q, i)).collect()
}

/// Labels every qubit from the stabilizers and the base-qubit seeds
/// (`qubit -> logical`). With `None`, seeds come from [`auto_seeds`].
///
/// Propagation runs first: any stabilizer with exactly one unlabelled qubit
/// fixes it to the XOR of the others. If qubits remain, the full GF(2) system
/// is solved.
pub fn derive_labels(
    code: &ClassicalParityCode,
    seeds: Option<&BTreeMap<usize, usize>>,
) -> Result<LabelAssignment> {
    let auto;
    let seeds = match seeds {
        Some(s) => s,
        None => {
            auto = auto_seeds(code);
            &auto
        }
    };
    check_seeds(code, seeds)?;

    let n = code.n;
    let mut labels: Vec<Option<ParityLabel>> = vec![None; n];
    for (&q, &i) in seeds {
        labels[q] = Some(ParityLabel::singleton(i));
    }

    loop {
        let mut fired = false;
        for s in &code.stabilizers {
            let mut open = s.iter().filter(|&&q| labels[q].is_none());
            let (Some(&target), None) = (open.next(), open.next()) else {
                continue;
            };
            let value = s
                .iter()
                .filter(|&&q| q != target)
                .fold(ParityLabel::empty(), |acc, &q| {
                    acc.symmetric_difference(labels[q].as_ref().expect("labelled"))
                });
            labels[target] = Some(value);
            fired = true;
        }
        if !fired {
            break;
        }
    }

    let labels: Vec<ParityLabel> = if labels.iter().all(Option::is_some) {
        labels.into_iter().map(Option::unwrap).collect()
    } else {
        solve_labels(code, seeds)?
    };

    let assignment = LabelAssignment {
        k: code.k,
        empty_label_qubits: labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_empty())
            .map(|(q, _)| q)
            .collect(),
        labels,
        seeds: seeds.clone(),
    };
    let check = validate_labels(code, &assignment);
    if !check.violated.is_empty() {
        return Err(Error::InconsistentSeeds {
            stabilizers: check.violated,
        });
    }
    if !check.valid {
        return Err(Error::InvalidSeeds(format!(
            "derived label matrix has rank {} < k = {}",
            check.rank, code.k
        )));
    }
    Ok(assignment)
}

fn check_seeds(code: &ClassicalParityCode, seeds: &BTreeMap<usize, usize>) -> Result<()> {
    if seeds.len() > code.k {
        return Err(Error::InvalidSeeds(format!(
            "{} seeds for k = {}",
            seeds.len(),
            code.k
        )));
    }
    let mut used = vec![false; code.k];
    for (&q, &i) in seeds {
        if q >= code.n {
            return Err(Error::InvalidSeeds(format!("seed qubit {q} out of range")));
        }
        if i >= code.k {
            return Err(Error::InvalidSeeds(format!("seed logical {i} out of range")));
        }
        if std::mem::replace(&mut used[i], true) {
            return Err(Error::InvalidSeeds(format!("logical {i} seeded twice")));
        }
    }
    Ok(())
}

/// Solves for the label matrix column by column: unit rows at seeds and
/// zero-sum rows for every stabilizer.
fn solve_labels(code: &ClassicalParityCode, seeds: &BTreeMap<usize, usize>) -> Result<Vec<ParityLabel>> {
    let n = code.n;
    let m = code.stabilizers.len();
    let mut a = code.stabilizer_matrix();
    for &q in seeds.keys() {
        a.push_row(BitVector::from_indices(n, &[q]))?;
    }

    let rhs = |j: usize| {
        let mut b = BitVector::zeros(m + seeds.len());
        for (row, (_, &i)) in seeds.iter().enumerate() {
            if i == j {
                b.set(m + row, true);
            }
        }
        b
    };

    let mut columns = Vec::with_capacity(code.k);
    for j in 0..code.k {
        let b = rhs(j);
        match gf2::solve(&a, &b)? {
            Some(x) => columns.push(x),
            None => {
                // Certificate: a combination y of equations with y·A = 0, y·b = 1.
                let left = a.transpose().null_space();
                let y = left
                    .rows()
                    .iter()
                    .find(|y| y.dot(&b))
                    .expect("inconsistent system has a certificate");
                let stabilizers = y.iter_ones().filter(|&r| r < m).collect();
                return Err(Error::InconsistentSeeds { stabilizers });
            }
        }
    }

    let free = a.null_space();
    if free.num_rows() > 0 {
        let mut undetermined = BitVector::zeros(n);
        for v in free.rows() {
            for q in v.iter_ones() {
                undetermined.set(q, true);
            }
        }
        return Err(Error::Underdetermined {
            qubits: undetermined.ones(),
        });
    }

    Ok((0..n)
        .map(|q| ParityLabel((0..code.k).filter(|&j| columns[j].get(q)).collect()))
        .collect())
}

/// The LHZ layout on `k` logical qubits: `k` base qubits and one parity qubit
/// per pair, `k(k+1)/2` qubits in total.
///
/// Qubit `(i, j)` with `i <= j` carries label `{i}` when `i == j` and `{i, j}`
/// otherwise. Qubits are numbered row by row in `j - i`, so base qubits come
/// first. Each pair `(i, j)` owns one stabilizer:
/// `{(i,i), (j,j), (i,j)}` when `j = i + 1`,
/// `{(i,j), (i+1,j), (i,j-1)}` when `j = i + 2`, and the plaquette
/// `{(i,j), (i+1,j), (i,j-1), (i+1,j-1)}` otherwise.
/// Coordinates place `(i, j)` at `(i + j, j - i)` on a triangular grid.
pub fn lhz_layout(k: usize) -> Result<ClassicalParityCode> {
    if k < 2 {
        return Err(Error::InvalidCode(format!("LHZ layout needs k >= 2, got {k}")));
    }
    let mut index = vec![vec![usize::MAX; k]; k];
    let mut labels = Vec::new();
    let mut coords = Vec::new();
    for d in 0..k {
        for i in 0..k - d {
            let j = i + d;
            index[i][j] = labels.len();
            labels.push(if d == 0 {
                ParityLabel::singleton(i)
            } else {
                ParityLabel(vec![i, j])
            });
            coords.push(((i + j) as i64, d as i64));
        }
    }
    let mut stabs = Vec::new();
    for d in 1..k {
        for i in 0..k - d {
            let j = i + d;
            let s = match d {
                1 => vec![index[i][i], index[j][j], index[i][j]],
                2 => vec![index[i][j], index[i + 1][j], index[i][j - 1]],
                _ => vec![index[i][j], index[i + 1][j], index[i][j - 1], index[i + 1][j - 1]],
            };
            stabs.push(s);
        }
    }
    ClassicalParityCode::new(labels.len(), stabs)?
        .with_labels(labels)?
        .with_coords(coords)
}

/// Minimum logical X weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeDistance {
    /// Entry `i`: minimum weight over logical X̄ products that include `i`.
    pub per_logical: Vec<usize>,
    pub overall: usize,
}

/// Exhaustive X-distance over all non-empty logical subsets.
pub fn code_distance(code: &ClassicalParityCode, assignment: &LabelAssignment) -> Result<CodeDistance> {
    let k = assignment.k;
    if k > EXHAUSTIVE_K_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "exhaustive distance needs k <= {EXHAUSTIVE_K_LIMIT}, got {k}"
        )));
    }
    if assignment.n() != code.n {
        return Err(Error::DimensionMismatch("assignment does not cover the code".into()));
    }
    let masks = assignment.masks();
    let mut per_logical = vec![usize::MAX; k];
    let mut overall = usize::MAX;
    for subset in 1u64..(1u64 << k) {
        let w = masks
            .iter()
            .filter(|&&m| (m & subset).count_ones() % 2 == 1)
            .count();
        overall = overall.min(w);
        for (i, d) in per_logical.iter_mut().enumerate() {
            if (subset >> i) & 1 == 1 {
                *d = (*d).min(w);
            }
        }
    }
    Ok(CodeDistance {
        per_logical,
        overall: if k == 0 { 0 } else { overall },
    })
}
