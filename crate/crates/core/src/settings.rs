//! Detection models, observable families and the set-cover instance.
//!
//! A detection model fixes the operators one acquisition reports. Each
//! candidate readout operation conjugates that family into one column of the
//! cover instance. Rows are the non-identity Pauli strings in lexicographic
//! order, so row `k` is the string with packed code `k + 1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::clifford::{canonical_local_set, single_probe_set, ReadoutOp};
use crate::error::{Error, Result};
use crate::pauli::{basis_vec, check_width, Letter, PauliSet, PauliString};

/// Weakly coupled spin Hamiltonian: Zeeman offsets and scalar couplings.
///
/// Offsets are carried for bookkeeping; only the coupling topology feeds
/// observable generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HamiltonianJson", into = "HamiltonianJson")]
pub struct HamiltonianSpec {
    n: usize,
    offsets: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
}

#[derive(Serialize, Deserialize)]
struct CouplingJson {
    k: usize,
    j: usize,
    hz: f64,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianJson {
    n: usize,
    #[serde(default)]
    offsets: Vec<f64>,
    #[serde(default)]
    couplings: Vec<CouplingJson>,
}

impl TryFrom<HamiltonianJson> for HamiltonianSpec {
    type Error = Error;

    fn try_from(j: HamiltonianJson) -> Result<Self> {
        let offsets = if j.offsets.is_empty() {
            vec![0.0; j.n]
        } else {
            j.offsets
        };
        HamiltonianSpec::new(j.n, offsets, j.couplings.into_iter().map(|c| (c.k, c.j, c.hz)))
    }
}

impl From<HamiltonianSpec> for HamiltonianJson {
    fn from(h: HamiltonianSpec) -> Self {
        HamiltonianJson {
            n: h.n,
            offsets: h.offsets,
            couplings: h
                .couplings
                .into_iter()
                .map(|((k, j), hz)| CouplingJson { k, j, hz })
                .collect(),
        }
    }
}

impl HamiltonianSpec {
    /// `couplings` are `(k, j, J_kj)` with 1-based spins. Both orientations of a
    /// pair may be listed as long as they agree.
    pub fn new<I>(n: usize, offsets: Vec<f64>, couplings: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        check_width(n)?;
        if offsets.len() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: offsets.len(),
            });
        }
        let mut map = BTreeMap::new();
        for (k, j, hz) in couplings {
            for q in [k, j] {
                if !(1..=n).contains(&q) {
                    return Err(Error::QubitIndex { index: q, n });
                }
            }
            if k == j {
                return Err(Error::BadCoupling(k, j));
            }
            let key = (k.min(j), k.max(j));
            if let Some(prev) = map.insert(key, hz) {
                if prev != hz {
                    return Err(Error::BadCoupling(k, j));
                }
            }
        }
        Ok(HamiltonianSpec {
            n,
            offsets,
            couplings: map,
        })
    }

    /// Every pair coupled with the same constant.
    pub fn fully_coupled(n: usize, hz: f64) -> Result<Self> {
        let pairs = (1..=n).flat_map(|k| (k + 1..=n).map(move |j| (k, j, hz)));
        HamiltonianSpec::new(n, vec![0.0; n], pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// `J_kj`, symmetric, zero on the diagonal and for absent pairs.
    pub fn coupling(&self, k: usize, j: usize) -> f64 {
        if k == j {
            return 0.0;
        }
        self.couplings
            .get(&(k.min(j), k.max(j)))
            .copied()
            .unwrap_or(0.0)
    }

    /// Spins with a non-zero coupling to `m` (1-based).
    pub fn neighbors(&self, m: usize) -> BTreeSet<usize> {
        (1..=self.n)
            .filter(|&j| self.coupling(m, j) != 0.0)
            .collect()
    }
}

/// Which single-quantum coherences one acquisition reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetectionModel {
    /// Every spin's multiplet is resolved.
    Homonuclear,
    /// Only the given spin (1-based) is observed.
    Probe { probe: usize },
    /// Observed spins show `{I, Z}` on coupled partners and `I` elsewhere.
    /// This generalises the probe model to incomplete coupling graphs.
    Coupling {
        observed: Vec<usize>,
        hamiltonian: HamiltonianSpec,
    },
}

fn single_quantum(n: usize, m: usize, partners: &[usize]) -> Vec<PauliString> {
    let mut out = Vec::with_capacity(2 << partners.len());
    for top in [Letter::X, Letter::Y] {
        for mask in 0..(1usize << partners.len()) {
            let mut letters = vec![Letter::I; n];
            letters[m] = top;
            for (b, &q) in partners.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    letters[q] = Letter::Z;
                }
            }
            out.push(PauliString::new(&letters).expect("width checked"));
        }
    }
    out
}

/// Operators reported by one acquisition under `model` on `n` qubits.
pub fn observables(model: &DetectionModel, n: usize) -> Result<PauliSet> {
    check_width(n)?;
    let mut set = PauliSet::empty(n)?;
    let all_but = |m: usize| (0..n).filter(|&q| q != m).collect::<Vec<_>>();
    match model {
        DetectionModel::Homonuclear => {
            for m in 0..n {
                for p in single_quantum(n, m, &all_but(m)) {
                    set.insert(p)?;
                }
            }
        }
        DetectionModel::Probe { probe } => {
            if !(1..=n).contains(probe) {
                return Err(Error::QubitIndex { index: *probe, n });
            }
            for p in single_quantum(n, probe - 1, &all_but(probe - 1)) {
                set.insert(p)?;
            }
        }
        DetectionModel::Coupling {
            observed,
            hamiltonian,
        } => {
            if hamiltonian.n() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    found: hamiltonian.n(),
                });
            }
            if observed.is_empty() {
                return Err(Error::EmptyObserved);
            }
            for &m in observed {
                if !(1..=n).contains(&m) {
                    return Err(Error::QubitIndex { index: m, n });
                }
                let partners: Vec<usize> = hamiltonian.neighbors(m).iter().map(|q| q - 1).collect();
                for p in single_quantum(n, m - 1, &partners) {
                    set.insert(p)?;
                }
            }
        }
    }
    Ok(set)
}

/// Per-operation cost used by the weighted objective.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostRule {
    #[default]
    Unit,
    /// `1 + alpha * (number of swap generators)`.
    Locality { alpha: f64 },
}

impl CostRule {
    pub fn cost(&self, op: &ReadoutOp) -> Result<f64> {
        let c = match *self {
            CostRule::Unit => 1.0,
            CostRule::Locality { alpha } => 1.0 + alpha * op.swap_count() as f64,
        };
        if c > 0.0 && c.is_finite() {
            Ok(c)
        } else {
            Err(Error::NonPositiveCost {
                op: op.name(),
                cost: c,
            })
        }
    }
}

/// Named candidate families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CandidateSpec {
    /// `"canonical"` for `{I, Rx, Ry}^n`, `"probe:<q>"` for the swap-routed set.
    Named(String),
    List(Vec<String>),
}

impl CandidateSpec {
    pub fn resolve(&self, n: usize) -> Result<Vec<ReadoutOp>> {
        match self {
            CandidateSpec::Named(name) if name == "canonical" => canonical_local_set(n),
            CandidateSpec::Named(name) => {
                let probe = name
                    .strip_prefix("probe:")
                    .and_then(|q| q.parse::<usize>().ok())
                    .ok_or_else(|| Error::Invalid(format!("unknown candidate set {name:?}")))?;
                single_probe_set(n, probe)
            }
            CandidateSpec::List(words) => words.iter().map(|w| ReadoutOp::parse(w, n)).collect(),
        }
    }
}

/// One column of the cover instance.
#[derive(Clone, Debug)]
pub struct Column {
    pub name: String,
    /// `None` for columns supplied as explicit sets.
    pub op: Option<ReadoutOp>,
    pub members: PauliSet,
    pub cost: f64,
}

/// Universe, family, costs and incidence of a readout-design problem.
#[derive(Clone, Debug)]
pub struct CoverInstance {
    n: usize,
    universe: Vec<PauliString>,
    observables: Option<PauliSet>,
    columns: Vec<Column>,
    column_rows: Vec<Vec<u32>>,
    incidence: Vec<Bits>,
    uncovered: Vec<usize>,
}

impl CoverInstance {
    /// Builds an instance from explicit sets. Every member must be a
    /// non-identity string of width `n`.
    pub fn from_sets(n: usize, family: Vec<(String, PauliSet, f64)>) -> Result<Self> {
        let columns = family
            .into_iter()
            .map(|(name, members, cost)| Column {
                name,
                op: None,
                members,
                cost,
            })
            .collect();
        CoverInstance::assemble(n, None, columns)
    }

    fn assemble(n: usize, observables: Option<PauliSet>, columns: Vec<Column>) -> Result<Self> {
        check_width(n)?;
        if columns.is_empty() {
            return Err(Error::NoCandidates);
        }
        let universe = basis_vec(n)?;
        let mut column_rows = Vec::with_capacity(columns.len());
        for col in &columns {
            if col.members.n() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    found: col.members.n(),
                });
            }
            if !(col.cost > 0.0 && col.cost.is_finite()) {
                return Err(Error::NonPositiveCost {
                    op: col.name.clone(),
                    cost: col.cost,
                });
            }
            let rows = col
                .members
                .iter()
                .map(|p| {
                    p.basis_index().map(|k| k as u32).ok_or_else(|| {
                        Error::Invalid(format!("column {} contains the identity", col.name))
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            column_rows.push(rows);
        }
        let mut incidence = vec![Bits::new(columns.len()); universe.len()];
        for (j, rows) in column_rows.iter().enumerate() {
            for &k in rows {
                incidence[k as usize].insert(j);
            }
        }
        let uncovered = incidence
            .iter()
            .enumerate()
            .filter(|(_, row)| row.none())
            .map(|(k, _)| k)
            .collect();
        Ok(CoverInstance {
            n,
            universe,
            observables,
            columns,
            column_rows,
            incidence,
            uncovered,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> &[PauliString] {
        &self.universe
    }

    pub fn observables(&self) -> Option<&PauliSet> {
        self.observables.as_ref()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn num_rows(&self) -> usize {
        self.universe.len()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn cost(&self, j: usize) -> f64 {
        self.columns[j].cost
    }

    pub fn costs(&self) -> Vec<f64> {
        self.columns.iter().map(|c| c.cost).collect()
    }

    /// Row indices covered by column `j`, ascending.
    pub fn column_rows(&self, j: usize) -> &[u32] {
        &self.column_rows[j]
    }

    /// Columns containing row `k`.
    pub fn row(&self, k: usize) -> &Bits {
        &self.incidence[k]
    }

    pub fn contains(&self, k: usize, j: usize) -> bool {
        self.incidence[k].contains(j)
    }

    /// Whether the union of all columns is the full universe.
    pub fn coverable(&self) -> bool {
        self.uncovered.is_empty()
    }

    /// Rows no column reaches.
    pub fn unreachable(&self) -> Vec<PauliString> {
        self.uncovered.iter().map(|&k| self.universe[k]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Resolves a name to a column, falling back to normal-form equality when
    /// the instance was built from operations.
    pub fn resolve(&self, name: &str) -> Result<usize> {
        if let Some(j) = self.column_index(name) {
            return Ok(j);
        }
        let op = ReadoutOp::parse(name, self.n).map_err(|_| Error::UnknownOp(name.to_string()))?;
        self.columns
            .iter()
            .position(|c| c.op.as_ref() == Some(&op))
            .ok_or_else(|| Error::UnknownOp(name.to_string()))
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            n: self.n,
            universe: self.universe.iter().map(|p| p.to_string()).collect(),
            family: self
                .columns
                .iter()
                .map(|c| FamilyJson {
                    name: c.name.clone(),
                    members: c.members.to_strings(),
                    cost: c.cost,
                })
                .collect(),
            coverable: self.coverable(),
            unreachable: self.unreachable().iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn from_json(json: &InstanceJson) -> Result<Self> {
        let family = json
            .family
            .iter()
            .map(|f| Ok((f.name.clone(), PauliSet::from_strings(json.n, &f.members)?, f.cost)))
            .collect::<Result<Vec<_>>>()?;
        let mut inst = CoverInstance::from_sets(json.n, family)?;
        // names that parse as operations regain their action
        for col in &mut inst.columns {
            col.op = ReadoutOp::parse(&col.name, json.n).ok();
        }
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub name: String,
    pub members: Vec<String>,
    pub cost: f64,
}

/// Serialized form of a [`CoverInstance`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    pub universe: Vec<String>,
    pub family: Vec<FamilyJson>,
    pub coverable: bool,
    pub unreachable: Vec<String>,
}

/// Conjugates the model's observables by every candidate.
pub fn build_instance(
    model: &DetectionModel,
    n: usize,
    candidates: &[ReadoutOp],
    cost_rule: &CostRule,
) -> Result<CoverInstance> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let obs = observables(model, n)?;
    let mut columns = Vec::with_capacity(candidates.len());
    for op in candidates {
        if op.n() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: op.n(),
            });
        }
        let mut members = PauliSet::empty(n)?;
        for o in &obs {
            members.insert(op.conjugate(o)?)?;
        }
        columns.push(Column {
            name: op.name(),
            op: Some(op.clone()),
            members,
            cost: cost_rule.cost(op)?,
        });
    }
    CoverInstance::assemble(n, Some(obs), columns)
}

/// Problem description as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub n: usize,
    pub model: DetectionModel,
    pub candidates: CandidateSpec,
    #[serde(default)]
    pub cost_rule: CostRule,
}

impl Problem {
    pub fn build(&self) -> Result<CoverInstance> {
        let ops = self.candidates.resolve(self.n)?;
        build_instance(&self.model, self.n, &ops, &self.cost_rule)
    }
}
