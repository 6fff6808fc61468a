//! Optimal single-probe readout schemes.
//!
//! When only one spin is observed, every setting reports exactly two
//! full-weight Pauli strings, so at least `ceil(3^n / 2) = (3^n + 1) / 2`
//! settings are needed. [`construct`] builds a scheme of that size by
//! recursion on `n`, and [`weight_bound`] computes the matching counting bound
//! for any instance.
//!
//! Internally an operation `V * SW(1, j)` is described by its axes: `a_q` is
//! the letter that `V` sends `Z` to on qubit `q` (`I -> Z`, `Rx -> Y`,
//! `Ry -> X`). Such an operation sees `P` exactly when `P_j` is neither `I`
//! nor `a_j` and every other letter of `P` is `I` or `a_q`.

use serde::{Deserialize, Serialize};

use crate::clifford::{Generator, ReadoutOp};
use crate::error::{Error, Result};
use crate::pauli::{check_width, Letter};
use crate::settings::{build_instance, CostRule, CoverInstance, DetectionModel};
use crate::solver::verify;

/// Minimum number of single-probe settings on `n` qubits.
pub fn f_star(n: usize) -> u64 {
    (3u64.pow(n as u32) + 1) / 2
}

/// A single-probe pulse list together with the optimum it claims to reach.
#[derive(Clone, Debug)]
pub struct ProbeScheme {
    pub n: usize,
    /// Observed spin, 1-based.
    pub probe: usize,
    pub pulses: Vec<ReadoutOp>,
    pub claimed_optimum: u64,
}

/// Scheme file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeJson {
    pub n: usize,
    pub probe: usize,
    pub pulses: Vec<String>,
    pub optimum: u64,
    /// The list covers the probe instance and its length meets the weight bound.
    pub certified: bool,
}

/// Axis form of one operation, 0-based, probe on qubit 0.
#[derive(Clone, Debug, PartialEq, Eq)]
struct AxisOp {
    axes: Vec<Letter>,
    swap: usize,
}

impl AxisOp {
    /// The two full-weight strings this operation sees.
    fn full_weight_pair(&self) -> [Vec<Letter>; 2] {
        let mut others = Letter::NON_IDENTITY
            .into_iter()
            .filter(|&l| l != self.axes[self.swap]);
        let mut pick = || {
            let mut w = self.axes.clone();
            w[self.swap] = others.next().expect("two letters remain");
            w
        };
        [pick(), pick()]
    }
}

/// Axis-form scheme for probe qubit 0.
fn axis_scheme(n: usize) -> Vec<AxisOp> {
    if n == 1 {
        return vec![
            AxisOp { axes: vec![Letter::Z], swap: 0 },
            AxisOp { axes: vec![Letter::Y], swap: 0 },
        ];
    }
    let sub = axis_scheme(n - 1);
    // The first sub-operation is the only lifted one reading X on the probe;
    // the two full-weight strings it sees are the tails read with Z there
    // by the direct operations, all other tails get X.
    let special = sub[0].full_weight_pair();
    let mut ops = Vec::with_capacity(sub.len() + 3usize.pow(n as u32 - 1));
    for (i, op) in sub.iter().enumerate() {
        let mut axes = Vec::with_capacity(n);
        axes.push(if i == 0 { Letter::X } else { Letter::Z });
        axes.extend_from_slice(&op.axes);
        ops.push(AxisOp { axes, swap: op.swap + 1 });
    }
    for index in 0..3usize.pow(n as u32 - 1) {
        let tail = tail_word(n - 1, index);
        let head = if special.contains(&tail) { Letter::X } else { Letter::Z };
        let mut axes = Vec::with_capacity(n);
        axes.push(head);
        axes.extend(tail);
        ops.push(AxisOp { axes, swap: 0 });
    }
    ops
}

/// `index`-th word of `{Z, Y, X}^len` with the first letter most significant,
/// the axis order matching `I < Rx < Ry`.
fn tail_word(len: usize, mut index: usize) -> Vec<Letter> {
    let mut w = vec![Letter::Z; len];
    for slot in w.iter_mut().rev() {
        *slot = [Letter::Z, Letter::Y, Letter::X][index % 3];
        index /= 3;
    }
    w
}

/// Converts an axis-form operation to a readout word, moving the probe from
/// qubit 0 to qubit `probe` by relabeling.
fn to_readout(op: &AxisOp, n: usize, probe: usize) -> Result<ReadoutOp> {
    let relabel = |q: usize| {
        if q == 0 {
            probe
        } else if q == probe {
            0
        } else {
            q
        }
    };
    let mut axes = vec![Letter::Z; n];
    for (q, &a) in op.axes.iter().enumerate() {
        axes[relabel(q)] = a;
    }
    let swap = relabel(op.swap);
    let mut word: Vec<Generator> = axes
        .iter()
        .enumerate()
        .filter_map(|(q, a)| match a {
            Letter::Y => Some(Generator::Rx(q + 1)),
            Letter::X => Some(Generator::Ry(q + 1)),
            _ => None,
        })
        .collect();
    if swap != probe {
        word.push(Generator::Swap(probe.min(swap) + 1, probe.max(swap) + 1));
    }
    ReadoutOp::from_word(n, &word)
}

/// Builds an optimal single-probe scheme observing spin `probe` (1-based).
pub fn construct(n: usize, probe: usize) -> Result<ProbeScheme> {
    check_width(n)?;
    if !(1..=n).contains(&probe) {
        return Err(Error::QubitIndex { index: probe, n });
    }
    let pulses = axis_scheme(n)
        .iter()
        .map(|op| to_readout(op, n, probe - 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbeScheme {
        n,
        probe,
        pulses,
        claimed_optimum: f_star(n),
    })
}

impl ProbeScheme {
    pub fn names(&self) -> Vec<String> {
        self.pulses.iter().map(|p| p.name()).collect()
    }

    /// The probe instance restricted to this scheme's pulses.
    pub fn instance(&self) -> Result<CoverInstance> {
        build_instance(
            &DetectionModel::Probe { probe: self.probe },
            self.n,
            &self.pulses,
            &CostRule::Unit,
        )
    }

    /// Checks coverage and the counting bound, producing the scheme file.
    pub fn certify(&self) -> Result<SchemeJson> {
        let inst = self.instance()?;
        let names = self.names();
        let feasible = verify(&inst, &names)?.feasible;
        let bound = weight_bound(&inst);
        Ok(SchemeJson {
            n: self.n,
            probe: self.probe,
            certified: feasible && bound == self.pulses.len() as u64,
            pulses: names,
            optimum: self.claimed_optimum,
        })
    }
}

/// Largest per-weight counting bound: for each weight `w`, the number of
/// weight-`w` universe elements divided by the most any one column holds,
/// rounded up. Returns 0 when some column has no operation to check for
/// weight preservation.
pub fn weight_bound(inst: &CoverInstance) -> u64 {
    let n = inst.n();
    let columns = inst.columns();
    if columns.iter().any(|c| c.op.is_none()) {
        return 0;
    }
    // membership sets are images of the observables, so each column preserves
    // weight exactly when its members match the observables' weight profile
    let profile = |set: &crate::pauli::PauliSet| {
        let mut counts = vec![0u64; n + 1];
        for p in set {
            counts[p.weight()] += 1;
        }
        counts
    };
    if let Some(obs) = inst.observables() {
        let want = profile(obs);
        if columns.iter().any(|c| profile(&c.members) != want) {
            return 0;
        }
    }
    let mut universe = vec![0u64; n + 1];
    for p in inst.universe() {
        universe[p.weight()] += 1;
    }
    let mut best = 0;
    for w in 1..=n {
        if universe[w] == 0 {
            continue;
        }
        let most = columns
            .iter()
            .map(|c| c.members.iter().filter(|p| p.weight() == w).count() as u64)
            .max()
            .unwrap_or(0);
        if most == 0 {
            continue;
        }
        best = best.max(universe[w].div_ceil(most));
    }
    best
}
