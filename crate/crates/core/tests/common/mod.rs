//! Shared oracles and instance generators for the integration tests.
#![allow(dead_code)]

pub mod matrix;

use proptest::prelude::*;
use tomocover::clifford::{canonical_local_set, single_probe_set, ReadoutOp};
use tomocover::pauli::{basis_vec, PauliSet};
use tomocover::settings::{build_instance, CostRule, CoverInstance, DetectionModel, HamiltonianSpec};

/// Minimum cost over all column subsets, by exhaustive enumeration.
/// `None` when no subset covers the universe.
pub fn brute_force(inst: &CoverInstance) -> Option<f64> {
    let k = inst.num_columns();
    assert!(k <= 16, "enumeration limited to small families");
    let rows = inst.num_rows();
    let masks: Vec<Vec<bool>> = (0..k)
        .map(|j| {
            let mut m = vec![false; rows];
            for &r in inst.column_rows(j) {
                m[r as usize] = true;
            }
            m
        })
        .collect();
    let mut best: Option<f64> = None;
    for subset in 0u32..(1 << k) {
        let cost: f64 = (0..k).filter(|j| subset >> j & 1 == 1).map(|j| inst.cost(j)).sum();
        if best.is_some_and(|b| cost >= b) {
            continue;
        }
        let covered = (0..rows).all(|r| (0..k).any(|j| subset >> j & 1 == 1 && masks[j][r]));
        if covered {
            best = Some(cost);
        }
    }
    best
}

pub fn homonuclear(n: usize) -> CoverInstance {
    build_instance(
        &DetectionModel::Homonuclear,
        n,
        &canonical_local_set(n).unwrap(),
        &CostRule::Unit,
    )
    .unwrap()
}

pub fn probe_instance(n: usize, probe: usize) -> CoverInstance {
    build_instance(
        &DetectionModel::Probe { probe },
        n,
        &single_probe_set(n, probe).unwrap(),
        &CostRule::Unit,
    )
    .unwrap()
}

/// `{I, Rx1, Ry1, Rx2, Ry2}` on the homonuclear two-spin system.
pub fn venn_instance() -> CoverInstance {
    let ops: Vec<ReadoutOp> = ["I", "Rx1", "Ry1", "Rx2", "Ry2"]
        .iter()
        .map(|s| ReadoutOp::parse(s, 2).unwrap())
        .collect();
    build_instance(&DetectionModel::Homonuclear, 2, &ops, &CostRule::Unit).unwrap()
}

pub fn model(n: usize) -> impl Strategy<Value = DetectionModel> {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|k| (k + 1..=n).map(move |j| (k, j))).collect();
    let np = pairs.len();
    prop_oneof![
        Just(DetectionModel::Homonuclear),
        (1..=n).prop_map(|probe| DetectionModel::Probe { probe }),
        (
            proptest::collection::vec(any::<bool>(), np),
            proptest::collection::btree_set(1..=n, 1..=n)
        )
            .prop_map(move |(keep, observed)| {
                let couplings = pairs
                    .iter()
                    .zip(&keep)
                    .filter(|(_, &k)| k)
                    .map(|(&(k, j), _)| (k, j, 7.5));
                DetectionModel::Coupling {
                    observed: observed.into_iter().collect(),
                    hamiltonian: HamiltonianSpec::new(n, vec![0.0; n], couplings).unwrap(),
                }
            }),
    ]
}

pub fn cost_rule() -> impl Strategy<Value = CostRule> {
    prop_oneof![
        Just(CostRule::Unit),
        prop_oneof![Just(0.5), Just(1.0), Just(2.5)].prop_map(|alpha| CostRule::Locality { alpha }),
    ]
}

/// Instance on `n` qubits whose family is a random selection of at most
/// `max_cols` swap-routed operations for a random probe.
pub fn op_instance(n: usize, max_cols: usize) -> impl Strategy<Value = CoverInstance> {
    let pool = single_probe_set(n, 1).unwrap();
    let size = pool.len();
    (
        model(n),
        cost_rule(),
        proptest::collection::btree_set(0..size, 1..=max_cols.min(size)),
    )
        .prop_map(move |(model, cost, picks)| {
            let ops: Vec<ReadoutOp> = picks.into_iter().map(|i| pool[i].clone()).collect();
            build_instance(&model, n, &ops, &cost).unwrap()
        })
}

/// Random explicit sets over the two-qubit universe with fractional costs.
pub fn set_instance(max_cols: usize) -> impl Strategy<Value = CoverInstance> {
    let universe = basis_vec(2).unwrap();
    proptest::collection::vec(
        (proptest::collection::btree_set(0..15usize, 1..8), 1u32..8),
        1..=max_cols,
    )
    .prop_map(move |family| {
        let family = family
            .into_iter()
            .enumerate()
            .map(|(j, (members, cost))| {
                let mut set = PauliSet::empty(2).unwrap();
                for m in members {
                    set.insert(universe[m]).unwrap();
                }
                (format!("S{j}"), set, cost as f64 / 2.0)
            })
            .collect();
        CoverInstance::from_sets(2, family).unwrap()
    })
}

pub fn any_small_instance(max_cols: usize) -> BoxedStrategy<CoverInstance> {
    prop_oneof![
        op_instance(1, max_cols),
        op_instance(2, max_cols),
        op_instance(3, max_cols),
        set_instance(max_cols),
    ]
    .boxed()
}

/// Operations listed in a fixture file, comments and blank lines removed.
pub fn fixture(name: &str) -> Vec<String> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect()
}
