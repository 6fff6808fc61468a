//! Minimum-cost cover of the Pauli universe by readout columns.
//!
//! Solves `min sum c_j x_j` subject to `A x >= 1`, `x` binary, where
//! `A[k][j] = 1` when column `j` contains row `k`. [`greedy`] is the classic
//! ratio heuristic; [`solve_exact`] runs presolve followed by branch and bound
//! and reports a proven lower bound whether or not it finishes.

mod bounds;
mod exact;
mod greedy;
mod local;
mod lp;
mod matrix;
mod verify;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::settings::CoverInstance;

pub use lp::{export_lp, write_lp};
pub use matrix::PresolveStats;
pub use verify::{verify, VerifyReport};

use exact::{Incumbent, Search, Shared};
use matrix::Matrix;

/// Default local-search length used to improve the warm start.
pub const DEFAULT_IMPROVE_STEPS: u64 = 200_000;

/// Default search budget.
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The objective equals the proven lower bound.
    Optimal,
    /// A cover was found but the budget ran out before it was proven optimal.
    Feasible,
    /// Some universe element lies in no column.
    Infeasible,
    /// The budget ran out before any cover was found.
    TimedOut,
}

/// Which argument established [`CoverSolution::lower_bound`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Per-weight counting of how many rows one column can reach.
    WeightStratified,
    /// Dual-feasible row prices.
    Fractional,
    /// Counting over all open rows.
    MaxSetSize,
    /// Complete (or partially complete) enumeration by the search.
    Exhausted,
}

/// Result of a solver run. Serializes to the solution JSON format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSolution {
    pub chosen: Vec<String>,
    pub objective: f64,
    pub status: Status,
    pub lower_bound: f64,
    pub certificate: Certificate,
    pub nodes: u64,
    pub seconds: f64,
}

impl CoverSolution {
    fn infeasible(started: Instant) -> Self {
        CoverSolution {
            chosen: Vec::new(),
            objective: 0.0,
            status: Status::Infeasible,
            lower_bound: 0.0,
            certificate: Certificate::Exhausted,
            nodes: 0,
            seconds: started.elapsed().as_secs_f64(),
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.status, Status::Optimal | Status::Feasible)
    }

    /// Number of chosen operations.
    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub time_limit: Duration,
    /// Search threads sharing one incumbent. Chosen lists are reproducible
    /// only with a single worker; objectives are reproducible for any count.
    pub workers: usize,
    pub presolve: bool,
    /// Seed the search with the greedy cover.
    pub warm_start: bool,
    /// Swap moves of local search applied to the warm start; 0 disables it.
    pub improve_steps: u64,
    /// Seed of the local search's row choices.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            time_limit: DEFAULT_TIME_LIMIT,
            workers: 1,
            presolve: true,
            warm_start: true,
            improve_steps: DEFAULT_IMPROVE_STEPS,
            seed: 0,
        }
    }
}

impl SolverOptions {
    pub fn with_time_limit(time_limit: Duration) -> Self {
        SolverOptions {
            time_limit,
            ..SolverOptions::default()
        }
    }
}

fn names(inst: &CoverInstance, mut cols: Vec<usize>) -> Vec<String> {
    cols.sort_unstable();
    cols.into_iter().map(|j| inst.columns()[j].name.clone()).collect()
}

/// Largest of the root bounds on the unreduced instance.
pub fn root_bound(inst: &CoverInstance) -> (f64, Certificate) {
    let m = Matrix::from_instance(inst);
    let shared = Shared::new(Instant::now() + Duration::from_secs(3600), None);
    let b = Search::new(&m, &shared).root_bound();
    (b.value, b.kind)
}

/// Greedy cover: most newly covered rows per unit cost, lowest index on ties.
pub fn greedy(inst: &CoverInstance) -> Result<CoverSolution> {
    let started = Instant::now();
    if !inst.coverable() {
        return Ok(CoverSolution::infeasible(started));
    }
    let m = Matrix::from_instance(inst);
    let cols = greedy::greedy_cover(&m).expect("coverable instance");
    let objective: f64 = cols.iter().map(|&j| m.costs[j]).sum();
    let (lower_bound, certificate) = root_bound(inst);
    let status = if lower_bound >= objective - 1e-9 {
        Status::Optimal
    } else {
        Status::Feasible
    };
    Ok(CoverSolution {
        chosen: names(inst, cols),
        objective,
        status,
        lower_bound: lower_bound.min(objective),
        certificate,
        nodes: 0,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Presolve statistics for an instance, without solving it.
pub fn presolve_stats(inst: &CoverInstance) -> PresolveStats {
    Matrix::from_instance(inst).presolve().1
}

/// Exact minimum-cost cover within `opts.time_limit`.
pub fn solve_exact(inst: &CoverInstance, opts: &SolverOptions) -> Result<CoverSolution> {
    if opts.time_limit.is_zero() {
        return Err(Error::Budget);
    }
    let started = Instant::now();
    if !inst.coverable() {
        return Ok(CoverSolution::infeasible(started));
    }
    let full = Matrix::from_instance(inst);
    let m = if opts.presolve { full.presolve().0 } else { full };
    let forced_cost = m.forced_cost;

    if m.rows == 0 {
        return Ok(CoverSolution {
            chosen: names(inst, m.forced.clone()),
            objective: forced_cost,
            status: Status::Optimal,
            lower_bound: forced_cost,
            certificate: Certificate::Exhausted,
            nodes: 0,
            seconds: started.elapsed().as_secs_f64(),
        });
    }

    let deadline = started + opts.time_limit;
    let root = Search::new(&m, &Shared::new(deadline, None)).root_bound();
    let initial = if opts.warm_start {
        greedy::greedy_cover(&m).map(|mut cols| {
            if opts.improve_steps > 0 {
                // leave most of the budget to the search
                let ls_deadline = started + opts.time_limit / 4;
                cols = local::improve(&m, &cols, opts.improve_steps, ls_deadline, root.value, opts.seed);
            }
            Incumbent {
                cost: cols.iter().map(|&j| m.costs[j]).sum(),
                cols,
            }
        })
    } else {
        None
    };
    let shared = Shared::new(deadline, initial);

    let workers = opts.workers.max(1);
    let (unsettled, nodes) = if workers == 1 {
        let mut s = Search::new(&m, &shared);
        let u = s.run_root(0, 1);
        (u, s.nodes)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (m, shared) = (&m, &shared);
                    scope.spawn(move || {
                        let mut s = Search::new(m, shared);
                        let u = s.run_root(w, workers);
                        (u, s.nodes)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .fold((f64::INFINITY, 0), |(u, n), (wu, wn)| (u.min(wu), n + wn))
        })
    };

    let timed_out = shared.timed_out();
    let incumbent = shared.into_incumbent();
    let seconds = started.elapsed().as_secs_f64();
    let Some(best) = incumbent else {
        let lb = forced_cost + unsettled.max(root.value);
        return Ok(CoverSolution {
            chosen: Vec::new(),
            objective: 0.0,
            status: if timed_out { Status::TimedOut } else { Status::Infeasible },
            lower_bound: if lb.is_finite() { lb } else { 0.0 },
            certificate: root.kind,
            nodes,
            seconds,
        });
    };
    let objective = forced_cost + best.cost;
    let mut cols: Vec<usize> = best.cols.iter().map(|&j| m.col_origin[j]).collect();
    cols.extend(&m.forced);

    let root_total = forced_cost + root.value;
    let search_total = forced_cost + unsettled.min(best.cost);
    let (lower_bound, certificate) = if root_total >= objective - 1e-9 {
        (objective, root.kind)
    } else if search_total > root_total {
        (search_total.min(objective), Certificate::Exhausted)
    } else {
        (root_total, root.kind)
    };
    let status = if lower_bound >= objective - 1e-9 {
        Status::Optimal
    } else {
        Status::Feasible
    };
    Ok(CoverSolution {
        chosen: names(inst, cols),
        objective,
        status,
        lower_bound,
        certificate,
        nodes,
        seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{canonical_local_set, ReadoutOp};
    use crate::settings::{build_instance, CostRule, DetectionModel};

    fn homonuclear(n: usize) -> CoverInstance {
        build_instance(
            &DetectionModel::Homonuclear,
            n,
            &canonical_local_set(n).unwrap(),
            &CostRule::Unit,
        )
        .unwrap()
    }

    #[test]
    fn one_qubit_needs_two() {
        let inst = homonuclear(1);
        let g = greedy(&inst).unwrap();
        assert_eq!(g.chosen, vec!["I", "Rx1"]);
        let e = solve_exact(&inst, &SolverOptions::default()).unwrap();
        assert_eq!(e.objective, 2.0);
        assert_eq!(e.status, Status::Optimal);
    }

    #[test]
    fn small_homonuclear_optima() {
        for (n, want) in [(2, 4.0), (3, 7.0)] {
            let inst = homonuclear(n);
            let e = solve_exact(&inst, &SolverOptions::default()).unwrap();
            assert_eq!(e.objective, want, "n = {n}");
            assert_eq!(e.status, Status::Optimal);
            assert!(verify(&inst, &e.chosen).unwrap().feasible);
            let g = greedy(&inst).unwrap();
            assert!(g.objective >= e.objective);
        }
    }

    #[test]
    fn infeasible_and_budget_errors() {
        let ops: Vec<ReadoutOp> = ["I", "Rx1", "Ry1"].iter().map(|s| ReadoutOp::parse(s, 2).unwrap()).collect();
        let inst = build_instance(&DetectionModel::Probe { probe: 1 }, 2, &ops, &CostRule::Unit).unwrap();
        assert_eq!(greedy(&inst).unwrap().status, Status::Infeasible);
        assert_eq!(solve_exact(&inst, &SolverOptions::default()).unwrap().status, Status::Infeasible);
        let ok = homonuclear(1);
        assert!(matches!(
            solve_exact(&ok, &SolverOptions::with_time_limit(Duration::ZERO)),
            Err(Error::Budget)
        ));
    }

    #[test]
    fn solution_json_shape() {
        let e = solve_exact(&homonuclear(1), &SolverOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            vec!["certificate", "chosen", "lower_bound", "nodes", "objective", "seconds", "status"]
        );
        assert_eq!(v["status"], "optimal");
    }
}
