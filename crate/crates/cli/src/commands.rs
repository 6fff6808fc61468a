use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use tomocover::clifford::canonical_local_set;
use tomocover::probe::construct;
use tomocover::settings::{build_instance, CostRule, CoverInstance, DetectionModel};
use tomocover::solver::{self, CoverSolution, SolverOptions, Status};

use crate::args::{read_list, BudgetArgs, ExportArgs, Format, SchemeArgs, SolveArgs, SolverChoice, TableArgs, VerifyArgs};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok = 0,
    Infeasible = 2,
    TimedOut = 3,
}

impl From<Status> for Outcome {
    fn from(s: Status) -> Self {
        match s {
            Status::Optimal | Status::Feasible => Outcome::Ok,
            Status::Infeasible => Outcome::Infeasible,
            Status::TimedOut => Outcome::TimedOut,
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn options(b: &BudgetArgs) -> Result<SolverOptions> {
    let mut opts = SolverOptions::with_time_limit(b.duration()?);
    opts.workers = b.threads.max(1);
    opts.seed = b.seed;
    Ok(opts)
}

fn summary(label: &str, s: &CoverSolution) {
    let status = serde_json::to_value(s.status).expect("status serializes");
    let certificate = serde_json::to_value(s.certificate).expect("certificate serializes");
    eprintln!(
        "{label:<7} objective {:>6}  bound {:>6}  status {:<9}  certificate {:<17}  nodes {:>10}  {:.2}s",
        s.objective,
        s.lower_bound,
        status.as_str().unwrap_or(""),
        certificate.as_str().unwrap_or(""),
        s.nodes,
        s.seconds
    );
}

#[derive(Serialize)]
struct SolutionRow<'a> {
    solver: &'a str,
    objective: f64,
    status: Status,
    lower_bound: f64,
    certificate: solver::Certificate,
    nodes: u64,
    seconds: f64,
    chosen: String,
}

pub fn solve(a: &SolveArgs) -> Result<Outcome> {
    let inst = a.instance.problem()?.build()?;
    let opts = options(&a.budget)?;
    let mut runs: Vec<(&str, CoverSolution)> = Vec::new();
    if matches!(a.solver, SolverChoice::Greedy | SolverChoice::Both) {
        runs.push(("greedy", solver::greedy(&inst)?));
    }
    if matches!(a.solver, SolverChoice::Exact | SolverChoice::Both) {
        runs.push(("exact", solver::solve_exact(&inst, &opts)?));
    }
    for (label, s) in &runs {
        summary(label, s);
    }
    let text = match a.format {
        Format::Json if runs.len() == 1 => to_json(&runs[0].1)?,
        Format::Json => {
            let map: std::collections::BTreeMap<&str, &CoverSolution> = runs.iter().map(|(l, s)| (*l, s)).collect();
            to_json(&map)?
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for (label, s) in &runs {
                w.serialize(SolutionRow {
                    solver: label,
                    objective: s.objective,
                    status: s.status,
                    lower_bound: s.lower_bound,
                    certificate: s.certificate,
                    nodes: s.nodes,
                    seconds: s.seconds,
                    chosen: s.chosen.join(";"),
                })?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(&text, a.out.as_deref())?;
    let last = &runs.last().expect("at least one solver ran").1;
    Ok(last.status.into())
}

#[derive(Serialize, Debug)]
struct TableRow {
    n: usize,
    canonical: u64,
    greedy: f64,
    exact: f64,
    lower_bound: f64,
    status: Status,
}

fn homonuclear(n: usize) -> Result<CoverInstance> {
    Ok(build_instance(
        &DetectionModel::Homonuclear,
        n,
        &canonical_local_set(n)?,
        &CostRule::Unit,
    )?)
}

pub fn table(a: &TableArgs) -> Result<Outcome> {
    if !(1..=6).contains(&a.max_n) {
        bail!("--max-n must lie in 1..=6, got {}", a.max_n);
    }
    let opts = options(&a.budget)?;
    let mut rows = Vec::new();
    eprintln!("{:>2}  {:>9}  {:>6}  {:>6}  {:>6}  status", "n", "canonical", "greedy", "exact", "bound");
    for n in 1..=a.max_n {
        let inst = homonuclear(n)?;
        let g = solver::greedy(&inst)?;
        let e = solver::solve_exact(&inst, &opts)?;
        let row = TableRow {
            n,
            canonical: 3u64.pow(n as u32),
            greedy: g.objective,
            exact: e.objective,
            lower_bound: e.lower_bound,
            status: e.status,
        };
        let status = serde_json::to_value(row.status)?;
        eprintln!(
            "{:>2}  {:>9}  {:>6}  {:>6}  {:>6}  {}",
            row.n,
            row.canonical,
            row.greedy,
            row.exact,
            row.lower_bound,
            status.as_str().unwrap_or("")
        );
        rows.push(row);
    }
    let text = match a.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(Outcome::Ok)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let inst = a.instance.problem()?.build()?;
    let path = a.pulses.to_string_lossy();
    let names = read_list(&path)?;
    let report = solver::verify(&inst, &names)?;
    eprintln!(
        "{} of {} covered with {} pulses, objective {}",
        report.covered,
        report.total,
        names.len(),
        report.objective
    );
    emit(&to_json(&report)?, None)?;
    Ok(if report.feasible { Outcome::Ok } else { Outcome::Infeasible })
}

pub fn export_lp(a: &ExportArgs) -> Result<Outcome> {
    let inst = a.instance.problem()?.build()?;
    solver::export_lp(&inst, &a.out)?;
    eprintln!(
        "wrote {} variables and {} constraints to {}",
        inst.num_columns(),
        inst.num_rows(),
        a.out.display()
    );
    Ok(if inst.coverable() { Outcome::Ok } else { Outcome::Infeasible })
}

pub fn scheme(a: &SchemeArgs) -> Result<Outcome> {
    let report = construct(a.n, a.probe)?.certify()?;
    eprintln!(
        "{} pulses, optimum {}, certified {}",
        report.pulses.len(),
        report.optimum,
        report.certified
    );
    emit(&to_json(&report)?, a.out.as_deref())?;
    Ok(Outcome::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::from(Status::Optimal) as u8, 0);
        assert_eq!(Outcome::from(Status::Feasible) as u8, 0);
        assert_eq!(Outcome::from(Status::Infeasible) as u8, 2);
        assert_eq!(Outcome::from(Status::TimedOut) as u8, 3);
    }
}
