use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tomocover::settings::{CandidateSpec, CostRule, DetectionModel, Problem};

#[derive(Parser, Debug)]
#[command(name = "tomocover", version, about = "Minimum readout-pulse sets for Pauli-basis tomography")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one instance with the greedy and/or exact solver.
    Solve(SolveArgs),
    /// Compare canonical, greedy and exact counts for homonuclear systems.
    Table(TableArgs),
    /// Check a pulse list against an instance.
    Verify(VerifyArgs),
    /// Write the instance as a 0-1 program in LP format.
    ExportLp(ExportArgs),
    /// Emit the optimal single-probe scheme.
    Scheme(SchemeArgs),
}

/// Instance description shared by several commands.
#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Number of spins.
    #[arg(long, required_unless_present = "problem")]
    pub n: Option<usize>,
    /// `homonuclear`, `probe:<q>`, or `@file.json` holding a detection model.
    #[arg(long, default_value = "homonuclear")]
    pub model: String,
    /// `canonical`, `probe:<q>`, or `@file` with one operation per line.
    /// Defaults to `probe:<q>` for probe models and `canonical` otherwise.
    #[arg(long)]
    pub candidates: Option<String>,
    /// `unit` or `locality:<alpha>` (cost 1 + alpha per swap).
    #[arg(long, default_value = "unit")]
    pub cost: String,
    /// Problem JSON replacing the flags above.
    #[arg(long, conflicts_with_all = ["n", "candidates"])]
    pub problem: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Exact-search budget in seconds.
    #[arg(long, env = "TOMOCOVER_TIME_LIMIT", default_value_t = 600.0)]
    pub time_limit: f64,
    /// Search threads for the exact solver.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Seed of the incumbent local search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl BudgetArgs {
    pub fn duration(&self) -> Result<Duration> {
        if !(self.time_limit.is_finite() && self.time_limit > 0.0) {
            bail!("time limit must be positive, got {}", self.time_limit);
        }
        Ok(Duration::from_secs_f64(self.time_limit))
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Greedy,
    Exact,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub solver: SolverChoice,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the machine-readable result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Largest number of spins, at most 6.
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Pulse list: one operation per line, `#` starts a comment.
    #[arg(long)]
    pub pulses: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    #[arg(long)]
    pub n: usize,
    /// Observed spin, 1-based.
    #[arg(long, default_value_t = 1)]
    pub probe: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

pub fn parse_model(text: &str) -> Result<DetectionModel> {
    if text == "homonuclear" {
        return Ok(DetectionModel::Homonuclear);
    }
    if let Some(q) = text.strip_prefix("probe:") {
        let probe = q.parse().with_context(|| format!("bad probe index {q:?}"))?;
        return Ok(DetectionModel::Probe { probe });
    }
    if let Some(path) = text.strip_prefix('@') {
        return serde_json::from_str(&read(path)?).with_context(|| format!("parsing model {path}"));
    }
    Err(anyhow!("unknown model {text:?}; expected homonuclear, probe:<q> or @file.json"))
}

/// Non-empty lines with `#` comments removed.
pub fn read_list(path: &str) -> Result<Vec<String>> {
    Ok(read(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

pub fn parse_candidates(text: &str) -> Result<CandidateSpec> {
    match text.strip_prefix('@') {
        Some(path) => Ok(CandidateSpec::List(read_list(path)?)),
        None => Ok(CandidateSpec::Named(text.to_string())),
    }
}

pub fn parse_cost(text: &str) -> Result<CostRule> {
    if text == "unit" {
        return Ok(CostRule::Unit);
    }
    if let Some(a) = text.strip_prefix("locality:") {
        let alpha = a.parse().with_context(|| format!("bad alpha {a:?}"))?;
        return Ok(CostRule::Locality { alpha });
    }
    Err(anyhow!("unknown cost rule {text:?}; expected unit or locality:<alpha>"))
}

impl InstanceArgs {
    pub fn problem(&self) -> Result<Problem> {
        if let Some(path) = &self.problem {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
        }
        let n = self.n.ok_or_else(|| anyhow!("--n is required"))?;
        let model = parse_model(&self.model)?;
        let candidates = match (&self.candidates, &model) {
            (Some(c), _) => parse_candidates(c)?,
            (None, DetectionModel::Probe { probe }) => CandidateSpec::Named(format!("probe:{probe}")),
            (None, _) => CandidateSpec::Named("canonical".into()),
        };
        Ok(Problem {
            n,
            model,
            candidates,
            cost_rule: parse_cost(&self.cost)?,
        })
    }
}
