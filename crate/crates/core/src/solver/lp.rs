use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::settings::CoverInstance;

const TERMS_PER_LINE: usize = 8;

fn fmt_cost(c: f64) -> String {
    if c.fract() == 0.0 {
        format!("{}", c as i64)
    } else {
        format!("{c}")
    }
}

fn write_terms<W: Write>(out: &mut W, terms: &[String]) -> std::io::Result<()> {
    for (i, chunk) in terms.chunks(TERMS_PER_LINE).enumerate() {
        let line = chunk.join(" + ");
        if i == 0 {
            write!(out, " {line}")?;
        } else {
            write!(out, "\n   + {line}")?;
        }
    }
    Ok(())
}

/// Writes the 0-1 program in CPLEX LP format. Variable `x<j>` is column `j`;
/// the comment block maps variables to operation names.
pub fn write_lp<W: Write>(inst: &CoverInstance, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "\\ readout set cover: n = {}, {} columns, {} rows",
        inst.n(),
        inst.num_columns(),
        inst.num_rows()
    )?;
    for (j, col) in inst.columns().iter().enumerate() {
        writeln!(out, "\\ x{j} = {}", col.name)?;
    }
    writeln!(out, "Minimize")?;
    write!(out, " obj:")?;
    let terms: Vec<String> = inst
        .columns()
        .iter()
        .enumerate()
        .map(|(j, c)| format!("{} x{j}", fmt_cost(c.cost)))
        .collect();
    write_terms(out, &terms)?;
    writeln!(out)?;
    writeln!(out, "Subject To")?;
    for (k, p) in inst.universe().iter().enumerate() {
        write!(out, " e_{p}:")?;
        let terms: Vec<String> = inst.row(k).ones().map(|j| format!("x{j}")).collect();
        if terms.is_empty() {
            // unreachable element: keep the row so the model stays infeasible
            write!(out, " 0 x0")?;
        } else {
            write_terms(out, &terms)?;
        }
        writeln!(out, " >= 1")?;
    }
    writeln!(out, "Binary")?;
    let vars: Vec<String> = (0..inst.num_columns()).map(|j| format!("x{j}")).collect();
    for chunk in vars.chunks(16) {
        writeln!(out, " {}", chunk.join(" "))?;
    }
    writeln!(out, "End")?;
    Ok(())
}

/// Writes [`write_lp`] output to `path`.
pub fn export_lp(inst: &CoverInstance, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_lp(inst, &mut out)?;
    out.flush()?;
    Ok(())
}
