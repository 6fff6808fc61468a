use serde::Serialize;

use crate::error::Result;
use crate::pauli::PauliString;
use crate::settings::CoverInstance;

/// Coverage check of a pulse list against an instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub feasible: bool,
    pub covered: usize,
    pub total: usize,
    pub missing: Vec<PauliString>,
    pub objective: f64,
    /// Instance column names the list resolved to, in list order.
    pub resolved: Vec<String>,
}

/// Checks which universe elements the named columns cover. Names match
/// columns exactly or, for operation columns, by equal action.
pub fn verify<S: AsRef<str>>(inst: &CoverInstance, chosen: &[S]) -> Result<VerifyReport> {
    let mut hit = vec![false; inst.num_rows()];
    let mut objective = 0.0;
    let mut resolved = Vec::with_capacity(chosen.len());
    for name in chosen {
        let j = inst.resolve(name.as_ref())?;
        objective += inst.cost(j);
        resolved.push(inst.columns()[j].name.clone());
        for &k in inst.column_rows(j) {
            hit[k as usize] = true;
        }
    }
    let missing: Vec<PauliString> = inst
        .universe()
        .iter()
        .zip(&hit)
        .filter(|(_, &h)| !h)
        .map(|(p, _)| *p)
        .collect();
    Ok(VerifyReport {
        feasible: missing.is_empty(),
        covered: inst.num_rows() - missing.len(),
        total: inst.num_rows(),
        missing,
        objective,
        resolved,
    })
}
