//! Runs every oracle check a scenario supports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chars::CharacterTable;
use crate::error::Result;
use crate::gspace::Model;
use crate::oracle::limit::{limit_trace_check, LimitCheck};
use crate::oracle::{
    trial_rng, verify_conjugation, verify_decomposition, verify_trace_formula, CheckOutcome, CrossedElement, Orbit,
};
use crate::scenario::Built;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedLimitCheck {
    pub name: String,
    #[serde(flatten)]
    pub check: LimitCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trace_formula: Vec<CheckOutcome>,
    pub decomposition: Vec<CheckOutcome>,
    pub conjugation: Vec<CheckOutcome>,
    pub limits: Vec<NamedLimitCheck>,
    pub skipped: Vec<String>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .trace_formula
            .iter()
            .chain(&self.decomposition)
            .chain(&self.conjugation)
            .filter(|c| !c.passed)
            .map(|c| format!("{}: residual {:.3e} (tolerance {:.1e})", c.label, c.max_residual, c.tolerance))
            .collect();
        out.extend(self.limits.iter().filter(|l| !l.check.passed).map(|l| format!("limit check '{}' failed", l.name)));
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let groups = [
            ("trace formula", &self.trace_formula),
            ("decomposition", &self.decomposition),
            ("conjugation", &self.conjugation),
        ];
        for (name, checks) in groups {
            let worst = checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
            let failed = checks.iter().filter(|c| !c.passed).count();
            out.push_str(&format!(
                "{name:<14} {:>4} checks  max residual {worst:.3e}  failed {failed}\n",
                checks.len()
            ));
        }
        for l in &self.limits {
            let last = l.check.residuals.last().map_or(f64::NAN, |r| r.residual);
            out.push_str(&format!(
                "limit {:<32} last residual {last:.3e}  recovered {:?}  expected {:?}  {}\n",
                l.name,
                l.check.recovered,
                l.check.expected,
                if l.check.passed { "pass" } else { "FAIL" }
            ));
        }
        for s in &self.skipped {
            out.push_str(&format!("skipped: {s}\n"));
        }
        out.push_str(&format!("passed: {}\n", self.passed));
        out
    }
}

pub fn run_verification(built: &Built) -> Result<VerifyReport> {
    let space = &built.space;
    let settings = &built.settings;
    let tol = &settings.tolerances;
    let seed = settings.seed;
    let g = space.group();
    let mut report = VerifyReport {
        seed,
        trace_formula: Vec::new(),
        decomposition: Vec::new(),
        conjugation: Vec::new(),
        limits: Vec::new(),
        skipped: Vec::new(),
        passed: true,
    };
    if space.model() == Model::Abstract {
        report.skipped.push("abstract model: points carry no coordinates, so no orbit to evaluate on".into());
        return Ok(report);
    }

    for stratum in space.strata() {
        let x = &stratum.basepoint;
        let orbit = Orbit::new(space, x)?;
        let xi = orbit.index_of(x).unwrap();
        let s_x = &stratum.stabilizer;
        let table_s = CharacterTable::for_subgroup(g, s_x)?;
        let subgroups: Vec<_> = space.subgroups().iter().filter(|h| h.is_subgroup_of(s_x)).cloned().collect();
        let per_subgroup: Vec<(Vec<CheckOutcome>, Vec<CheckOutcome>)> = subgroups
            .par_iter()
            .map(|h| {
                let table_h = CharacterTable::for_subgroup(g, h)?;
                let mut traces = Vec::new();
                let mut decomps = Vec::new();
                for row in 0..table_h.len() {
                    traces.push(verify_trace_formula(&orbit, xi, &table_h, row, settings.trials, seed, tol)?);
                    decomps.push(verify_decomposition(
                        &orbit,
                        xi,
                        &table_s,
                        &table_h,
                        row,
                        settings.decomposition_trials,
                        seed,
                        tol,
                    )?);
                }
                Ok((traces, decomps))
            })
            .collect::<Result<_>>()?;
        for (t, d) in per_subgroup {
            report.trace_formula.extend(t);
            report.decomposition.extend(d);
        }

        for &gen in g.generators() {
            for row in 0..table_s.len() {
                let residuals: Vec<f64> = (0..settings.decomposition_trials)
                    .map(|k| {
                        let a = CrossedElement::random_positive(&orbit, &mut trial_rng(seed, k as u64));
                        verify_conjugation(&a, xi, &table_s, row, gen)
                    })
                    .collect::<Result<_>>()?;
                let max_residual = residuals.iter().copied().fold(0.0, f64::max);
                report.conjugation.push(CheckOutcome {
                    label: format!("conjugation of {} V{row} by {}", stratum.id, g.element(gen)),
                    trials: residuals.len(),
                    max_residual,
                    tolerance: tol.identity,
                    passed: max_residual < tol.identity,
                });
            }
        }
    }

    for (name, sequence, v, profile, batch) in &built.sequences {
        let check = limit_trace_check(space, sequence, *v, profile, *batch, seed, tol)?;
        report.limits.push(NamedLimitCheck { name: name.clone(), check });
    }
    report.passed = report.failures().is_empty();
    Ok(report)
}
