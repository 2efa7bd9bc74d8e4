use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{builtin_group, FiniteGroup, DEFAULT_ORDER_CAP};
use crate::verbal::Mode;
use crate::words::{delta, gamma, OcwTree};

use super::checks::{run_check_on, CheckId, CheckReport, CheckSpec, Status};
use super::parse_ocw;
use super::tuples::default_tuples;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub ids: Vec<CheckId>,
    pub words: Vec<String>,
    pub mode: Mode,
    /// Seeds the random normal closures in the default tuples.
    pub seed: u64,
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteTotals {
    pub pass: usize,
    pub sampled_pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn totals(&self) -> SuiteTotals {
        let mut t = SuiteTotals::default();
        for r in &self.reports {
            match r.status {
                Status::Pass => t.pass += 1,
                Status::SampledPass => t.sampled_pass += 1,
                Status::Fail => t.fail += 1,
                Status::Skipped => t.skipped += 1,
            }
        }
        t
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| r.status == Status::Fail)
    }
}

/// Whether `id` applies to `w`: series checks need the matching standard
/// word, splitting needs a commutator.
pub(crate) fn applies(id: CheckId, w: &OcwTree) -> bool {
    let r = w.arity();
    let is_gamma = *w == gamma(r);
    let is_delta = r.is_power_of_two() && (2..=8).contains(&r) && *w == delta(r.trailing_zeros());
    match id {
        CheckId::GammaLinearity | CheckId::GammaBound | CheckId::GammaConcise | CheckId::GammaPowerConcise => is_gamma,
        CheckId::DeltaSeries | CheckId::DeltaBound | CheckId::DeltaConcise | CheckId::DeltaPowerConcise => is_delta,
        CheckId::Split => r >= 2,
        _ => true,
    }
}

fn jobs(groups: &[FiniteGroup], config: &SuiteConfig) -> Result<Vec<(usize, CheckSpec)>> {
    let words = config.words.iter().map(|w| Ok((w.clone(), parse_ocw(w)?))).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (gi, group) in groups.iter().enumerate() {
        for &id in &config.ids {
            for (text, w) in &words {
                if !applies(id, w) {
                    continue;
                }
                let tuples: Vec<Option<String>> = if id.uses_tuple() {
                    default_tuples(group, w.arity(), config.seed).into_iter().map(Some).collect()
                } else {
                    vec![None]
                };
                for tuple in tuples {
                    out.push((gi, CheckSpec { id, group: group.label().to_string(), word: text.clone(), tuple, mode: config.mode }));
                }
            }
        }
    }
    Ok(out)
}

/// Sweeps every applicable `(group, id, word, default tuple)` combination.
/// Jobs run in parallel; the report keeps job order, so its contents do not
/// depend on the number of workers.
pub fn run_suite(catalog: &[String], config: &SuiteConfig) -> Result<SuiteReport> {
    let groups = catalog.iter().map(|spec| builtin_group(spec, DEFAULT_ORDER_CAP)).collect::<Result<Vec<_>>>()?;
    let jobs = jobs(&groups, config)?;
    let reports = jobs
        .par_iter()
        .map(|(gi, spec)| match run_check_on(&groups[*gi], spec, config.budget) {
            Ok(report) => report,
            Err(e) => failed(spec, &groups[*gi], e),
        })
        .collect();
    Ok(SuiteReport { reports })
}

fn failed(spec: &CheckSpec, group: &FiniteGroup, e: Error) -> CheckReport {
    let status = if matches!(e, Error::BudgetExceeded { .. }) { Status::Skipped } else { Status::Fail };
    CheckReport {
        id: spec.id,
        group: group.label().to_string(),
        word: parse_ocw(&spec.word).map(|w| w.to_string()).unwrap_or_else(|_| spec.word.clone()),
        tuple: spec.tuple.clone().unwrap_or_else(|| "-".into()),
        mode: spec.mode.name(),
        seed: spec.mode.seed(),
        status,
        cases: 0,
        detail: e.to_string(),
        counterexample: None,
    }
}
