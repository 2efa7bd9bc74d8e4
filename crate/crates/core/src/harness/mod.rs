//! Batch verification over a catalog of groups: single checks, suites,
//! the value-count survey and the probe for general outer commutator words.

mod checks;
mod suite;
mod survey;
mod tuples;

pub use checks::{run_check, run_check_on, CheckId, CheckReport, CheckSpec, Status};
pub use suite::{run_suite, SuiteConfig, SuiteReport, SuiteTotals};
pub use survey::{conjecture_probe, survey, ProbeRow, SurveyRow, MAX_PROBE_LEAVES};
pub use tuples::{conjugation_closed_generators, default_entry_pool, default_tuples, generating_sets, parse_tuple_spec};

use crate::error::{Error, Result};
use crate::words::{classify_outer_commutator, delta, gamma, parse_word, OcwTree};

/// Groups swept by default: abelian, nilpotent and non-nilpotent groups with
/// varied normal subgroup lattices.
pub fn default_catalog() -> Vec<String> {
    let mut specs: Vec<String> = (1..=12).map(|n| format!("cyc:{n}")).collect();
    specs.extend((2..=8).map(|n| format!("dih:{n}")));
    specs.extend(["sym:3", "sym:4", "alt:4", "quat:8", "heis:3", "cyc:2 x sym:3", "cyc:3 x quat:8"].map(String::from));
    specs
}

/// Words swept by default: `γ_2`, `γ_3` and `δ_2`.
pub fn default_words() -> Vec<String> {
    vec!["gamma_2".into(), "gamma_3".into(), "delta_2".into()]
}

/// Parses an outer commutator word. Besides bracket syntax, `gamma_r` and
/// `delta_k` (also without the underscore) name the standard words.
pub fn parse_ocw(text: &str) -> Result<OcwTree> {
    let t = text.trim();
    for (prefix, build) in [("gamma", 0u8), ("delta", 1u8)] {
        if let Some(rest) = t.strip_prefix(prefix) {
            let digits = rest.strip_prefix('_').unwrap_or(rest);
            if let Ok(n) = digits.parse::<u32>() {
                return match (build, n) {
                    (0, 1..=64) => Ok(gamma(n as usize)),
                    (1, 0..=6) => Ok(delta(n)),
                    _ => Err(Error::PreconditionFailed(format!("{t} is out of range"))),
                };
            }
        }
    }
    let expr = parse_word(t)?;
    classify_outer_commutator(&expr).ok_or_else(|| Error::PreconditionFailed(format!("{t} is not an outer commutator word")))
}
