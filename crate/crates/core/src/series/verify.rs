use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::groups::FiniteGroup;
use crate::verbal::{check_linearity, ocw_value_set, verbal_subgroup_on_subgroups, LinearityReport, Mode, NormalTuple};
use crate::words::{extension_degree, Family};

use super::{LinearSeries, Provenance, SeriesFactor, SeriesKind};

/// Independent checks on one factor `upper / lower`.
#[derive(Clone, Debug, Serialize)]
pub struct FactorVerdict {
    pub index: usize,
    pub provenance: Provenance,
    pub word: String,
    pub tuple: String,
    pub linear_position: usize,
    pub lower_order: usize,
    pub upper_order: usize,
    /// `lower ≤ upper`.
    pub containment: bool,
    /// `upper = ⟨lower, v{M}⟩`.
    pub generation: bool,
    /// Every entry is the verbal subgroup it claims to be, and the entry for
    /// `x_i` is contained in `N_i`, which is one of its components.
    pub extension: bool,
    pub linearity: LinearityReport,
    /// Extension degree of the word over the series word.
    pub degree: Option<usize>,
    pub degree_ok: bool,
    /// `[upper, upper] ≤ lower`.
    pub abelian: bool,
}

impl FactorVerdict {
    pub fn passed(&self) -> bool {
        self.containment && self.generation && self.extension && self.linearity.holds && self.degree_ok && self.abelian
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub factor_count: usize,
    pub count_ok: bool,
    /// Consecutive factors share their common term.
    pub chain_ok: bool,
    /// `bottom = [top, top]` and `top = w(N)` computed from value sets.
    pub endpoints_ok: bool,
    pub construction_ok: bool,
    pub factors: Vec<FactorVerdict>,
}

impl SeriesReport {
    pub fn passed(&self) -> bool {
        self.count_ok && self.chain_ok && self.endpoints_ok && self.construction_ok && self.factors.iter().all(FactorVerdict::passed)
    }
}

fn check_extension(group: &FiniteGroup, series: &LinearSeries, factor: &SeriesFactor, budget: u64) -> Result<bool> {
    let base = series.base.subgroups();
    let vars = factor.word.variables();
    if vars.len() != factor.tuple.len() {
        return Ok(false);
    }
    for (var, entry) in vars.iter().zip(&factor.tuple) {
        if entry.word.variables().len() != entry.components.len() || entry.components.iter().any(|&c| c >= base.len()) {
            return Ok(false);
        }
        let parts = entry.components.iter().map(|&c| base[c].clone()).collect();
        let expected = verbal_subgroup_on_subgroups(group, &entry.word, &NormalTuple::of_subgroups(group, parts)?, budget)?;
        if expected != entry.subgroup {
            return Ok(false);
        }
        if var.family == Family::X {
            let i = var.index as usize - 1;
            if i >= base.len() || !entry.components.contains(&i) || !entry.subgroup.is_subgroup_of(base[i]) {
                return Ok(false);
            }
        }
    }
    let x_count = vars.iter().filter(|v| v.family == Family::X).count();
    Ok(x_count == base.len())
}

fn verify_factor(group: &FiniteGroup, series: &LinearSeries, factor: &SeriesFactor, mode: Mode, budget: u64) -> Result<FactorVerdict> {
    let tuple = factor.normal_tuple(group)?;
    let values = ocw_value_set(group, &factor.word, &tuple.subgroup_sets(), budget)?.values;
    let generated = group.closure_of(&factor.lower.as_subset().union(group, &values));
    let linearity = check_linearity(group, &factor.word, &tuple, factor.linear_position, &factor.lower, mode, budget)?;
    let degree = extension_degree(&factor.word, &series.kind.word());
    let degree_ok = match (series.kind, degree) {
        (SeriesKind::Gamma(_), Some(d)) => d == 0,
        (SeriesKind::Delta(k), Some(d)) => d < k as usize,
        (_, None) => false,
    };
    let derived = group.commutator_subgroup(&factor.upper, &factor.upper)?;
    Ok(FactorVerdict {
        index: factor.index,
        provenance: factor.provenance,
        word: factor.word.to_string(),
        tuple: factor.describe_tuple(),
        linear_position: factor.linear_position,
        lower_order: factor.lower.order(),
        upper_order: factor.upper.order(),
        containment: factor.lower.is_subgroup_of(&factor.upper),
        generation: generated == factor.upper,
        extension: check_extension(group, series, factor, budget)?,
        linearity,
        degree,
        degree_ok,
        abelian: derived.is_subgroup_of(&factor.lower),
    })
}

/// Re-derives every claim attached to `series` from scratch.
pub fn verify_series(group: &FiniteGroup, series: &LinearSeries, mode: Mode, budget: u64) -> Result<SeriesReport> {
    let factors = series.factors.par_iter().map(|f| verify_factor(group, series, f, mode, budget)).collect::<Result<Vec<_>>>()?;
    let chain_ok = series.factors.first().is_some_and(|f| f.lower == series.bottom)
        && series.factors.last().is_some_and(|f| f.upper == series.top)
        && series.factors.windows(2).all(|p| p[0].upper == p[1].lower);
    let word = series.kind.word();
    let direct = group.closure_of(&ocw_value_set(group, &word, &series.base.subgroup_sets(), budget)?.values);
    let derived = group.commutator_subgroup(&direct, &direct)?;
    let endpoints_ok = series.top == direct && series.bottom == derived;
    Ok(SeriesReport {
        kind: series.kind,
        factor_count: series.factors.len(),
        count_ok: series.factors.len() == series.kind.expected_length(),
        chain_ok,
        endpoints_ok,
        construction_ok: series.construction.iter().all(|c| c.holds),
        factors,
    })
}
