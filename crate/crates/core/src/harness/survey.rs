use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::series::{build_delta_series, build_gamma_series, generator_bound_report, LinearSeries};
use crate::verbal::{ocw_value_set, verbal_subgroup_by_splitting, NormalTuple};
use crate::words::{delta, gamma, OcwTree};

use super::tuples::{default_tuples, parse_tuple_spec};

/// Largest leaf count accepted by [`conjecture_probe`].
pub const MAX_PROBE_LEAVES: usize = 7;

/// One `(group, tuple)` instance of the survey. Lists are joined with `;`
/// so every row stays flat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub group: String,
    pub order: usize,
    pub word: String,
    pub arity: usize,
    pub tuple: String,
    /// `|w{N}|`; `None` when the row was skipped.
    pub m: Option<usize>,
    /// `|w(N)|`.
    pub verbal_order: Option<usize>,
    /// Orders of the series factors, bottom first (standard words only).
    pub factor_orders: String,
    /// `|v{T}|` for each factor with `S = N`.
    pub factor_generators: String,
    /// The bound the generator counts are compared against.
    pub generator_bound: Option<u128>,
    pub bound_ok: Option<bool>,
    /// `w{N} ⊆ w(N)` and `|w(N)|` divides `|G|`.
    pub sane: bool,
    pub mode: &'static str,
    pub seed: u64,
    pub skipped: bool,
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn standard_series(group: &FiniteGroup, w: &OcwTree, tuple: &NormalTuple, budget: u64) -> Result<Option<LinearSeries>> {
    let r = w.arity();
    if *w == gamma(r) {
        return build_gamma_series(group, tuple, budget).map(Some);
    }
    if r.is_power_of_two() && (2..=8).contains(&r) && *w == delta(r.trailing_zeros()) {
        return build_delta_series(group, tuple, r.trailing_zeros()).map(Some);
    }
    Ok(None)
}

fn survey_row(group: &FiniteGroup, w: &OcwTree, tuple_text: &str, seed: u64, budget: u64) -> Result<SurveyRow> {
    let tuple = parse_tuple_spec(tuple_text, group)?;
    let values = ocw_value_set(group, w, &tuple.subgroup_sets(), budget)?.values;
    let verbal = group.closure_of(&values);
    let mut row = SurveyRow {
        group: group.label().to_string(),
        order: group.order(),
        word: w.to_string(),
        arity: w.arity(),
        tuple: tuple_text.to_string(),
        m: Some(values.len()),
        verbal_order: Some(verbal.order()),
        factor_orders: String::new(),
        factor_generators: String::new(),
        generator_bound: None,
        bound_ok: None,
        sane: values.is_subset(verbal.as_subset()) && group.order().is_multiple_of(verbal.order()),
        mode: "exhaustive",
        seed,
        skipped: false,
    };
    if let Some(series) = standard_series(group, w, &tuple, budget)? {
        let report = generator_bound_report(group, &series, budget)?;
        row.factor_orders = join(series.factor_orders());
        row.factor_generators = join(report.factors.iter().map(|f| f.generator_count));
        row.generator_bound = report.factors.first().map(|f| f.bound);
        row.bound_ok = Some(report.factors.iter().all(|f| f.within_bound));
    }
    Ok(row)
}

fn skipped_row(group: &FiniteGroup, w: &OcwTree, tuple: &str, seed: u64) -> SurveyRow {
    SurveyRow {
        group: group.label().to_string(),
        order: group.order(),
        word: w.to_string(),
        arity: w.arity(),
        tuple: tuple.to_string(),
        m: None,
        verbal_order: None,
        factor_orders: String::new(),
        factor_generators: String::new(),
        generator_bound: None,
        bound_ok: None,
        sane: true,
        mode: "exhaustive",
        seed,
        skipped: true,
    }
}

/// One row per `(group, default tuple)` with `m = |w{N}|`, `|w(N)|` and, for
/// `γ_r` and `δ_k`, the series factor orders and generator counts. Rows are
/// sorted by `(m, |G|)`, skipped rows last; ties keep catalog order.
pub fn survey(catalog: &[FiniteGroup], w: &OcwTree, seed: u64, budget: u64) -> Result<Vec<SurveyRow>> {
    let jobs: Vec<(&FiniteGroup, String)> =
        catalog.iter().flat_map(|g| default_tuples(g, w.arity(), seed).into_iter().map(move |t| (g, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|(g, t)| match survey_row(g, w, t, seed, budget) {
            Err(Error::BudgetExceeded { .. }) => Ok(skipped_row(g, w, t, seed)),
            other => other,
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = rows;
    rows.sort_by_key(|r| (r.m.is_none(), r.m, r.order));
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub group: String,
    pub order: usize,
    pub word: String,
    pub tuple: String,
    pub m: usize,
    pub verbal_order: usize,
    /// `⟨w{N}⟩` equals `w(N)` assembled from commutator subgroups.
    pub generated: bool,
    /// `|w(N)|` divides `|G|`.
    pub divides: bool,
}

/// The `m` against `|w(N)|` table for an arbitrary outer commutator word.
pub fn conjecture_probe(catalog: &[FiniteGroup], w: &OcwTree, seed: u64, budget: u64) -> Result<Vec<ProbeRow>> {
    if w.leaf_count() > MAX_PROBE_LEAVES {
        return Err(Error::PreconditionFailed(format!("probe words have at most {MAX_PROBE_LEAVES} leaves")));
    }
    let jobs: Vec<(&FiniteGroup, String)> =
        catalog.iter().flat_map(|g| default_tuples(g, w.arity(), seed).into_iter().map(move |t| (g, t))).collect();
    let mut rows = jobs
        .par_iter()
        .map(|(g, t)| {
            let tuple = parse_tuple_spec(t, g)?;
            let values = ocw_value_set(g, w, &tuple.subgroup_sets(), budget)?.values;
            let generated = g.closure_of(&values);
            let split = verbal_subgroup_by_splitting(g, w, &tuple)?;
            Ok(ProbeRow {
                group: g.label().to_string(),
                order: g.order(),
                word: w.to_string(),
                tuple: t.clone(),
                m: values.len(),
                verbal_order: generated.order(),
                generated: generated == split,
                divides: g.order().is_multiple_of(generated.order()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.m, r.order));
    Ok(rows)
}
