use serde::Serialize;

use crate::error::Result;
use crate::groups::{ElementSubset, FiniteGroup};
use crate::verbal::ocw_value_set;
use crate::words::Family;

use super::{LinearSeries, SeriesFactor, SeriesKind};

/// How the per-factor cardinality bound was formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundKind {
    /// `m^(2^(r-1))`.
    Gamma { exponent: u128 },
    /// `m^n` with `n = h^(2^k) 2^(k-1)` for the observed depth `h`.
    Delta { depth: Option<usize>, exponent: u128 },
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorBound {
    pub index: usize,
    /// `|v{T}|` where `T_j = w_j{S_j}`.
    pub generator_count: usize,
    pub bound: u128,
    pub within_bound: bool,
    /// `⟨lower, v{T}⟩ = upper`.
    pub generates: bool,
    /// Smallest `d` with `v{T} ⊆ w{S}^{*d}`, if any.
    pub star_depth: Option<usize>,
    /// Largest order modulo `lower` of an element of `v{T}`.
    pub max_order: usize,
    /// `|v{T'}| n_l`, where `T'` replaces the linear slot by `S_l ∩ M_j`
    /// and `n_l` is the power exponent of the entry containing `M_j`.
    pub order_bound: Option<u128>,
    pub order_ok: bool,
    /// `|upper / lower|`.
    pub factor_order: usize,
    /// `b^|v{T}|` with `b` the order bound (or the largest observed order):
    /// an abelian group generated by `|v{T}|` elements of order at most `b`.
    pub factor_order_bound: u128,
    pub factor_ok: bool,
}

impl FactorBound {
    pub fn passed(&self) -> bool {
        self.within_bound && self.generates && self.order_ok && self.factor_ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorBoundReport {
    pub series: SeriesKind,
    /// `|w{S}|`.
    pub m: usize,
    pub bound: BoundKind,
    pub factors: Vec<FactorBound>,
}

impl GeneratorBoundReport {
    pub fn passed(&self) -> bool {
        self.factors.iter().all(FactorBound::passed)
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub(crate) fn saturating_pow(base: u128, exp: u128) -> u128 {
    if base <= 1 || exp == 0 {
        return if exp == 0 { 1 } else { base };
    }
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

/// The sets `T_j = w_j{S_j}` of a factor, aligned with its tuple.
fn factor_sets(group: &FiniteGroup, series: &LinearSeries, factor: &SeriesFactor, budget: u64) -> Result<Vec<ElementSubset>> {
    let chosen = series.base.chosen_sets();
    factor
        .tuple
        .iter()
        .map(|entry| {
            let sets: Vec<ElementSubset> = entry.components.iter().map(|&c| chosen[c].clone()).collect();
            Ok(ocw_value_set(group, &entry.word, &sets, budget)?.values)
        })
        .collect()
}

/// Checks the counting step of the finiteness argument for every factor:
/// the images of `v{T}` generate the factor, `|v{T}|` stays within the
/// bound in terms of `m = |w{S}|`, and every generator has order modulo the
/// lower term at most `|v{T'}| n_l`.
///
/// `S_i` is the generating set of entry `i` of the base tuple when present,
/// otherwise `N_i` itself, with exponent `1` in that case.
pub fn generator_bound_report(group: &FiniteGroup, series: &LinearSeries, budget: u64) -> Result<GeneratorBoundReport> {
    let base = series.base.entries();
    let chosen = series.base.chosen_sets();
    let word = series.kind.word();
    let top_values = ocw_value_set(group, &word, &chosen, budget)?.values;
    let m = top_values.len();
    let powers: Vec<Option<u64>> = base.iter().map(|e| if e.generators.is_some() { e.power } else { Some(1) }).collect();

    let mut sets_per_factor = Vec::with_capacity(series.factors.len());
    for factor in &series.factors {
        sets_per_factor.push(factor_sets(group, series, factor, budget)?);
    }
    let bound = match series.kind {
        SeriesKind::Gamma(r) => BoundKind::Gamma { exponent: 1u128 << (r - 1) },
        SeriesKind::Delta(k) => {
            let mut depth = Some(0usize);
            for (factor, sets) in series.factors.iter().zip(&sets_per_factor) {
                for ((var, _), t) in factor.word.variables().iter().zip(&factor.tuple).zip(sets) {
                    if var.family == Family::X {
                        let s = &chosen[var.index as usize - 1];
                        depth = match (depth, group.star_depth(s, t)) {
                            (Some(a), Some(b)) => Some(a.max(b)),
                            _ => None,
                        };
                    }
                }
            }
            let exponent = match depth {
                Some(h) => saturating_pow(h as u128, 1u128 << k).saturating_mul(1u128 << (k - 1)),
                None => u128::MAX,
            };
            BoundKind::Delta { depth, exponent }
        }
    };
    let exponent = match bound {
        BoundKind::Gamma { exponent } | BoundKind::Delta { exponent, .. } => exponent,
    };
    let limit = saturating_pow(m as u128, exponent);

    let mut factors = Vec::with_capacity(series.factors.len());
    for (factor, sets) in series.factors.iter().zip(&sets_per_factor) {
        let values = ocw_value_set(group, &factor.word, sets, budget)?.values;
        let generated = group.closure_of(&factor.lower.as_subset().union(group, &values));
        let max_order = values.iter().map(|t| group.order_modulo(t, &factor.lower)).max().unwrap_or(1);

        let slot = factor.linear_position - 1;
        let entry = &factor.tuple[slot];
        let var = factor.word.variables()[slot];
        let owner = if var.family == Family::X { var.index as usize - 1 } else { entry.components[0] };
        let order_bound = match powers[owner] {
            Some(n) => {
                let mut narrowed = sets.clone();
                let inside: Vec<_> = chosen[owner].iter().filter(|&e| entry.subgroup.contains(e)).collect();
                narrowed[slot] = ElementSubset::from_elements(group, inside);
                let count = ocw_value_set(group, &factor.word, &narrowed, budget)?.values.len();
                Some((count as u128).saturating_mul(n as u128))
            }
            None => None,
        };
        let factor_order = factor.upper.order() / factor.lower.order();
        let factor_order_bound = saturating_pow(order_bound.unwrap_or(max_order as u128), values.len() as u128);
        factors.push(FactorBound {
            index: factor.index,
            generator_count: values.len(),
            bound: limit,
            within_bound: values.len() as u128 <= limit,
            generates: generated == factor.upper,
            star_depth: group.star_depth(&top_values, &values),
            max_order,
            order_bound,
            order_ok: order_bound.is_none_or(|b| max_order as u128 <= b),
            factor_order,
            factor_order_bound,
            factor_ok: factor_order as u128 <= factor_order_bound,
        });
    }
    Ok(GeneratorBoundReport { series: series.kind, m, bound, factors })
}
