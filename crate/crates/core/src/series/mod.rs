//! Linear series running from `w(N)'` to `w(N)` for `w = γ_r` and `w = δ_k`,
//! each factor annotated with a word, a tuple of normal subgroups and a
//! position in which the word is linear modulo the lower term.

mod bounds;
mod delta;
mod gamma;
mod verify;

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::groups::{FiniteGroup, Subgroup};
use crate::verbal::NormalTuple;
use crate::words::{delta as delta_word, gamma as gamma_word, OcwTree};

pub use bounds::{generator_bound_report, BoundKind, FactorBound, GeneratorBoundReport};
pub use delta::build_delta_series;
pub use gamma::build_gamma_series;
pub use verify::{verify_series, FactorVerdict, SeriesReport};

/// A tuple entry `M_j = w_j(N_{c_1}, ..., N_{c_n})`: an outer commutator
/// word evaluated on entries of the base tuple. `components` are 0-based
/// indices into the base tuple, aligned with `word.variables()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionEntry {
    pub word: OcwTree,
    pub components: Vec<usize>,
    pub subgroup: Subgroup,
}

impl ExtensionEntry {
    /// The base entry `N_{index+1}` itself.
    pub fn plain(index: usize, subgroup: Subgroup) -> ExtensionEntry {
        ExtensionEntry { word: OcwTree::x(1), components: vec![index], subgroup }
    }

    /// Renders the entry with `N1, N2, ...` in place of the variables, e.g.
    /// `[N1,N2]`.
    pub fn describe(&self) -> String {
        let vars = self.word.variables();
        let mut text = self.word.to_string();
        // Replace longest names first so x1 does not clobber x12.
        let mut pairs: Vec<(String, String)> =
            vars.iter().zip(&self.components).map(|(v, c)| (v.to_string(), format!("N{}", c + 1))).collect();
        pairs.sort_by_key(|(from, _)| std::cmp::Reverse(from.len()));
        let mut placeholders = Vec::new();
        for (i, (from, to)) in pairs.iter().enumerate() {
            let mark = format!("\u{0}{i}\u{0}");
            text = text.replace(from.as_str(), &mark);
            placeholders.push((mark, to.clone()));
        }
        for (mark, to) in placeholders {
            text = text.replace(&mark, &to);
        }
        text
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Gamma,
    DeltaBase,
    DeltaRight,
    DeltaLeft,
    DeltaTop,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Gamma => "gamma",
            Provenance::DeltaBase => "delta-base",
            Provenance::DeltaRight => "delta-right",
            Provenance::DeltaLeft => "delta-left",
            Provenance::DeltaTop => "delta-top",
        })
    }
}

/// One section `upper / lower` of a linear series.
#[derive(Clone, Debug)]
pub struct SeriesFactor {
    /// `i` for `P_i / P_{i+1}` (lower central words) or `V_i / V_{i-1}`
    /// (derived words).
    pub index: usize,
    pub lower: Subgroup,
    pub upper: Subgroup,
    pub word: OcwTree,
    /// Aligned with `word.variables()`.
    pub tuple: Vec<ExtensionEntry>,
    /// 1-based position of the linear variable among `word.variables()`.
    pub linear_position: usize,
    pub provenance: Provenance,
}

impl SeriesFactor {
    pub fn normal_tuple(&self, group: &FiniteGroup) -> Result<NormalTuple> {
        NormalTuple::of_subgroups(group, self.tuple.iter().map(|e| e.subgroup.clone()).collect())
    }

    pub fn describe_tuple(&self) -> String {
        let parts: Vec<String> = self.tuple.iter().map(ExtensionEntry::describe).collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "parameter", rename_all = "lowercase")]
pub enum SeriesKind {
    Gamma(usize),
    Delta(u32),
}

impl SeriesKind {
    pub fn word(&self) -> OcwTree {
        match *self {
            SeriesKind::Gamma(r) => gamma_word(r),
            SeriesKind::Delta(k) => delta_word(k),
        }
    }

    /// Number of factors: `r` for `γ_r`, `2^k + 2^(k-1) - 1` for `δ_k`.
    pub fn expected_length(&self) -> usize {
        match *self {
            SeriesKind::Gamma(r) => r,
            SeriesKind::Delta(k) => (1usize << k) + (1usize << (k - 1)) - 1,
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesKind::Gamma(r) => write!(f, "gamma_{r}"),
            SeriesKind::Delta(k) => write!(f, "delta_{k}"),
        }
    }
}

/// A containment asserted while building a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionCheck {
    pub label: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct LinearSeries {
    pub kind: SeriesKind,
    pub base: NormalTuple,
    /// Bottom to top: `factors[0].lower == bottom`.
    pub factors: Vec<SeriesFactor>,
    pub bottom: Subgroup,
    pub top: Subgroup,
    pub construction: Vec<ConstructionCheck>,
    /// Orders of intermediate subgroups formed during construction.
    pub audit: Vec<(String, usize)>,
}

impl LinearSeries {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Orders of the chain from bottom to top.
    pub fn chain_orders(&self) -> Vec<usize> {
        std::iter::once(self.bottom.order()).chain(self.factors.iter().map(|f| f.upper.order())).collect()
    }

    /// Orders `|upper / lower|` of the factors, bottom first.
    pub fn factor_orders(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.upper.order() / f.lower.order()).collect()
    }
}

pub(crate) struct Builder<'a> {
    pub(crate) group: &'a FiniteGroup,
    pub(crate) construction: Vec<ConstructionCheck>,
    pub(crate) audit: Vec<(String, usize)>,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(group: &'a FiniteGroup) -> Builder<'a> {
        Builder { group, construction: Vec::new(), audit: Vec::new() }
    }

    pub(crate) fn comm(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        self.group.commutator_subgroup(a, b)
    }

    pub(crate) fn prod(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        self.group.subgroup_product(a, b)
    }

    pub(crate) fn contained(&mut self, label: impl Into<String>, small: &Subgroup, big: &Subgroup) {
        self.construction.push(ConstructionCheck { label: label.into(), holds: small.is_subgroup_of(big) });
    }

    pub(crate) fn equal(&mut self, label: impl Into<String>, a: &Subgroup, b: &Subgroup) {
        self.construction.push(ConstructionCheck { label: label.into(), holds: a == b });
    }

    pub(crate) fn record(&mut self, label: impl Into<String>, s: &Subgroup) {
        self.audit.push((label.into(), s.order()));
    }

    /// Fails on the first construction check that does not hold.
    pub(crate) fn finish(&self) -> Result<()> {
        match self.construction.iter().find(|c| !c.holds) {
            Some(c) => Err(crate::Error::InternalInvariantViolation(c.label.clone())),
            None => Ok(()),
        }
    }
}
