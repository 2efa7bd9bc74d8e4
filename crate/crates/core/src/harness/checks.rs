use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{builtin_group, ElementSubset, FiniteGroup, DEFAULT_ORDER_CAP};
use crate::series::{build_delta_series, build_gamma_series, generator_bound_report, verify_series, LinearSeries, SeriesReport};
use crate::verbal::{
    check_disjoint_split, check_substitution, comm_congruence_sweep, ocw_value_set, value_set, verbal_subgroup_by_splitting,
    verbal_subgroup_on_subgroups, word_verbal_subgroup_of_group, Mode, NormalTuple, TupleEntry,
};
use crate::words::{delta, enumerate_extended, gamma, substitute, Family, OcwTree, WordExpr};

use super::parse_ocw;
use super::tuples::{generating_sets, parse_tuple_spec};

/// Identifiers of the individual verification routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub enum CheckId {
    Split,
    Substitution,
    Generation,
    StarMembership,
    Width,
    CommCongruence,
    GammaLinearity,
    GammaBound,
    GammaConcise,
    GammaPowerConcise,
    ExtendedWidth,
    DeltaSeries,
    DeltaBound,
    DeltaConcise,
    DeltaPowerConcise,
    Conjecture,
}

impl CheckId {
    pub const ALL: [CheckId; 16] = [
        CheckId::Split,
        CheckId::Substitution,
        CheckId::Generation,
        CheckId::StarMembership,
        CheckId::Width,
        CheckId::CommCongruence,
        CheckId::GammaLinearity,
        CheckId::GammaBound,
        CheckId::GammaConcise,
        CheckId::GammaPowerConcise,
        CheckId::ExtendedWidth,
        CheckId::DeltaSeries,
        CheckId::DeltaBound,
        CheckId::DeltaConcise,
        CheckId::DeltaPowerConcise,
        CheckId::Conjecture,
    ];

    /// The checks on general outer commutator words that need no series.
    pub const GENERAL: [CheckId; 6] =
        [CheckId::Split, CheckId::Substitution, CheckId::Generation, CheckId::StarMembership, CheckId::Width, CheckId::CommCongruence];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Split => "split",
            CheckId::Substitution => "substitution",
            CheckId::Generation => "generation",
            CheckId::StarMembership => "star-membership",
            CheckId::Width => "width",
            CheckId::CommCongruence => "comm-congruence",
            CheckId::GammaLinearity => "gamma-linearity",
            CheckId::GammaBound => "gamma-bound",
            CheckId::GammaConcise => "gamma-concise",
            CheckId::GammaPowerConcise => "gamma-power-concise",
            CheckId::ExtendedWidth => "extended-width",
            CheckId::DeltaSeries => "delta-series",
            CheckId::DeltaBound => "delta-bound",
            CheckId::DeltaConcise => "delta-concise",
            CheckId::DeltaPowerConcise => "delta-power-concise",
            CheckId::Conjecture => "conjecture",
        }
    }

    /// The statement each routine verifies.
    pub fn statement(&self) -> &'static str {
        match self {
            CheckId::Split => "w(N) = [a(N'), b(N'')] for w = [a, b] on disjoint variables",
            CheckId::Substitution => "w(u_1, ..., u_r)(G) = w(u_1(G), ..., u_r(G)) for disjoint words u_i",
            CheckId::Generation => "w(N) is generated by w{S} for normal generating subsets S_i of N_i",
            CheckId::StarMembership => "w(t) lies in S^(*2^(r-1)) when one t_i lies in the normal subset S",
            CheckId::Width => "w(t) lies in w{S}^(*m_1...m_r) when every t_i lies in S_i^(*m_i)",
            CheckId::CommCongruence => "x = yz mod L implies [x,n] = [y,n][z,n] mod [K,N,K][L,N]",
            CheckId::GammaLinearity => "gamma_r(N) has a series of length r whose factors are linear images of gamma_r",
            CheckId::GammaBound => "each gamma-series factor is generated by at most m^(2^(r-1)) values of bounded order",
            CheckId::GammaConcise => "with S = N the gamma-series factors have order bounded in terms of m and r",
            CheckId::GammaPowerConcise => "gamma_r(u_1, ..., u_r) for power words u_i is bounded in terms of its value count",
            CheckId::ExtendedWidth => "v(t) lies in w{S}^(*m_1...m_r 2^k) for v an extended word of w of degree k",
            CheckId::DeltaSeries => "delta_k(N) has a series of length 2^k + 2^(k-1) - 1 with linear extension factors",
            CheckId::DeltaBound => "each delta-series factor is generated by at most m^n values of bounded order",
            CheckId::DeltaConcise => "with S = N the delta-series factors have order bounded in terms of m and k",
            CheckId::DeltaPowerConcise => "delta_k(u_1, ..., u_r) for power words u_i is bounded in terms of its value count",
            CheckId::Conjecture => "w{N} generates w(N) for an arbitrary outer commutator word w",
        }
    }

    /// Whether the routine reads the tuple.
    pub fn uses_tuple(&self) -> bool {
        !matches!(self, CheckId::Substitution | CheckId::GammaPowerConcise | CheckId::DeltaPowerConcise)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<CheckId> for String {
    fn from(id: CheckId) -> String {
        id.as_str().to_string()
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CheckId> {
        CheckId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| Error::UnknownCheckId(s.to_string()))
    }
}

/// One verification job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSpec {
    pub id: CheckId,
    pub group: String,
    pub word: String,
    /// `None` means every entry is the whole group.
    pub tuple: Option<String>,
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    SampledPass,
    Fail,
    /// The job exceeded the enumeration budget.
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::SampledPass => "sampled-pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Flat outcome of one job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: CheckId,
    pub group: String,
    pub word: String,
    pub tuple: String,
    pub mode: &'static str,
    pub seed: Option<u64>,
    pub status: Status,
    pub cases: u64,
    pub detail: String,
    pub counterexample: Option<String>,
}

struct Outcome {
    holds: bool,
    cases: u64,
    detail: String,
    counterexample: Option<String>,
}

impl Outcome {
    fn new(holds: bool, cases: u64, detail: impl Into<String>) -> Outcome {
        Outcome { holds, cases, detail: detail.into(), counterexample: None }
    }

    fn with_counterexample(mut self, c: Option<String>) -> Outcome {
        self.counterexample = c;
        self
    }
}

/// Runs one check. Budget overruns are returned as errors.
pub fn run_check(spec: &CheckSpec, budget: u64) -> Result<CheckReport> {
    let group = builtin_group(&spec.group, DEFAULT_ORDER_CAP)?;
    run_check_on(&group, spec, budget)
}

/// [`run_check`] on an already constructed group, whose label is reported
/// in place of `spec.group`.
pub fn run_check_on(group: &FiniteGroup, spec: &CheckSpec, budget: u64) -> Result<CheckReport> {
    let word = parse_ocw(&spec.word)?;
    let tuple_text = spec.tuple.clone().unwrap_or_else(|| vec!["G"; word.arity()].join(","));
    let tuple = parse_tuple_spec(&tuple_text, group)?;
    if tuple.len() != word.arity() {
        return Err(Error::ArityMismatch { expected: word.arity(), got: tuple.len() });
    }
    let ctx = Ctx { group, word: &word, tuple: &tuple, mode: spec.mode, budget };
    let outcome = match spec.id {
        CheckId::Split => ctx.split(),
        CheckId::Substitution => ctx.substitution(),
        CheckId::Generation => ctx.generation(),
        CheckId::StarMembership => ctx.star_membership(),
        CheckId::Width => ctx.width(),
        CheckId::CommCongruence => ctx.comm_congruence(),
        CheckId::GammaLinearity => ctx.series_check(false),
        CheckId::GammaBound => ctx.bound_check(false),
        CheckId::GammaConcise => ctx.concise_check(false),
        CheckId::GammaPowerConcise => ctx.power_concise_check(false),
        CheckId::ExtendedWidth => ctx.extended_width(),
        CheckId::DeltaSeries => ctx.series_check(true),
        CheckId::DeltaBound => ctx.bound_check(true),
        CheckId::DeltaConcise => ctx.concise_check(true),
        CheckId::DeltaPowerConcise => ctx.power_concise_check(true),
        CheckId::Conjecture => ctx.conjecture(),
    }?;
    let status = match (outcome.holds, spec.mode) {
        (false, _) => Status::Fail,
        (true, Mode::Exhaustive) => Status::Pass,
        (true, Mode::Sampled { .. }) => Status::SampledPass,
    };
    Ok(CheckReport {
        id: spec.id,
        group: group.label().to_string(),
        word: word.to_string(),
        tuple: if spec.id.uses_tuple() { tuple_text } else { "-".into() },
        mode: spec.mode.name(),
        seed: spec.mode.seed(),
        status,
        cases: outcome.cases,
        detail: outcome.detail,
        counterexample: outcome.counterexample,
    })
}

struct Ctx<'a> {
    group: &'a FiniteGroup,
    word: &'a OcwTree,
    tuple: &'a NormalTuple,
    mode: Mode,
    budget: u64,
}

fn orders(parts: &[usize]) -> String {
    parts.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// `x_i^{e_i}` for the sorted variables of `w`, cycling through `exps`.
fn power_words(w: &OcwTree, exps: &[i64]) -> Vec<WordExpr> {
    w.variables().iter().enumerate().map(|(i, v)| WordExpr::power(WordExpr::var(*v), exps[i % exps.len()])).collect()
}

const POWER_PATTERNS: [&[i64]; 3] = [&[2], &[3], &[2, 3]];

impl Ctx<'_> {
    fn names(&self, elems: &[usize]) -> String {
        elems.iter().map(|&e| self.group.name(e)).collect::<Vec<_>>().join(" ")
    }

    fn require(&self, expected: &OcwTree, family: &str) -> Result<()> {
        if self.word != expected {
            return Err(Error::PreconditionFailed(format!("{} is not the {family} word on its variables", self.word)));
        }
        Ok(())
    }

    fn delta_depth(&self) -> Result<u32> {
        let r = self.word.arity();
        let k = r.trailing_zeros();
        if !r.is_power_of_two() || k == 0 {
            return Err(Error::PreconditionFailed(format!("{} is not a derived word", self.word)));
        }
        self.require(&delta(k), "derived")?;
        Ok(k)
    }

    fn build(&self, derived: bool, tuple: &NormalTuple) -> Result<LinearSeries> {
        if derived {
            build_delta_series(self.group, tuple, self.delta_depth()?)
        } else {
            self.require(&gamma(self.word.arity()), "lower central")?;
            build_gamma_series(self.group, tuple, self.budget)
        }
    }

    fn split(&self) -> Result<Outcome> {
        let cmp = check_disjoint_split(self.group, self.word, self.tuple, self.budget)?;
        Ok(Outcome::new(cmp.holds(), 1, format!("w(N) order {}, split order {}", cmp.left.order(), cmp.right.order())))
    }

    fn substitution(&self) -> Result<Outcome> {
        let mut holds = true;
        let mut details = Vec::new();
        for exps in POWER_PATTERNS {
            let u = power_words(self.word, exps);
            let cmp = check_substitution(self.group, self.word, &u, self.budget)?;
            holds &= cmp.holds();
            details.push(format!("{}: {} vs {}", substitute(self.word, &u)?, cmp.left.order(), cmp.right.order()));
        }
        Ok(Outcome::new(holds, POWER_PATTERNS.len() as u64, details.join("; ")))
    }

    fn generation(&self) -> Result<Outcome> {
        let sets = generating_sets(self.group, self.tuple);
        let from_sets = self.group.closure_of(&ocw_value_set(self.group, self.word, &sets, self.budget)?.values);
        let from_subgroups = verbal_subgroup_on_subgroups(self.group, self.word, self.tuple, self.budget)?;
        let by_splitting = verbal_subgroup_by_splitting(self.group, self.word, self.tuple)?;
        let holds = from_sets == from_subgroups && from_subgroups == by_splitting;
        let sizes: Vec<usize> = sets.iter().map(ElementSubset::len).collect();
        Ok(Outcome::new(
            holds,
            1,
            format!("|S| = {}; orders {} {} {}", orders(&sizes), from_sets.order(), from_subgroups.order(), by_splitting.order()),
        ))
    }

    fn star_membership(&self) -> Result<Outcome> {
        let r = self.word.arity();
        let generators = generating_sets(self.group, self.tuple);
        let everything = ElementSubset::whole(self.group);
        let exponent = 1usize << (r - 1);
        let mut cases = 0;
        for (i, s) in generators.iter().enumerate() {
            let mut sets = vec![everything.clone(); r];
            sets[i] = s.clone();
            let values = ocw_value_set(self.group, self.word, &sets, self.budget)?;
            let target = self.group.star_power(s, exponent);
            cases += values.cardinality() as u64;
            let bad = values.values.iter().find(|&v| !target.contains(v));
            if let Some(bad) = bad {
                let wit = values.witness(bad).unwrap_or_default();
                return Ok(Outcome::new(false, cases, format!("position {}", i + 1)).with_counterexample(Some(self.names(wit))));
            }
        }
        Ok(Outcome::new(true, cases, format!("star exponent {exponent}")))
    }

    fn width(&self) -> Result<Outcome> {
        let r = self.word.arity();
        let generators = generating_sets(self.group, self.tuple);
        let values_s = ocw_value_set(self.group, self.word, &generators, self.budget)?.values;
        let target = self.group.star_power(&values_s, 2);
        let mut cases = 0;
        for i in 0..r {
            let mut sets = generators.clone();
            sets[i] = self.group.star_power(&generators[i], 2);
            let values = ocw_value_set(self.group, self.word, &sets, self.budget)?;
            cases += values.cardinality() as u64;
            let bad = values.values.iter().find(|&v| !target.contains(v));
            if let Some(bad) = bad {
                let wit = values.witness(bad).unwrap_or_default();
                return Ok(Outcome::new(false, cases, format!("m_{} = 2", i + 1)).with_counterexample(Some(self.names(wit))));
            }
        }
        Ok(Outcome::new(true, cases, format!("|w{{S}}| = {}, one m_i = 2 at a time", values_s.len())))
    }

    fn comm_congruence(&self) -> Result<Outcome> {
        let subs = self.tuple.subgroups();
        let (k, l, n) = (subs[0], subs[1.min(subs.len() - 1)], subs[subs.len() - 1]);
        let (cases, bad) = comm_congruence_sweep(self.group, k, l, n, self.budget)?;
        let detail = format!("|K| = {}, |L| = {}, |N| = {}", k.order(), l.order(), n.order());
        Ok(Outcome::new(bad.is_none(), cases, detail).with_counterexample(bad.map(|(y, z, l, n)| self.names(&[y, z, l, n]))))
    }

    fn series_outcome(&self, series: &LinearSeries, report: &SeriesReport) -> Outcome {
        let counterexample = report.factors.iter().find_map(|f| {
            f.linearity
                .counterexample
                .as_ref()
                .map(|c| format!("factor {}: args {} y {}", f.index, self.names(&c.args), self.group.name(c.y)))
        });
        let cases = report.factors.iter().map(|f| f.linearity.cases).sum();
        let detail = format!("{} factors, chain orders {}", series.len(), orders(&series.chain_orders()));
        Outcome::new(report.passed(), cases, detail).with_counterexample(counterexample)
    }

    fn series_check(&self, derived: bool) -> Result<Outcome> {
        let series = self.build(derived, self.tuple)?;
        let report = verify_series(self.group, &series, self.mode, self.budget)?;
        Ok(self.series_outcome(&series, &report))
    }

    fn bound_outcome(&self, series: &LinearSeries, tuple_note: &str) -> Result<Outcome> {
        let report = generator_bound_report(self.group, series, self.budget)?;
        let counts: Vec<usize> = report.factors.iter().map(|f| f.generator_count).collect();
        let bound = report.factors.first().map(|f| f.bound.to_string()).unwrap_or_else(|| "-".into());
        let failing = report.factors.iter().find(|f| !f.passed()).map(|f| format!("factor {}", f.index));
        Ok(Outcome::new(
            report.passed(),
            report.factors.len() as u64,
            format!("{tuple_note}m = {}, generator counts {}, bound {bound}", report.m, orders(&counts)),
        )
        .with_counterexample(failing))
    }

    fn bound_check(&self, derived: bool) -> Result<Outcome> {
        let entries = self
            .tuple
            .entries()
            .iter()
            .zip(generating_sets(self.group, self.tuple))
            .map(|(e, s)| match &e.generators {
                Some(_) => e.clone(),
                None => TupleEntry::with_generators(e.subgroup.clone(), s, None),
            })
            .collect();
        let tuple = NormalTuple::new(self.group, entries)?;
        let series = self.build(derived, &tuple)?;
        self.bound_outcome(&series, "")
    }

    fn concise_check(&self, derived: bool) -> Result<Outcome> {
        let plain = NormalTuple::of_subgroups(self.group, self.tuple.subgroups().into_iter().cloned().collect())?;
        let series = self.build(derived, &plain)?;
        let report = verify_series(self.group, &series, self.mode, self.budget)?;
        let mut outcome = self.bound_outcome(&series, "S = N; ")?;
        outcome.holds &= report.passed();
        Ok(outcome)
    }

    /// `w* = w(u_1, ..., u_r)` with `u_i = x_i^{e_i}`, on `N_i = u_i(G)` with
    /// `S_i = u_i{G}` and `n_i = e_i`.
    fn power_concise_check(&self, derived: bool) -> Result<Outcome> {
        let mut holds = true;
        let mut cases = 0;
        let mut details = Vec::new();
        let mut counterexample = None;
        for exps in POWER_PATTERNS {
            let u = power_words(self.word, exps);
            let starred = substitute(self.word, &u)?;
            let mut entries = Vec::with_capacity(u.len());
            for ui in &u {
                let values = value_set(self.group, ui, &[ElementSubset::whole(self.group)], self.budget)?.values;
                let subgroup = word_verbal_subgroup_of_group(self.group, ui, self.budget)?;
                let witness = ui.non_commutator_witness().map(|(_, n)| n.unsigned_abs()).unwrap_or(1);
                entries.push(TupleEntry::with_generators(subgroup, values, Some(witness)));
            }
            let tuple = NormalTuple::new(self.group, entries)?;
            let series = self.build(derived, &tuple)?;
            let outcome = self.bound_outcome(&series, "")?;
            let starred_values = value_set(self.group, &starred, &vec![ElementSubset::whole(self.group); u.len()], self.budget)?;
            let starred_subgroup = self.group.closure_of(&starred_values.values);
            let m = ocw_value_set(self.group, self.word, &tuple.chosen_sets(), self.budget)?.cardinality();
            let agrees = starred_values.cardinality() == m && starred_subgroup == series.top;
            holds &= outcome.holds && agrees;
            cases += outcome.cases;
            if counterexample.is_none() && !(outcome.holds && agrees) {
                counterexample = Some(format!("{starred}: {}", outcome.counterexample.unwrap_or_else(|| "value count mismatch".into())));
            }
            details.push(format!("{starred}: |w*{{G}}| = {}, |w*(G)| = {}", starred_values.cardinality(), starred_subgroup.order()));
        }
        Ok(Outcome::new(holds, cases, details.join("; ")).with_counterexample(counterexample))
    }

    fn extended_width(&self) -> Result<Outcome> {
        let generators = generating_sets(self.group, self.tuple);
        let everything = ElementSubset::whole(self.group);
        let base_values = ocw_value_set(self.group, self.word, &generators, self.budget)?.values;
        let target = self.group.star_power(&base_values, 2);
        let extended = enumerate_extended(self.word, 1, 2)?;
        let mut cases = 0;
        for v in &extended.words {
            let sets: Vec<ElementSubset> = v
                .variables()
                .iter()
                .map(|var| match var.family {
                    Family::X => generators[var.index as usize - 1].clone(),
                    Family::Y => everything.clone(),
                })
                .collect();
            let values = ocw_value_set(self.group, v, &sets, self.budget)?;
            cases += values.cardinality() as u64;
            let bad = values.values.iter().find(|&x| !target.contains(x));
            if let Some(bad) = bad {
                let wit = values.witness(bad).unwrap_or_default();
                return Ok(Outcome::new(false, cases, format!("{v}")).with_counterexample(Some(self.names(wit))));
            }
        }
        Ok(Outcome::new(true, cases, format!("{} extended words of degree 1", extended.len())))
    }

    fn conjecture(&self) -> Result<Outcome> {
        let values = ocw_value_set(self.group, self.word, &self.tuple.subgroup_sets(), self.budget)?;
        let generated = self.group.closure_of(&values.values);
        let by_splitting = verbal_subgroup_by_splitting(self.group, self.word, self.tuple)?;
        let holds = generated == by_splitting && self.group.order().is_multiple_of(generated.order());
        Ok(Outcome::new(holds, values.cardinality() as u64, format!("m = {}, |w(N)| = {}", values.cardinality(), generated.order())))
    }
}
