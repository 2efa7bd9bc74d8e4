use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{CompiledWord, Elem, ElementSubset, FiniteGroup, Subgroup, IDENTITY};
use crate::words::{OcwTree, View, WordExpr};

use super::tuple::NormalTuple;

/// Default ceiling on enumerated tuples (or combined pairs, for the factored
/// outer commutator routes).
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// The values of a word over a product of subsets, each with one preimage.
///
/// A witness lists one element per variable of the word, in sorted variable
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSet {
    pub values: ElementSubset,
    pub witnesses: BTreeMap<Elem, Vec<Elem>>,
}

impl ValueSet {
    /// `m`, the number of distinct values.
    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn witness(&self, value: Elem) -> Option<&[Elem]> {
        self.witnesses.get(&value).map(Vec::as_slice)
    }

    fn from_witnesses(group: &FiniteGroup, witnesses: BTreeMap<Elem, Vec<Elem>>) -> ValueSet {
        let values = ElementSubset::from_elements(group, witnesses.keys().copied());
        ValueSet { values, witnesses }
    }
}

fn product_size(sets: &[ElementSubset]) -> u128 {
    sets.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
}

fn check_arity(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected, got })
    }
}

fn over_budget(budget: u64, needed: u128) -> Error {
    Error::BudgetExceeded { budget, needed: u64::try_from(needed).unwrap_or(u64::MAX) }
}

/// `w{S_1, ..., S_r}` by enumerating every tuple. Witnesses are the
/// lexicographically first preimages.
pub fn value_set(group: &FiniteGroup, w: &WordExpr, sets: &[ElementSubset], budget: u64) -> Result<ValueSet> {
    let compiled = CompiledWord::new(w);
    check_arity(compiled.arity(), sets.len())?;
    let total = product_size(sets);
    if total > budget as u128 {
        return Err(over_budget(budget, total));
    }
    if total == 0 {
        return Ok(ValueSet::from_witnesses(group, BTreeMap::new()));
    }
    let lists: Vec<Vec<Elem>> = sets.iter().map(ElementSubset::to_vec).collect();
    if lists.is_empty() {
        let v = compiled.eval(group, &[]);
        return Ok(ValueSet::from_witnesses(group, BTreeMap::from([(v, Vec::new())])));
    }
    // Split on the first coordinate; merging the chunks in order keeps the
    // lexicographically first witness.
    let chunks: Vec<BTreeMap<Elem, Vec<Elem>>> = lists[0]
        .par_iter()
        .map(|&first| {
            let mut found = BTreeMap::new();
            let mut args: Vec<Elem> = lists.iter().map(|l| l[0]).collect();
            args[0] = first;
            let mut idx = vec![0usize; lists.len()];
            loop {
                let v = compiled.eval(group, &args);
                found.entry(v).or_insert_with(|| args.clone());
                // Odometer over coordinates 1.., last coordinate fastest.
                let mut pos = lists.len() - 1;
                loop {
                    if pos == 0 {
                        return found;
                    }
                    idx[pos] += 1;
                    if idx[pos] < lists[pos].len() {
                        args[pos] = lists[pos][idx[pos]];
                        break;
                    }
                    idx[pos] = 0;
                    args[pos] = lists[pos][0];
                    pos -= 1;
                }
            }
        })
        .collect();
    let mut witnesses = BTreeMap::new();
    for chunk in chunks {
        for (v, wit) in chunk {
            witnesses.entry(v).or_insert(wit);
        }
    }
    Ok(ValueSet::from_witnesses(group, witnesses))
}

/// Dense table from value to partial witness, filled in discovery order.
pub(crate) struct Values {
    pub(crate) list: Vec<Elem>,
    pub(crate) witness: Vec<Option<Vec<Elem>>>,
}

impl Values {
    fn new(order: usize) -> Values {
        Values { list: Vec::new(), witness: vec![None; order] }
    }

    fn insert(&mut self, v: Elem, wit: impl FnOnce() -> Vec<Elem>) {
        if self.witness[v].is_none() {
            self.witness[v] = Some(wit());
            self.list.push(v);
        }
    }

    pub(crate) fn witness_of(&self, v: Elem) -> &[Elem] {
        self.witness[v].as_deref().expect("value was recorded")
    }
}

/// Tracks pair operations against a budget.
pub(crate) struct Meter {
    budget: u64,
    spent: u128,
}

impl Meter {
    pub(crate) fn new(budget: u64) -> Meter {
        Meter { budget, spent: 0 }
    }

    pub(crate) fn charge(&mut self, ops: u128) -> Result<()> {
        self.spent = self.spent.saturating_add(ops);
        if self.spent > self.budget as u128 {
            return Err(over_budget(self.budget, self.spent));
        }
        Ok(())
    }
}

/// `w{S}` for an outer commutator word, computed bottom-up: the values of
/// `[a, b]` are the commutators of a value of `a` with a value of `b`. The
/// sets align with `w.variables()`. Witnesses are the first preimages found.
pub fn ocw_value_set(group: &FiniteGroup, w: &OcwTree, sets: &[ElementSubset], budget: u64) -> Result<ValueSet> {
    let vars = w.variables();
    check_arity(vars.len(), sets.len())?;
    let mut meter = Meter::new(budget);
    let values = subtree_values(group, w, &vars, sets, &mut meter)?;
    let witnesses = values.list.iter().map(|&v| (v, values.witness_of(v).to_vec())).collect();
    Ok(ValueSet::from_witnesses(group, witnesses))
}

/// Values of the subtree `node`, with witnesses over all slots of the whole
/// word (slots outside the subtree hold the identity).
pub(crate) fn subtree_values(
    group: &FiniteGroup,
    node: &OcwTree,
    vars: &[crate::words::Var],
    sets: &[ElementSubset],
    meter: &mut Meter,
) -> Result<Values> {
    let mut out = Values::new(group.order());
    match node.view() {
        View::Leaf(v) => {
            let slot = vars.binary_search(&v).expect("leaf is a variable of the word");
            meter.charge(sets[slot].len() as u128)?;
            for e in sets[slot].iter() {
                out.insert(e, || {
                    let mut wit = vec![IDENTITY; vars.len()];
                    wit[slot] = e;
                    wit
                });
            }
        }
        View::Comm(a, b) => {
            let left = subtree_values(group, a, vars, sets, meter)?;
            let right = subtree_values(group, b, vars, sets, meter)?;
            meter.charge(left.list.len() as u128 * right.list.len() as u128)?;
            let right_slots: Vec<usize> = b.variables().iter().map(|v| vars.binary_search(v).expect("subtree variable")).collect();
            for &x in &left.list {
                for &y in &right.list {
                    out.insert(group.comm(x, y), || merge(left.witness_of(x), right.witness_of(y), &right_slots));
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn merge(left: &[Elem], right: &[Elem], right_slots: &[usize]) -> Vec<Elem> {
    let mut wit = left.to_vec();
    for &s in right_slots {
        wit[s] = right[s];
    }
    wit
}

/// `w(N)` as the subgroup generated by `w{S}`, where `S_i` is the
/// generating set of entry `i` when present and `N_i` otherwise.
pub fn verbal_subgroup(group: &FiniteGroup, w: &OcwTree, tuple: &NormalTuple, budget: u64) -> Result<Subgroup> {
    let vs = ocw_value_set(group, w, &tuple.chosen_sets(), budget)?;
    Ok(group.closure_of(&vs.values))
}

/// `w(N)` generated by the values on the full subgroups, ignoring any
/// generating sets.
pub fn verbal_subgroup_on_subgroups(group: &FiniteGroup, w: &OcwTree, tuple: &NormalTuple, budget: u64) -> Result<Subgroup> {
    let vs = ocw_value_set(group, w, &tuple.subgroup_sets(), budget)?;
    Ok(group.closure_of(&vs.values))
}

/// `w(N)` assembled from commutator subgroups: a leaf gives its entry and
/// `[a, b]` gives `[a(N'), b(N'')]`.
pub fn verbal_subgroup_by_splitting(group: &FiniteGroup, w: &OcwTree, tuple: &NormalTuple) -> Result<Subgroup> {
    let vars = w.variables();
    check_arity(vars.len(), tuple.len())?;
    split_rec(group, w, &vars, tuple)
}

fn split_rec(group: &FiniteGroup, node: &OcwTree, vars: &[crate::words::Var], tuple: &NormalTuple) -> Result<Subgroup> {
    match node.view() {
        View::Leaf(v) => Ok(tuple.entries()[vars.binary_search(&v).expect("leaf is a variable")].subgroup.clone()),
        View::Comm(a, b) => {
            let left = split_rec(group, a, vars, tuple)?;
            let right = split_rec(group, b, vars, tuple)?;
            group.commutator_subgroup(&left, &right)
        }
    }
}

/// The verbal subgroup of an arbitrary word over the given sets, by full
/// enumeration.
pub fn word_verbal_subgroup(group: &FiniteGroup, w: &WordExpr, sets: &[ElementSubset], budget: u64) -> Result<Subgroup> {
    Ok(group.closure_of(&value_set(group, w, sets, budget)?.values))
}

/// `w(G)` for an arbitrary word.
pub fn word_verbal_subgroup_of_group(group: &FiniteGroup, w: &WordExpr, budget: u64) -> Result<Subgroup> {
    let sets = vec![ElementSubset::whole(group); w.variables().len()];
    word_verbal_subgroup(group, w, &sets, budget)
}
