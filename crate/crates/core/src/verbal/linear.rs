use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{CompiledWord, Elem, FiniteGroup, Subgroup};
use crate::words::{OcwTree, Var, View};

use super::tuple::NormalTuple;
use super::values::{merge, subtree_values, Meter};

/// Default number of random tuples in sampled mode.
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

impl Mode {
    pub fn sampled(seed: u64) -> Mode {
        Mode::Sampled { seed, samples: DEFAULT_SAMPLES }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled { .. } => "sampled",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Mode::Exhaustive => None,
            Mode::Sampled { seed, .. } => Some(*seed),
        }
    }
}

/// A failure of `w(.., x y, ..) ≡ w(.., x, ..) w(.., y, ..)`: `args` is the
/// full tuple holding `x` at the tested position, `y` the second factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearityCounterexample {
    pub args: Vec<Elem>,
    pub y: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearityReport {
    pub word: String,
    pub tuple_orders: Vec<usize>,
    /// 1-based position among the sorted variables of the word.
    pub position: usize,
    pub modulus_order: usize,
    pub mode: Mode,
    pub holds: bool,
    /// Distinct cases examined: value triples in exhaustive mode, random
    /// tuples in sampled mode.
    pub cases: u64,
    pub counterexample: Option<LinearityCounterexample>,
}

fn check_inputs(w: &OcwTree, tuple: &NormalTuple, position: usize, modulus: &Subgroup) -> Result<Vec<Var>> {
    let vars = w.variables();
    if vars.len() != tuple.len() {
        return Err(Error::ArityMismatch { expected: vars.len(), got: tuple.len() });
    }
    if position == 0 || position > vars.len() {
        return Err(Error::PreconditionFailed(format!("position {position} outside 1..={}", vars.len())));
    }
    if !modulus.is_normal() {
        return Err(Error::NotNormal("modulus of a linearity check".into()));
    }
    Ok(vars)
}

/// Tests whether `w` is linear in `position` on `tuple` modulo `modulus`.
///
/// Exhaustive mode is exact: starting from the triples `(x y, x, y)` at the
/// tested leaf, each commutator on the path to the root maps a triple
/// `(A, B, C)` to `([A, b], [B, b], [C, b])` (or `[b, .]` from the left) for
/// every value `b` of the sibling subtree, which covers every tuple while
/// only visiting distinct value triples.
pub fn check_linearity(
    group: &FiniteGroup,
    w: &OcwTree,
    tuple: &NormalTuple,
    position: usize,
    modulus: &Subgroup,
    mode: Mode,
    budget: u64,
) -> Result<LinearityReport> {
    let vars = check_inputs(w, tuple, position, modulus)?;
    let (holds, cases, counterexample) = match mode {
        Mode::Exhaustive => exhaustive(group, w, &vars, tuple, position - 1, modulus, budget)?,
        Mode::Sampled { seed, samples } => sampled(group, w, tuple, position - 1, modulus, seed, samples),
    };
    Ok(LinearityReport {
        word: w.to_string(),
        tuple_orders: tuple.orders(),
        position,
        modulus_order: modulus.order(),
        mode,
        holds,
        cases,
        counterexample,
    })
}

type Triple = (Elem, Elem, Elem);

/// Witness of a triple: full argument tuple with `x` in the tested slot,
/// plus `y`.
type TripleWitness = (Vec<Elem>, Elem);

fn exhaustive(
    group: &FiniteGroup,
    w: &OcwTree,
    vars: &[Var],
    tuple: &NormalTuple,
    slot: usize,
    modulus: &Subgroup,
    budget: u64,
) -> Result<(bool, u64, Option<LinearityCounterexample>)> {
    let sets = tuple.subgroup_sets();
    let mut meter = Meter::new(budget);
    let target = vars[slot];
    let triples = propagate(group, w, target, vars, &sets, slot, &mut meter)?;
    let mut counterexample = None;
    for &((a, b, c), (ref args, y)) in &triples.order {
        if !modulus.contains(group.mul(a, group.inv(group.mul(b, c)))) {
            counterexample = Some(LinearityCounterexample { args: args.clone(), y });
            break;
        }
    }
    Ok((counterexample.is_none(), triples.order.len() as u64, counterexample))
}

/// Triples in discovery order, keyed for deduplication.
struct Triples {
    order: Vec<(Triple, TripleWitness)>,
    seen: HashSet<Triple>,
}

impl Triples {
    fn new() -> Triples {
        Triples { order: Vec::new(), seen: HashSet::new() }
    }

    fn insert(&mut self, t: Triple, wit: impl FnOnce() -> TripleWitness) {
        if self.seen.insert(t) {
            self.order.push((t, wit()));
        }
    }
}

fn propagate(
    group: &FiniteGroup,
    node: &OcwTree,
    target: Var,
    vars: &[Var],
    sets: &[crate::groups::ElementSubset],
    slot: usize,
    meter: &mut Meter,
) -> Result<Triples> {
    let mut out = Triples::new();
    match node.view() {
        View::Leaf(v) => {
            debug_assert_eq!(v, target);
            let elems = sets[slot].to_vec();
            meter.charge(elems.len() as u128 * elems.len() as u128)?;
            for &x in &elems {
                for &y in &elems {
                    out.insert((group.mul(x, y), x, y), || {
                        let mut args = vec![crate::groups::IDENTITY; vars.len()];
                        args[slot] = x;
                        (args, y)
                    });
                }
            }
        }
        View::Comm(a, b) => {
            let target_left = a.contains_var(target);
            let (path, sibling) = if target_left { (a, b) } else { (b, a) };
            let inner = propagate(group, path, target, vars, sets, slot, meter)?;
            let others = subtree_values(group, sibling, vars, sets, meter)?;
            meter.charge(inner.order.len() as u128 * others.list.len() as u128)?;
            let sibling_slots: Vec<usize> = sibling.variables().iter().map(|v| vars.binary_search(v).expect("subtree variable")).collect();
            for ((p, q, r), (args, y)) in &inner.order {
                for &s in &others.list {
                    let c = |e: Elem| if target_left { group.comm(e, s) } else { group.comm(s, e) };
                    out.insert((c(*p), c(*q), c(*r)), || (merge(args, others.witness_of(s), &sibling_slots), *y));
                }
            }
        }
    }
    Ok(out)
}

fn sampled(
    group: &FiniteGroup,
    w: &OcwTree,
    tuple: &NormalTuple,
    slot: usize,
    modulus: &Subgroup,
    seed: u64,
    samples: u64,
) -> (bool, u64, Option<LinearityCounterexample>) {
    let compiled = CompiledWord::new(&w.to_expr());
    let lists: Vec<Vec<Elem>> = tuple.subgroup_sets().iter().map(|s| s.to_vec()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut args = vec![0; lists.len()];
    for _ in 0..samples {
        for (a, l) in args.iter_mut().zip(&lists) {
            *a = l[rng.gen_range(0..l.len())];
        }
        let y = lists[slot][rng.gen_range(0..lists[slot].len())];
        if !linear_at(group, &compiled, &args, slot, y, modulus) {
            return (false, samples, Some(LinearityCounterexample { args, y }));
        }
    }
    (true, samples, None)
}

fn linear_at(group: &FiniteGroup, word: &CompiledWord, args: &[Elem], slot: usize, y: Elem, modulus: &Subgroup) -> bool {
    let mut t = args.to_vec();
    let x = t[slot];
    t[slot] = group.mul(x, y);
    let lhs = word.eval(group, &t);
    let first = word.eval(group, args);
    t[slot] = y;
    let second = word.eval(group, &t);
    modulus.contains(group.mul(lhs, group.inv(group.mul(first, second))))
}

/// Reference check by plain enumeration of every tuple and every `y`; costs
/// `|N_1| ... |N_r| |N_i|` word evaluations. Returns the first
/// counterexample in lexicographic order.
pub fn check_linearity_by_enumeration(
    group: &FiniteGroup,
    w: &OcwTree,
    tuple: &NormalTuple,
    position: usize,
    modulus: &Subgroup,
    budget: u64,
) -> Result<Option<LinearityCounterexample>> {
    check_inputs(w, tuple, position, modulus)?;
    let slot = position - 1;
    let lists: Vec<Vec<Elem>> = tuple.subgroup_sets().iter().map(|s| s.to_vec()).collect();
    let total = lists.iter().fold(1u128, |acc, l| acc * l.len() as u128) * lists[slot].len() as u128;
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { budget, needed: u64::try_from(total).unwrap_or(u64::MAX) });
    }
    let compiled = CompiledWord::new(&w.to_expr());
    let mut idx = vec![0usize; lists.len()];
    loop {
        let args: Vec<Elem> = idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect();
        for &y in &lists[slot] {
            if !linear_at(group, &compiled, &args, slot, y, modulus) {
                return Ok(Some(LinearityCounterexample { args, y }));
            }
        }
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
