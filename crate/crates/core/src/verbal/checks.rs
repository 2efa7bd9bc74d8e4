use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{CompiledWord, Elem, ElementSubset, FiniteGroup, Subgroup};
use crate::words::{extension_degree, substitute, Family, OcwTree, WordExpr};

use super::tuple::NormalTuple;
use super::values::{ocw_value_set, verbal_subgroup, word_verbal_subgroup_of_group};

/// Two subgroups computed by independent routes, and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub left: Subgroup,
    pub right: Subgroup,
}

impl Comparison {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// `w(N)` against `[a(N_1..N_q), b(N_{q+1}..N_r)]` for `w = [a, b]`.
pub fn check_disjoint_split(group: &FiniteGroup, w: &OcwTree, tuple: &NormalTuple, budget: u64) -> Result<Comparison> {
    let Some((a, b)) = w.split() else {
        return Err(Error::PreconditionFailed(format!("{w} is a single variable")));
    };
    let vars = w.variables();
    if vars.len() != tuple.len() {
        return Err(Error::ArityMismatch { expected: vars.len(), got: tuple.len() });
    }
    let left = verbal_subgroup(group, w, tuple, budget)?;
    let part = |sub: &OcwTree| -> Result<Subgroup> {
        let entries = sub.variables().iter().map(|v| tuple.entries()[vars.binary_search(v).expect("subword variable")].clone()).collect();
        verbal_subgroup(group, sub, &NormalTuple::new(group, entries)?, budget)
    };
    let right = group.commutator_subgroup(&part(a)?, &part(b)?)?;
    Ok(Comparison { left, right })
}

/// `w*(G)` for `w* = w(u_1, ..., u_r)` computed directly, against the
/// verbal subgroup of `w` on the tuple `(u_1(G), ..., u_r(G))`.
pub fn check_substitution(group: &FiniteGroup, w: &OcwTree, u: &[WordExpr], budget: u64) -> Result<Comparison> {
    let starred = substitute(w, u)?;
    let left = word_verbal_subgroup_of_group(group, &starred, budget)?;
    // u_i replaces the i-th variable of w in sorted order, which is also how
    // tuples align.
    let parts = u.iter().map(|ui| word_verbal_subgroup_of_group(group, ui, budget)).collect::<Result<Vec<_>>>()?;
    let right = verbal_subgroup(group, w, &NormalTuple::of_subgroups(group, parts)?, budget)?;
    Ok(Comparison { left, right })
}

/// Outcome of a star-power membership test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub value: Elem,
    pub star_exponent: u64,
    pub holds: bool,
}

fn exponent_to_usize(n: u64) -> usize {
    usize::try_from(n).unwrap_or(usize::MAX)
}

fn eval_tree(group: &FiniteGroup, w: &OcwTree, args: &[Elem]) -> Result<Elem> {
    let compiled = CompiledWord::new(&w.to_expr());
    if args.len() != compiled.arity() {
        return Err(Error::ArityMismatch { expected: compiled.arity(), got: args.len() });
    }
    if let Some(&bad) = args.iter().find(|&&a| a >= group.order()) {
        return Err(Error::BadIndex { index: bad, order: group.order() });
    }
    Ok(compiled.eval(group, args))
}

/// With `args[position - 1] ∈ S` for a normal subset `S`, tests
/// `w(args) ∈ S^{*2^{r-1}}`.
pub fn check_star_membership(group: &FiniteGroup, w: &OcwTree, s: &ElementSubset, args: &[Elem], position: usize) -> Result<Membership> {
    if !s.is_normal() {
        return Err(Error::NotNormalSubset("star membership set".into()));
    }
    let value = eval_tree(group, w, args)?;
    if position == 0 || position > args.len() || !s.contains(args[position - 1]) {
        return Err(Error::PreconditionFailed(format!("argument {position} is not in the set")));
    }
    let star_exponent = 1u64 << (w.leaf_count() - 1).min(63);
    let holds = group.star_power(s, exponent_to_usize(star_exponent)).contains(value);
    Ok(Membership { value, star_exponent, holds })
}

fn check_star_arguments(group: &FiniteGroup, sets: &[ElementSubset], m: &[u64], args: &[Elem]) -> Result<u64> {
    if sets.len() != m.len() || sets.len() != args.len() {
        return Err(Error::ArityMismatch { expected: sets.len(), got: m.len().min(args.len()) });
    }
    if let Some(i) = sets.iter().position(|s| !s.is_normal()) {
        return Err(Error::NotNormalSubset(format!("set {}", i + 1)));
    }
    for (i, ((s, &mi), &t)) in sets.iter().zip(m).zip(args).enumerate() {
        if !group.star_power(s, exponent_to_usize(mi)).contains(t) {
            return Err(Error::PreconditionFailed(format!("argument {} is not in S_{}^(*{mi})", i + 1, i + 1)));
        }
    }
    Ok(m.iter().fold(1u64, |acc, &x| acc.saturating_mul(x)))
}

/// With `args[i] ∈ S_i^{*m_i}`, tests `w(args) ∈ w{S}^{*m_1 ... m_r}`.
pub fn check_width(group: &FiniteGroup, w: &OcwTree, sets: &[ElementSubset], m: &[u64], args: &[Elem], budget: u64) -> Result<Membership> {
    let star_exponent = check_star_arguments(group, sets, m, args)?;
    let value = eval_tree(group, w, args)?;
    let values = ocw_value_set(group, w, sets, budget)?.values;
    let holds = group.star_power(&values, exponent_to_usize(star_exponent)).contains(value);
    Ok(Membership { value, star_exponent, holds })
}

/// For `v ∈ ext_k(w)`: `args` lists the `X` arguments (aligned with
/// `w.variables()`, each in `S_i^{*m_i}`) followed by free `Y` arguments;
/// tests `v(args) ∈ w{S}^{*m_1 ... m_r 2^k}`.
pub fn check_extended_width(
    group: &FiniteGroup,
    v: &OcwTree,
    w: &OcwTree,
    sets: &[ElementSubset],
    m: &[u64],
    args: &[Elem],
    budget: u64,
) -> Result<Membership> {
    let k = extension_degree(v, w).ok_or_else(|| Error::PreconditionFailed(format!("{v} is not an extended word of {w}")))?;
    let x_count = w.variables().len();
    if v.variables().iter().filter(|var| var.family == Family::X).count() != x_count {
        return Err(Error::PreconditionFailed("extended word changes the X variables".into()));
    }
    if args.len() < x_count {
        return Err(Error::ArityMismatch { expected: v.variables().len(), got: args.len() });
    }
    let base = check_star_arguments(group, sets, m, &args[..x_count])?;
    let value = eval_tree(group, v, args)?;
    let star_exponent = base.saturating_mul(1u64 << k.min(63));
    let values = ocw_value_set(group, w, sets, budget)?.values;
    let holds = group.star_power(&values, exponent_to_usize(star_exponent)).contains(value);
    Ok(Membership { value, star_exponent, holds })
}

/// `[[K, N], K] [L, N]`.
pub fn comm_congruence_modulus(group: &FiniteGroup, k: &Subgroup, l: &Subgroup, n: &Subgroup) -> Result<Subgroup> {
    let kn = group.commutator_subgroup(k, n)?;
    let knk = group.commutator_subgroup(&kn, k)?;
    let ln = group.commutator_subgroup(l, n)?;
    group.subgroup_product(&knk, &ln)
}

fn require_normal(parts: &[(&str, &Subgroup)]) -> Result<()> {
    match parts.iter().find(|(_, s)| !s.is_normal()) {
        Some((name, _)) => Err(Error::NotNormal(name.to_string())),
        None => Ok(()),
    }
}

/// With `x ≡ y z (mod L)` for `x, y, z ∈ K`, tests
/// `[x, n] ≡ [y, n][z, n]` modulo `[[K, N], K] [L, N]`.
#[allow(clippy::too_many_arguments)]
pub fn check_comm_congruence(
    group: &FiniteGroup,
    k: &Subgroup,
    l: &Subgroup,
    n: &Subgroup,
    x: Elem,
    y: Elem,
    z: Elem,
    e: Elem,
) -> Result<bool> {
    require_normal(&[("K", k), ("L", l), ("N", n)])?;
    if !(k.contains(x) && k.contains(y) && k.contains(z)) {
        return Err(Error::PreconditionFailed("x, y, z must lie in K".into()));
    }
    if !l.contains(group.mul(x, group.inv(group.mul(y, z)))) {
        return Err(Error::PreconditionFailed("x is not congruent to yz modulo L".into()));
    }
    if !n.contains(e) {
        return Err(Error::PreconditionFailed("n must lie in N".into()));
    }
    let modulus = comm_congruence_modulus(group, k, l, n)?;
    group.congruent_mod(group.comm(x, e), group.mul(group.comm(y, e), group.comm(z, e)), &modulus)
}

/// Counterexample `(y, z, l, n)` with `x = y z l`.
pub type CongruenceCounterexample = (Elem, Elem, Elem, Elem);

/// Exhaustive form of [`check_comm_congruence`] over every `y, z ∈ K`,
/// `l ∈ L` and `n ∈ N`. Returns the number of cases and the first failure.
pub fn comm_congruence_sweep(
    group: &FiniteGroup,
    k: &Subgroup,
    l: &Subgroup,
    n: &Subgroup,
    budget: u64,
) -> Result<(u64, Option<CongruenceCounterexample>)> {
    require_normal(&[("K", k), ("L", l), ("N", n)])?;
    let cases = (k.order() as u128).pow(2) * l.order() as u128 * n.order() as u128;
    if cases > budget as u128 {
        return Err(Error::BudgetExceeded { budget, needed: u64::try_from(cases).unwrap_or(u64::MAX) });
    }
    let modulus = comm_congruence_modulus(group, k, l, n)?;
    let ks: Vec<Elem> = k.elements().collect();
    let ns: Vec<Elem> = n.elements().collect();
    for &y in &ks {
        for &z in &ks {
            let yz = group.mul(y, z);
            for ell in l.elements() {
                let x = group.mul(yz, ell);
                for &e in &ns {
                    let lhs = group.comm(x, e);
                    let rhs = group.mul(group.comm(y, e), group.comm(z, e));
                    if !modulus.contains(group.mul(lhs, group.inv(rhs))) {
                        return Ok((cases as u64, Some((y, z, ell, e))));
                    }
                }
            }
        }
    }
    Ok((cases as u64, None))
}
