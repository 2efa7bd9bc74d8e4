use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::groups::{builtin_group, evaluate, ElementSubset, FiniteGroup, Permutation, Subgroup, DEFAULT_ORDER_CAP, IDENTITY};
use crate::words::{delta, enumerate_extended, gamma, parse_word, OcwTree, Var, WordExpr};

fn g(spec: &str) -> FiniteGroup {
    builtin_group(spec, DEFAULT_ORDER_CAP).unwrap()
}

fn perm(group: &FiniteGroup, cycles: &str) -> usize {
    let degree: usize = group.label().trim_start_matches("sym:").parse().unwrap();
    group.find_named(&Permutation::parse_cycles(cycles, degree).unwrap().to_string()).unwrap()
}

fn whole(group: &FiniteGroup, r: usize) -> NormalTuple {
    NormalTuple::repeated(group, &group.whole_subgroup(), r).unwrap()
}

fn transpositions(s4: &FiniteGroup) -> ElementSubset {
    s4.conjugacy_class(perm(s4, "(1 2)"))
}

#[test]
fn value_sets() {
    let q = g("quat:8");
    let all = ElementSubset::whole(&q);
    let vs = value_set(&q, &gamma(2).to_expr(), &[all.clone(), all.clone()], DEFAULT_BUDGET).unwrap();
    assert_eq!(vs.cardinality(), 2);
    let names: Vec<String> = vs.values.iter().map(|e| q.name(e)).collect();
    assert_eq!(names, ["1", "-1"]);
    // Lexicographically first preimage of -1 is (i, j).
    assert_eq!(vs.witness(1).unwrap(), [2, 4]);
    let trivial =
        value_set(&q, &gamma(3).to_expr(), &[all.clone(), ElementSubset::identity_only(&q), all.clone()], DEFAULT_BUDGET).unwrap();
    assert_eq!(trivial.values.to_vec(), [IDENTITY]);
    assert_eq!(
        value_set(&q, &gamma(2).to_expr(), std::slice::from_ref(&all), DEFAULT_BUDGET),
        Err(Error::ArityMismatch { expected: 2, got: 1 })
    );
    assert_eq!(value_set(&q, &gamma(2).to_expr(), &[all.clone(), all], 10), Err(Error::BudgetExceeded { budget: 10, needed: 64 }));
}

#[test]
fn verbal_subgroups() {
    let s3 = g("sym:3");
    assert_eq!(verbal_subgroup(&s3, &gamma(2), &whole(&s3, 2), DEFAULT_BUDGET).unwrap().order(), 3);
    let s4 = g("sym:4");
    let d2 = verbal_subgroup(&s4, &delta(2), &whole(&s4, 4), DEFAULT_BUDGET).unwrap();
    assert_eq!(d2.order(), 4);
    let brute = word_verbal_subgroup_of_group(&s4, &delta(2).to_expr(), DEFAULT_BUDGET).unwrap();
    assert_eq!(brute, d2);
    let with_trivial = NormalTuple::of_subgroups(&s4, vec![s4.whole_subgroup(), s4.trivial_subgroup()]).unwrap();
    assert!(verbal_subgroup(&s4, &gamma(2), &with_trivial, DEFAULT_BUDGET).unwrap().is_trivial());
}

#[test]
fn tuple_validation() {
    let s3 = g("sym:3");
    let h = s3.closure([perm(&s3, "(1 2)")]);
    assert!(matches!(NormalTuple::of_subgroups(&s3, vec![h]), Err(Error::NotNormal(_))));
    let a3 = s3.derived_subgroup();
    let bad = TupleEntry::with_generators(s3.whole_subgroup(), ElementSubset::from_elements(&s3, a3.elements()), None);
    assert!(matches!(NormalTuple::new(&s3, vec![bad]), Err(Error::PreconditionFailed(_))));
    let ts = s3.conjugacy_class(perm(&s3, "(1 2)"));
    let power_fails = TupleEntry::with_generators(s3.whole_subgroup(), ts.clone(), Some(1));
    assert!(matches!(NormalTuple::new(&s3, vec![power_fails]), Err(Error::PowerConditionFailed(_))));
    let with_one = ts.union(&s3, &ElementSubset::identity_only(&s3));
    // Squares in S_3 are the identity and the 3-cycles; sixth powers are trivial.
    assert!(NormalTuple::new(&s3, vec![TupleEntry::with_generators(s3.whole_subgroup(), with_one, Some(6))]).is_ok());
}

#[test]
fn power_conditions() {
    let c = g("cyc:5");
    let n = c.whole_subgroup();
    assert!(check_power_condition(&c, &TupleEntry::with_generators(n.clone(), n.as_subset().clone(), Some(1))).unwrap());
    let only_one = TupleEntry { subgroup: n, generators: Some(ElementSubset::identity_only(&c)), power: Some(1) };
    assert!(!check_power_condition(&c, &only_one).unwrap());
    let d4 = g("dih:4");
    let rotations = d4.closure([1]);
    assert_eq!(rotations.order(), 4);
    let squares = ElementSubset::from_elements(&d4, rotations.elements().map(|x| d4.pow(x, 2)));
    let s = squares.union(&d4, &d4.conjugacy_class(1));
    let entry = TupleEntry::with_generators(rotations, s, Some(2));
    assert!(check_power_condition(&d4, &entry).unwrap());
    assert!(entry.validate(&d4).is_ok());
}

#[test]
fn disjoint_splits() {
    let s4 = g("sym:4");
    let c = check_disjoint_split(&s4, &delta(2), &whole(&s4, 4), DEFAULT_BUDGET).unwrap();
    assert!(c.holds());
    assert_eq!(c.left.order(), 4);
    let qt = NormalTuple::of_subgroups(&g("quat:8"), vec![g("quat:8").whole_subgroup(), g("quat:8").trivial_subgroup()]).unwrap();
    let c = check_disjoint_split(&g("quat:8"), &gamma(2), &qt, DEFAULT_BUDGET).unwrap();
    assert!(c.holds() && c.left.is_trivial());
    let s3 = g("sym:3");
    let c = check_disjoint_split(&s3, &gamma(3), &whole(&s3, 3), DEFAULT_BUDGET).unwrap();
    assert!(c.holds());
    assert_eq!(c.right.order(), 3);
    assert!(check_disjoint_split(&s3, &gamma(1), &whole(&s3, 1), DEFAULT_BUDGET).is_err());
}

#[test]
fn substitutions() {
    let s3 = g("sym:3");
    let c = check_substitution(&s3, &gamma(2), &[WordExpr::x(1), WordExpr::x(2)], DEFAULT_BUDGET).unwrap();
    assert!(c.holds());
    assert_eq!(c.left.order(), 3);
    let s4 = g("sym:4");
    let u = [parse_word("x1^2").unwrap(), parse_word("x2^3").unwrap()];
    let c = check_substitution(&s4, &gamma(2), &u, DEFAULT_BUDGET).unwrap();
    assert!(c.holds());
    let q = g("quat:8");
    let u = [parse_word("x1^2").unwrap(), parse_word("x2^2").unwrap()];
    let c = check_substitution(&q, &gamma(2), &u, DEFAULT_BUDGET).unwrap();
    assert!(c.holds() && c.left.is_trivial());
    let shared = [WordExpr::x(1), WordExpr::x(1)];
    assert!(matches!(check_substitution(&q, &gamma(2), &shared, DEFAULT_BUDGET), Err(Error::DisjointnessViolation { .. })));
}

#[test]
fn star_memberships() {
    let q = g("quat:8");
    let i = q.find_named("i").unwrap();
    let j = q.find_named("j").unwrap();
    let s = q.conjugacy_class(i);
    assert_eq!(s.len(), 2);
    let m = check_star_membership(&q, &gamma(2), &s, &[i, j], 1).unwrap();
    assert!(m.holds);
    assert_eq!((q.name(m.value), m.star_exponent), ("-1".to_string(), 2));
    let base = check_star_membership(&q, &gamma(1), &s, &[i], 1).unwrap();
    assert!(base.holds && base.star_exponent == 1);
    assert!(check_star_membership(&q, &gamma(2), &s, &[j, j], 1).is_err());

    let s4 = g("sym:4");
    let three_cycles = s4.conjugacy_class(perm(&s4, "(1 2 3)"));
    for a in s4.elements() {
        for c in [perm(&s4, "(1 2 3)"), perm(&s4, "(2 4 3)")] {
            for b in [IDENTITY, perm(&s4, "(1 2)"), perm(&s4, "(1 2 3 4)")] {
                assert!(check_star_membership(&s4, &gamma(3), &three_cycles, &[a, c, b], 2).unwrap().holds);
            }
        }
    }
}

#[test]
fn widths() {
    let s4 = g("sym:4");
    let t = transpositions(&s4);
    let sets = [t.clone(), t.clone()];
    let args = [perm(&s4, "(1 2)(3 4)"), perm(&s4, "(1 3)")];
    let m = check_width(&s4, &gamma(2), &sets, &[2, 1], &args, DEFAULT_BUDGET).unwrap();
    assert!(m.holds);
    assert_eq!(m.star_exponent, 2);
    let ones = check_width(&s4, &gamma(2), &sets, &[1, 1], &[perm(&s4, "(1 2)"), perm(&s4, "(2 3)")], DEFAULT_BUDGET).unwrap();
    assert!(ones.holds);
    let trivial = check_width(&s4, &gamma(2), &sets, &[5, 3], &[IDENTITY, perm(&s4, "(2 3)")], DEFAULT_BUDGET).unwrap();
    assert!(trivial.holds && trivial.value == IDENTITY);
    assert!(matches!(check_width(&s4, &gamma(2), &sets, &[1, 1], &args, DEFAULT_BUDGET), Err(Error::PreconditionFailed(_))));
}

#[test]
fn extended_widths() {
    let s4 = g("sym:4");
    let t = transpositions(&s4);
    let sets = [t.clone(), t.clone()];
    let v = crate::words::classify_outer_commutator(&parse_word("[[y1,y2],[x1,x2]]").unwrap()).unwrap();
    for y1 in s4.elements() {
        for y2 in [perm(&s4, "(1 2 3 4)"), perm(&s4, "(1 3)")] {
            let args = [perm(&s4, "(1 2)"), perm(&s4, "(2 3)"), y1, y2];
            let m = check_extended_width(&s4, &v, &gamma(2), &sets, &[1, 1], &args, DEFAULT_BUDGET).unwrap();
            assert!(m.holds);
            assert_eq!(m.star_exponent, 2);
        }
    }
    let at_identity =
        check_extended_width(&s4, &v, &gamma(2), &sets, &[1, 1], &[perm(&s4, "(1 2)"), perm(&s4, "(2 3)"), 0, 0], DEFAULT_BUDGET).unwrap();
    assert!(at_identity.holds && at_identity.value == IDENTITY);
    let k0 =
        check_extended_width(&s4, &gamma(2), &gamma(2), &sets, &[1, 1], &[perm(&s4, "(1 2)"), perm(&s4, "(2 3)")], DEFAULT_BUDGET).unwrap();
    assert_eq!(k0.star_exponent, 1);
}

#[test]
fn linearity_examples() {
    let q = g("quat:8");
    let centre = q.center();
    let tuple = NormalTuple::of_subgroups(&q, vec![q.whole_subgroup(), centre]).unwrap();
    let r = check_linearity(&q, &gamma(2), &tuple, 2, &q.trivial_subgroup(), Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
    assert!(r.holds);
    let s3 = g("sym:3");
    let tuple = whole(&s3, 2);
    let r = check_linearity(&s3, &gamma(2), &tuple, 2, &s3.trivial_subgroup(), Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
    assert!(!r.holds);
    let ce = r.counterexample.unwrap();
    let mut t = ce.args.clone();
    let w = gamma(2).to_expr();
    let at = |t: &[usize]| evaluate(&w, &s3, &BTreeMap::from([(Var::x(1), t[0]), (Var::x(2), t[1])])).unwrap();
    let first = at(&t);
    t[1] = ce.y;
    let second = at(&t);
    t[1] = s3.mul(ce.args[1], ce.y);
    assert_ne!(at(&t), s3.mul(first, second));
    let r = check_linearity(&s3, &gamma(2), &tuple, 2, &s3.whole_subgroup(), Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
    assert!(r.holds);
    let sampled = check_linearity(&s3, &gamma(2), &tuple, 2, &s3.trivial_subgroup(), Mode::sampled(7), DEFAULT_BUDGET).unwrap();
    assert!(!sampled.holds);
    assert_eq!(sampled.mode.name(), "sampled");
    let h = s3.closure([perm(&s3, "(1 2)")]);
    assert!(matches!(check_linearity(&s3, &gamma(2), &tuple, 1, &h, Mode::Exhaustive, DEFAULT_BUDGET), Err(Error::NotNormal(_))));
}

#[test]
fn comm_congruences() {
    let s4 = g("sym:4");
    let a4 = s4.derived_subgroup();
    let v4 = s4.commutator_subgroup(&a4, &a4).unwrap();
    assert_eq!(v4.order(), 4);
    let (cases, failure) = comm_congruence_sweep(&s4, &a4, &v4, &a4, DEFAULT_BUDGET).unwrap();
    assert_eq!(cases, 12 * 12 * 4 * 12);
    assert_eq!(failure, None);
    let y = perm(&s4, "(1 2 3)");
    let z = perm(&s4, "(1 2)(3 4)");
    let triv = s4.trivial_subgroup();
    assert!(check_comm_congruence(&s4, &a4, &triv, &a4, s4.mul(y, z), y, z, perm(&s4, "(2 3 4)")).unwrap());
    assert!(check_comm_congruence(&s4, &a4, &v4, &a4, s4.mul(y, z), y, z, IDENTITY).unwrap());
    assert!(matches!(check_comm_congruence(&s4, &a4, &triv, &a4, y, y, z, IDENTITY), Err(Error::PreconditionFailed(_))));
}

// Property tests over small groups.

fn group_pool() -> Vec<FiniteGroup> {
    ["cyc:4", "sym:3", "dih:4", "quat:8", "alt:4", "cyc:2 x sym:3"].iter().map(|s| g(s)).collect()
}

/// Normal subgroups available in `group`: whole, derived, centre and normal
/// closures of individual elements.
fn normal_pool(group: &FiniteGroup) -> Vec<Subgroup> {
    let mut out = vec![group.whole_subgroup(), group.derived_subgroup(), group.center(), group.trivial_subgroup()];
    out.extend(group.elements().map(|e| group.normal_closure([e])));
    out.dedup();
    out
}

/// Outer commutator words on 1..=4 leaves with a random leaf order.
fn ocw_strategy() -> impl Strategy<Value = OcwTree> {
    (1usize..=4)
        .prop_flat_map(|n| (proptest::collection::vec(any::<u8>(), n - 1), Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()))
        .prop_map(|(splits, labels)| build_tree(&labels, &splits))
}

fn build_tree(labels: &[u32], splits: &[u8]) -> OcwTree {
    if labels.len() == 1 {
        return OcwTree::x(labels[0]);
    }
    let cut = 1 + splits[0] as usize % (labels.len() - 1);
    let rest = &splits[1..];
    let (ls, rs) = rest.split_at(cut - 1);
    OcwTree::commutator(build_tree(&labels[..cut], ls), build_tree(&labels[cut..], rs)).unwrap()
}

fn conj_closed_generators(group: &FiniteGroup, n: &Subgroup, picks: &[usize]) -> ElementSubset {
    // Conjugacy classes of the generators, plus a few random classes of N.
    let members: Vec<usize> = n.elements().collect();
    let extra = picks.iter().map(|&p| members[p % members.len()]);
    group.normal_subset_generated(n.generators().iter().copied().chain(extra))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generating_sets_give_the_same_verbal_subgroup(
        which in 0usize..6,
        w in ocw_strategy(),
        choice in proptest::collection::vec(any::<usize>(), 4),
        picks in proptest::collection::vec(any::<usize>(), 2),
    ) {
        let group = &group_pool()[which];
        let pool = normal_pool(group);
        let r = w.arity();
        let entries: Vec<TupleEntry> = (0..r).map(|i| {
            let n = pool[choice[i] % pool.len()].clone();
            let s = conj_closed_generators(group, &n, &picks);
            TupleEntry::with_generators(n, s, None)
        }).collect();
        let tuple = NormalTuple::new(group, entries).unwrap();
        let from_generators = verbal_subgroup(group, &w, &tuple, DEFAULT_BUDGET).unwrap();
        let from_subgroups = verbal_subgroup_on_subgroups(group, &w, &tuple, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(&from_generators, &from_subgroups);
        prop_assert_eq!(&verbal_subgroup_by_splitting(group, &w, &tuple).unwrap(), &from_subgroups);
        prop_assert!(from_subgroups.is_normal());
    }

    #[test]
    fn factored_value_sets_match_enumeration(which in 0usize..6, w in ocw_strategy(), choice in proptest::collection::vec(any::<usize>(), 4)) {
        let group = &group_pool()[which];
        let pool = normal_pool(group);
        let sets: Vec<ElementSubset> = (0..w.arity()).map(|i| pool[choice[i] % pool.len()].as_subset().clone()).collect();
        let fast = ocw_value_set(group, &w, &sets, DEFAULT_BUDGET).unwrap();
        let slow = value_set(group, &w.to_expr(), &sets, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(&fast.values, &slow.values);
        prop_assert!(fast.values.is_normal());
        let compiled = crate::groups::CompiledWord::new(&w.to_expr());
        for (v, wit) in &fast.witnesses {
            prop_assert_eq!(compiled.eval(group, wit), *v);
            for (e, s) in wit.iter().zip(&sets) {
                prop_assert!(s.contains(*e));
            }
        }
    }

    #[test]
    fn factored_linearity_matches_enumeration(
        which in 0usize..6,
        w in ocw_strategy(),
        choice in proptest::collection::vec(any::<usize>(), 5),
        position in any::<usize>(),
    ) {
        let group = &group_pool()[which];
        let pool = normal_pool(group);
        let subs: Vec<Subgroup> = (0..w.arity()).map(|i| pool[choice[i] % pool.len()].clone()).collect();
        let tuple = NormalTuple::of_subgroups(group, subs).unwrap();
        let modulus = &pool[choice[4] % pool.len()];
        let position = 1 + position % w.arity();
        let fast = check_linearity(group, &w, &tuple, position, modulus, Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
        let slow = check_linearity_by_enumeration(group, &w, &tuple, position, modulus, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(fast.holds, slow.is_none());
    }

    #[test]
    fn disjoint_split_and_substitution_hold(which in 0usize..6, w in ocw_strategy(), exps in proptest::collection::vec(2i64..=3, 4)) {
        let group = &group_pool()[which];
        if w.arity() >= 2 {
            let tuple = NormalTuple::repeated(group, &group.whole_subgroup(), w.arity()).unwrap();
            prop_assert!(check_disjoint_split(group, &w, &tuple, DEFAULT_BUDGET).unwrap().holds());
        }
        if w.arity() <= 3 {
            let u: Vec<WordExpr> = w.leaves().iter().zip(&exps).map(|(v, &e)| WordExpr::power(WordExpr::var(*v), e)).collect();
            prop_assert!(check_substitution(group, &w, &u, DEFAULT_BUDGET).unwrap().holds());
        }
    }

    #[test]
    fn non_commutator_power_values(which in 0usize..6, text in prop::sample::select(vec!["x1^2", "x1^3 x2", "x2^-1 [x1,x2] x2^3", "x1 x2 x1"])) {
        let group = &group_pool()[which];
        let u = parse_word(text).unwrap();
        let (var, e) = u.non_commutator_witness().unwrap();
        for a in group.elements() {
            let assignment: BTreeMap<Var, usize> = u.variables().into_iter().map(|v| (v, if v == var { a } else { IDENTITY })).collect();
            prop_assert_eq!(evaluate(&u, group, &assignment).unwrap(), group.pow(a, e));
        }
    }

    #[test]
    fn star_and_width_memberships(which in 0usize..6, w in ocw_strategy(), args in proptest::collection::vec(any::<usize>(), 4), pick in any::<usize>()) {
        let group = &group_pool()[which];
        let n = group.order();
        let s = group.normal_subset_generated([pick % n]);
        let position = 1 + pick % w.arity();
        let mut t: Vec<usize> = args.iter().take(w.arity()).map(|a| a % n).collect();
        let members = s.to_vec();
        t[position - 1] = members[args[0] % members.len()];
        prop_assert!(check_star_membership(group, &w, &s, &t, position).unwrap().holds);
        // Width: put each argument in S_i^{*m_i} with S_i = class of t_i.
        let sets: Vec<ElementSubset> = t.iter().map(|&e| group.normal_subset_generated([e, pick % n])).collect();
        let m: Vec<u64> = vec![1; w.arity()];
        prop_assert!(check_width(group, &w, &sets, &m, &t, DEFAULT_BUDGET).unwrap().holds);
    }

    #[test]
    fn extended_width_memberships(which in 0usize..3, k in 0usize..=2, pick in any::<usize>(), args in proptest::collection::vec(any::<usize>(), 8)) {
        let group = &group_pool()[which];
        let n = group.order();
        let w = gamma(2);
        let ext = enumerate_extended(&w, k, 2).unwrap();
        let v = ext.words.iter().nth(pick % ext.len()).unwrap();
        let sets: Vec<ElementSubset> = (0..2).map(|i| group.normal_subset_generated([args[i] % n])).collect();
        let mut t: Vec<usize> = args.iter().take(v.arity()).map(|a| a % n).collect();
        t[0] = args[0] % n;
        t[1] = args[1] % n;
        let m = check_extended_width(group, v, &w, &sets, &[1, 1], &t, DEFAULT_BUDGET).unwrap();
        prop_assert!(m.holds);
        prop_assert_eq!(m.star_exponent, 1u64 << k);
    }
}
