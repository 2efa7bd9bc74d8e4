use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

use super::expr::{Family, Var, WordExpr};

/// An outer commutator word: commutators nested arbitrarily over distinct
/// variables. A single variable is an outer commutator word too.
///
/// The leaf-distinctness invariant is enforced by every constructor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OcwTree {
    shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Shape {
    Leaf(Var),
    Comm(Box<OcwTree>, Box<OcwTree>),
}

/// Borrowed view for pattern matching.
#[derive(Clone, Copy, Debug)]
pub enum View<'a> {
    Leaf(Var),
    Comm(&'a OcwTree, &'a OcwTree),
}

impl OcwTree {
    pub fn leaf(v: Var) -> OcwTree {
        OcwTree { shape: Shape::Leaf(v) }
    }

    pub fn x(index: u32) -> OcwTree {
        OcwTree::leaf(Var::x(index))
    }

    pub fn y(index: u32) -> OcwTree {
        OcwTree::leaf(Var::y(index))
    }

    /// `[a, b]`, provided `a` and `b` share no variable.
    pub fn commutator(a: OcwTree, b: OcwTree) -> Result<OcwTree> {
        let left: BTreeSet<Var> = a.leaves().into_iter().collect();
        if let Some(v) = b.leaves().into_iter().find(|v| left.contains(v)) {
            return Err(Error::DisjointnessViolation { first: 0, second: 1, var: v });
        }
        Ok(OcwTree::comm_unchecked(a, b))
    }

    fn comm_unchecked(a: OcwTree, b: OcwTree) -> OcwTree {
        OcwTree { shape: Shape::Comm(Box::new(a), Box::new(b)) }
    }

    pub fn view(&self) -> View<'_> {
        match &self.shape {
            Shape::Leaf(v) => View::Leaf(*v),
            Shape::Comm(a, b) => View::Comm(a, b),
        }
    }

    pub fn split(&self) -> Option<(&OcwTree, &OcwTree)> {
        match &self.shape {
            Shape::Leaf(_) => None,
            Shape::Comm(a, b) => Some((a, b)),
        }
    }

    pub fn as_leaf(&self) -> Option<Var> {
        match self.shape {
            Shape::Leaf(v) => Some(v),
            Shape::Comm(..) => None,
        }
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.push_leaves(&mut out);
        out
    }

    fn push_leaves(&self, out: &mut Vec<Var>) {
        match &self.shape {
            Shape::Leaf(v) => out.push(*v),
            Shape::Comm(a, b) => {
                a.push_leaves(out);
                b.push_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match &self.shape {
            Shape::Leaf(_) => 1,
            Shape::Comm(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Variables in argument order (the `X` family by index, then `Y`).
    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.leaves();
        vs.sort();
        vs
    }

    pub fn arity(&self) -> usize {
        self.leaf_count()
    }

    /// Index of `v` in [`OcwTree::variables`].
    pub fn position_of(&self, v: Var) -> Option<usize> {
        self.variables().binary_search(&v).ok()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match &self.shape {
            Shape::Leaf(w) => *w == v,
            Shape::Comm(a, b) => a.contains_var(v) || b.contains_var(v),
        }
    }

    pub fn has_family(&self, family: Family) -> bool {
        match &self.shape {
            Shape::Leaf(v) => v.family == family,
            Shape::Comm(a, b) => a.has_family(family) || b.has_family(family),
        }
    }

    /// True if every leaf belongs to `family`.
    pub fn is_pure(&self, family: Family) -> bool {
        match &self.shape {
            Shape::Leaf(v) => v.family == family,
            Shape::Comm(a, b) => a.is_pure(family) && b.is_pure(family),
        }
    }

    pub fn max_index(&self, family: Family) -> u32 {
        self.leaves().into_iter().filter(|v| v.family == family).map(|v| v.index).max().unwrap_or(0)
    }

    /// Renames variables. The map must be injective on the leaves, otherwise
    /// the result would repeat a variable.
    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> OcwTree {
        match &self.shape {
            Shape::Leaf(v) => OcwTree::leaf(f(*v)),
            Shape::Comm(a, b) => OcwTree::comm_unchecked(a.rename(f), b.rename(f)),
        }
    }

    /// Adds `offset` to every index of the given family.
    pub fn shift(&self, family: Family, offset: u32) -> OcwTree {
        self.rename(&|v| if v.family == family { Var { family, index: v.index + offset } } else { v })
    }

    /// Renumbers the `Y` leaves as `y1, y2, ...` in left-to-right order and
    /// returns the renaming applied.
    pub fn canonicalize_y(&self) -> (OcwTree, BTreeMap<Var, Var>) {
        let mut map = BTreeMap::new();
        let mut next = 1;
        for v in self.leaves() {
            if v.family == Family::Y {
                map.insert(v, Var::y(next));
                next += 1;
            }
        }
        let tree = self.rename(&|v| map.get(&v).copied().unwrap_or(v));
        (tree, map)
    }

    pub fn to_expr(&self) -> WordExpr {
        match &self.shape {
            Shape::Leaf(v) => WordExpr::Var(*v),
            Shape::Comm(a, b) => WordExpr::commutator(a.to_expr(), b.to_expr()),
        }
    }

    /// Number of commutator nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match &self.shape {
            Shape::Leaf(_) => 0,
            Shape::Comm(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for OcwTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Left-normed lower central word `[x1, ..., xr]`; `gamma(1) = x1`.
///
/// # Panics
/// If `r == 0`.
pub fn gamma(r: usize) -> OcwTree {
    assert!(r >= 1, "gamma needs r >= 1");
    (2..=r as u32).fold(OcwTree::x(1), |acc, i| OcwTree::comm_unchecked(acc, OcwTree::x(i)))
}

/// Derived word on `x1 .. x(2^k)`: `delta(0) = x1`,
/// `delta(k) = [delta(k-1)(first half), delta(k-1)(second half)]`.
pub fn delta(k: u32) -> OcwTree {
    delta_from(k, 1)
}

fn delta_from(k: u32, first: u32) -> OcwTree {
    if k == 0 {
        return OcwTree::x(first);
    }
    let half = 1u32 << (k - 1);
    OcwTree::comm_unchecked(delta_from(k - 1, first), delta_from(k - 1, first + half))
}

/// Recognizes a syntactic nesting of commutators over distinct variables.
/// Exponent-one powers and single-factor products are looked through.
pub fn classify_outer_commutator(w: &WordExpr) -> Option<OcwTree> {
    match w {
        WordExpr::Var(v) => Some(OcwTree::leaf(*v)),
        WordExpr::Commutator(a, b) => {
            let a = classify_outer_commutator(a)?;
            let b = classify_outer_commutator(b)?;
            OcwTree::commutator(a, b).ok()
        }
        WordExpr::Power(c, 1) => classify_outer_commutator(c),
        WordExpr::Product(cs) if cs.len() == 1 => classify_outer_commutator(&cs[0]),
        _ => None,
    }
}

/// `w(u_1, ..., u_r)`: the i-th variable of `w` (argument order) is replaced
/// by `u[i]`. The `u_i` must be pairwise disjoint.
pub fn substitute(w: &OcwTree, u: &[WordExpr]) -> Result<WordExpr> {
    let vars = w.variables();
    if vars.len() != u.len() {
        return Err(Error::ArityMismatch { expected: vars.len(), got: u.len() });
    }
    let mut owner: BTreeMap<Var, usize> = BTreeMap::new();
    for (i, ui) in u.iter().enumerate() {
        for v in ui.variables() {
            if let Some(&j) = owner.get(&v) {
                return Err(Error::DisjointnessViolation { first: j, second: i, var: v });
            }
            owner.insert(v, i);
        }
    }
    let image: BTreeMap<Var, &WordExpr> = vars.into_iter().zip(u).collect();
    Ok(w.to_expr().map_vars(&mut |v| image[&v].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    #[test]
    fn gamma_small_cases() {
        assert_eq!(gamma(1), OcwTree::x(1));
        assert_eq!(gamma(2).to_string(), "[x1,x2]");
        assert_eq!(gamma(3).to_string(), "[[x1,x2],x3]");
        assert_eq!(gamma(2), delta(1));
    }

    #[test]
    fn delta_small_cases() {
        assert_eq!(delta(0), OcwTree::x(1));
        assert_eq!(delta(2).to_string(), "[[x1,x2],[x3,x4]]");
        assert_eq!(delta(3).leaf_count(), 8);
    }

    #[test]
    fn gamma_recursion() {
        for r in 2..=8 {
            let expected = OcwTree::commutator(gamma(r - 1), OcwTree::x(r as u32)).unwrap();
            assert_eq!(gamma(r), expected);
        }
    }

    #[test]
    fn delta_halves_are_shifted_copies() {
        for k in 1..=5u32 {
            let d = delta(k);
            assert_eq!(d.leaf_count(), 1 << k);
            let (a, b) = d.split().unwrap();
            assert_eq!(a, &delta(k - 1));
            assert_eq!(b, &delta(k - 1).shift(Family::X, 1 << (k - 1)));
        }
    }

    #[test]
    fn classify() {
        let w = parse_word("[[x1,x2,x3],[[x4,x5],[x6,x7]]]").unwrap();
        let t = classify_outer_commutator(&w).unwrap();
        assert_eq!(t.leaf_count(), 7);
        assert_eq!(t.to_string(), "[[[x1,x2],x3],[[x4,x5],[x6,x7]]]");
        assert!(classify_outer_commutator(&parse_word("[x1,x1]").unwrap()).is_none());
        assert!(classify_outer_commutator(&parse_word("x1*x2").unwrap()).is_none());
        assert!(classify_outer_commutator(&parse_word("[x1^2,x2]").unwrap()).is_none());
        assert!(classify_outer_commutator(&parse_word("[y2,x1]").unwrap()).is_some());
    }

    #[test]
    fn substitution() {
        let u = vec![parse_word("x1^2").unwrap(), parse_word("x2^3").unwrap()];
        assert_eq!(substitute(&gamma(2), &u).unwrap(), parse_word("[x1^2,x2^3]").unwrap());
        let shared = vec![WordExpr::x(1), WordExpr::x(1)];
        assert!(matches!(substitute(&gamma(2), &shared), Err(Error::DisjointnessViolation { .. })));
        assert_eq!(substitute(&delta(0), &[WordExpr::x(7)]).unwrap(), WordExpr::x(7));
        assert!(matches!(substitute(&gamma(3), &u), Err(Error::ArityMismatch { expected: 3, got: 2 })));
    }

    #[test]
    fn commutator_rejects_shared_leaves() {
        assert!(OcwTree::commutator(gamma(2), OcwTree::x(2)).is_err());
    }

    #[test]
    fn canonical_y_numbering() {
        let t = OcwTree::commutator(OcwTree::commutator(OcwTree::y(7), OcwTree::x(1)).unwrap(), OcwTree::y(3)).unwrap();
        let (c, map) = t.canonicalize_y();
        assert_eq!(c.to_string(), "[[y1,x1],y2]");
        assert_eq!(map[&Var::y(7)], Var::y(1));
        assert_eq!(c.variables(), vec![Var::x(1), Var::y(1), Var::y(2)]);
    }
}
