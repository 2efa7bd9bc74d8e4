//! Extended words of an outer commutator word.
//!
//! `ext_0(w) = {w}`; for `k >= 1`, `ext_k(w)` holds `[p, q]` and `[q, p]` for
//! every outer commutator `p` in the `Y` variables and `q` in `ext_{k-1}(w)`,
//! and, when `w = [a, b]`, every `[p, q]` with `p` in `ext_l(a)`, `q` in
//! `ext_m(b)` and `l + m = k`. The `Y` words are limited to a leaf budget so
//! the sets stay finite; fresh `Y` variables are always numbered
//! left-to-right from `y1`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

use super::expr::Family;
use super::ocw::{OcwTree, View};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedWordSet {
    pub base: OcwTree,
    pub degree: usize,
    pub shape_bound: usize,
    pub words: BTreeSet<OcwTree>,
}

impl ExtendedWordSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, v: &OcwTree) -> bool {
        self.words.contains(&v.canonicalize_y().0)
    }
}

/// All outer commutator shapes on `1..=max_leaves` leaves labelled
/// `y1, y2, ...` left to right.
pub fn y_shapes(max_leaves: usize) -> Vec<OcwTree> {
    let mut by_size: Vec<Vec<OcwTree>> = vec![Vec::new(), vec![OcwTree::y(1)]];
    for n in 2..=max_leaves {
        let mut here = Vec::new();
        for a in 1..n {
            for l in &by_size[a] {
                for r in &by_size[n - a] {
                    here.push(join(l, r));
                }
            }
        }
        by_size.push(here);
    }
    by_size.into_iter().skip(1).take(max_leaves).flatten().collect()
}

/// `[a, b]` with the `Y` variables of `b` moved clear of those of `a`, then
/// renumbered canonically.
fn join(a: &OcwTree, b: &OcwTree) -> OcwTree {
    let b = b.shift(Family::Y, a.max_index(Family::Y));
    OcwTree::commutator(a.clone(), b).expect("words with disjoint X parts and shifted Y parts").canonicalize_y().0
}

/// Enumerates `ext_k(w)` with `Y` words of at most `shape_bound` leaves.
pub fn enumerate_extended(w: &OcwTree, k: usize, shape_bound: usize) -> Result<ExtendedWordSet> {
    if shape_bound == 0 {
        return Err(Error::PreconditionFailed("shape_bound must be at least 1".into()));
    }
    if w.has_family(Family::Y) {
        return Err(Error::PreconditionFailed(format!("{w} already uses Y variables")));
    }
    let shapes = y_shapes(shape_bound);
    let mut memo = BTreeMap::new();
    let words = ext(w, k, &shapes, &mut memo);
    Ok(ExtendedWordSet { base: w.clone(), degree: k, shape_bound, words })
}

fn ext(w: &OcwTree, k: usize, shapes: &[OcwTree], memo: &mut BTreeMap<(OcwTree, usize), BTreeSet<OcwTree>>) -> BTreeSet<OcwTree> {
    if k == 0 {
        return BTreeSet::from([w.clone()]);
    }
    if let Some(hit) = memo.get(&(w.clone(), k)) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    let previous = ext(w, k - 1, shapes, memo);
    for p in shapes {
        for q in &previous {
            out.insert(join(p, q));
            out.insert(join(q, p));
        }
    }
    if let Some((a, b)) = w.split() {
        for l in 0..=k {
            let left = ext(a, l, shapes, memo);
            let right = ext(b, k - l, shapes, memo);
            for p in &left {
                for q in &right {
                    out.insert(join(p, q));
                }
            }
        }
    }
    memo.insert((w.clone(), k), out.clone());
    out
}

/// Degree `k` with `v` in `ext_k(w)`, or `None` if `v` is no extended word of
/// `w`. The degree is unique: it counts the inserted pure-`Y` commutands.
pub fn extension_degree(v: &OcwTree, w: &OcwTree) -> Option<usize> {
    if v == w {
        return Some(0);
    }
    let View::Comm(a, b) = v.view() else {
        return None;
    };
    let a_pure = a.is_pure(Family::Y);
    let b_pure = b.is_pure(Family::Y);
    if a_pure && !b_pure {
        return extension_degree(b, w).map(|d| d + 1);
    }
    if b_pure && !a_pure {
        return extension_degree(a, w).map(|d| d + 1);
    }
    let (alpha, beta) = w.split()?;
    Some(extension_degree(a, alpha)? + extension_degree(b, beta)?)
}
