use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Variable families. The `Y` family holds the auxiliary variables used by
/// extended words and never collides with the `X` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    X,
    Y,
}

/// A free-group generator such as `x3` or `y1`.
///
/// The derived ordering (all `X` variables by index, then all `Y` variables by
/// index) is the argument order used everywhere a word is evaluated on a tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var {
    pub family: Family,
    pub index: u32,
}

impl Var {
    pub const fn x(index: u32) -> Var {
        Var { family: Family::X, index }
    }

    pub const fn y(index: u32) -> Var {
        Var { family: Family::Y, index }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            Family::X => 'x',
            Family::Y => 'y',
        };
        write!(f, "{c}{}", self.index)
    }
}

/// Expression tree for a group word.
///
/// `Product(vec![])` is the empty word. Commutators follow `[a,b] = a⁻¹b⁻¹ab`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WordExpr {
    Var(Var),
    Inverse(Box<WordExpr>),
    Product(Vec<WordExpr>),
    Commutator(Box<WordExpr>, Box<WordExpr>),
    Power(Box<WordExpr>, i64),
}

impl WordExpr {
    pub fn var(v: Var) -> WordExpr {
        WordExpr::Var(v)
    }

    pub fn x(index: u32) -> WordExpr {
        WordExpr::Var(Var::x(index))
    }

    pub fn y(index: u32) -> WordExpr {
        WordExpr::Var(Var::y(index))
    }

    pub fn identity() -> WordExpr {
        WordExpr::Product(Vec::new())
    }

    pub fn inverse(w: WordExpr) -> WordExpr {
        WordExpr::Inverse(Box::new(w))
    }

    pub fn commutator(a: WordExpr, b: WordExpr) -> WordExpr {
        WordExpr::Commutator(Box::new(a), Box::new(b))
    }

    pub fn power(w: WordExpr, n: i64) -> WordExpr {
        WordExpr::Power(Box::new(w), n)
    }

    pub fn product(parts: Vec<WordExpr>) -> WordExpr {
        WordExpr::Product(parts)
    }

    /// Left-normed commutator `[a1, a2, ..., an] = [[a1, a2], ..., an]`.
    /// A single entry is returned unchanged.
    pub fn left_normed(mut parts: Vec<WordExpr>) -> WordExpr {
        assert!(!parts.is_empty(), "left-normed commutator needs an entry");
        let rest = parts.split_off(1);
        let first = parts.pop().unwrap();
        rest.into_iter().fold(first, WordExpr::commutator)
    }

    /// Distinct variables, in argument order.
    pub fn variables(&self) -> Vec<Var> {
        let mut acc = BTreeSet::new();
        self.collect_vars(&mut acc);
        acc.into_iter().collect()
    }

    fn collect_vars(&self, acc: &mut BTreeSet<Var>) {
        match self {
            WordExpr::Var(v) => {
                acc.insert(*v);
            }
            WordExpr::Inverse(c) | WordExpr::Power(c, _) => c.collect_vars(acc),
            WordExpr::Product(cs) => cs.iter().for_each(|c| c.collect_vars(acc)),
            WordExpr::Commutator(a, b) => {
                a.collect_vars(acc);
                b.collect_vars(acc);
            }
        }
    }

    /// Signed number of occurrences of `var`. Commutator subtrees contribute
    /// zero, matching the abelianization of the free group.
    pub fn exponent_sum(&self, var: Var) -> i64 {
        match self {
            WordExpr::Var(v) => i64::from(*v == var),
            WordExpr::Inverse(c) => -c.exponent_sum(var),
            WordExpr::Product(cs) => cs.iter().map(|c| c.exponent_sum(var)).sum(),
            WordExpr::Commutator(..) => 0,
            WordExpr::Power(c, n) => n * c.exponent_sum(var),
        }
    }

    /// Returns the first variable (in argument order) with non-zero exponent
    /// sum together with that sum, or `None` if the word lies in the derived
    /// subgroup of the free group.
    pub fn non_commutator_witness(&self) -> Option<(Var, i64)> {
        self.variables().into_iter().map(|v| (v, self.exponent_sum(v))).find(|&(_, e)| e != 0)
    }

    pub fn is_non_commutator(&self) -> bool {
        self.non_commutator_witness().is_some()
    }

    /// Replaces every variable through `f`.
    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> WordExpr) -> WordExpr {
        match self {
            WordExpr::Var(v) => f(*v),
            WordExpr::Inverse(c) => WordExpr::inverse(c.map_vars(f)),
            WordExpr::Product(cs) => WordExpr::Product(cs.iter().map(|c| c.map_vars(f)).collect()),
            WordExpr::Commutator(a, b) => WordExpr::commutator(a.map_vars(f), b.map_vars(f)),
            WordExpr::Power(c, n) => WordExpr::power(c.map_vars(f), *n),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Var(_) | WordExpr::Commutator(..) => write!(f, "{self}"),
            WordExpr::Product(cs) if cs.is_empty() => write!(f, "1"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Var(v) => write!(f, "{v}"),
            WordExpr::Inverse(c) => {
                c.fmt_atom(f)?;
                write!(f, "^-1")
            }
            WordExpr::Product(cs) if cs.is_empty() => write!(f, "1"),
            WordExpr::Product(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    match c {
                        WordExpr::Product(inner) if !inner.is_empty() => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
            WordExpr::Commutator(a, b) => write!(f, "[{a},{b}]"),
            WordExpr::Power(c, n) => {
                c.fmt_atom(f)?;
                write!(f, "^{n}")
            }
        }
    }
}
