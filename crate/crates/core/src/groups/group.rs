use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Element of a [`FiniteGroup`]: an index into its Cayley table.
/// The identity is always `0`.
pub type Elem = usize;

pub const IDENTITY: Elem = 0;

/// Default ceiling on group orders (the order of S7).
pub const DEFAULT_ORDER_CAP: usize = 5040;

/// Groups up to this order get an exhaustive associativity check.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;
const RANDOM_ASSOCIATIVITY_TRIALS: usize = 100_000;

/// A finite group materialized as a Cayley table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    label: String,
    names: Option<Vec<String>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a Cayley table and relocates its identity to index 0.
    ///
    /// Checks run in the order: shape, range, Latin square, associativity,
    /// identity, inverses.
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(not_a_group("empty table", None));
        }
        if let Some(i) = table.iter().position(|row| row.len() != n) {
            return Err(not_a_group(format!("row {i} has {} entries, expected {n}", table[i].len()), None));
        }
        for (i, row) in table.iter().enumerate() {
            if let Some(j) = row.iter().position(|&e| e >= n) {
                return Err(not_a_group(format!("entry ({i},{j}) = {} out of range", row[j]), None));
            }
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&e| e as u32).collect();
        let at = |a: usize, b: usize| flat[a * n + b] as usize;

        let mut seen = vec![false; n];
        for a in 0..n {
            seen.fill(false);
            for b in 0..n {
                let e = at(a, b);
                if std::mem::replace(&mut seen[e], true) {
                    return Err(not_a_group(format!("row {a} repeats {e}: not a Latin square"), None));
                }
            }
        }
        for b in 0..n {
            seen.fill(false);
            for a in 0..n {
                let e = at(a, b);
                if std::mem::replace(&mut seen[e], true) {
                    return Err(not_a_group(format!("column {b} repeats {e}: not a Latin square"), None));
                }
            }
        }

        if let Some((a, b, c)) = associativity_failure(n, &at) {
            return Err(not_a_group(format!("({a}*{b})*{c} != {a}*({b}*{c})"), Some((a, b, c))));
        }

        let e = (0..n).find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g)).ok_or_else(|| not_a_group("no identity element", None))?;

        // A Latin square with identity has unique right inverses; associativity
        // makes them two-sided, but check anyway.
        let mut inverses = vec![0u32; n];
        for (a, slot) in inverses.iter_mut().enumerate() {
            let b = (0..n).find(|&b| at(a, b) == e).expect("Latin row contains the identity");
            if at(b, a) != e {
                return Err(not_a_group(format!("{b} is a right but not left inverse of {a}"), None));
            }
            *slot = b as u32;
        }

        let mut g = FiniteGroup { order: n, table: flat, inverses, label: format!("cayley:{n}"), names: None };
        if e != IDENTITY {
            g = g.relabel(&|x| {
                if x == e {
                    IDENTITY
                } else if x == IDENTITY {
                    e
                } else {
                    x
                }
            });
        }
        Ok(g)
    }

    /// Builds a group from a table known to be valid, with identity at 0.
    pub(crate) fn from_trusted(order: usize, table: Vec<u32>, label: String, names: Option<Vec<String>>) -> FiniteGroup {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&x| x == 0).expect("every row contains the identity");
            inverses[a] = b as u32;
        }
        FiniteGroup { order, table, inverses, label, names }
    }

    /// Applies the bijection `sigma` to all element indices.
    fn relabel(&self, sigma: &impl Fn(usize) -> usize) -> FiniteGroup {
        let n = self.order;
        let mut table = vec![0u32; n * n];
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            inverses[sigma(a)] = sigma(self.inverses[a] as usize) as u32;
            for b in 0..n {
                table[sigma(a) * n + sigma(b)] = sigma(self.mul(a, b)) as u32;
            }
        }
        let names = self.names.as_ref().map(|ns| {
            let mut out = ns.clone();
            for (a, name) in ns.iter().enumerate() {
                out[sigma(a)] = name.clone();
            }
            out
        });
        FiniteGroup { order: n, table, inverses, label: self.label.clone(), names }
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_trusted(1, vec![0], "cyc:1".into(), Some(vec!["1".into()]))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> FiniteGroup {
        self.label = label.into();
        self
    }

    pub(crate) fn with_names(mut self, names: Vec<String>) -> FiniteGroup {
        debug_assert_eq!(names.len(), self.order);
        self.names = Some(names);
        self
    }

    /// Display name of an element (cycle notation, quaternion unit, ...),
    /// falling back to the index.
    pub fn name(&self, a: Elem) -> String {
        match &self.names {
            Some(ns) => ns[a].clone(),
            None => a.to_string(),
        }
    }

    /// Looks an element up by display name.
    pub fn find_named(&self, name: &str) -> Option<Elem> {
        self.names.as_ref()?.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a] as usize
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    #[inline]
    pub fn comm(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `a^g = g⁻¹ a g`.
    #[inline]
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn pow(&self, a: Elem, n: i64) -> Elem {
        let base = if n < 0 { self.inv(a) } else { a };
        let mut e = n.unsigned_abs();
        let (mut acc, mut sq) = (IDENTITY, base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != IDENTITY {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, lcm)
    }

    /// Table rows as plain indices, e.g. for writing a group file.
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Direct product with `other`; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        let mut table = vec![0u32; order * order];
        for a1 in 0..n {
            for b1 in 0..m {
                let row = (a1 * m + b1) * order;
                for a2 in 0..n {
                    let ap = self.mul(a1, a2) * m;
                    for b2 in 0..m {
                        table[row + a2 * m + b2] = (ap + other.mul(b1, b2)) as u32;
                    }
                }
            }
        }
        let names = (0..order).map(|i| format!("({},{})", self.name(i / m), other.name(i % m))).collect();
        FiniteGroup::from_trusted(order, table, format!("{} x {}", self.label, other.label), Some(names))
    }
}

fn associativity_failure(n: usize, at: &impl Fn(usize, usize) -> usize) -> Option<(usize, usize, usize)> {
    let fails = |a: usize, b: usize, c: usize| at(at(a, b), c) != at(a, at(b, c));
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if fails(a, b, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..RANDOM_ASSOCIATIVITY_TRIALS)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .find(|&(a, b, c)| fails(a, b, c))
    }
}

fn not_a_group(reason: impl Into<String>, triple: Option<(usize, usize, usize)>) -> Error {
    Error::NotAGroup { reason: reason.into(), triple }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
