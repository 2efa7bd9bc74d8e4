use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

use super::group::FiniteGroup;

/// A permutation of `{1, ..., degree}`, stored 0-based.
///
/// Products act on the right: in `a * b`, `a` is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// From 0-based images; fails unless they form a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::PreconditionFailed(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `p`.
    pub fn image(&self, p: usize) -> usize {
        self.images[p - 1] as usize + 1
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    /// Parses cycle notation like `(1 2)(3 4)` or `(1,2,3)`; `()` is the
    /// identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let syntax = |message: String| Error::Syntax { pos: 0, message };
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(syntax("empty permutation; write () for the identity".into()));
        }
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(syntax(format!("expected '(' in '{text}'")));
            };
            let close = body.find(')').ok_or_else(|| syntax(format!("unclosed cycle in '{text}'")))?;
            let points = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    let p: usize = s.parse().map_err(|_| syntax(format!("bad point '{s}'")))?;
                    if p == 0 || p > degree {
                        return Err(syntax(format!("point {p} outside 1..={degree}")));
                    }
                    Ok(p - 1)
                })
                .collect::<Result<Vec<_>>>()?;
            // Compose the cycle onto what we have so far.
            let mut cycle: Vec<u32> = (0..degree as u32).collect();
            for (i, &p) in points.iter().enumerate() {
                if points[..i].contains(&p) {
                    return Err(syntax(format!("point {} repeated in a cycle", p + 1)));
                }
                cycle[p] = points[(i + 1) % points.len()] as u32;
            }
            images = images.iter().map(|&i| cycle[i as usize]).collect();
            rest = body[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut done = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if done[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !done[p] {
                done[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
                first = false;
                p = self.images[p] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Closure of the generators under composition, as a Cayley table.
///
/// Elements are numbered in breadth-first discovery order from the identity,
/// so the numbering depends only on the generator list.
pub fn group_from_permutations(generators: &[Permutation], degree: usize, cap: usize) -> Result<FiniteGroup> {
    if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
        return Err(Error::PreconditionFailed(format!("{g} does not act on {degree} points")));
    }
    let gens: Vec<&Permutation> = generators.iter().collect();
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    // Each non-identity element b records (parent, generator) with b = parent * gen.
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    let mut right_mul: Vec<u32> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        for (k, g) in gens.iter().enumerate() {
            let y = elements[i].then(g);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = elements.len();
                    if j >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    index.insert(y.clone(), j);
                    elements.push(y);
                    parent.push((i, k));
                    j
                }
            };
            right_mul.push(j as u32);
        }
        i += 1;
    }
    let n = elements.len();
    let ng = gens.len();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        table[a * n] = a as u32;
        for b in 1..n {
            let (p, k) = parent[b];
            let ap = table[a * n + p] as usize;
            table[a * n + b] = right_mul[ap * ng + k];
        }
    }
    let names = elements.iter().map(|p| p.to_string()).collect();
    Ok(FiniteGroup::from_trusted(n, table, format!("perm:{degree}"), Some(names)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::parse_cycles("(1 2)(3 4 5)", 5).unwrap();
        assert_eq!(p.to_string(), "(1 2)(3 4 5)");
        assert_eq!(Permutation::parse_cycles("()", 3).unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::parse_cycles("(1,3)", 3).unwrap().image(1), 3);
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 1)", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn composition_acts_on_the_right() {
        let a = Permutation::parse_cycles("(1 2)", 3).unwrap();
        let b = Permutation::parse_cycles("(1 2 3)", 3).unwrap();
        // 1 -> 2 -> 3, 2 -> 1 -> 2, 3 -> 3 -> 1.
        assert_eq!(a.then(&b).to_string(), "(1 3)");
    }

    #[test]
    fn closures() {
        let s3 = group_from_permutations(
            &[Permutation::parse_cycles("(1 2)", 3).unwrap(), Permutation::parse_cycles("(1 2 3)", 3).unwrap()],
            3,
            5040,
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        let trivial = group_from_permutations(&[], 4, 5040).unwrap();
        assert_eq!(trivial.order(), 1);
        let c7 = group_from_permutations(&[Permutation::parse_cycles("(1 2 3 4 5 6 7)", 7).unwrap()], 7, 5040).unwrap();
        assert_eq!(c7.order(), 7);
    }

    #[test]
    fn table_matches_composition() {
        let gens = [Permutation::parse_cycles("(1 2)", 4).unwrap(), Permutation::parse_cycles("(1 2 3 4)", 4).unwrap()];
        let g = group_from_permutations(&gens, 4, 5040).unwrap();
        assert_eq!(g.order(), 24);
        let perms: Vec<Permutation> = g.elements().map(|a| Permutation::parse_cycles(&g.name(a), 4).unwrap()).collect();
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(perms[g.mul(a, b)], perms[a].then(&perms[b]));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let gens = [Permutation::parse_cycles("(1 2)", 5).unwrap(), Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap()];
        assert_eq!(group_from_permutations(&gens, 5, 100), Err(Error::OrderCapExceeded { cap: 100 }));
    }
}
