//! Named groups: `cyc:n`, `dih:n`, `sym:n`, `alt:n`, `quat:8`, `heis:p` and
//! direct products written `A x B` (or `A × B`).

use crate::error::{Error, Result};

use super::group::FiniteGroup;
use super::perm::{group_from_permutations, Permutation};

/// Builds the group named by `spec`, refusing anything larger than `cap`.
pub fn builtin_group(spec: &str, cap: usize) -> Result<FiniteGroup> {
    let factors: Vec<&str> = spec.split(['x', '×']).map(str::trim).collect();
    if factors.iter().any(|f| f.is_empty()) {
        return Err(Error::UnknownSpec(spec.to_string()));
    }
    let mut predicted: u128 = 1;
    for f in &factors {
        predicted = predicted.saturating_mul(predicted_order(f)?);
    }
    if predicted > cap as u128 {
        return Err(Error::OrderCapExceeded { cap });
    }
    let mut groups = factors.iter().map(|f| atom(f, cap));
    let first = groups.next().expect("split yields at least one piece")?;
    groups.try_fold(first, |acc, g| Ok(acc.direct_product(&g?)))
}

fn split_atom(spec: &str) -> Result<(&str, u64)> {
    let unknown = || Error::UnknownSpec(spec.to_string());
    let (family, n) = spec.split_once(':').ok_or_else(unknown)?;
    let n: u64 = n.trim().parse().map_err(|_| unknown())?;
    let ok = match family.trim() {
        "cyc" | "dih" | "sym" | "alt" => n >= 1,
        "quat" => n == 8,
        "heis" => matches!(n, 2 | 3 | 5 | 7),
        _ => false,
    };
    if !ok {
        return Err(unknown());
    }
    Ok((family.trim(), n))
}

fn predicted_order(spec: &str) -> Result<u128> {
    let (family, n) = split_atom(spec)?;
    let n = n as u128;
    let factorial = |n: u128| (2..=n).fold(1u128, |acc, k| acc.saturating_mul(k));
    Ok(match family {
        "cyc" => n,
        "dih" => 2 * n,
        "sym" => factorial(n),
        "alt" => factorial(n).div_ceil(2),
        "quat" => 8,
        "heis" => n * n * n,
        _ => unreachable!("validated by split_atom"),
    })
}

fn atom(spec: &str, cap: usize) -> Result<FiniteGroup> {
    let (family, n) = split_atom(spec)?;
    let n = n as usize;
    let label = format!("{family}:{n}");
    let g = match family {
        "cyc" => cyclic(n),
        "dih" => dihedral(n),
        "sym" => symmetric(n, cap)?,
        "alt" => alternating(n, cap)?,
        "quat" => quaternion(),
        "heis" => heisenberg(n),
        _ => unreachable!("validated by split_atom"),
    };
    Ok(g.with_label(label))
}

fn from_rule(order: usize, label: &str, mul: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            table.push(mul(a, b) as u32);
        }
    }
    FiniteGroup::from_trusted(order, table, label.to_string(), None)
}

fn cyclic(n: usize) -> FiniteGroup {
    from_rule(n, "cyc", |a, b| (a + b) % n)
}

/// `r^i s^e` has index `i + n e`; `s r = r⁻¹ s`.
fn dihedral(n: usize) -> FiniteGroup {
    let g = from_rule(2 * n, "dih", |a, b| {
        let (i, e) = (a % n, a / n);
        let (j, f) = (b % n, b / n);
        let rot = if e == 1 { (i + n - j) % n } else { (i + j) % n };
        rot + n * (e ^ f)
    });
    let names = (0..2 * n)
        .map(|a| match (a % n, a / n) {
            (0, 0) => "1".to_string(),
            (i, 0) => format!("r{i}"),
            (0, _) => "s".to_string(),
            (i, _) => format!("r{i}s"),
        })
        .collect();
    g.with_names(names)
}

fn cycle(points: impl IntoIterator<Item = usize>, degree: usize) -> Permutation {
    let text: Vec<String> = points.into_iter().map(|p| p.to_string()).collect();
    Permutation::parse_cycles(&format!("({})", text.join(" ")), degree).expect("well-formed cycle")
}

fn symmetric(n: usize, cap: usize) -> Result<FiniteGroup> {
    let gens = if n < 2 {
        vec![]
    } else if n == 2 {
        vec![cycle([1, 2], 2)]
    } else {
        vec![cycle([1, 2], n), cycle(1..=n, n)]
    };
    group_from_permutations(&gens, n.max(1), cap)
}

fn alternating(n: usize, cap: usize) -> Result<FiniteGroup> {
    let gens: Vec<Permutation> = (3..=n).map(|k| cycle([1, 2, k], n)).collect();
    group_from_permutations(&gens, n.max(1), cap)
}

/// Elements in the order `1, -1, i, -i, j, -j, k, -k`.
fn quaternion() -> FiniteGroup {
    // Unit products: UNIT[a][b] = (sign flip, unit) for a, b in {1, i, j, k}.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let g = from_rule(8, "quat", |a, b| {
        let (flip, unit) = UNIT[a / 2][b / 2];
        2 * unit + ((a % 2) ^ (b % 2) ^ flip)
    });
    g.with_names(["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec())
}

/// Upper unitriangular 3x3 matrices over `Z/p`: `(a, b, c)` has index
/// `a p² + b p + c` and `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
fn heisenberg(p: usize) -> FiniteGroup {
    let split = |x: usize| (x / (p * p), (x / p) % p, x % p);
    let g = from_rule(p * p * p, "heis", |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p
    });
    let names = (0..p * p * p)
        .map(|x| {
            let (a, b, c) = split(x);
            format!("({a},{b},{c})")
        })
        .collect();
    g.with_names(names)
}
