use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{Elem, ElementSubset, FiniteGroup, Subgroup, IDENTITY};
use crate::verbal::{NormalTuple, TupleEntry};

/// Splits on commas that are not inside parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn parse_indices(group: &FiniteGroup, text: &str, at: usize) -> Result<Vec<Elem>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            let index: usize =
                s.parse().map_err(|_| Error::Syntax { pos: at, message: format!("expected an element index, got {s:?}") })?;
            if index >= group.order() {
                return Err(Error::BadIndex { index, order: group.order() });
            }
            Ok(index)
        })
        .collect()
}

fn inside_parens<'a>(body: &'a str, at: usize, what: &str) -> Result<&'a str> {
    body.strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| Error::Syntax { pos: at, message: format!("{what} needs a parenthesised list") })
}

fn parse_entry(group: &FiniteGroup, text: &str, at: usize) -> Result<TupleEntry> {
    let entry = text.trim();
    match entry {
        "G" => return Ok(TupleEntry::plain(group.whole_subgroup())),
        "derived" => return Ok(TupleEntry::plain(group.derived_subgroup())),
        "center" => return Ok(TupleEntry::plain(group.center())),
        "1" | "trivial" => return Ok(TupleEntry::plain(group.trivial_subgroup())),
        _ => {}
    }
    if let Some(body) = entry.strip_prefix("ncl") {
        let elems = parse_indices(group, inside_parens(body.trim(), at, "ncl")?, at)?;
        return Ok(TupleEntry::plain(group.normal_closure(elems)));
    }
    if let Some(body) = entry.strip_prefix("set:") {
        let (set_text, power) = match body.split_once(';') {
            Some((s, p)) => {
                let p = p.trim();
                let n = p
                    .strip_prefix("n=")
                    .and_then(|n| n.trim().parse::<u64>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Syntax { pos: at, message: format!("expected n=<positive integer>, got {p:?}") })?;
                (s.trim(), Some(n))
            }
            None => (body.trim(), None),
        };
        let list = if set_text.starts_with('(') { inside_parens(set_text, at, "set")? } else { set_text };
        let elems = parse_indices(group, list, at)?;
        let set = ElementSubset::from_elements(group, elems.iter().copied());
        if !set.is_normal() {
            return Err(Error::NotNormalSubset(format!("set:{set_text}")));
        }
        let subgroup = group.closure_of(&set);
        return Ok(TupleEntry::with_generators(subgroup, set, power));
    }
    Err(Error::Syntax { pos: at, message: format!("unknown tuple entry {entry:?}") })
}

/// Parses a comma-separated tuple of normal subgroups. Entries are `G`,
/// `derived`, `center`, `trivial`, `ncl(i j ..)` (normal closure of the given
/// element indices) and `set:(i j ..);n=k` (an explicit normal generating
/// subset with power exponent `k`). Every entry is validated eagerly.
pub fn parse_tuple_spec(text: &str, group: &FiniteGroup) -> Result<NormalTuple> {
    let mut at = 0;
    let mut entries = Vec::new();
    for part in split_top_level(text) {
        if part.trim().is_empty() {
            return Err(Error::Syntax { pos: at, message: "empty tuple entry".into() });
        }
        entries.push(parse_entry(group, part, at)?);
        at += part.len() + 1;
    }
    NormalTuple::new(group, entries)
}

/// Entries used to build default tuples: the whole group, the derived
/// subgroup, the center and the normal closures of two elements drawn from
/// `seed`.
pub fn default_entry_pool(group: &FiniteGroup, seed: u64) -> Vec<String> {
    let mut pool = vec!["G".to_string(), "derived".to_string(), "center".to_string()];
    if group.order() > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ group.order() as u64);
        for _ in 0..2 {
            pool.push(format!("ncl({})", rng.gen_range(1..group.order())));
        }
    }
    pool
}

/// Default tuple specs of length `r`: each pool entry repeated, plus one
/// tuple cycling through the pool.
pub fn default_tuples(group: &FiniteGroup, r: usize, seed: u64) -> Vec<String> {
    let pool = default_entry_pool(group, seed);
    let mut specs: Vec<String> = pool.iter().map(|e| vec![e.as_str(); r].join(",")).collect();
    if r > 1 {
        specs.push((0..r).map(|i| pool[i % pool.len()].as_str()).collect::<Vec<_>>().join(","));
    }
    specs.dedup();
    specs
}

/// A normal generating subset of `n`: the conjugacy classes of its
/// generators together with the identity.
pub fn conjugation_closed_generators(group: &FiniteGroup, n: &Subgroup) -> ElementSubset {
    group.normal_subset_generated(n.generators().iter().copied().chain([IDENTITY]))
}

/// `S_i` for every entry: the given generating set, or the conjugacy
/// classes of the generators of `N_i`.
pub fn generating_sets(group: &FiniteGroup, tuple: &NormalTuple) -> Vec<ElementSubset> {
    tuple.entries().iter().map(|e| e.generators.clone().unwrap_or_else(|| conjugation_closed_generators(group, &e.subgroup))).collect()
}
