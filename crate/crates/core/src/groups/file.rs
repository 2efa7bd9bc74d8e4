//! Plain-text group files.
//!
//! ```text
//! cayley 2
//! 0 1
//! 1 0
//! ```
//!
//! or a permutation group given by generators in cycle notation:
//!
//! ```text
//! perm 4 2
//! (1 2)
//! (1 2 3 4)
//! ```

use crate::error::{Error, Result};

use super::group::FiniteGroup;
use super::perm::{group_from_permutations, Permutation};

pub fn parse_group_file(text: &str, cap: usize) -> Result<FiniteGroup> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| bad("empty group file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let number = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad number '{s}' in header")));
    match words.as_slice() {
        ["cayley", n] => {
            let n = number(n)?;
            if n > cap {
                return Err(Error::OrderCapExceeded { cap });
            }
            let rows =
                lines.by_ref().take(n).map(|l| l.split_whitespace().map(number).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            if rows.len() != n {
                return Err(bad(format!("expected {n} table rows, found {}", rows.len())));
            }
            expect_end(lines)?;
            FiniteGroup::from_cayley(rows)
        }
        ["perm", degree, count] => {
            let (degree, count) = (number(degree)?, number(count)?);
            let gens = lines.by_ref().take(count).map(|l| Permutation::parse_cycles(l, degree)).collect::<Result<Vec<_>>>()?;
            if gens.len() != count {
                return Err(bad(format!("expected {count} generators, found {}", gens.len())));
            }
            expect_end(lines)?;
            group_from_permutations(&gens, degree, cap)
        }
        _ => Err(bad(format!("unrecognized header '{header}'"))),
    }
}

fn expect_end<'a>(mut rest: impl Iterator<Item = &'a str>) -> Result<()> {
    match rest.next() {
        Some(extra) => Err(bad(format!("unexpected trailing line '{extra}'"))),
        None => Ok(()),
    }
}

fn bad(message: impl Into<String>) -> Error {
    Error::Syntax { pos: 0, message: message.into() }
}

/// Renders a group in the `cayley` file format.
pub fn write_cayley_file(group: &FiniteGroup) -> String {
    let mut out = format!("cayley {}\n", group.order());
    for row in group.cayley_rows() {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_ORDER_CAP;

    #[test]
    fn both_formats() {
        let c2 = parse_group_file("cayley 2\n0 1\n1 0\n", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(c2.order(), 2);
        let s4 = parse_group_file("perm 4 2\n(1 2)\n(1 2 3 4)\n", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(parse_group_file(&write_cayley_file(&s4), DEFAULT_ORDER_CAP).unwrap(), s4);
    }

    #[test]
    fn malformed() {
        for text in ["", "cayley 2\n0 1\n", "cayley 2\n0 1\n1 0\n0 0\n", "perm 3 1\n", "group 3", "cayley two"] {
            assert!(parse_group_file(text, DEFAULT_ORDER_CAP).is_err(), "{text:?}");
        }
        assert_eq!(parse_group_file("cayley 9999\n", 5040), Err(Error::OrderCapExceeded { cap: 5040 }));
    }
}
