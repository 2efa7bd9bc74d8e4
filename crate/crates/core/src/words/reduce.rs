use std::fmt;

use super::expr::{Var, WordExpr};

/// One letter of a reduced word: a variable or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub var: Var,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(self) -> Letter {
        Letter { var: self.var, inverse: !self.inverse }
    }
}

/// Freely reduced word. The empty sequence is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Builds a word from arbitrary letters, cancelling as it goes.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> ReducedWord {
        let mut w = ReducedWord::default();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverted()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn exponent_sum(&self, var: Var) -> i64 {
        self.letters.iter().filter(|l| l.var == var).map(|l| if l.inverse { -1 } else { 1 }).sum()
    }

    pub fn to_expr(&self) -> WordExpr {
        WordExpr::Product(
            self.letters.iter().map(|l| if l.inverse { WordExpr::power(WordExpr::Var(l.var), -1) } else { WordExpr::Var(l.var) }).collect(),
        )
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", l.var)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Expands commutators and powers and freely reduces.
pub fn reduce(w: &WordExpr) -> ReducedWord {
    let mut out = ReducedWord::default();
    expand(w, false, &mut out);
    out
}

fn expand(w: &WordExpr, inverted: bool, out: &mut ReducedWord) {
    match w {
        WordExpr::Var(v) => out.push(Letter { var: *v, inverse: inverted }),
        WordExpr::Inverse(c) => expand(c, !inverted, out),
        WordExpr::Product(cs) => {
            if inverted {
                cs.iter().rev().for_each(|c| expand(c, true, out));
            } else {
                cs.iter().for_each(|c| expand(c, false, out));
            }
        }
        WordExpr::Commutator(a, b) => {
            // [a,b] = a^-1 b^-1 a b, and [a,b]^-1 = b^-1 a^-1 b a.
            let seq: [(&WordExpr, bool); 4] =
                if inverted { [(b, true), (a, true), (b, false), (a, false)] } else { [(a, true), (b, true), (a, false), (b, false)] };
            for (c, inv) in seq {
                expand(c, inv, out);
            }
        }
        WordExpr::Power(c, n) => {
            let inv = inverted ^ (*n < 0);
            for _ in 0..n.unsigned_abs() {
                expand(c, inv, out);
            }
        }
    }
}
