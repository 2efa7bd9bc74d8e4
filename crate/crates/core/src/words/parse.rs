//! Recursive-descent parser for the word grammar:
//!
//! ```text
//! word     := term { ["*"] term }
//! term     := atom [ "^" integer ]
//! atom     := variable | "1" | "(" word ")" | "[" word { "," word } "]"
//! variable := ("x" | "y") positive-integer
//! ```
//!
//! `[a,b,c]` is left-normed sugar for `[[a,b],c]`. Whitespace is ignored
//! between tokens.

use crate::error::{Error, Result};

use super::expr::{Family, Var, WordExpr};

/// Parses a word.
pub fn parse_word(text: &str) -> Result<WordExpr> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(w)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(format!("expected '{c}', found '{d}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn starts_atom(c: char) -> bool {
        c.is_ascii_alphabetic() || c == '(' || c == '[' || c == '1'
    }

    fn word(&mut self) -> Result<WordExpr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(c) if Self::starts_atom(c) => terms.push(self.term()?),
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { WordExpr::Product(terms) })
    }

    fn term(&mut self) -> Result<WordExpr> {
        let atom = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.integer()?;
            return Ok(WordExpr::power(atom, n));
        }
        Ok(atom)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error("expected an integer exponent"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| Error::Syntax { pos: start, message: format!("exponent '{s}' out of range") })
    }

    fn atom(&mut self) -> Result<WordExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let mut parts = vec![self.word()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    parts.push(self.word()?);
                }
                self.expect(']')?;
                Ok(WordExpr::left_normed(parts))
            }
            Some('1') => {
                self.pos += 1;
                Ok(WordExpr::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn variable(&mut self) -> Result<WordExpr> {
        let letter = self.chars[self.pos];
        let family = match letter {
            'x' => Family::X,
            'y' => Family::Y,
            _ => return Err(Error::UnknownFamily { pos: self.pos, letter }),
        };
        self.pos += 1;
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(format!("variable '{letter}' needs an index")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let index: u32 = s.parse().map_err(|_| Error::Syntax { pos: start, message: format!("variable index '{s}' out of range") })?;
        if index == 0 {
            return Err(Error::Syntax { pos: start, message: "variable indices start at 1".into() });
        }
        Ok(WordExpr::Var(Var { family, index }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_and_power() {
        assert_eq!(parse_word("[x1,x2]").unwrap(), WordExpr::commutator(WordExpr::x(1), WordExpr::x(2)));
        assert_eq!(parse_word("x1^3").unwrap(), WordExpr::power(WordExpr::x(1), 3));
        assert_eq!(parse_word(" x1 ^ -2 ").unwrap(), WordExpr::power(WordExpr::x(1), -2));
    }

    #[test]
    fn derived_word_of_length_two() {
        let d2 = WordExpr::commutator(
            WordExpr::commutator(WordExpr::x(1), WordExpr::x(2)),
            WordExpr::commutator(WordExpr::x(3), WordExpr::x(4)),
        );
        assert_eq!(parse_word("[[x1,x2],[x3,x4]]").unwrap(), d2);
    }

    #[test]
    fn left_normed_sugar() {
        let a = parse_word("[x1,x2,x3]").unwrap();
        let b = parse_word("[[x1,x2],x3]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[[x1,x2],x3]");
        assert_eq!(parse_word("[x5]").unwrap(), WordExpr::x(5));
    }

    #[test]
    fn juxtaposition_is_product() {
        let w = parse_word("x1x2 * y3").unwrap();
        assert_eq!(w, WordExpr::Product(vec![WordExpr::x(1), WordExpr::x(2), WordExpr::y(3)]));
        assert_eq!(parse_word("x12").unwrap(), WordExpr::x(12));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_word("z1"), Err(Error::UnknownFamily { pos: 0, letter: 'z' }));
        assert!(matches!(parse_word("[x1,x2"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_word("x0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("x1^"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_word("x1)"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn rendering_reparses() {
        for text in ["x1*x1^-1", "(x1*x2)^3", "[x1^2,x2^3]", "[[x1,x2,x3],[[x4,x5],[x6,x7]]]", "1", "(x1^-1)^-2*y2"] {
            let w = parse_word(text).unwrap();
            assert_eq!(parse_word(&w.to_string()).unwrap(), w, "{text}");
        }
    }
}
