//! Element literals.
//!
//! ```text
//! scalar   := '-'? digits ('/' digits)?
//! coeffs   := '[' scalar (',' scalar)* ']'        polynomials and series, c0 first
//! pair     := '(' scalar ',' scalar ')'
//! vector   := '{' scalar (',' scalar)* '}'        structure-constant coordinates
//! residue  := '-'? digits                          reduced mod p^N
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Element, Ring, RingSpec, Value};
use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub(crate) fn keyword(&mut self, word: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{word}`")))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let negative = self.eat('-');
        self.skip_ws();
        let digits = self.digits()?;
        let n: BigInt = digits.parse().expect("ascii digits");
        Ok(if negative { -n } else { n })
    }

    fn scalar(&mut self) -> Result<BigRational> {
        let numer = self.integer()?;
        if self.eat('/') {
            self.skip_ws();
            let at = self.pos;
            let denom: BigInt = self.digits()?.parse().expect("ascii digits");
            if denom.is_zero() {
                return Err(Error::Parse {
                    position: at,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    fn scalar_list(&mut self, open: char, close: char) -> Result<Vec<BigRational>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.scalar()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// Parses one element literal at the cursor.
    pub(crate) fn element(&mut self, ring: &Ring) -> Result<Element> {
        self.skip_ws();
        let start = self.pos;
        let value = match ring.spec() {
            RingSpec::Integers | RingSpec::Rationals => Value::Scalar(self.scalar()?),
            RingSpec::Polynomial(_) | RingSpec::TruncatedSeries(_) => {
                Value::Coeffs(self.scalar_list('[', ']')?)
            }
            RingSpec::Pair(_) => {
                let parts = self.scalar_list('(', ')')?;
                if parts.len() != 2 {
                    return Err(Error::WrongArity {
                        expected: 2,
                        found: parts.len(),
                    });
                }
                let mut it = parts.into_iter();
                Value::Pair(it.next().unwrap(), it.next().unwrap())
            }
            RingSpec::Residues(_) => {
                let n = self.integer()?;
                return ring.residue(&n);
            }
            RingSpec::StructureConstants(_) => Value::Vector(self.scalar_list('{', '}')?),
        };
        ring.element(value).map_err(|e| match e {
            Error::InvalidSpec(_) => Error::Parse {
                position: start,
                message: format!("literal does not fit carrier {}", ring.name()),
            },
            other => other,
        })
    }
}

/// Parses a complete element literal for `ring`.
pub fn parse_element(ring: &Ring, text: &str) -> Result<Element> {
    let mut cursor = Cursor::new(text);
    let element = cursor.element(ring)?;
    if !cursor.at_end() {
        return Err(cursor.error("trailing input"));
    }
    Ok(element)
}

fn join(items: &[BigRational]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical literal for an element; `parse_element` inverts it.
pub fn render_element(x: &Element) -> String {
    match x.value() {
        Value::Scalar(q) => q.to_string(),
        Value::Coeffs(c) if c.is_empty() => "[0]".into(),
        Value::Coeffs(c) => format!("[{}]", join(c)),
        Value::Pair(a, b) => format!("({a},{b})"),
        Value::Residue(n) => n.to_string(),
        Value::Vector(v) => format!("{{{}}}", join(v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::instance_from_designator;

    #[test]
    fn parses_documented_literals() {
        let rat = instance_from_designator("rat").unwrap();
        assert_eq!(parse_element(&rat, "3/4").unwrap().to_string(), "3/4");
        assert_eq!(parse_element(&rat, " -6/8 ").unwrap().to_string(), "-3/4");

        let poly = instance_from_designator("poly:lex").unwrap();
        let x = parse_element(&poly, "[1,-1]").unwrap();
        assert_eq!(
            x,
            poly.one()
                .sub(&parse_element(&poly, "[0,1]").unwrap())
                .unwrap()
        );
        assert_eq!(parse_element(&poly, "[0, 0]").unwrap().to_string(), "[0]");

        let pair = instance_from_designator("pair:lex,comp").unwrap();
        assert_eq!(
            parse_element(&pair, "(0,1/2)").unwrap().to_string(),
            "(0,1/2)"
        );

        let sca = instance_from_designator("sca:twisted3").unwrap();
        assert_eq!(
            parse_element(&sca, "{0,1,0}").unwrap().to_string(),
            "{0,1,0}"
        );
    }

    #[test]
    fn reports_positions_and_arity() {
        let rat = instance_from_designator("rat").unwrap();
        assert!(matches!(
            parse_element(&rat, "1/0"),
            Err(Error::Parse { position: 2, .. })
        ));
        assert!(matches!(
            parse_element(&rat, "1 2"),
            Err(Error::Parse { position: 2, .. })
        ));
        assert!(matches!(
            parse_element(&rat, "x"),
            Err(Error::Parse { position: 0, .. })
        ));

        let pair = instance_from_designator("pair:lex,dual").unwrap();
        assert!(matches!(
            parse_element(&pair, "(1,2,3)"),
            Err(Error::WrongArity {
                expected: 2,
                found: 3
            })
        ));
        let sca = instance_from_designator("sca:twisted3").unwrap();
        assert!(matches!(
            parse_element(&sca, "{1,2}"),
            Err(Error::WrongArity {
                expected: 3,
                found: 2
            })
        ));
        let int = instance_from_designator("int").unwrap();
        assert!(matches!(
            parse_element(&int, "1/2"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn residues_reduce() {
        let ring = instance_from_designator("padic:5,4").unwrap();
        assert_eq!(parse_element(&ring, "-4").unwrap().to_string(), "621");
        assert_eq!(parse_element(&ring, "1250").unwrap().to_string(), "0");
    }
}
