//! Text syntax for polynomials.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ['^' INT]
//! primary := INT ['/' INT] | VAR | '(' expr ')'
//! ```
//!
//! Variables are `x1 ... xd`; `x`, `y`, `z` alias `x1`, `x2`, `x3` when
//! `d <= 3`. Juxtaposition is not multiplication and exponents are bare
//! integer literals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected {
        found: String,
        expected: &'static str,
    },
    UnknownVariable(String),
    VariableOutOfRange {
        name: String,
        dim: usize,
    },
    NegativeExponent,
    NonIntegerExponent,
    ExponentTooLarge,
    ZeroDenominator,
    ZeroDimension,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable {v:?}"),
            ParseErrorKind::VariableOutOfRange { name, dim } => {
                write!(f, "variable {name} exceeds dimension {dim}")
            }
            ParseErrorKind::NegativeExponent => f.write_str("negative exponent"),
            ParseErrorKind::NonIntegerExponent => f.write_str("non-integer exponent"),
            ParseErrorKind::ExponentTooLarge => f.write_str("exponent too large"),
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
            ParseErrorKind::ZeroDimension => f.write_str("dimension must be at least 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "identifier {s}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((
                    Tok::Int(text[start..i].parse().expect("ascii digits")),
                    start,
                ));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_owned()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(ch),
                    pos: i,
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// 1-based variable number named by `name`, ignoring the dimension.
fn variable_number(name: &str) -> Option<usize> {
    match name {
        "x" => Some(1),
        "y" => Some(2),
        "z" => Some(3),
        _ => name
            .strip_prefix('x')
            .filter(|d| {
                !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) && !d.starts_with('0')
            })
            .and_then(|d| d.parse().ok()),
    }
}

/// Largest variable number mentioned in `text`, 0 when there is none or the
/// text does not lex.
pub fn max_variable(text: &str) -> usize {
    lex(text)
        .map(|toks| {
            toks.iter()
                .filter_map(|(t, _)| match t {
                    Tok::Ident(s) => variable_number(s),
                    _ => None,
                })
                .max()
                .unwrap_or(0)
        })
        .unwrap_or(0)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError {
            kind,
            pos: self.pos(),
        })
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        self.fail(ParseErrorKind::Unexpected {
            found: self.peek().to_string(),
            expected,
        })
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exponent = match self.peek().clone() {
            Tok::Int(n) => {
                let e =
                    u32::try_from(&n).or_else(|_| self.fail(ParseErrorKind::ExponentTooLarge))?;
                self.bump();
                e
            }
            Tok::Minus => return self.fail(ParseErrorKind::NegativeExponent),
            _ => return self.unexpected("an integer exponent"),
        };
        if *self.peek() == Tok::Slash {
            return self.fail(ParseErrorKind::NonIntegerExponent);
        }
        Ok(base.pow(exponent))
    }

    fn primary(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek().clone() {
            Tok::Int(num) => {
                self.bump();
                let mut value = Rational::from_integer(num);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let Tok::Int(den) = self.peek().clone() else {
                        return self.unexpected("an integer denominator");
                    };
                    if den.is_zero() {
                        return self.fail(ParseErrorKind::ZeroDenominator);
                    }
                    self.bump();
                    value /= Rational::from_integer(den);
                }
                Ok(MultiPoly::constant(self.dim, value))
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                let err = |kind| Err(ParseError { kind, pos });
                let Some(n) = variable_number(&name) else {
                    return err(ParseErrorKind::UnknownVariable(name));
                };
                let alias = matches!(name.as_str(), "x" | "y" | "z");
                if alias && self.dim > 3 {
                    return err(ParseErrorKind::UnknownVariable(name));
                }
                if n > self.dim {
                    return err(ParseErrorKind::VariableOutOfRange {
                        name,
                        dim: self.dim,
                    });
                }
                self.bump();
                Ok(MultiPoly::var(self.dim, n - 1).expect("index checked"))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.unexpected("')'");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.unexpected("a number, variable or '('"),
        }
    }
}

/// Parses `text` as a polynomial in `dim` variables.
pub fn parse_poly(text: &str, dim: usize) -> Result<MultiPoly, ParseError> {
    if dim == 0 {
        return Err(ParseError {
            kind: ParseErrorKind::ZeroDimension,
            pos: 0,
        });
    }
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        dim,
    };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return p.unexpected("an operator or end of input");
    }
    Ok(poly)
}

/// Canonical text of `p`; [`parse_poly`] reads it back to `p`.
pub fn print_poly(p: &MultiPoly) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Monomial, UniPoly};

    fn kind(text: &str, dim: usize) -> ParseErrorKind {
        parse_poly(text, dim).unwrap_err().kind
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_poly("x^2 - 1", 1).unwrap(),
            MultiPoly::from(&UniPoly::from_ints(&[-1, 0, 1]))
        );
        let p = parse_poly("1/2*x1^3 + x2", 2).unwrap();
        let expected = MultiPoly::from_terms(
            2,
            [
                (Monomial::from_exponents(vec![3, 0]), rat(1, 2)),
                (Monomial::from_exponents(vec![0, 1]), rat(1, 1)),
            ],
        );
        assert_eq!(p, expected);
        assert_eq!(
            parse_poly(" -(x+1)^2*2 ", 1).unwrap().to_string(),
            "-2*x1^2 - 4*x1 - 2"
        );
        assert_eq!(parse_poly("x*y - z", 3).unwrap().to_string(), "x1*x2 - x3");
        assert_eq!(parse_poly("2^3", 1).unwrap().to_string(), "8");
    }

    #[test]
    fn rejects_parenthesized_exponent() {
        assert!(matches!(
            kind("x1^(2)", 1),
            ParseErrorKind::Unexpected { .. }
        ));
        assert_eq!(parse_poly("x1^(2)", 1).unwrap_err().pos, 3);
    }

    #[test]
    fn error_kinds() {
        assert_eq!(kind("x^-1", 1), ParseErrorKind::NegativeExponent);
        assert_eq!(kind("x^1/2", 1), ParseErrorKind::NonIntegerExponent);
        assert!(matches!(
            kind("x3", 2),
            ParseErrorKind::VariableOutOfRange { dim: 2, .. }
        ));
        assert!(matches!(
            kind("y", 1),
            ParseErrorKind::VariableOutOfRange { .. }
        ));
        assert_eq!(kind("x", 4), ParseErrorKind::UnknownVariable("x".into()));
        assert_eq!(kind("w", 1), ParseErrorKind::UnknownVariable("w".into()));
        assert_eq!(kind("x0", 1), ParseErrorKind::UnknownVariable("x0".into()));
        assert_eq!(
            kind("2x", 1),
            ParseErrorKind::Unexpected {
                found: "identifier x".into(),
                expected: "an operator or end of input"
            }
        );
        assert_eq!(kind("1/0", 1), ParseErrorKind::ZeroDenominator);
        assert_eq!(kind("x $ 1", 1), ParseErrorKind::UnexpectedChar('$'));
        assert!(matches!(kind("x +", 1), ParseErrorKind::Unexpected { .. }));
        assert!(matches!(kind("(x", 1), ParseErrorKind::Unexpected { .. }));
        assert_eq!(kind("x^99999999999", 1), ParseErrorKind::ExponentTooLarge);
        assert_eq!(kind("x", 0), ParseErrorKind::ZeroDimension);
    }

    #[test]
    fn printing() {
        assert_eq!(print_poly(&MultiPoly::zero(3)), "0");
        let p = parse_poly("x^2-1", 1).unwrap();
        assert_eq!(print_poly(&p), "x1^2 - 1");
        let q = parse_poly("1/2*x1*x2", 2).unwrap();
        assert_eq!(print_poly(&q), "1/2*x1*x2");
        assert_eq!(parse_poly(&print_poly(&q), 2).unwrap(), q);
    }

    #[test]
    fn max_variable_scan() {
        assert_eq!(max_variable("x1 + x12*y"), 12);
        assert_eq!(max_variable("z - 1"), 3);
        assert_eq!(max_variable("7"), 0);
        assert_eq!(max_variable("x $"), 0);
    }
}
