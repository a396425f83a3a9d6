//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)* ;
//! term   := factor ('*' factor)* ;
//! factor := base ('^' NAT)? ;
//! base   := NAT | IDENT | '(' expr ')' ;
//! ```
//!
//! Whitespace is insignificant. There is no unary minus. Positions in errors are
//! 1-based character columns.

use std::fmt;

use thiserror::Error;

use super::poly::Poly;
use crate::linalg::PrimeField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {position}: expected {}, found {found}", Expected(.expected))]
    Syntax {
        position: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("exponent at position {position} does not fit in 32 bits")]
    ExponentTooLarge { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownVariable { position, .. }
            | ParseError::ExponentTooLarge { position } => *position,
        }
    }
}

struct Expected<'a>(&'a [&'static str]);

impl fmt::Display for Expected<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            [one] => write!(f, "{one}"),
            many => write!(f, "one of {}", many.join(", ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Nat(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const BASE_START: &[&str] = &["number", "variable", "`(`"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Nat(chars[start..i].iter().collect()), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else {
            return Err(ParseError::Syntax {
                position: pos,
                expected: vec!["number", "variable", "operator", "parenthesis"],
                found: format!("character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [String],
    field: PrimeField,
    bound: Option<u32>,
}

impl Parser<'_> {
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

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            position: self.pos(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.mul_truncated(&rhs, self.bound);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Nat(digits), pos) => {
                let e: u32 = digits
                    .parse()
                    .map_err(|_| ParseError::ExponentTooLarge { position: pos })?;
                Ok(base.pow_truncated(e, self.bound))
            }
            (tok, pos) => Err(ParseError::Syntax {
                position: pos,
                expected: vec!["exponent (natural number)"],
                found: tok.describe(),
            }),
        }
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        let n = self.vars.len();
        match self.peek().clone() {
            Tok::Nat(digits) => {
                self.bump();
                let p = self.field.p() as u64;
                let c = digits
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Poly::constant(self.field, n, c as u32).truncate_opt(self.bound))
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                let Some(i) = self.vars.iter().position(|v| *v == name) else {
                    return Err(ParseError::UnknownVariable { name, position: pos });
                };
                self.bump();
                Ok(Poly::var(self.field, n, i).truncate_opt(self.bound))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`+`", "`-`", "`*`", "`^`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(BASE_START)),
        }
    }
}

/// Parses `text` as a polynomial in `variables` over `F_p`.
pub fn parse_polynomial(text: &str, variables: &[String], field: PrimeField) -> Result<Poly, ParseError> {
    parse_polynomial_bounded(text, variables, field, None)
}

/// Like [`parse_polynomial`] but discards every term of total degree `>= bound` as it goes,
/// which keeps powers of large sums cheap inside a truncated ring.
pub fn parse_polynomial_bounded(
    text: &str,
    variables: &[String],
    field: PrimeField,
    bound: Option<u32>,
) -> Result<Poly, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        at: 0,
        vars: variables,
        field,
        bound,
    };
    let poly = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(&["`+`", "`-`", "`*`", "`^`", "end of input"]));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reads_terms_directly() {
        let f = PrimeField::new(5).unwrap();
        let v = vars(&["x", "y"]);
        let p = parse_polynomial("x^2 + 3*x*y", &v, f).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&[2, 0]), 1);
        assert_eq!(p.coefficient(&[1, 1]), 3);
    }

    #[test]
    fn cancellation_and_reduction() {
        let v = vars(&["x"]);
        assert!(parse_polynomial("x - x", &v, PrimeField::new(7).unwrap()).unwrap().is_zero());
        assert!(parse_polynomial("2*x", &v, PrimeField::new(2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn parentheses_and_powers() {
        let f = PrimeField::new(2).unwrap();
        let v = vars(&["x", "y"]);
        let p = parse_polynomial("(x + y)^2", &v, f).unwrap();
        assert_eq!(p, parse_polynomial("x^2 + y^2", &v, f).unwrap());
        let q = parse_polynomial_bounded("(1 + x)^1000000", &v, f, Some(3)).unwrap();
        assert!(q.degree().unwrap() < 3);
    }

    #[test]
    fn large_coefficients_reduce() {
        let f = PrimeField::new(3).unwrap();
        let p = parse_polynomial("100000000000000000000000000001", &vars(&["x"]), f).unwrap();
        // 10^29 + 1 = 1 + 1 mod 3
        assert_eq!(p.constant_term(), 2);
    }

    #[test]
    fn dangling_caret_is_a_positioned_error() {
        let f = PrimeField::new(2).unwrap();
        let err = parse_polynomial("x^", &vars(&["x"]), f).unwrap_err();
        assert_eq!(err.position(), 3);
        assert!(matches!(err, ParseError::Syntax { .. }));
        assert!(err.to_string().contains("expected exponent"));
    }

    #[test]
    fn rejects_unary_minus_and_garbage() {
        let f = PrimeField::new(2).unwrap();
        let v = vars(&["x"]);
        assert_eq!(parse_polynomial("-x", &v, f).unwrap_err().position(), 1);
        assert_eq!(parse_polynomial("x $", &v, f).unwrap_err().position(), 3);
        assert_eq!(parse_polynomial("x x", &v, f).unwrap_err().position(), 3);
        assert_eq!(parse_polynomial("(x", &v, f).unwrap_err().position(), 3);
        assert_eq!(parse_polynomial("", &v, f).unwrap_err().position(), 1);
        assert_eq!(parse_polynomial("x^2^3", &v, f).unwrap_err().position(), 4);
    }

    #[test]
    fn unknown_variable() {
        let f = PrimeField::new(2).unwrap();
        let err = parse_polynomial("x + zz", &vars(&["x"]), f).unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownVariable {
                name: "zz".into(),
                position: 5
            }
        );
    }
}
