//! Parser for the expression grammar shared by the text formats.
//!
//! Grammar: identifiers, rational literals `p/q`, `+ - * ^`, parentheses.
//! Whitespace-insensitive. `^` takes a single non-negative integer literal.
//! `/` appears only inside rational literals. Unknown identifiers are
//! errors, never implicit declarations.

use num::{BigInt, BigRational, Zero};

use crate::context::Context;
use crate::error::ParseError;
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Integer(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn tokenize(mut self) -> Result<Vec<(Token, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let start = self.pos;
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((Token::Plus, start));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((Token::Minus, start));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((Token::Star, start));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((Token::Caret, start));
                    self.pos += 1;
                }
                b'/' => {
                    out.push((Token::Slash, start));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((Token::LParen, start));
                    self.pos += 1;
                }
                b')' => {
                    out.push((Token::RParen, start));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let n: BigInt = text.parse().unwrap();
                    out.push((Token::Integer(n), start));
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric()
                            || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push((Token::Ident(text.to_string()), start));
                }
                other => {
                    return Err(ParseError::new(
                        format!("unexpected character `{}`", other as char),
                        start,
                    ));
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    ctx: &'a Context,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, o)| *o)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<(), ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(found) if found == t => Ok(()),
            _ => Err(ParseError::new(format!("expected {what}"), offset)),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs).map_err(|e| self.algebra(e))?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs).map_err(|e| self.algebra(e))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs).map_err(|e| self.algebra(e))?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let offset = self.offset();
            match self.bump() {
                Some(Token::Integer(n)) => {
                    let e: u32 = n.try_into().map_err(|_| {
                        ParseError::new("exponent too large", offset)
                    })?;
                    return base.pow(e).map_err(|e| self.algebra(e));
                }
                _ => {
                    return Err(ParseError::new(
                        "expected a non-negative integer exponent",
                        offset,
                    ))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Integer(n)) => {
                if matches!(self.peek(), Some(Token::Slash)) {
                    self.bump();
                    let d_offset = self.offset();
                    match self.bump() {
                        Some(Token::Integer(d)) => {
                            if d.is_zero() {
                                return Err(ParseError::new(
                                    "rational literal with zero denominator",
                                    d_offset,
                                ));
                            }
                            Ok(Polynomial::constant(self.ctx, BigRational::new(n, d)))
                        }
                        _ => Err(ParseError::new(
                            "expected an integer denominator",
                            d_offset,
                        )),
                    }
                } else {
                    Ok(Polynomial::constant(self.ctx, BigRational::from(n)))
                }
            }
            Some(Token::Ident(name)) => match self.ctx.lookup(&name) {
                Some(id) => Ok(Polynomial::coordinate(self.ctx, id)),
                None => Err(ParseError::new(
                    format!("unknown identifier `{name}`"),
                    offset,
                )),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(ParseError::new("expected an expression", offset)),
        }
    }

    fn algebra(&self, e: crate::error::AlgebraError) -> ParseError {
        ParseError::new(e.to_string(), self.offset())
    }
}

/// Parse an expression over the given context into a normalized polynomial.
pub fn parse_expression(src: &str, ctx: &Context) -> Result<Polynomial, ParseError> {
    let tokens = Lexer::new(src).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        ctx,
        end: src.len(),
    };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(ParseError::new("unexpected trailing input", parser.offset()));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{GradedContext, Parity};

    fn ctx() -> Context {
        GradedContext::build(&[
            ("x", Parity::Even, 0),
            ("t1", Parity::Odd, 1),
            ("t2", Parity::Odd, 1),
        ])
        .unwrap()
    }

    #[test]
    fn parses_and_normalizes() {
        let ctx = ctx();
        let p = parse_expression("x^2 - 3/2*t1*t2 + x*x - x^2", &ctx).unwrap();
        assert_eq!(p.to_string(), "x^2 - 3/2*t1*t2");
    }

    #[test]
    fn whitespace_insensitive() {
        let ctx = ctx();
        let a = parse_expression("x ^ 2+ t1 * t2", &ctx).unwrap();
        let b = parse_expression("x^2+t1*t2", &ctx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_denominator() {
        let ctx = ctx();
        let err = parse_expression("1/0", &ctx).unwrap_err();
        assert!(err.message.contains("zero denominator"));
    }

    #[test]
    fn rejects_unknown_identifier() {
        let ctx = ctx();
        let err = parse_expression("x + nope", &ctx).unwrap_err();
        assert!(err.message.contains("unknown identifier"));
    }

    #[test]
    fn rejects_negative_exponent() {
        let ctx = ctx();
        assert!(parse_expression("x^-2", &ctx).is_err());
    }

    #[test]
    fn odd_square_parses_to_zero() {
        let ctx = ctx();
        assert!(parse_expression("t1^2", &ctx).unwrap().is_zero());
    }

    #[test]
    fn print_parse_round_trip() {
        let ctx = ctx();
        let p = parse_expression("(x + t1*t2)*(x - 2*t1*t2) + 7/3", &ctx).unwrap();
        let reparsed = parse_expression(&p.to_string(), &ctx).unwrap();
        assert_eq!(p, reparsed);
    }
}
