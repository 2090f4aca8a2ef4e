//! Recursive-descent parser for the canonical operator syntax.
//!
//! Grammar sketch (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := factor ((('*')? factor) | '/' factor | '@' uint)*
//! factor  := '-' factor | primary ('^' uint)?
//! primary := '(' expr ')' | uint | atom
//! atom    := x | t | dx | dt | z | m | Sx '[' rat ']' | St '[' rat ']'
//! rat     := '-'? uint ('/' uint)?
//! ```
//!
//! Juxtaposed factors multiply. A site tag `@k` assigns the directly
//! preceding run of atomic factors to tensor site `k`; untagged atoms act on
//! site 0. Division is restricted: the divisor must be scalar-valued, and a
//! symbolic divisor (involving `z` or `m`) additionally requires a
//! scalar-valued dividend — so `(1 - Sx[-1])/z` is rejected while
//! `(1/z)*(1 - Sx[-1])` and `x/2` parse.

use thiserror::Error;

use crate::opalg::{Atom, OperatorExpr, Rat};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { pos: usize, name: String },
}

fn syn(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    At,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer, ParseError> {
        let bytes = src.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    i += 1;
                }
                '+' => {
                    toks.push((Tok::Plus, i));
                    i += 1;
                }
                '-' => {
                    toks.push((Tok::Minus, i));
                    i += 1;
                }
                '*' => {
                    toks.push((Tok::Star, i));
                    i += 1;
                }
                '/' => {
                    toks.push((Tok::Slash, i));
                    i += 1;
                }
                '^' => {
                    toks.push((Tok::Caret, i));
                    i += 1;
                }
                '@' => {
                    toks.push((Tok::At, i));
                    i += 1;
                }
                '(' => {
                    toks.push((Tok::LParen, i));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, i));
                    i += 1;
                }
                '[' => {
                    toks.push((Tok::LBracket, i));
                    i += 1;
                }
                ']' => {
                    toks.push((Tok::RBracket, i));
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let n: u64 = src[start..i]
                        .parse()
                        .map_err(|_| syn(start, "integer literal too large"))?;
                    toks.push((Tok::Num(n), start));
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    let start = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    toks.push((Tok::Ident(src[start..i].to_string()), start));
                }
                other => return Err(syn(i, format!("unexpected character `{other}`"))),
            }
        }
        toks.push((Tok::Eof, src.len()));
        Ok(Lexer { toks, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, ParseError> {
        let (t, pos) = self.next();
        if t == want {
            Ok(pos)
        } else {
            Err(syn(pos, format!("expected {what}")))
        }
    }
}

/// Parses the canonical textual form into a normal-ordered operator.
pub fn parse_expr(src: &str) -> Result<OperatorExpr, ParseError> {
    let mut lx = Lexer::new(src)?;
    let e = parse_sum(&mut lx)?;
    match lx.peek() {
        Tok::Eof => Ok(e),
        _ => Err(syn(lx.pos(), "trailing input")),
    }
}

fn parse_sum(lx: &mut Lexer) -> Result<OperatorExpr, ParseError> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Tok::Plus => {
                lx.next();
                acc = acc.add(&parse_term(lx)?);
            }
            Tok::Minus => {
                lx.next();
                acc = acc.sub(&parse_term(lx)?);
            }
            _ => return Ok(acc),
        }
    }
}

/// A parsed multiplicative factor: either a site-taggable atom or a
/// ready operator value (number, parenthesized expression).
enum Factor {
    Atom(Atom, u32),
    Value(OperatorExpr),
}

fn starts_factor(t: &Tok) -> bool {
    matches!(t, Tok::Num(_) | Tok::Ident(_) | Tok::LParen | Tok::Minus)
}

fn parse_term(lx: &mut Lexer) -> Result<OperatorExpr, ParseError> {
    let mut acc = OperatorExpr::one();
    // Atoms awaiting a site tag; flushed at site 0 by non-atom factors.
    let mut pending: Vec<(Atom, u32)> = Vec::new();
    let flush = |acc: &mut OperatorExpr, pending: &mut Vec<(Atom, u32)>, site: u8| {
        for (atom, pow) in pending.drain(..) {
            let e = atom.to_expr(site);
            *acc = acc.mul(&e.pow(pow));
        }
    };
    let mut first = true;
    loop {
        match lx.peek() {
            t if starts_factor(t) && (first || !matches!(t, Tok::Minus)) => {
                match parse_factor(lx)? {
                    Factor::Atom(a, pow) => pending.push((a, pow)),
                    Factor::Value(v) => {
                        flush(&mut acc, &mut pending, 0);
                        acc = acc.mul(&v);
                    }
                }
            }
            Tok::Star => {
                lx.next();
                match parse_factor(lx)? {
                    Factor::Atom(a, pow) => pending.push((a, pow)),
                    Factor::Value(v) => {
                        flush(&mut acc, &mut pending, 0);
                        acc = acc.mul(&v);
                    }
                }
            }
            Tok::Slash => {
                let pos = lx.pos();
                lx.next();
                let divisor = match parse_factor(lx)? {
                    Factor::Atom(a, pow) => a.to_expr(0).pow(pow),
                    Factor::Value(v) => v,
                };
                flush(&mut acc, &mut pending, 0);
                let d = divisor
                    .as_scalar()
                    .ok_or_else(|| syn(pos, "divisor must be scalar-valued"))?;
                if !d.is_rational_const() && acc.as_scalar().is_none() {
                    return Err(syn(
                        pos,
                        "division by a symbolic scalar requires a scalar dividend; \
                         write the reciprocal as an explicit factor like (1/z)",
                    ));
                }
                let inv = d.inv().map_err(|_| syn(pos, "division by zero"))?;
                acc = acc.scale(&inv);
            }
            Tok::At => {
                let pos = lx.pos();
                lx.next();
                let (t, npos) = lx.next();
                let site = match t {
                    Tok::Num(n) if n <= u64::from(u8::MAX) => n as u8,
                    _ => return Err(syn(npos, "expected a small site index after `@`")),
                };
                if pending.is_empty() {
                    return Err(syn(pos, "site tag must follow atomic factors"));
                }
                flush(&mut acc, &mut pending, site);
            }
            _ => {
                flush(&mut acc, &mut pending, 0);
                return Ok(acc);
            }
        }
        first = false;
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<Factor, ParseError> {
    if matches!(lx.peek(), Tok::Minus) {
        lx.next();
        let inner = parse_factor(lx)?;
        let v = match inner {
            Factor::Atom(a, pow) => a.to_expr(0).pow(pow),
            Factor::Value(v) => v,
        };
        return Ok(Factor::Value(v.neg()));
    }
    let prim = parse_primary(lx)?;
    let pow = if matches!(lx.peek(), Tok::Caret) {
        lx.next();
        let (t, pos) = lx.next();
        match t {
            Tok::Num(n) if n <= 64 => n as u32,
            Tok::Num(_) => return Err(syn(pos, "exponent too large")),
            _ => return Err(syn(pos, "expected an integer exponent")),
        }
    } else {
        1
    };
    Ok(match prim {
        Factor::Atom(a, _) => Factor::Atom(a, pow),
        Factor::Value(v) => Factor::Value(v.pow(pow)),
    })
}

fn parse_primary(lx: &mut Lexer) -> Result<Factor, ParseError> {
    let (t, pos) = lx.next();
    match t {
        Tok::LParen => {
            let e = parse_sum(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(Factor::Value(e))
        }
        Tok::Num(n) => Ok(Factor::Value(OperatorExpr::scalar(Scalar::int(n as i64)))),
        Tok::Ident(name) => match name.as_str() {
            "x" => Ok(Factor::Atom(Atom::X, 1)),
            "t" => Ok(Factor::Atom(Atom::T, 1)),
            "dx" => Ok(Factor::Atom(Atom::Dx, 1)),
            "dt" => Ok(Factor::Atom(Atom::Dt, 1)),
            "z" => Ok(Factor::Value(OperatorExpr::scalar(Scalar::z()))),
            "m" => Ok(Factor::Value(OperatorExpr::scalar(Scalar::m()))),
            "Sx" => Ok(Factor::Atom(Atom::Sx(parse_shift_amount(lx)?), 1)),
            "St" => Ok(Factor::Atom(Atom::St(parse_shift_amount(lx)?), 1)),
            _ => Err(ParseError::UnknownSymbol { pos, name }),
        },
        other => Err(syn(pos, format!("unexpected token {other:?}"))),
    }
}

fn parse_shift_amount(lx: &mut Lexer) -> Result<Rat, ParseError> {
    lx.expect(Tok::LBracket, "`[`")?;
    let neg = if matches!(lx.peek(), Tok::Minus) {
        lx.next();
        true
    } else {
        false
    };
    let (t, pos) = lx.next();
    let num = match t {
        Tok::Num(n) => n as i64,
        _ => return Err(syn(pos, "expected a shift amount")),
    };
    let den = if matches!(lx.peek(), Tok::Slash) {
        lx.next();
        let (t, pos) = lx.next();
        match t {
            Tok::Num(n) if n > 0 => n as i64,
            _ => return Err(syn(pos, "expected a positive shift denominator")),
        }
    } else {
        1
    };
    lx.expect(Tok::RBracket, "`]`")?;
    let num = if neg { -num } else { num };
    Ok(Rat::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::{realize_at, AlgCase, GenName};

    #[test]
    fn leibniz_through_the_parser() {
        let got = parse_expr("dx*x").unwrap();
        let want = OperatorExpr::x(0)
            .mul(&OperatorExpr::dx(0))
            .add(&OperatorExpr::one());
        assert_eq!(got, want);
        // Juxtaposition multiplies too.
        assert_eq!(parse_expr("dx x").unwrap(), want);
    }

    #[test]
    fn division_rules() {
        assert!(matches!(
            parse_expr("(1 - Sx[-1])/z"),
            Err(ParseError::Syntax { .. })
        ));
        let ok = parse_expr("(1/z)*(1 - Sx[-1])").unwrap();
        let want = OperatorExpr::one()
            .sub(&OperatorExpr::sx_i(0, -1))
            .scale(&Scalar::z().inv().unwrap());
        assert_eq!(ok, want);
        // Rational divisors apply to operators.
        assert_eq!(
            parse_expr("x/2").unwrap(),
            OperatorExpr::x(0).scale(&Scalar::ratio(1, 2))
        );
        assert!(parse_expr("1/0").is_err());
    }

    #[test]
    fn realized_boost_from_text() {
        let got = parse_expr("-t*(1/z)*(1 - Sx[-1]) - m*x*Sx[1]").unwrap();
        let want = realize_at(GenName::K, AlgCase::Space, 0).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn unknown_symbol_and_position() {
        match parse_expr("x + foo") {
            Err(ParseError::UnknownSymbol { pos, name }) => {
                assert_eq!(pos, 4);
                assert_eq!(name, "foo");
            }
            other => panic!("expected unknown symbol, got {other:?}"),
        }
    }

    #[test]
    fn site_tags() {
        let got = parse_expr("dt @2 + dt @1 Sx[-2] @2").unwrap();
        let want = OperatorExpr::dt(2)
            .add(&OperatorExpr::dt(1).mul(&OperatorExpr::sx_i(2, -2)));
        assert_eq!(got, want);
        assert!(parse_expr("@1").is_err());
        assert!(parse_expr("(x + t) @2").is_err());
    }

    #[test]
    fn print_then_parse_is_identity_on_samples() {
        let samples = [
            OperatorExpr::zero(),
            OperatorExpr::one(),
            realize_at(GenName::C, AlgCase::Space, 0).unwrap(),
            realize_at(GenName::C, AlgCase::Time, 0).unwrap(),
            realize_at(GenName::K, AlgCase::ClassicalTime, 0).unwrap(),
            OperatorExpr::dt(1).mul(&OperatorExpr::sx(2, Rat::new(-1, 2))),
        ];
        for e in &samples {
            let text = format!("{e}");
            let back = parse_expr(&text).unwrap();
            assert_eq!(back, *e, "round trip of `{text}`");
        }
    }
}
