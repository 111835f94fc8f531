//! Parser for ring expressions.
//!
//! Grammar: variables x, y, z; integer literals (rationals arise from `/`);
//! operators `+ - * / ^` with the usual precedence; parentheses. Division is
//! only defined when the divisor is a nonzero monomial in x, y, z (with an
//! optional rational coefficient), which is checked syntactically so that
//! `x/z^2` keeps its denominator instead of normalizing `z^2` away.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::Rat;
use crate::ring::{Coord, LocalizedFun, SphereFun};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(Coord),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Lexer> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '-' | '−' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, start));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            'x' => {
                toks.push((Tok::Var(Coord::X), start));
                i += 1;
            }
            'y' => {
                toks.push((Tok::Var(Coord::Y), start));
                i += 1;
            }
            'z' => {
                toks.push((Tok::Var(Coord::Z), start));
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: BigInt = src[i..j].parse().expect("digits");
                toks.push((Tok::Int(n), start));
                i = j;
            }
            _ => {
                // '−' is multi-byte; handle it before falling through
                if src[i..].starts_with('−') {
                    toks.push((Tok::Minus, start));
                    i += '−'.len_utf8();
                } else {
                    return Err(Error::parse(start, format!("unexpected character {c:?}")));
                }
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: src.len(),
    })
}

/// Parsed value: the element itself plus, when the expression is
/// syntactically a scaled monomial, its formal exponents. The monomial view
/// survives `* / ^` and unary minus and is what legitimizes division.
#[derive(Debug, Clone)]
struct Val {
    elem: LocalizedFun,
    term: Option<(Rat, i64, i64, i64)>,
}

impl Val {
    fn from_term(c: Rat, xe: i64, ye: i64, ze: i64) -> Self {
        let pos = |v: i64| if v > 0 { v as u32 } else { 0 };
        let neg = |v: i64| if v < 0 { (-v) as u32 } else { 0 };
        let elem = LocalizedFun::new(
            SphereFun::monomial(c.clone(), pos(xe), pos(ye), pos(ze)),
            (neg(xe), neg(ye), neg(ze)),
        );
        Self {
            elem,
            term: Some((c, xe, ye, ze)),
        }
    }
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_pos(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        let pos = self.peek_pos();
        match self.next() {
            Some(found) if found == t => Ok(()),
            _ => Err(Error::parse(pos, format!("expected {what}"))),
        }
    }
}

fn parse_expr(lx: &mut Lexer) -> Result<Val> {
    let mut acc = parse_mul(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let rhs = parse_mul(lx)?;
                acc = Val {
                    elem: acc.elem.add(&rhs.elem),
                    term: None,
                };
            }
            Some(Tok::Minus) => {
                lx.next();
                let rhs = parse_mul(lx)?;
                acc = Val {
                    elem: acc.elem.sub(&rhs.elem),
                    term: None,
                };
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_mul(lx: &mut Lexer) -> Result<Val> {
    let mut acc = parse_unary(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                let rhs = parse_unary(lx)?;
                let term = match (&acc.term, &rhs.term) {
                    (Some((c1, a1, b1, e1)), Some((c2, a2, b2, e2))) => {
                        Some((c1 * c2, a1 + a2, b1 + b2, e1 + e2))
                    }
                    _ => None,
                };
                acc = Val {
                    elem: acc.elem.mul(&rhs.elem),
                    term,
                };
            }
            Some(Tok::Slash) => {
                let op_pos = lx.peek_pos();
                lx.next();
                let rhs = parse_unary(lx)?;
                let Some((c, a, b, e)) = rhs.term else {
                    return Err(Error::parse(
                        op_pos,
                        "division only by monomials in x, y, z",
                    ));
                };
                if c.is_zero() {
                    return Err(Error::parse(op_pos, "division by zero"));
                }
                let term = acc
                    .term
                    .as_ref()
                    .map(|(c1, a1, b1, e1)| (c1 / &c, a1 - a, b1 - b, e1 - e));
                let divided = Val::from_term(Rat::from_integer(1.into()) / &c, -a, -b, -e);
                acc = Val {
                    elem: acc.elem.mul(&divided.elem),
                    term,
                };
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_unary(lx: &mut Lexer) -> Result<Val> {
    if let Some(Tok::Minus) = lx.peek() {
        lx.next();
        let v = parse_unary(lx)?;
        let term = v.term.map(|(c, a, b, e)| (-c, a, b, e));
        return Ok(Val {
            elem: v.elem.neg(),
            term,
        });
    }
    parse_power(lx)
}

fn parse_power(lx: &mut Lexer) -> Result<Val> {
    let mut acc = parse_atom(lx)?;
    while let Some(Tok::Caret) = lx.peek() {
        lx.next();
        let pos = lx.peek_pos();
        let Some(Tok::Int(n)) = lx.next() else {
            return Err(Error::parse(pos, "expected a nonnegative integer exponent"));
        };
        let e: u32 = n
            .try_into()
            .map_err(|_| Error::parse(pos, "exponent out of range"))?;
        let mut elem = LocalizedFun::one();
        for _ in 0..e {
            elem = elem.mul(&acc.elem);
        }
        let term = acc.term.map(|(c, a, b, ze)| {
            let mut cp = Rat::from_integer(1.into());
            for _ in 0..e {
                cp *= &c;
            }
            (cp, a * e as i64, b * e as i64, ze * e as i64)
        });
        acc = Val { elem, term };
    }
    Ok(acc)
}

fn parse_atom(lx: &mut Lexer) -> Result<Val> {
    let pos = lx.peek_pos();
    match lx.next() {
        Some(Tok::Int(n)) => Ok(Val::from_term(Rat::from_integer(n), 0, 0, 0)),
        Some(Tok::Var(c)) => {
            let (a, b, e) = match c {
                Coord::X => (1, 0, 0),
                Coord::Y => (0, 1, 0),
                Coord::Z => (0, 0, 1),
            };
            Ok(Val::from_term(Rat::from_integer(1.into()), a, b, e))
        }
        Some(Tok::LParen) => {
            let v = parse_expr(lx)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(v)
        }
        Some(t) => Err(Error::parse(pos, format!("unexpected token {t:?}"))),
        None => Err(Error::parse(pos, "unexpected end of input")),
    }
}

/// Parses an expression into the localized ring.
pub fn parse_localized(src: &str) -> Result<LocalizedFun> {
    let mut lx = lex(src)?;
    let v = parse_expr(&mut lx)?;
    if lx.peek().is_some() {
        return Err(Error::parse(lx.peek_pos(), "trailing input"));
    }
    Ok(v.elem)
}

/// Parses an expression that must lie in the plain ring A.
pub fn parse_sphere(src: &str) -> Result<SphereFun> {
    let f = parse_localized(src)?;
    if !f.is_polynomial() {
        return Err(Error::parse(
            0,
            "expression has a denominator, not an element of A",
        ));
    }
    Ok(f.num().clone())
}
