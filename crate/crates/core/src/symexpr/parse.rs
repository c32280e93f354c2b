//! Recursive-descent parser for the expression mini-language.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := primary ('^' exponent)?
//! exponent := '-'? (number | '(' expr ')')      -- must fold to a rational
//! primary  := number | y{i}_{r} | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```

use num::{BigInt, BigRational, ToPrimitive};

use super::{Exponent, Expr};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(u32, u32),
    Sqrt,
    Op(char),
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0;
    let digits = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => pos += 1,
            '+' | '-' | '*' | '/' | '^' => {
                toks.push((Tok::Op(c), pos));
                pos += 1;
            }
            '(' => {
                toks.push((Tok::LParen, pos));
                pos += 1;
            }
            ')' => {
                toks.push((Tok::RParen, pos));
                pos += 1;
            }
            '0'..='9' | '.' => {
                let start = pos;
                let int_end = digits(pos);
                let (frac_start, end) = if int_end < bytes.len() && bytes[int_end] == b'.' {
                    (int_end + 1, digits(int_end + 1))
                } else {
                    (int_end, int_end)
                };
                if int_end == start && end == frac_start {
                    return Err(syntax(start, "malformed number"));
                }
                let int_part = &text[start..int_end];
                let frac_part = &text[frac_start..end];
                let mantissa: BigInt = format!("{int_part}{frac_part}").parse().unwrap_or_default();
                let scale = num::pow::pow(BigInt::from(10), frac_part.len());
                toks.push((Tok::Num(BigRational::new(mantissa, scale)), start));
                pos = end;
            }
            'y' => {
                let start = pos;
                let i_end = digits(pos + 1);
                if i_end == pos + 1 || i_end >= bytes.len() || bytes[i_end] != b'_' {
                    return Err(syntax(start, "expected identifier of the form y{i}_{r}"));
                }
                let r_end = digits(i_end + 1);
                if r_end == i_end + 1 {
                    return Err(syntax(start, "expected identifier of the form y{i}_{r}"));
                }
                if r_end < bytes.len() && (bytes[r_end].is_ascii_alphanumeric() || bytes[r_end] == b'_') {
                    return Err(syntax(r_end, "unexpected character after identifier"));
                }
                let parse_idx = |s: &str| {
                    s.parse::<u32>().map_err(|_| Error::IndexOutOfRange {
                        pos: start,
                        msg: format!("index {s} too large"),
                    })
                };
                let i = parse_idx(&text[pos + 1..i_end])?;
                let r = parse_idx(&text[i_end + 1..r_end])?;
                toks.push((Tok::Var(i, r), start));
                pos = r_end;
            }
            c if c.is_ascii_alphabetic() => {
                let start = pos;
                while pos < bytes.len() && (bytes[pos] as char).is_ascii_alphanumeric() {
                    pos += 1;
                }
                match &text[start..pos] {
                    "sqrt" => toks.push((Tok::Sqrt, start)),
                    other => return Err(syntax(start, &format!("unknown identifier '{other}'"))),
                }
            }
            _ => return Err(syntax(pos, &format!("unexpected character '{c}'"))),
        }
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

fn syntax(pos: usize, msg: &str) -> Error {
    Error::Syntax { pos, msg: msg.to_string() }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    m: usize,
    max_order: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    acc.push(-self.term()?);
                }
                _ => return Ok(Expr::sum(acc)),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = vec![self.unary()?];
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc.push(self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    acc.push(self.unary()?.recip());
                }
                _ => return Ok(Expr::product(acc)),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let negative = if *self.peek() == Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        let exp = match self.bump() {
            Tok::Num(q) => Expr::constant(q),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                e
            }
            _ => return Err(syntax(pos, "expected exponent")),
        };
        let q = exp
            .as_const()
            .and_then(|c| Some(Exponent::new(c.numer().to_i64()?, c.denom().to_i64()?)))
            .ok_or_else(|| syntax(pos, "exponent must be a rational constant"))?;
        if *self.peek() == Tok::Op('^') {
            return Err(syntax(self.pos(), "chained exponents must be parenthesized"));
        }
        Ok(base.pow(if negative { -q } else { q }))
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(q) => Ok(Expr::constant(q)),
            Tok::Var(i, r) => {
                if i == 0 || i as usize > self.m {
                    return Err(Error::IndexOutOfRange {
                        pos,
                        msg: format!("component {i} outside 1..={}", self.m),
                    });
                }
                if r as usize > self.max_order {
                    return Err(Error::IndexOutOfRange {
                        pos,
                        msg: format!("order {r} exceeds maximum {}", self.max_order),
                    });
                }
                Ok(Expr::var(i, r))
            }
            Tok::Sqrt => {
                self.expect(Tok::LParen, "'(' after sqrt")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e.sqrt())
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            t => Err(syntax(pos, &format!("unexpected token {t:?}"))),
        }
    }
}

/// Parse an expression over `T^max_order R^m`.
pub fn parse(text: &str, m: usize, max_order: usize) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, m, max_order };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}
