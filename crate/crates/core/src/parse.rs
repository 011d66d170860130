//! Polynomial input and output.
//!
//! Grammar (whitespace is ignored, `-` may also appear in prefix position):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := var | uint | '(' expr ')'
//! ```
//!
//! There is no implicit multiplication: `xy` is the variable named `xy`.

use std::sync::Arc;

use crate::config::RingConfig;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{mulmod, ModPoly};

/// Largest accepted exponent literal.
pub const MAX_EXPONENT: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Var(usize),
    /// Integer literal already reduced mod `p^W`.
    Const(u64),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u64),
}

impl PolyExpr {
    pub fn eval(&self, cfg: &Arc<RingConfig>) -> Result<ModPoly> {
        Ok(match self {
            PolyExpr::Var(i) => ModPoly::var(cfg, *i),
            PolyExpr::Const(c) => ModPoly::monomial(cfg, Monomial::one(cfg.nvars()), *c),
            PolyExpr::Neg(a) => a.eval(cfg)?.neg(),
            PolyExpr::Add(a, b) => a.eval(cfg)?.try_add(&b.eval(cfg)?)?,
            PolyExpr::Sub(a, b) => a.eval(cfg)?.try_sub(&b.eval(cfg)?)?,
            PolyExpr::Mul(a, b) => a.eval(cfg)?.try_mul(&b.eval(cfg)?)?,
            PolyExpr::Pow(a, e) => a.eval(cfg)?.pow(*e)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    /// digits as written; reduced lazily so literals of any length work
    Num(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' | '-' | '*' | '^' | '(' | ')' => {
                out.push((
                    pos,
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '^' => Tok::Caret,
                        '(' => Tok::LParen,
                        _ => Tok::RParen,
                    },
                ));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
                out.push((pos, Tok::Num(s)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
                out.push((pos, Tok::Ident(s)));
            }
            other => {
                return Err(Error::Lex { pos, msg: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    cfg: &'a RingConfig,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PolyExpr> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(PolyExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(digits)) => {
                    let e = digits
                        .parse::<u64>()
                        .ok()
                        .filter(|e| *e <= MAX_EXPONENT)
                        .ok_or_else(|| Error::ExponentOverflow(format!("exponent {digits} at position {pos}")))?;
                    Ok(PolyExpr::Pow(Box::new(base), e))
                }
                _ => Err(Error::Syntax { pos, msg: "expected a non-negative integer exponent".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<PolyExpr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(name)) => match self.cfg.var_index(&name) {
                Some(i) => Ok(PolyExpr::Var(i)),
                None => Err(Error::UnknownVariable { name, pos }),
            },
            Some(Tok::Num(digits)) => {
                let m = self.cfg.modulus(self.cfg.precision());
                let r = digits
                    .bytes()
                    .fold(0u64, |acc, d| (mulmod(acc, 10, m) + (d - b'0') as u64 % m) % m);
                Ok(PolyExpr::Const(r))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Syntax { pos: close, msg: "expected `)`".into() }),
                }
            }
            Some(t) => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses `text` into an expression tree over the variables of `cfg`.
pub fn parse_expr(text: &str, cfg: &RingConfig) -> Result<PolyExpr> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut parser = Parser { toks, at: 0, end: text.len(), cfg };
    let e = parser.expr()?;
    if parser.at < parser.toks.len() {
        let pos = parser.pos();
        let tok = parser.bump().unwrap();
        return Err(Error::Syntax { pos, msg: format!("unexpected trailing token {tok:?}") });
    }
    Ok(e)
}

/// Parses a polynomial with coefficients reduced to `[0, p^W)`.
pub fn parse_poly(text: &str, cfg: &Arc<RingConfig>) -> Result<ModPoly> {
    parse_expr(text, cfg)?.eval(cfg)
}

/// Terms in descending graded-lex order, e.g. `x^3+3*x*y+1`; `0` for zero.
pub fn format_poly(g: &ModPoly) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    let vars = g.cfg().vars();
    let mut out = String::new();
    for (i, (mono, c)) in g.terms().rev().enumerate() {
        if i > 0 {
            out.push('+');
        }
        if mono.is_one() {
            out.push_str(&c.to_string());
        } else if c == 1 {
            out.push_str(&mono.display(vars).to_string());
        } else {
            out.push_str(&format!("{c}*{}", mono.display(vars)));
        }
    }
    out
}
