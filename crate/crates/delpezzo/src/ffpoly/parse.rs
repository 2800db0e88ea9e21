// SPDX-License-Identifier: Apache-2.0

//! Expression grammar: integer literals, identifiers, `+ - * ^`, parentheses.
//! Multiplication is explicit; `^` takes an integer literal, negative only
//! for unit parameters.

use super::FfError;

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Ident { name: String, pos: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: i64, pos: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, FfError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse::<i64>()
                .map_err(|_| FfError::Syntax { pos: start, msg: "integer literal too large".into() })?;
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(FfError::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, FfError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, FfError> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, FfError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, FfError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                let exp = if neg { -n } else { n };
                Ok(Expr::Pow { base: Box::new(base), exp, pos })
            }
            _ => Err(FfError::Syntax { pos: self.pos(), msg: "exponent must be an integer literal".into() }),
        }
    }

    fn atom(&mut self) -> Result<Expr, FfError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                Ok(Expr::Ident { name, pos })
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(FfError::Syntax { pos: self.pos(), msg: "expected ')'".into() });
                }
                Ok(e)
            }
            Some(t) => Err(FfError::Syntax { pos, msg: format!("unexpected token {t:?}") }),
            None => Err(FfError::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse_expr(src: &str) -> Result<Expr, FfError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, i: 0, end: src.len() };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return Err(FfError::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// Evaluates `src` as a polynomial in one variable over F_p, returning the
/// coefficient list (lowest degree first, trailing zeros trimmed).
pub fn parse_univariate(src: &str, var: &str, p: u32) -> Result<Vec<u32>, FfError> {
    fn go(e: &Expr, var: &str, p: u32) -> Result<Vec<u32>, FfError> {
        Ok(match e {
            Expr::Int(n) => vec![(*n).rem_euclid(p as i64) as u32],
            Expr::Ident { name, pos } => {
                if name != var {
                    return Err(FfError::UnknownSymbol { name: name.clone(), pos: *pos });
                }
                vec![0, 1]
            }
            Expr::Neg(a) => go(a, var, p)?.iter().map(|c| (p - c) % p).collect(),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, mut y) = (go(a, var, p)?, go(b, var, p)?);
                if matches!(e, Expr::Sub(..)) {
                    y.iter_mut().for_each(|c| *c = (p - *c) % p);
                }
                let mut out = vec![0; x.len().max(y.len())];
                for (i, c) in x.iter().enumerate() {
                    out[i] = (out[i] + c) % p;
                }
                for (i, c) in y.iter().enumerate() {
                    out[i] = (out[i] + c) % p;
                }
                out
            }
            Expr::Mul(a, b) => mul_uni(&go(a, var, p)?, &go(b, var, p)?, p),
            Expr::Pow { base, exp, pos } => {
                if *exp < 0 {
                    return Err(FfError::NegativeExponent { pos: *pos });
                }
                let b = go(base, var, p)?;
                let mut acc = vec![1];
                for _ in 0..*exp {
                    acc = mul_uni(&acc, &b, p);
                }
                acc
            }
        })
    }
    let mut v = go(&parse_expr(src)?, var, p)?;
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    Ok(v)
}

fn mul_uni(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}
