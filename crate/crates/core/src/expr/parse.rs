//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := ("-")? power
//! power  := atom ("^" factor)?
//! atom   := number | ident | ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! The parser builds the tree exactly as written; no folding is applied.

use thiserror::Error;

use super::{BinOp, Constant, Expr, Func, Node, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared variable `{name}` at byte {offset}")]
    UndeclaredVariable { name: String, offset: usize },
}

/// Parse `text`, allowing references to the variables in `vars` only.
pub fn parse(text: &str, vars: &[Var]) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [Var],
}

fn raw(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::from_node(Node::Bin(op, a, b))
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = raw(BinOp::Add, lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = raw(BinOp::Sub, lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = raw(BinOp::Mul, lhs, self.factor()?);
            } else if self.eat(b'/') {
                lhs = raw(BinOp::Div, lhs, self.factor()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            let inner = self.power()?;
            Ok(Expr::from_node(Node::Neg(inner)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            Ok(raw(BinOp::Pow, base, exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                // `(-2)` is how negative literals print
                if let Node::Neg(inner) = e.node() {
                    if let Node::Num(v) = inner.node() {
                        if v.is_sign_positive() {
                            return Ok(Expr::num(-v));
                        }
                    }
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        // Exponent only when followed by digits, so `2*e` stays a constant.
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse::<f64>().map(Expr::num).map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let call = self.peek() == Some(b'(');
        if let Some(f) = Func::from_name(name) {
            if !call {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("function `{name}` requires an argument"),
                });
            }
            self.pos += 1;
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(Expr::from_node(Node::Func(f, arg)));
        }
        if call {
            return Err(ParseError::Syntax {
                offset: start,
                message: format!("unknown function `{name}`"),
            });
        }
        match name {
            "pi" => Ok(Expr::constant(Constant::Pi)),
            "e" => Ok(Expr::constant(Constant::E)),
            _ => match Var::from_name(name).filter(|v| self.vars.contains(v)) {
                Some(v) => Ok(Expr::var(v)),
                None => Err(ParseError::UndeclaredVariable { name: name.to_string(), offset: start }),
            },
        }
    }
}
