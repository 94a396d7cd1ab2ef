//! Expression trees over a small fixed set of real variables.
//!
//! Expressions carry the coefficients `a(t)`, `b(t)`, `c(t)` of an equation and
//! the coefficients of vector fields. Besides the grammar constructs, two
//! internal node kinds support numerically realized functions of time: a
//! memoized antiderivative and the inverse of a monotone map. Both have exact
//! symbolic derivatives, so time changes compose through the ordinary chain rule.

mod diff;
mod eval;
mod parse;
mod print;
mod zero;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

pub use eval::{EvalError, EvalPoint};
pub use parse::{parse, ParseError};
pub use zero::{is_identically_zero, zero_test, SampleBox, ZeroTestConfig, ZeroTestOutcome};

use crate::numerics::{Antiderivative, MonotoneMap};

/// Variables an expression may reference.
///
/// Only `t`, `x` and `u` are available to parsed text. The remaining jet
/// variables are used internally when assembling prolongations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    X,
    U,
    Ut,
    Ux,
    Uxx,
    Uxxx,
    Utx,
}

impl Var {
    pub const COUNT: usize = 8;
    pub const ALL: [Var; Var::COUNT] = [
        Var::T,
        Var::X,
        Var::U,
        Var::Ut,
        Var::Ux,
        Var::Uxx,
        Var::Uxxx,
        Var::Utx,
    ];
    /// The variable set accepted by [`parse`] by default.
    pub const TXU: [Var; 3] = [Var::T, Var::X, Var::U];

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X => "x",
            Var::U => "u",
            Var::Ut => "u_t",
            Var::Ux => "u_x",
            Var::Uxx => "u_xx",
            Var::Uxxx => "u_xxx",
            Var::Utx => "u_tx",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named constants of the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

/// Elementary functions of one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Abs,
}

impl Func {
    pub const ALL: [Func; 11] = [
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Coth,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// One node of an expression tree.
#[derive(Debug)]
pub enum Node {
    Num(f64),
    Const(Constant),
    Var(Var),
    Neg(Expr),
    Func(Func, Expr),
    Bin(BinOp, Expr, Expr),
    /// `∫_{t_ref}^{arg} f(s) ds` for the integrand held by the handle.
    Integral { handle: Arc<Antiderivative>, arg: Expr },
    /// `s` such that `map(s) = arg`.
    Inverse { map: Arc<MonotoneMap>, arg: Expr },
}

/// Immutable, cheaply clonable expression.
#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn num(v: f64) -> Expr {
        Expr::from_node(Node::Num(v))
    }

    pub fn zero() -> Expr {
        Expr::num(0.0)
    }

    pub fn one() -> Expr {
        Expr::num(1.0)
    }

    pub fn var(v: Var) -> Expr {
        Expr::from_node(Node::Var(v))
    }

    pub fn t() -> Expr {
        Expr::var(Var::T)
    }

    pub fn x() -> Expr {
        Expr::var(Var::X)
    }

    pub fn u() -> Expr {
        Expr::var(Var::U)
    }

    pub fn constant(c: Constant) -> Expr {
        Expr::from_node(Node::Const(c))
    }

    pub fn integral(handle: Arc<Antiderivative>, arg: Expr) -> Expr {
        Expr::from_node(Node::Integral { handle, arg })
    }

    pub fn inverse(map: Arc<MonotoneMap>, arg: Expr) -> Expr {
        Expr::from_node(Node::Inverse { map, arg })
    }

    /// Literal value if this node is a number.
    pub fn as_num(&self) -> Option<f64> {
        match self.node() {
            Node::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_num(&self, v: f64) -> bool {
        self.as_num() == Some(v)
    }

    pub fn is_zero_literal(&self) -> bool {
        self.is_num(0.0)
    }

    /// Whether `v` occurs anywhere in the tree.
    pub fn depends_on(&self, v: Var) -> bool {
        match self.node() {
            Node::Num(_) | Node::Const(_) => false,
            Node::Var(w) => *w == v,
            Node::Neg(a) | Node::Func(_, a) => a.depends_on(v),
            Node::Bin(_, a, b) => a.depends_on(v) || b.depends_on(v),
            Node::Integral { arg, .. } | Node::Inverse { arg, .. } => arg.depends_on(v),
        }
    }

    /// Free variables, sorted and deduplicated.
    pub fn variables(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Var::ALL.into_iter().filter(|v| self.depends_on(*v)).collect();
        out.dedup();
        out
    }

    /// Replace every occurrence of `v` by `with`.
    pub fn substitute(&self, v: Var, with: &Expr) -> Expr {
        if !self.depends_on(v) {
            return self.clone();
        }
        match self.node() {
            Node::Num(_) | Node::Const(_) => self.clone(),
            Node::Var(w) => {
                if *w == v {
                    with.clone()
                } else {
                    self.clone()
                }
            }
            Node::Neg(a) => -a.substitute(v, with),
            Node::Func(f, a) => a.substitute(v, with).apply(*f),
            Node::Bin(op, a, b) => Expr::binary(*op, a.substitute(v, with), b.substitute(v, with)),
            Node::Integral { handle, arg } => Expr::integral(handle.clone(), arg.substitute(v, with)),
            Node::Inverse { map, arg } => Expr::inverse(map.clone(), arg.substitute(v, with)),
        }
    }

    /// Apply a function with constant folding.
    pub fn apply(self, f: Func) -> Expr {
        if let Some(v) = self.as_num() {
            let r = eval::apply_func(f, v);
            if let Ok(r) = r {
                return Expr::num(r);
            }
        }
        Expr::from_node(Node::Func(f, self))
    }

    pub fn exp(self) -> Expr {
        self.apply(Func::Exp)
    }
    pub fn ln(self) -> Expr {
        self.apply(Func::Ln)
    }
    pub fn sqrt(self) -> Expr {
        self.apply(Func::Sqrt)
    }
    pub fn sin(self) -> Expr {
        self.apply(Func::Sin)
    }
    pub fn cos(self) -> Expr {
        self.apply(Func::Cos)
    }
    pub fn tan(self) -> Expr {
        self.apply(Func::Tan)
    }
    pub fn sinh(self) -> Expr {
        self.apply(Func::Sinh)
    }
    pub fn cosh(self) -> Expr {
        self.apply(Func::Cosh)
    }
    pub fn tanh(self) -> Expr {
        self.apply(Func::Tanh)
    }
    pub fn coth(self) -> Expr {
        self.apply(Func::Coth)
    }
    pub fn abs(self) -> Expr {
        self.apply(Func::Abs)
    }

    pub fn powf(self, p: f64) -> Expr {
        self.pow(Expr::num(p))
    }

    pub fn pow(self, p: Expr) -> Expr {
        Expr::binary(BinOp::Pow, self, p)
    }

    /// Binary operation with constant folding and the trivial identities
    /// `0 + a`, `1 * a`, `0 * a`, `a / 1`, `a ^ 1`, `a ^ 0`.
    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_num(), b.as_num()) {
            if let Ok(r) = eval::apply_bin(op, x, y) {
                return Expr::num(r);
            }
        }
        match op {
            BinOp::Add => {
                if a.is_zero_literal() {
                    return b;
                }
                if b.is_zero_literal() {
                    return a;
                }
            }
            BinOp::Sub => {
                if b.is_zero_literal() {
                    return a;
                }
                if a.is_zero_literal() {
                    return -b;
                }
            }
            BinOp::Mul => {
                if a.is_zero_literal() || b.is_zero_literal() {
                    return Expr::zero();
                }
                if a.is_num(1.0) {
                    return b;
                }
                if b.is_num(1.0) {
                    return a;
                }
                if a.is_num(-1.0) {
                    return -b;
                }
                if b.is_num(-1.0) {
                    return -a;
                }
            }
            BinOp::Div => {
                if b.is_num(1.0) {
                    return a;
                }
                if a.is_zero_literal() && !b.is_zero_literal() {
                    return Expr::zero();
                }
            }
            BinOp::Pow => {
                if b.is_zero_literal() {
                    return Expr::one();
                }
                if b.is_num(1.0) {
                    return a;
                }
            }
        }
        Expr::from_node(Node::Bin(op, a, b))
    }

    /// Textual form accepted by [`parse`] for grammar-only expressions.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Expr {
        Expr::num(v)
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Expr {
        Expr::var(v)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self.node() {
            Node::Num(v) => Expr::num(-v),
            Node::Neg(a) => a.clone(),
            _ => Expr::from_node(Node::Neg(self)),
        }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self, rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, self, rhs.clone())
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self.clone(), rhs)
            }
        }
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, self.clone(), rhs.clone())
            }
        }
        impl $trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::binary($op, self, Expr::num(rhs))
            }
        }
        impl $trait<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::binary($op, self.clone(), Expr::num(rhs))
            }
        }
        impl $trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, Expr::num(self), rhs)
            }
        }
        impl $trait<&Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, Expr::num(self), rhs.clone())
            }
        }
    };
}

impl_binop!(Add, add, BinOp::Add);
impl_binop!(Sub, sub, BinOp::Sub);
impl_binop!(Mul, mul, BinOp::Mul);
impl_binop!(Div, div, BinOp::Div);
