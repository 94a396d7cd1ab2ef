use thiserror::Error;

use super::{BinOp, Expr, Func, Node, Var};

/// Assignment of real values to variables.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalPoint {
    values: [Option<f64>; Var::COUNT],
}

impl EvalPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn t(t: f64) -> Self {
        Self::new().with(Var::T, t)
    }

    pub fn tx(t: f64, x: f64) -> Self {
        Self::t(t).with(Var::X, x)
    }

    pub fn txu(t: f64, x: f64, u: f64) -> Self {
        Self::tx(t, x).with(Var::U, u)
    }

    pub fn with(mut self, v: Var, value: f64) -> Self {
        self.values[v.index()] = Some(value);
        self
    }

    pub fn set(&mut self, v: Var, value: f64) {
        self.values[v.index()] = Some(value);
    }

    pub fn get(&self, v: Var) -> Option<f64> {
        self.values[v.index()]
    }
}

/// Why an evaluation produced no finite value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    /// A subexpression is singular at the point.
    #[error("pole at `{node}`")]
    Pole { node: String },
    #[error("variable `{0}` is not assigned")]
    Unassigned(Var),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("inversion failed: {0}")]
    Inversion(String),
}

impl EvalError {
    pub fn is_pole(&self) -> bool {
        matches!(self, EvalError::Pole { .. })
    }

    pub(crate) fn pole(node: &Expr) -> EvalError {
        let mut text = node.to_string();
        if text.len() > 96 {
            let mut cut = 93;
            while !text.is_char_boundary(cut) {
                cut -= 1;
            }
            text.truncate(cut);
            text.push_str("...");
        }
        EvalError::Pole { node: text }
    }
}

/// Pure function application; `Err(())` marks a pole or a domain violation.
pub(crate) fn apply_func(f: Func, a: f64) -> Result<f64, ()> {
    let r = match f {
        Func::Exp => a.exp(),
        Func::Ln => {
            if a <= 0.0 {
                return Err(());
            }
            a.ln()
        }
        Func::Sqrt => {
            if a < 0.0 {
                return Err(());
            }
            a.sqrt()
        }
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Tan => {
            if a.cos().abs() < 1e-15 {
                return Err(());
            }
            a.tan()
        }
        Func::Sinh => a.sinh(),
        Func::Cosh => a.cosh(),
        Func::Tanh => a.tanh(),
        Func::Coth => {
            let th = a.tanh();
            if th == 0.0 {
                return Err(());
            }
            1.0 / th
        }
        Func::Abs => a.abs(),
    };
    if r.is_finite() {
        Ok(r)
    } else {
        Err(())
    }
}

pub(crate) fn apply_bin(op: BinOp, a: f64, b: f64) -> Result<f64, ()> {
    let r = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b == 0.0 {
                return Err(());
            }
            a / b
        }
        BinOp::Pow => pow(a, b),
    };
    if r.is_finite() {
        Ok(r)
    } else {
        Err(())
    }
}

fn pow(a: f64, b: f64) -> f64 {
    if b.fract() == 0.0 && b.abs() <= 64.0 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

/// Magnitude of the derivative of `f` at `a`, used for scale propagation.
fn func_slope(f: Func, a: f64, value: f64) -> f64 {
    match f {
        Func::Exp => value.abs(),
        Func::Ln => 1.0 / a.abs(),
        Func::Sqrt => {
            if value > 0.0 {
                0.5 / value
            } else {
                0.0
            }
        }
        Func::Sin => a.cos().abs(),
        Func::Cos => a.sin().abs(),
        Func::Tan | Func::Tanh | Func::Coth => (1.0 - value * value * sign_for(f)).abs(),
        Func::Sinh => a.cosh(),
        Func::Cosh => a.sinh().abs(),
        Func::Abs => 1.0,
    }
}

fn sign_for(f: Func) -> f64 {
    // tan' = 1 + tan^2, tanh' = 1 - tanh^2, coth' = 1 - coth^2
    if f == Func::Tan {
        -1.0
    } else {
        1.0
    }
}

impl Expr {
    /// Evaluate at a point. Singularities come back as [`EvalError::Pole`].
    pub fn eval(&self, p: &EvalPoint) -> Result<f64, EvalError> {
        match self.node() {
            Node::Num(v) => Ok(*v),
            Node::Const(c) => Ok(c.value()),
            Node::Var(v) => p.get(*v).ok_or(EvalError::Unassigned(*v)),
            Node::Neg(a) => Ok(-a.eval(p)?),
            Node::Func(f, a) => {
                let av = a.eval(p)?;
                apply_func(*f, av).map_err(|_| EvalError::pole(self))
            }
            Node::Bin(op, a, b) => {
                let av = a.eval(p)?;
                let bv = b.eval(p)?;
                apply_bin(*op, av, bv).map_err(|_| EvalError::pole(self))
            }
            Node::Integral { handle, arg } => {
                let s = arg.eval(p)?;
                handle.eval(s).map_err(|e| EvalError::Quadrature(e.to_string()))
            }
            Node::Inverse { map, arg } => {
                let y = arg.eval(p)?;
                map.invert(y)
            }
        }
    }

    /// Evaluate a function of `t` alone.
    pub fn eval_t(&self, t: f64) -> Result<f64, EvalError> {
        self.eval(&EvalPoint::t(t))
    }

    /// Value together with a first-order rounding-magnitude estimate.
    ///
    /// The magnitude is the sum of absolute values of the additive subterms,
    /// carried through products, quotients and functions by their linearized
    /// error propagation. A computed value that should be zero is
    /// `O(eps * magnitude)`.
    pub fn eval_with_scale(&self, p: &EvalPoint) -> Result<(f64, f64), EvalError> {
        match self.node() {
            Node::Num(v) => Ok((*v, v.abs())),
            Node::Const(c) => Ok((c.value(), c.value())),
            Node::Var(v) => {
                let x = p.get(*v).ok_or(EvalError::Unassigned(*v))?;
                Ok((x, x.abs()))
            }
            Node::Neg(a) => {
                let (v, m) = a.eval_with_scale(p)?;
                Ok((-v, m))
            }
            Node::Func(f, a) => {
                let (av, am) = a.eval_with_scale(p)?;
                let v = apply_func(*f, av).map_err(|_| EvalError::pole(self))?;
                let m = v.abs() + func_slope(*f, av, v) * am;
                finite_scale(v, m, self)
            }
            Node::Bin(op, a, b) => {
                let (av, am) = a.eval_with_scale(p)?;
                let (bv, bm) = b.eval_with_scale(p)?;
                let v = apply_bin(*op, av, bv).map_err(|_| EvalError::pole(self))?;
                let m = match op {
                    BinOp::Add | BinOp::Sub => am + bm,
                    BinOp::Mul => am * bv.abs() + av.abs() * bm,
                    BinOp::Div => am / bv.abs() + av.abs() * bm / (bv * bv),
                    BinOp::Pow => {
                        let mut m = v.abs();
                        if av != 0.0 {
                            m += (bv * v / av).abs() * am;
                        }
                        if b.as_num().is_none() && av > 0.0 {
                            m += (v * av.ln()).abs() * bm;
                        }
                        m
                    }
                };
                finite_scale(v, m, self)
            }
            Node::Integral { handle, arg } => {
                let (s, sm) = arg.eval_with_scale(p)?;
                let v = handle.eval(s).map_err(|e| EvalError::Quadrature(e.to_string()))?;
                let slope = handle.integrand().eval_t(s).map(f64::abs).unwrap_or(0.0);
                finite_scale(v, v.abs() + slope * sm, self)
            }
            Node::Inverse { map, arg } => {
                let (y, ym) = arg.eval_with_scale(p)?;
                let s = map.invert(y)?;
                let slope = map.derivative().eval_t(s).map(f64::abs).unwrap_or(f64::INFINITY);
                let m = if slope > 0.0 { s.abs() + ym / slope } else { s.abs() };
                finite_scale(s, m, self)
            }
        }
    }
}

fn finite_scale(v: f64, m: f64, node: &Expr) -> Result<(f64, f64), EvalError> {
    if m.is_finite() {
        Ok((v, m))
    } else {
        Err(EvalError::pole(node))
    }
}
