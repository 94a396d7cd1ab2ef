use super::{BinOp, Expr, Func, Node, Var};

impl Expr {
    /// Exact symbolic derivative with respect to `v`.
    ///
    /// Only constant folding is applied to the result. The derivative of
    /// `abs(f)` is `f' * f / abs(f)`, which evaluates to a pole at `f = 0`.
    pub fn differentiate(&self, v: Var) -> Expr {
        if !self.depends_on(v) {
            return Expr::zero();
        }
        match self.node() {
            Node::Num(_) | Node::Const(_) => Expr::zero(),
            Node::Var(w) => {
                if *w == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Neg(a) => -a.differentiate(v),
            Node::Func(f, a) => {
                let da = a.differentiate(v);
                outer_derivative(*f, a, self) * da
            }
            Node::Bin(op, a, b) => {
                let da = a.differentiate(v);
                let db = b.differentiate(v);
                match op {
                    BinOp::Add => da + db,
                    BinOp::Sub => da - db,
                    BinOp::Mul => da * b + a * db,
                    BinOp::Div => {
                        if db.is_zero_literal() {
                            da / b
                        } else {
                            (da * b - a * db) / b.clone().powf(2.0)
                        }
                    }
                    BinOp::Pow => {
                        if db.is_zero_literal() {
                            let lowered = match b.as_num() {
                                Some(n) => a.clone().powf(n - 1.0),
                                None => a.clone().pow(b - 1.0),
                            };
                            b * lowered * da
                        } else if da.is_zero_literal() {
                            self * a.clone().ln() * db
                        } else {
                            self * (db * a.clone().ln() + b * da / a)
                        }
                    }
                }
            }
            Node::Integral { handle, arg } => {
                handle.integrand().substitute(Var::T, arg) * arg.differentiate(v)
            }
            Node::Inverse { map, arg } => {
                arg.differentiate(v) / map.derivative().substitute(Var::T, self)
            }
        }
    }
}

/// `f'(a)` expressed through the node `fa = f(a)` where convenient.
fn outer_derivative(f: Func, a: &Expr, fa: &Expr) -> Expr {
    match f {
        Func::Exp => fa.clone(),
        Func::Ln => 1.0 / a,
        Func::Sqrt => 0.5 / fa,
        Func::Sin => a.clone().cos(),
        Func::Cos => -a.clone().sin(),
        Func::Tan => 1.0 + fa.clone().powf(2.0),
        Func::Sinh => a.clone().cosh(),
        Func::Cosh => a.clone().sinh(),
        Func::Tanh | Func::Coth => 1.0 - fa.clone().powf(2.0),
        Func::Abs => a / fa,
    }
}
