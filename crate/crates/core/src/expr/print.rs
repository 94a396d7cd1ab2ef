use std::fmt::{self, Write};

use super::{BinOp, Constant, Expr, Node};

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Bin(BinOp::Add | BinOp::Sub, ..) => ADD,
        Node::Bin(BinOp::Mul | BinOp::Div, ..) => MUL,
        Node::Neg(_) => NEG,
        Node::Bin(BinOp::Pow, ..) => POW,
        _ => ATOM,
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v.is_sign_negative() {
        f.write_str("(-")?;
        write_num(f, -v)?;
        return f.write_char(')');
    }
    if v.fract() == 0.0 && v < 1e15 {
        write!(f, "{}", v as i64)
    } else {
        write!(f, "{v:?}")
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimal parentheses that reproduce the exact tree when parsed.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Num(v) => write_num(f, *v),
            Node::Const(Constant::Pi) => f.write_str("pi"),
            Node::Const(Constant::E) => f.write_str("e"),
            Node::Var(v) => f.write_str(v.name()),
            Node::Neg(a) => {
                f.write_char('-')?;
                write_child(f, a, POW)
            }
            Node::Func(func, a) => write!(f, "{}({a})", func.name()),
            Node::Bin(op, a, b) => {
                let (sym, lhs, rhs) = match op {
                    BinOp::Add => (" + ", ADD, MUL),
                    BinOp::Sub => (" - ", ADD, MUL),
                    BinOp::Mul => ("*", MUL, NEG),
                    BinOp::Div => ("/", MUL, NEG),
                    BinOp::Pow => ("^", ATOM, NEG),
                };
                write_child(f, a, lhs)?;
                f.write_str(sym)?;
                write_child(f, b, rhs)
            }
            Node::Integral { handle, arg } => {
                write!(f, "integral({}, {:?})({arg})", handle.integrand(), handle.t_ref())
            }
            Node::Inverse { map, arg } => write!(f, "inverse({})({arg})", map.function()),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, EvalPoint, Expr, Var};

    fn roundtrip(s: &str) -> String {
        let e = parse(s, &Var::TXU).unwrap();
        let printed = e.to_text();
        let again = parse(&printed, &Var::TXU).unwrap();
        assert_eq!(again.to_text(), printed, "unstable print for {s}");
        printed
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(roundtrip("(t^2)*(exp(t))"), "t^2*exp(t)");
        assert_eq!(roundtrip("t-(x-u)"), "t - (x - u)");
        assert_eq!(roundtrip("(2^3)^2"), "(2^3)^2");
        assert_eq!(roundtrip("2^3^2"), "2^3^2");
        assert_eq!(roundtrip("-(t+1)"), "-(t + 1)");
        assert_eq!(roundtrip("(-t)^2"), "(-t)^2");
        assert_eq!(roundtrip("t/(x*u)"), "t/(x*u)");
        assert_eq!(roundtrip("1.5e-13*t"), "1.5e-13*t");
    }

    #[test]
    fn negative_literals_are_wrapped() {
        let e = Expr::num(-3.0) * Expr::t();
        assert_eq!(e.to_text(), "(-3)*t");
        let back = parse(&e.to_text(), &Var::TXU).unwrap();
        assert_eq!(back.eval(&EvalPoint::t(2.0)).unwrap(), -6.0);
    }
}
