//! Second-order jets in `(t, x)`: a value with `∂t`, `∂x` and `∂xx`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

use crate::expr::EvalError;
use crate::special::{jacobi_jet, DS_POLE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet {
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
}

pub type JetResult = Result<Jet, EvalError>;

impl Jet {
    pub const fn constant(u: f64) -> Jet {
        Jet { u, u_t: 0.0, u_x: 0.0, u_xx: 0.0 }
    }

    /// The coordinate `t` as a jet.
    pub const fn time(t: f64) -> Jet {
        Jet { u: t, u_t: 1.0, u_x: 0.0, u_xx: 0.0 }
    }

    /// The coordinate `x` as a jet.
    pub const fn space(x: f64) -> Jet {
        Jet { u: x, u_t: 0.0, u_x: 1.0, u_xx: 0.0 }
    }

    /// `f(self)` given `f`, `f'`, `f''` at `self.u`.
    pub fn compose(self, f0: f64, f1: f64, f2: f64) -> Jet {
        Jet {
            u: f0,
            u_t: f1 * self.u_t,
            u_x: f1 * self.u_x,
            u_xx: f2 * self.u_x * self.u_x + f1 * self.u_xx,
        }
    }

    pub fn scale(self, s: f64) -> Jet {
        Jet { u: s * self.u, u_t: s * self.u_t, u_x: s * self.u_x, u_xx: s * self.u_xx }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.u_t.is_finite() && self.u_x.is_finite() && self.u_xx.is_finite()
    }

    pub fn exp(self) -> Jet {
        let e = self.u.exp();
        self.compose(e, e, e)
    }

    pub fn sin(self) -> Jet {
        let (s, c) = self.u.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Jet {
        let (s, c) = self.u.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn sinh(self) -> Jet {
        let (s, c) = (self.u.sinh(), self.u.cosh());
        self.compose(s, c, s)
    }

    pub fn cosh(self) -> Jet {
        let (s, c) = (self.u.sinh(), self.u.cosh());
        self.compose(c, s, c)
    }

    pub fn tanh(self) -> Jet {
        let th = self.u.tanh();
        let d1 = 1.0 - th * th;
        self.compose(th, d1, -2.0 * th * d1)
    }

    /// `1 / self`, a pole when the value is zero.
    pub fn recip(self) -> JetResult {
        if self.u == 0.0 {
            return Err(EvalError::Pole { node: "1/0".into() });
        }
        let r = 1.0 / self.u;
        finite(self.compose(r, -r * r, 2.0 * r * r * r))
    }

    /// Jacobi `sn`, `cn`, `dn` of this jet.
    pub fn jacobi(self, k: f64) -> (Jet, Jet, Jet) {
        let j = jacobi_jet(self.u, k);
        (
            self.compose(j.sn, j.d1_sn, j.d2_sn),
            self.compose(j.cn, j.d1_cn, j.d2_cn),
            self.compose(j.dn, j.d1_dn, j.d2_dn),
        )
    }

    /// `ds(self, k)`, a pole where `|sn| < 1e-12`.
    pub fn ds(self, k: f64) -> JetResult {
        match jacobi_jet(self.u, k).ds() {
            Some((v, d1, d2)) => finite(self.compose(v, d1, d2)),
            None => Err(EvalError::Pole { node: format!("ds({}, {k})", self.u) }),
        }
    }

    /// `(1 + cn) / sn` of this jet, a pole where `|sn| < 1e-12`.
    pub fn one_plus_cn_over_sn(self, k: f64) -> JetResult {
        let (sn, cn, _) = self.jacobi(k);
        if sn.u.abs() < DS_POLE_THRESHOLD {
            return Err(EvalError::Pole { node: format!("(1 + cn)/sn at {}", self.u) });
        }
        (1.0 + cn) / sn
    }
}

pub(crate) fn finite(j: Jet) -> JetResult {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(EvalError::Pole { node: "non-finite jet".into() })
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { u: self.u + o.u, u_t: self.u_t + o.u_t, u_x: self.u_x + o.u_x, u_xx: self.u_xx + o.u_xx }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { u: self.u - o.u, u_t: self.u_t - o.u_t, u_x: self.u_x - o.u_x, u_xx: self.u_xx - o.u_xx }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            u: self.u * o.u,
            u_t: self.u_t * o.u + self.u * o.u_t,
            u_x: self.u_x * o.u + self.u * o.u_x,
            u_xx: self.u_xx * o.u + 2.0 * self.u_x * o.u_x + self.u * o.u_xx,
        }
    }
}

impl Div for Jet {
    type Output = JetResult;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> JetResult {
        Ok(self * o.recip()?)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet { u: self.u + c, ..self }
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, j: Jet) -> Jet {
        j + self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet { u: self.u - c, ..self }
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, j: Jet) -> Jet {
        -j + self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, j: Jet) -> Jet {
        j.scale(self)
    }
}
