//! Reducible test instances and pole-free windows for every family.

use serde::Serialize;

use super::{family, instantiate, FamilyParams};
use crate::equivalence::reducibility_lambda;
use crate::error::Result;
use crate::model::{CoefficientTriple, Grid, Interval, PdeInstance, Solution};

/// Zero-test tolerance used when fixtures evaluate the criterion.
const CRITERION_TOL: f64 = 1e-9;

/// A reducible coefficient triple with its expected `λ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Instance {
    pub name: &'static str,
    pub a: &'static str,
    pub b: &'static str,
    pub c: &'static str,
    pub lambda: f64,
}

pub static INSTANCES: [Instance; 7] = [
    Instance { name: "A", a: "1", b: "1/2", c: "exp(t)", lambda: 1.0 },
    Instance { name: "B", a: "1", b: "1-1/t", c: "t^2", lambda: 1.0 },
    Instance { name: "C", a: "1", b: "0", c: "exp(t)", lambda: 0.5 },
    Instance { name: "V", a: "exp(t)", b: "2*exp(2*t)", c: "3*exp(2*t)", lambda: 2.0 },
    Instance { name: "D", a: "1", b: "-1/2", c: "exp(-t)", lambda: -1.0 },
    Instance { name: "E", a: "1", b: "0", c: "1", lambda: 0.0 },
    Instance { name: "F", a: "1", b: "-1/t", c: "t^2", lambda: 0.0 },
];

fn instance(name: &str) -> &'static Instance {
    INSTANCES.iter().find(|i| i.name == name).expect("known instance")
}

/// A family on an instance, restricted to a window free of predicted poles.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fixture {
    pub family: &'static str,
    pub instance: &'static Instance,
    pub t: (f64, f64),
    pub x: (f64, f64),
    /// Overrides of the family's default parameters, `k=v,…`.
    pub params: &'static str,
}

type Row = (&'static str, &'static str, (f64, f64), (f64, f64), &'static str);

const FIXTURE_TABLE: [Row; 25] = [
    ("TW", "A", (0.0, 2.0), (-6.0, 6.0), ""),
    ("TW", "B", (0.5, 3.0), (-6.0, 6.0), ""),
    ("TW", "C", (0.0, 2.0), (-6.0, 6.0), ""),
    ("TW", "V", (0.0, 1.0), (-6.0, 6.0), ""),
    ("P1", "A", (0.0, 2.0), (-4.0, 4.0), ""),
    ("P1", "B", (0.5, 3.0), (-4.0, 4.0), "C2=1"),
    ("P2", "A", (0.0, 1.0), (-1.0, 1.0), ""),
    ("P3", "A", (0.0, 1.0), (-0.2, 1.0), ""),
    ("P4", "A", (0.0, 1.0), (-1.5, 1.5), ""),
    ("P5", "A", (0.0, 1.0), (-0.2, 1.0), ""),
    ("N1", "D", (0.0, 1.0), (-2.5, 2.5), ""),
    ("N2", "D", (0.0, 1.0), (-1.8, 1.8), ""),
    ("N3", "D", (0.0, 1.0), (-0.6, 3.0), ""),
    ("Z1", "E", (0.0, 0.2), (1.2, 1.6), ""),
    ("Z1", "F", (0.5, 0.7), (1.2, 1.6), ""),
    ("Z2", "E", (0.0, 0.2), (1.2, 1.6), ""),
    ("Z2", "F", (0.5, 0.7), (1.2, 1.6), ""),
    ("Z3", "E", (0.0, 0.4), (1.2, 4.0), ""),
    ("Z3", "F", (0.5, 3.0), (2.8, 6.0), ""),
    ("Z4", "E", (0.0, 1.0), (0.5, 4.0), ""),
    ("Z4", "F", (0.5, 3.0), (0.5, 4.0), ""),
    ("Z5", "E", (0.0, 1.0), (0.3, 3.4), ""),
    ("Z5", "F", (0.5, 3.0), (0.3, 3.4), ""),
    ("Z6", "E", (0.0, 1.0), (0.3, 3.4), ""),
    ("Z6", "F", (0.5, 3.0), (0.3, 3.4), ""),
];

/// All fixtures, ordered by family as in the catalogue.
pub fn fixtures() -> Vec<Fixture> {
    FIXTURE_TABLE
        .iter()
        .map(|&(family, inst, t, x, params)| Fixture { family, instance: instance(inst), t, x, params })
        .collect()
}

impl Fixture {
    pub fn name(&self) -> String {
        format!("{}@{}", self.family, self.instance.name)
    }

    pub fn t_interval(&self) -> Interval {
        Interval::new(self.t.0, self.t.1).expect("fixture interval")
    }

    pub fn x_interval(&self) -> Interval {
        Interval::new(self.x.0, self.x.1).expect("fixture window")
    }

    pub fn triple(&self) -> Result<CoefficientTriple> {
        let i = self.instance;
        CoefficientTriple::parse(i.a, i.b, i.c, self.t_interval())
    }

    pub fn pde(&self) -> Result<PdeInstance> {
        Ok(PdeInstance::new(self.triple()?))
    }

    pub fn params(&self) -> Result<FamilyParams> {
        family(self.family)?.default_params().apply_overrides(self.params)
    }

    /// The instantiated solution, optionally negated.
    pub fn solution_with(&self, negate: bool) -> Result<Solution> {
        let c = self.triple()?;
        let r = reducibility_lambda(&c, CRITERION_TOL)?;
        let mut p = self.params()?;
        p.negate = negate;
        instantiate(self.family, &c, &r, &p)
    }

    pub fn solution(&self) -> Result<Solution> {
        self.solution_with(false)
    }

    pub fn grid(&self, nt: usize, nx: usize) -> Grid {
        Grid::new(self.t_interval(), nt, self.x_interval(), nx)
    }
}
