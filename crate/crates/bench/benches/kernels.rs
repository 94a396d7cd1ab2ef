use std::f64::consts::FRAC_1_SQRT_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nws_core::expr::{parse, zero_test, SampleBox, Var, ZeroTestConfig};
use nws_core::numerics::{mol_solve, MolConfig};
use nws_core::solutions::{constant_solution, family, fixtures};
use nws_core::special::jacobi_jet;
use nws_core::symmetry::{classify_lie, nonclassical_catalog, verify_nonclassical, CaseKind};
use nws_core::{CoefficientTriple, Interval, PdeInstance};

fn expressions(c: &mut Criterion) {
    let src = "3*(2*t+1)^2*exp(-t)*sin(x) + u^3/(1 + t^2)";
    c.bench_function("parse", |b| b.iter(|| parse(black_box(src), &Var::TXU).unwrap()));
    let e = parse(src, &Var::TXU).unwrap();
    c.bench_function("differentiate", |b| b.iter(|| black_box(&e).differentiate(Var::T)));
    let identity = parse("sin(t)^2 + cos(t)^2 - 1 + exp(x + u) - exp(x)*exp(u)", &Var::TXU).unwrap();
    let sample_box = SampleBox::t(0.2, 2.0).with(Var::X, -1.5, 1.5).with(Var::U, 0.3, 2.0);
    let cfg = ZeroTestConfig::default();
    c.bench_function("zero_test", |b| b.iter(|| zero_test(black_box(&identity), &sample_box, &cfg).unwrap()));
}

fn special(c: &mut Criterion) {
    c.bench_function("jacobi_jet", |b| b.iter(|| jacobi_jet(black_box(3.7), black_box(FRAC_1_SQRT_2))));
}

fn symmetry(c: &mut Criterion) {
    let i = Interval::new(0.0, 5.0).unwrap();
    let power = parse("3*(2*t+1)^2", &[Var::T]).unwrap();
    c.bench_function("classify_lie/power", |b| b.iter(|| classify_lie(black_box(&power), i).unwrap()));
    let ops = nonclassical_catalog(&CaseKind::Exponential { mu: 1.0, sigma: 1.0 });
    let mut group = c.benchmark_group("verify_nonclassical");
    for op in &ops {
        group.bench_function(op.name, |b| b.iter(|| verify_nonclassical(&op.field.xi, &op.field.eta, &op.c).unwrap()));
    }
    group.finish();
}

fn residuals(c: &mut Criterion) {
    let mut group = c.benchmark_group("residual_stats");
    for name in ["TW@B", "P2@A", "Z1@F"] {
        let fx = fixtures().into_iter().find(|f| f.name() == name).unwrap();
        let (pde, s, grid) = (fx.pde().unwrap(), fx.solution().unwrap(), fx.grid(41, 81));
        group.bench_function(name, |b| b.iter(|| pde.residual_stats(&s, &grid).unwrap()));
    }
    group.finish();
}

fn method_of_lines(c: &mut Criterion) {
    let t = Interval::new(0.0, 1.0).unwrap();
    let x = Interval::new(-8.0, 8.0).unwrap();
    let p = PdeInstance::new(CoefficientTriple::parse("1", "1", "1", t).unwrap());
    let tw = constant_solution("TW", 1, &family("TW").unwrap().default_params()).unwrap();
    let mut group = c.benchmark_group("mol_solve");
    group.sample_size(10);
    for nx in [50, 100, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(nx), &nx, |b, &nx| {
            b.iter(|| mol_solve(&p, &tw, t, x, &MolConfig::new(nx)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, expressions, special, symmetry, residuals, method_of_lines);
criterion_main!(benches);
