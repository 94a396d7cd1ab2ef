use nws_core::solutions::fixtures;

#[test]
fn every_fixture_window_is_pole_free_with_small_residual() {
    let mut failures = Vec::new();
    for f in fixtures() {
        let s = f.solution().unwrap();
        let rep = f.pde().unwrap().residual_stats(&s, &f.grid(41, 81)).unwrap();
        eprintln!("{:8} max {:.3e} rms {:.3e} poles {}", f.name(), rep.max_abs, rep.rms, rep.n_poles);
        if rep.max_abs > 1e-8 || rep.n_poles > 0 {
            failures.push(f.name());
        }
    }
    assert!(failures.is_empty(), "{failures:?}");
}
