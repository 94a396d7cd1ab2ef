//! Benchmark harness for the numerical kernels; see `benches/kernels.rs`.
