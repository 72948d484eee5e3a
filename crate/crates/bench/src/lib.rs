//! Criterion benchmarks for `riccati-core`. See `benches/kernels.rs`.
