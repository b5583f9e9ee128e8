//! Criterion benchmarks for the geometry kernels and estimators live in `benches/`.
