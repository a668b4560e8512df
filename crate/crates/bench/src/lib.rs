//! Criterion benchmarks for the coolgrid pipeline live in `benches/`.
