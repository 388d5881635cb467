//! Criterion benchmarks for magspec; see `benches/`.
