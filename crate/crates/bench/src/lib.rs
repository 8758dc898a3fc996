//! Criterion benchmarks for the prover live in `benches/`.
