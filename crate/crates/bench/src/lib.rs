//! Criterion benchmarks for sheaflab; see `benches/`.
