//! Criterion benchmarks for the porism workspace; see `benches/porism.rs`.
