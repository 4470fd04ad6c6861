//! Criterion benchmarks for `ernkit`; see `benches/`.
