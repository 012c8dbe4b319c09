//! Criterion benchmarks for `ctrw-core`; see `benches/`.
