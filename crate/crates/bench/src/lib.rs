//! Criterion benchmarks for the `toric3d` kernels; see `benches/kernels.rs`.
