//! Benchmark host crate; see `benches/kernels.rs`.
