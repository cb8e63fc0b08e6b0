//! Benchmarks for evaluation, iteration and limit extraction; see `benches/iteration.rs`.
