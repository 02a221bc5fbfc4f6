//! Benchmark-only crate; see `benches/registration.rs`.
