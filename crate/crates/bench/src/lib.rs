//! Benchmark harness for koszul-core; see `benches/`.
