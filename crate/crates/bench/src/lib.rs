//! Benchmarks for the qarrow algorithms; see `benches/`.
