//! Benchmarks for `charplab-core`; see `benches/`.
