//! Placeholder library so the benchmark targets have a crate to live in; all
//! content is in `benches/`.
