//! Criterion benchmarks for `gradus`; run with `cargo bench -p gradus-bench`.
