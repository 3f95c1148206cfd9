//! Criterion benchmarks for the distillation core live in `benches/`.
