//! Shared data builders for the criterion benchmarks.
