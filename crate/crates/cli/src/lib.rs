//! Benchmark harness, plotting and file plumbing behind the `tilegraph`
//! binary.

pub mod bench;
pub mod plot;
pub mod store;
