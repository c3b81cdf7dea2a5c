//! Support library for the `unidisc` binary: matrix file ingestion and
//! deterministic report rendering. Kept as a library so integration tests
//! drive the exact code paths the binary uses.

pub mod io;
pub mod report;
