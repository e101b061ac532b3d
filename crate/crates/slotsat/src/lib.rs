//! File formats, a wall clock and the benchmark harness for
//! [`slotsat_core`]. The `slotsat` binary wraps these behind a CLI.

pub mod bench;
pub mod clock;
pub mod dimacs;
pub mod instance_io;
pub mod result_json;

pub use clock::StdClock;
