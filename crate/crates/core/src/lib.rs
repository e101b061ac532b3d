//! Solver stack for discrete slot-based facility layout.
//!
//! Everything here is `no_std` (with `alloc`): the SAT kernel, the layout
//! model, CNF encodings, the seeded instance generator and the
//! branch-and-bound optimizer. File formats, clocks and the benchmark
//! driver live in the `slotsat` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clock;
pub mod rng;
pub mod sat;
pub mod layout;
pub mod encode;
pub mod generator;
pub mod optimize;
