//! Design-space exploration of approximate image-processing accelerators
//! built from libraries of approximate arithmetic circuits.

pub mod accel;
pub mod bits;
pub mod circgen;
pub mod error;
pub mod explore;
pub mod library;
pub mod netlist;
pub mod quality;
pub mod surrogate;
pub mod synth;
pub mod truth;

pub use error::{Error, Result};
