//! Exact lattice arithmetic for K3 surfaces that doubly cover a general
//! Kummer surface.

pub mod arith;
pub mod classifier;
pub mod discform;
pub mod error;
pub mod f2space;
pub mod fibration;
pub mod golden;
pub mod io;
pub mod kummer;
pub mod lattice;
pub mod matrix;
pub mod report;

pub use error::{Error, Result};
