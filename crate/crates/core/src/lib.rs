//! Composite pulse sequences that rotate a two-state system to a chosen
//! transition probability while cancelling pulse-area errors to high order.
//!
//! Pulse areas and phases are carried in units of π throughout. A pulse with
//! nominal area `A` really delivers `A·(1 + ε)`, with the same relative error
//! ε for every pulse of a sequence.
//!
//! - [`su2`]: propagators, sequence composition and power series in ε.
//! - [`families`]: analytic sequence families and reference sequences.
//! - [`solver`]: numerical phase derivation and error-order certification.
//! - [`analysis`]: excitation profiles, robustness windows, comparisons.
//! - [`tables`]: published phase tables and their regeneration checks.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod families;
pub mod solver;
pub mod su2;
pub mod tables;

pub use error::{Error, Result};
pub use su2::{CompositeSequence, Propagator, Pulse};
