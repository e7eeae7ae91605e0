//! Exact construction and machine verification of a two-loop resistor network
//! whose response matrix is shared by exactly three conductivity assignments.
//!
//! Everything is computed over the rationals: gadget population, arm
//! propagation along both loops, the loop-conservation cubic with its Sturm
//! root count, and the response matrices of the three populated networks.

pub mod cactus;
pub mod cli;
pub mod detgame;
pub mod exact;
pub mod gadgets;
pub mod network;
pub mod propagation;
pub mod response;

pub use exact::{q, Rational};
