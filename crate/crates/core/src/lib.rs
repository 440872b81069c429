//! Link-level analytics and Monte Carlo simulation for Massive-MIMO ground
//! stations serving swarms of single-antenna drones.
//!
//! The crate is split along the physical pipeline:
//!
//! - [`geometry`]: array layouts, drone placement and shell sampling
//! - [`antenna`]: dipole patterns, polarization states and per-link gain factors
//! - [`channel`]: free-space path loss, LoS and Rayleigh channel matrices,
//!   coherence budgets and channel-inversion power control
//! - [`mimo`]: MRC capacity, interference lobes, the ergodic-rate lower bound
//!   and its inversion for the antenna count, coverage range
//! - [`mission`]: camera-driven survey planning and TDD frame budgeting
//! - [`sim`]: the seeded, parallel Monte Carlo engine and figure generators

pub mod antenna;
pub mod channel;
mod error;
pub mod geometry;
pub mod mimo;
pub mod mission;
pub mod sim;
pub mod units;

pub use error::{Error, Result};
