//! Core model for power-system transition planning: a retiring thermal
//! fleet, synthetic demand and renewable traces, chronological merit-order
//! dispatch with storage, a capacity build scheduler, and capital/fuel cost
//! comparison between candidate pathways.
//!
//! The crate is `no_std` (with `alloc`) so the model can be embedded
//! anywhere; file formats, configuration and the command line live in the
//! companion `firmplan` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baseline;
pub mod costing;
pub mod demand;
pub mod dispatch;
pub mod fleet;
pub mod planner;
pub mod profiles;

pub(crate) mod math;
pub(crate) mod rng;
