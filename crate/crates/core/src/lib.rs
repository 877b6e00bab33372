//! Evolutionarily stable cluster sizes for densely deployed machine-type
//! devices.
//!
//! Devices in a Poisson field group into clusters; members send their
//! readings to a head over short device-to-device links and the head relays
//! the correlated, partly redundant data over one cellular uplink. Each
//! cluster size is a strategy of a population game whose utility is the
//! negated average transmit power per device. The crate provides
//!
//! * link budgets and entropy bookkeeping ([`radio`]),
//! * point processes, distance laws and interference ([`geometry`]),
//! * the game, replicator dynamics and stability diagnostics ([`game`]),
//! * baseline comparisons ([`metrics`]) and oracle checks ([`validation`]),
//! * configuration files and the artifact-writing drivers behind the
//!   `evoclust` binary ([`config`], [`experiment`]).

pub mod config;
pub mod error;
pub mod experiment;
pub mod game;
pub mod geometry;
pub mod metrics;
pub mod numerics;
pub mod plot;
pub mod radio;
pub mod rng;
pub mod validation;

pub use error::{Error, Result};
