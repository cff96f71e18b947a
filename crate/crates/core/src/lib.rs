//! Schottky groups and infinitely generated (weakly-)Schottky groups built
//! from configurations of paired circles on the Riemann sphere.
//!
//! The crate is organized bottom-up:
//!
//! - [`moebius`]: sphere points, Möbius and anti-Möbius maps, circles, the chordal metric.
//! - [`config`]: oriented circle configurations, infinite schedules and their admissibility checks.
//! - [`pairing`]: synthesis and certification of the side-pairing generators.
//! - [`group`]: reduced words, ping-pong reduction, limit-set clouds and the structural checks.
//! - [`families`]: built-in constructions (classical rank g, an accumulating point, the unit-circle example).
//! - [`cli`]: file formats and the command-line front end used by the `schottky` binary.

pub mod cli;
pub mod config;
pub mod families;
pub mod group;
pub mod moebius;
pub mod pairing;
pub mod tol;

pub use config::{ConfigurationSchedule, OrientedCircle, SchottkyConfiguration};
pub use group::{LimitCloud, ReducedWord};
pub use moebius::{GeneralizedCircle, MoebiusMap, SpherePoint};
