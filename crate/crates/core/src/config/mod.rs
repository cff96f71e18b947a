//! Configurations of paired circles and their admissibility checks.
//!
//! A finite [`SchottkyConfiguration`] holds oriented circle pairs with their
//! generators and a base point in `Ext(𝔠)⁰`. A [`ConfigurationSchedule`]
//! describes an infinite family by closed formulas plus a diameter bound, and
//! is only ever checked through finite truncations.

mod configuration;
mod oriented;
mod schedule;

use serde::Serialize;
use thiserror::Error;

pub use configuration::{
    check_s3, choose_base_point, locate, orient, CirclePair, CircleRef, Location, PairedCircles, PairingMethod,
    SchottkyConfiguration, ValidationReport, Verdict,
};
pub use oriented::OrientedCircle;
pub use schedule::{check_s1, limit_points_estimate, truncate, Cluster, ConfigurationSchedule, NEpsilon, S1Outcome};

use crate::moebius::{MoebiusError, SpherePoint};
use crate::pairing::{PairingCertificate, PairingError};

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConfigError {
    #[error("circles {first} and {second} are not disjoint (chordal gap {gap:e})")]
    Disjointness { first: CircleRef, second: CircleRef, gap: f64 },
    #[error("circle {separator} separates circle {first} from circle {second}")]
    S2 { separator: CircleRef, first: CircleRef, second: CircleRef },
    #[error("pairing {index} failed certification")]
    Pairing { index: usize, certificate: Box<PairingCertificate> },
    #[error("pairing {index} could not be synthesized: {message}")]
    Synthesis { index: usize, message: String },
    #[error("base point {point} is not in the interior of Ext")]
    BasePoint { point: SpherePoint },
    #[error("no base point found in the interior of Ext")]
    NoBasePoint,
    #[error("interior witness lies on its circle")]
    WitnessOnCircle,
    #[error("invalid circle: {0}")]
    Circle(#[serde(skip)] MoebiusError),
    #[error("configuration needs at least one pair")]
    Empty,
    #[error("circle at index {index} has chordal diameter {diameter:e} above its bound {bound:e}")]
    BoundViolated { index: usize, diameter: f64, bound: f64 },
    #[error("bound function increases between indices {index} and {}", index + 1)]
    BoundNotMonotone { index: usize },
    #[error("level {level} is outside the schedule's support of {support} pairs")]
    BadLevel { level: usize, support: usize },
    #[error("bad schedule parameters: {0}")]
    BadParameters(String),
}

impl ConfigError {
    pub(crate) fn synthesis(index: usize, err: PairingError) -> Self {
        ConfigError::Synthesis { index, message: err.to_string() }
    }
}
