//! Points of the Riemann sphere, Möbius and anti-Möbius maps, and
//! generalized circles in Hermitian form.

mod circle;
mod map;
mod point;
mod precise;

use num_complex::Complex64;
use thiserror::Error;

pub use circle::{GeneralizedCircle, Relative, SphericalCap};
pub use map::{AntiMoebiusMap, Classification, FixedPoints, MoebiusMap, SphereMap};
pub use point::{chordal_distance, SpherePoint};
pub use precise::PrecisePoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoebiusError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("squared trace {trace_squared} is within tolerance of 4 but not equal to it")]
    NearBoundary { trace_squared: Complex64 },
    #[error("the identity has no isolated fixed points")]
    IdentityInput,
    #[error("degenerate circle")]
    DegenerateCircle,
}

/// `f ∘ g`
pub fn compose(f: &MoebiusMap, g: &MoebiusMap) -> MoebiusMap {
    f.compose(g)
}

pub fn apply<M: SphereMap>(f: &M, p: SpherePoint) -> SpherePoint {
    f.apply(p)
}

pub fn classify(f: &MoebiusMap) -> Result<Classification, MoebiusError> {
    f.classify()
}

pub fn fixed_points(f: &MoebiusMap) -> Result<FixedPoints, MoebiusError> {
    f.fixed_points()
}

pub fn reflect(c: &GeneralizedCircle) -> AntiMoebiusMap {
    c.reflection()
}

pub fn map_circle(f: &MoebiusMap, c: &GeneralizedCircle) -> GeneralizedCircle {
    c.transform(f)
}

pub fn chordal_diameter(c: &GeneralizedCircle) -> f64 {
    c.chordal_diameter()
}
