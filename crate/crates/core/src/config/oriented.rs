use num_complex::Complex64;
use serde::Serialize;

use super::ConfigError;
use crate::moebius::{GeneralizedCircle, MoebiusMap, SphereMap, SpherePoint, SphericalCap};
use crate::tol;

/// A circle together with a choice of interior.
///
/// The stored circle is signed so that its negative side is `Int(C)`;
/// `interior_witness` is a point declared to lie there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrientedCircle {
    circle: GeneralizedCircle,
    interior_witness: SpherePoint,
}

impl OrientedCircle {
    pub fn new(circle: GeneralizedCircle, interior_witness: SpherePoint) -> Result<Self, ConfigError> {
        if circle.distance_to(&interior_witness) <= tol::GEOMETRIC.min(1e-3 * circle.chordal_diameter()) {
            return Err(ConfigError::WitnessOnCircle);
        }
        let cap = circle.cap();
        let circle = if cap.angle_to(&interior_witness) < cap.angle { circle } else { circle.flipped() };
        Ok(Self { circle, interior_witness })
    }

    /// Circle whose interior is its negative side, witnessed by the cap pole.
    pub fn from_negative_side(circle: GeneralizedCircle) -> Self {
        let interior_witness = circle.cap().pole_point();
        Self { circle, interior_witness }
    }

    /// The bounded disk `|z - center| < radius` as interior.
    pub fn disk(center: Complex64, radius: f64) -> Result<Self, ConfigError> {
        let circle = GeneralizedCircle::from_center_radius(center, radius).map_err(ConfigError::Circle)?;
        Ok(Self::from_negative_side(circle))
    }

    /// The complement of the closed disk `|z - center| <= radius` as interior.
    pub fn disk_complement(center: Complex64, radius: f64) -> Result<Self, ConfigError> {
        let circle = GeneralizedCircle::from_center_radius(center, radius).map_err(ConfigError::Circle)?;
        Ok(Self::from_negative_side(circle.flipped()))
    }

    pub fn circle(&self) -> &GeneralizedCircle {
        &self.circle
    }

    pub fn interior_witness(&self) -> SpherePoint {
        self.interior_witness
    }

    pub fn interior_cap(&self) -> SphericalCap {
        self.circle.cap()
    }

    /// The same circle with Int and Ext exchanged.
    pub fn reversed(&self) -> Self {
        Self::from_negative_side(self.circle.flipped())
    }

    /// A point deep inside `Ext(C)`: the antipode of the interior pole.
    pub fn exterior_probe(&self) -> SpherePoint {
        self.interior_cap().complement().pole_point()
    }

    /// Strictly inside the open disk `Int(C)` (boundary tolerance not applied).
    pub fn interior_contains(&self, p: &SpherePoint) -> bool {
        let cap = self.interior_cap();
        cap.angle_to(p) < cap.angle
    }

    /// Within `tol::GEOMETRIC` of the circle, tightened to a thousandth of the
    /// diameter for circles so small that the fixed band would swallow them.
    pub fn on_circle(&self, p: &SpherePoint) -> bool {
        self.circle.distance_to(p) <= self.boundary_tolerance()
    }

    pub fn boundary_tolerance(&self) -> f64 {
        tol::GEOMETRIC.min(1e-3 * self.circle.chordal_diameter())
    }

    pub fn transform(&self, f: &MoebiusMap) -> Self {
        Self { circle: self.circle.transform(f), interior_witness: f.apply(self.interior_witness) }
    }
}
