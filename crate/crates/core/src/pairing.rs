//! Side-pairing transformations `A` with `A(Ext(C)) = Int(C')`.
//!
//! Two constructions are provided: the reflection recipe for equal-radius
//! circles (reflect in `C`, then in the perpendicular bisector of the
//! centers), and a general chart-based pairing for any two disjoint disks.
//! Either way the result can be checked with [`verify_pairing`].

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::config::OrientedCircle;
use crate::moebius::{GeneralizedCircle, MoebiusMap, SphereMap, SpherePoint};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairingError {
    #[error("circles have radii {0} and {1}; the reflection recipe needs equal radii")]
    UnequalRadii(f64, f64),
    #[error("circles are not disjoint (chordal gap {gap:e})")]
    NotDisjoint { gap: f64 },
    #[error("interiors are nested or overlap")]
    NestedInput,
    #[error("the reflection recipe needs Euclidean circles, not lines")]
    NotEuclidean,
    #[error("map fixes infinity, so it has no isometric circle")]
    FixesInfinity,
}

/// Outcome of checking `A(Ext(C)) = Int(C')` numerically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingCertificate {
    pub map: MoebiusMap,
    /// Max chordal deviation of `A(C)` from `C'` over the boundary samples.
    pub boundary_error: f64,
    /// `A` sends an `Ext(C)` probe into `Int(C')`.
    pub forward_side: bool,
    /// `A⁻¹` sends an `Ext(C')` probe into `Int(C)`.
    pub inverse_side: bool,
    pub failing_probe: Option<SpherePoint>,
    pub valid: bool,
}

fn check_disjoint_interiors(c: &OrientedCircle, c_prime: &OrientedCircle) -> Result<(), PairingError> {
    let gap = c.circle().gap(c_prime.circle());
    if gap <= tol::DISJOINTNESS {
        return Err(PairingError::NotDisjoint { gap });
    }
    if c.interior_cap().separation(&c_prime.interior_cap()) <= 0.0 {
        return Err(PairingError::NestedInput);
    }
    Ok(())
}

/// `η ∘ τ` where `τ` reflects in `C` and `η` reflects in the perpendicular
/// bisector of the segment joining the centers.
pub fn synthesize_reflection(c: &OrientedCircle, c_prime: &OrientedCircle) -> Result<MoebiusMap, PairingError> {
    let (c1, r1) = c.circle().center_radius().ok_or(PairingError::NotEuclidean)?;
    let (c2, r2) = c_prime.circle().center_radius().ok_or(PairingError::NotEuclidean)?;
    if (r1 - r2).abs() > tol::GEOMETRIC * r1.max(r2).max(1.0) {
        return Err(PairingError::UnequalRadii(r1, r2));
    }
    check_disjoint_interiors(c, c_prime)?;
    let tau = c.circle().reflection();
    let mid = (c1 + c2) * 0.5;
    let bisector = GeneralizedCircle::line(mid, c2 - c1).map_err(|_| PairingError::NestedInput)?;
    Ok(bisector.reflection().compose(&tau))
}

/// A Möbius map taking the unit disk onto `Int(C)`: a scaling to the right
/// angular size followed by a rotation of the sphere onto the interior pole.
pub fn disk_chart(c: &OrientedCircle) -> MoebiusMap {
    let cap = c.interior_cap();
    let k = (cap.angle / 2.0).tan();
    let scale = MoebiusMap::scaling(Complex64::new(k, 0.0)).expect("positive scale");
    MoebiusMap::rotation_from_origin(cap.pole_point()).compose(&scale)
}

/// `m' ∘ R_twist ∘ J ∘ m⁻¹` with `m`, `m'` the disk charts of `C`, `C'`,
/// `J(z) = 1/z` and `R_twist(z) = e^{i twist} z`.
pub fn synthesize_general(c: &OrientedCircle, c_prime: &OrientedCircle, twist: f64) -> Result<MoebiusMap, PairingError> {
    check_disjoint_interiors(c, c_prime)?;
    let m = disk_chart(c);
    let m_prime = disk_chart(c_prime);
    let rot = MoebiusMap::scaling(Complex64::from_polar(1.0, twist)).expect("unit rotation");
    Ok(m_prime.compose(&rot).compose(&MoebiusMap::inversion()).compose(&m.inverse()))
}

pub fn verify_pairing(a: &MoebiusMap, c: &OrientedCircle, c_prime: &OrientedCircle) -> PairingCertificate {
    let boundary_error = c
        .circle()
        .sample(tol::PAIRING_SAMPLES)
        .into_iter()
        .map(|p| c_prime.circle().distance_to(&a.apply(p)))
        .fold(0.0, f64::max);
    let probe = c.exterior_probe();
    let image = a.apply(probe);
    let forward_side = c_prime.interior_contains(&image) && !c_prime.on_circle(&image);
    let probe_prime = c_prime.exterior_probe();
    let back = a.inverse().apply(probe_prime);
    let inverse_side = c.interior_contains(&back) && !c.on_circle(&back);
    let failing_probe = if !forward_side {
        Some(probe)
    } else if !inverse_side {
        Some(probe_prime)
    } else {
        None
    };
    PairingCertificate {
        map: *a,
        boundary_error,
        forward_side,
        inverse_side,
        failing_probe,
        valid: boundary_error < tol::GEOMETRIC && forward_side && inverse_side,
    }
}

/// The circle `|c z + d| = 1` on which `A` acts as a Euclidean isometry.
pub fn isometric_circle(a: &MoebiusMap) -> Result<GeneralizedCircle, PairingError> {
    let (c, d) = (a.c(), a.d());
    if c.norm() <= 1e-14 {
        return Err(PairingError::FixesInfinity);
    }
    GeneralizedCircle::from_center_radius(-d / c, 1.0 / c.norm()).map_err(|_| PairingError::FixesInfinity)
}
