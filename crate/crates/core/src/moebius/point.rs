use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::tol;

/// A point of the Riemann sphere. The point at infinity is a value of its
/// own, never a large float.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpherePoint {
    Finite(Complex64),
    #[serde(with = "infinity_tag")]
    Infinity,
}

mod infinity_tag {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let tag = String::deserialize(d)?;
        if tag == "inf" {
            Ok(())
        } else {
            Err(serde::de::Error::custom("expected \"inf\""))
        }
    }
}

impl SpherePoint {
    pub const ZERO: SpherePoint = SpherePoint::Finite(Complex64 { re: 0.0, im: 0.0 });

    /// Builds a point from a complex number; non-finite input maps to infinity.
    pub fn new(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Self {
        Self::new(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Homogeneous coordinates `(z, 1)` or `(1, 0)`, scaled to unit length.
    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        match *self {
            SpherePoint::Infinity => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            SpherePoint::Finite(z) => {
                let r = z.norm();
                if r <= 1.0 {
                    let s = 1.0 / r.hypot(1.0);
                    (z * s, Complex64::new(s, 0.0))
                } else {
                    // (1, 1/z) scaled, avoids overflow for huge z
                    let w = z.inv();
                    let s = 1.0 / w.norm().hypot(1.0);
                    (Complex64::new(s, 0.0), w * s)
                }
            }
        }
    }

    /// Inverse stereographic projection onto the unit sphere; 0 is the south
    /// pole and infinity the north pole.
    pub fn to_unit_sphere(&self) -> [f64; 3] {
        match *self {
            SpherePoint::Infinity => [0.0, 0.0, 1.0],
            SpherePoint::Finite(z) => {
                let r2 = z.norm_sqr();
                if r2 <= 1.0 {
                    let den = 1.0 + r2;
                    [2.0 * z.re / den, 2.0 * z.im / den, (r2 - 1.0) / den]
                } else {
                    let w = z.inv();
                    let w2 = w.norm_sqr();
                    let den = 1.0 + w2;
                    // 1/z = conj(z)/|z|^2, so Re z/|z|^2 = Re w and Im z/|z|^2 = -Im w
                    [2.0 * w.re / den, -2.0 * w.im / den, (1.0 - w2) / den]
                }
            }
        }
    }

    /// Stereographic projection from the unit sphere. The input need not be
    /// exactly unit length.
    pub fn from_unit_sphere(x: [f64; 3]) -> Self {
        let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let (x0, x1, x2) = (x[0] / norm, x[1] / norm, x[2] / norm);
        if x2 <= 0.0 {
            // z = (x0 + i x1) / (1 - x2), well conditioned on the southern half
            SpherePoint::Finite(Complex64::new(x0, x1) / (1.0 - x2))
        } else {
            // 1/z = (x0 - i x1) / (1 + x2)
            let w = Complex64::new(x0, -x1) / (1.0 + x2);
            if w.norm() == 0.0 {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite(w.inv())
            }
        }
    }

    /// The image under `z -> 1/z`, a rotation of the sphere.
    pub fn invert(&self) -> Self {
        match *self {
            SpherePoint::Infinity => SpherePoint::ZERO,
            SpherePoint::Finite(z) if z.norm() == 0.0 => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::new(z.inv()),
        }
    }

    /// Chordal distance on the Riemann sphere, with values in `[0, 2]`.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        chordal_distance(*self, *other)
    }

    /// Equality up to `tol::GEOMETRIC` chordal distance.
    pub fn approx_eq(&self, other: &SpherePoint) -> bool {
        self.chordal_distance(other) <= tol::GEOMETRIC
    }
}

/// Chordal equality within `tol::GEOMETRIC`; symmetric but not transitive.
impl PartialEq for SpherePoint {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::new(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// `2|p-q| / sqrt((1+|p|^2)(1+|q|^2))`, with `d(z, inf) = 2 / sqrt(1+|z|^2)`.
pub fn chordal_distance(p: SpherePoint, q: SpherePoint) -> f64 {
    match (p, q) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Infinity, SpherePoint::Finite(z)) | (SpherePoint::Finite(z), SpherePoint::Infinity) => {
            2.0 / z.norm().hypot(1.0)
        }
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
            if a.norm() > 1.0 && b.norm() > 1.0 {
                // z -> 1/z is an isometry; keeps both arguments small
                let (a, b) = (a.inv(), b.inv());
                2.0 * (a - b).norm() / (a.norm().hypot(1.0) * b.norm().hypot(1.0))
            } else {
                let d = 2.0 * ((a - b).norm() / a.norm().hypot(1.0)) / b.norm().hypot(1.0);
                d.min(2.0)
            }
        }
    }
}

/// Angle between two unit vectors, accurate for nearly parallel inputs.
pub(crate) fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let cos = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    sin.atan2(cos)
}
