use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::map::{AntiMoebiusMap, MoebiusMap};
use super::point::{angle_between, SpherePoint};
use super::MoebiusError;

/// A circle or line `A|z|^2 + B z + conj(B) conj(z) + D = 0`.
///
/// Coefficients are scaled by a positive factor so that `max(|A|,|B|,|D|) = 1`;
/// the sign is kept, and `{form < 0}` is the circle's *negative side*.
/// The discriminant `|B|^2 - A D` is carried alongside the coefficients
/// because it is invariant under determinant-one transport and would
/// otherwise be lost to cancellation for small circles far from 0 and
/// infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeneralizedCircle {
    a: f64,
    b: Complex64,
    d: f64,
    disc: f64,
}

/// The negative side of a circle viewed on the unit sphere: all points within
/// angle `angle` of `pole`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalCap {
    pub pole: [f64; 3],
    pub angle: f64,
}

impl SphericalCap {
    pub fn angle_to(&self, p: &SpherePoint) -> f64 {
        angle_between(self.pole, p.to_unit_sphere())
    }

    pub fn pole_point(&self) -> SpherePoint {
        SpherePoint::from_unit_sphere(self.pole)
    }

    /// The opposite cap, bounded by the same circle.
    pub fn complement(&self) -> SphericalCap {
        SphericalCap { pole: self.pole.map(|x| -x), angle: PI - self.angle }
    }

    /// Chordal diameter of the closed cap (2 once it holds a pair of antipodes).
    pub fn diameter(&self) -> f64 {
        if self.angle >= PI / 2.0 {
            2.0
        } else {
            2.0 * self.angle.sin()
        }
    }

    /// Signed angular margin by which `other` sits inside `self`; positive
    /// means strict containment.
    pub fn containment_margin(&self, other: &SphericalCap) -> f64 {
        self.angle - angle_between(self.pole, other.pole) - other.angle
    }

    /// Signed angular gap between the two caps; positive means disjoint.
    pub fn separation(&self, other: &SphericalCap) -> f64 {
        angle_between(self.pole, other.pole) - self.angle - other.angle
    }
}

/// Where a circle lies relative to the negative side of another.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relative {
    /// Entirely on the negative side, with the angular gap to the boundary.
    Inside(f64),
    /// Entirely on the positive side, with the angular gap to the boundary.
    Outside(f64),
    Crossing,
}

fn chord(angle: f64) -> f64 {
    2.0 * (angle.abs() / 2.0).sin()
}

impl GeneralizedCircle {
    fn normalized(a: f64, b: Complex64, d: f64, disc: f64) -> Self {
        let s = a.abs().max(b.norm()).max(d.abs());
        Self { a: a / s, b: b / s, d: d / s, disc: disc / (s * s) }
    }

    /// `|z - center| = radius`, negative side = the bounded disk.
    pub fn from_center_radius(center: Complex64, radius: f64) -> Result<Self, MoebiusError> {
        if !(radius > 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()) {
            return Err(MoebiusError::DegenerateCircle);
        }
        Ok(Self::normalized(1.0, -center.conj(), center.norm_sqr() - radius * radius, radius * radius))
    }

    /// The line through `point` with the given normal; the negative side is
    /// the half-plane the normal points away from.
    pub fn line(point: Complex64, normal: Complex64) -> Result<Self, MoebiusError> {
        if normal.norm() == 0.0 || !normal.re.is_finite() || !normal.im.is_finite() {
            return Err(MoebiusError::DegenerateCircle);
        }
        let n = normal / normal.norm();
        // Re(conj(n) (z - p)) = 0
        let b = n.conj() * 0.5;
        let d = -(n.conj() * point).re;
        if !d.is_finite() {
            return Err(MoebiusError::DegenerateCircle);
        }
        Ok(Self::normalized(0.0, b, d, b.norm_sqr()))
    }

    /// Raw coefficients; requires `|B|^2 - A D > 0`.
    pub fn from_coefficients(a: f64, b: Complex64, d: f64) -> Result<Self, MoebiusError> {
        let disc = b.norm_sqr() - a * d;
        if !(disc > 0.0 && disc.is_finite()) {
            return Err(MoebiusError::DegenerateCircle);
        }
        Ok(Self::normalized(a, b, d, disc))
    }

    pub fn unit() -> Self {
        Self::normalized(1.0, Complex64::new(0.0, 0.0), -1.0, 1.0)
    }

    pub fn coefficients(&self) -> (f64, Complex64, f64) {
        (self.a, self.b, self.d)
    }

    pub fn discriminant(&self) -> f64 {
        self.disc
    }

    pub fn is_line(&self) -> bool {
        self.a == 0.0
    }

    /// Same circle with the sides swapped.
    pub fn flipped(&self) -> Self {
        Self { a: -self.a, b: -self.b, d: -self.d, disc: self.disc }
    }

    /// Center and radius, `None` for lines.
    pub fn center_radius(&self) -> Option<(Complex64, f64)> {
        if self.a == 0.0 {
            return None;
        }
        Some((-self.b.conj() / self.a, self.disc.sqrt() / self.a.abs()))
    }

    /// Form value at normalized homogeneous coordinates of `p`; negative on
    /// the negative side. Uses the completed-square identity
    /// `A f = |A x + conj(B) y|^2 - disc |y|^2` (or its mirror at infinity) to
    /// avoid cancellation near small circles.
    pub fn form_value(&self, p: &SpherePoint) -> f64 {
        let (x, y) = p.homogeneous();
        let (a, b, d) = (self.a, self.b, self.d);
        if a.abs() >= d.abs() && a != 0.0 {
            ((x * a + b.conj() * y).norm_sqr() - self.disc * y.norm_sqr()) / a
        } else if d != 0.0 {
            ((b * x + y * d).norm_sqr() - self.disc * x.norm_sqr()) / d
        } else {
            2.0 * (b * x * y.conj()).re
        }
    }

    /// The spherical cap forming the negative side.
    pub fn cap(&self) -> SphericalCap {
        let n = [2.0 * self.b.re, -2.0 * self.b.im, self.a - self.d];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let h = self.a + self.d;
        SphericalCap {
            pole: [-n[0] / len, -n[1] / len, -n[2] / len],
            angle: (2.0 * self.disc.max(0.0).sqrt()).atan2(h),
        }
    }

    /// Supremum of chordal distances between points of the circle.
    pub fn chordal_diameter(&self) -> f64 {
        let len = (4.0 * self.b.norm_sqr() + (self.a - self.d).powi(2)).sqrt();
        (4.0 * self.disc.max(0.0).sqrt() / len).min(2.0)
    }

    /// Chordal distance from `p` to the nearest point of the circle.
    pub fn distance_to(&self, p: &SpherePoint) -> f64 {
        let cap = self.cap();
        chord(cap.angle_to(p) - cap.angle)
    }

    /// Position of the circle `other` relative to the negative side of `self`.
    pub fn relative(&self, other: &GeneralizedCircle) -> Relative {
        let cap = self.cap();
        let oc = other.cap();
        let theta = angle_between(cap.pole, oc.pole);
        let lo = (theta - oc.angle).abs();
        let hi = (theta + oc.angle).min(2.0 * PI - theta - oc.angle);
        if hi < cap.angle {
            Relative::Inside(cap.angle - hi)
        } else if lo > cap.angle {
            Relative::Outside(lo - cap.angle)
        } else {
            Relative::Crossing
        }
    }

    /// Chordal distance between the two circles (0 if they meet).
    pub fn gap(&self, other: &GeneralizedCircle) -> f64 {
        match self.relative(other) {
            Relative::Inside(g) | Relative::Outside(g) => chord(g),
            Relative::Crossing => 0.0,
        }
    }

    /// `count` points equally spaced along the circle's spherical parametrization.
    pub fn sample(&self, count: usize) -> Vec<SpherePoint> {
        let cap = self.cap();
        let q = cap.pole;
        let helper = if q[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let dot = helper[0] * q[0] + helper[1] * q[1] + helper[2] * q[2];
        let mut u = [helper[0] - dot * q[0], helper[1] - dot * q[1], helper[2] - dot * q[2]];
        let ul = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        u = u.map(|x| x / ul);
        let v = [q[1] * u[2] - q[2] * u[1], q[2] * u[0] - q[0] * u[2], q[0] * u[1] - q[1] * u[0]];
        let (s, c) = cap.angle.sin_cos();
        (0..count)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / count as f64;
                let (st, ct) = t.sin_cos();
                let x = [0, 1, 2].map(|j| c * q[j] + s * (ct * u[j] + st * v[j]));
                SpherePoint::from_unit_sphere(x)
            })
            .collect()
    }

    /// Image under a Möbius map: the form is transported by `H -> P* H P`
    /// with `P = f⁻¹`, which keeps the negative side attached.
    pub fn transform(&self, f: &MoebiusMap) -> GeneralizedCircle {
        let [p, q, r, s] = f.inverse().entries();
        let (a, b, d) = (self.a, self.b, self.d);
        let bc = b.conj();
        // H = [[a, conj(b)], [b, d]]
        let hp = [p * a + bc * r, q * a + bc * s, b * p + r * d, b * q + s * d];
        let a2 = (p.conj() * hp[0] + r.conj() * hp[2]).re;
        let b2 = q.conj() * hp[0] + s.conj() * hp[2];
        let d2 = (q.conj() * hp[1] + s.conj() * hp[3]).re;
        let det = (p * s - q * r).norm_sqr();
        Self::normalized(a2, b2, d2, self.disc * det)
    }

    /// Reflection in the circle (fixes it pointwise, swaps its sides).
    pub fn reflection(&self) -> AntiMoebiusMap {
        let (a, b, d) = (self.a, self.b, self.d);
        // ad - |b|^2 cancels for small circles far from 0; it equals -disc
        AntiMoebiusMap::with_known_det(
            [-b.conj(), Complex64::new(-d, 0.0), Complex64::new(a, 0.0), b],
            Complex64::new(-self.disc, 0.0),
        )
    }

    /// Coefficient distance, minimized over the overall sign.
    pub fn coefficient_distance(&self, other: &GeneralizedCircle) -> f64 {
        let same = (self.a - other.a).abs().max((self.b - other.b).norm()).max((self.d - other.d).abs());
        let flip = (self.a + other.a).abs().max((self.b + other.b).norm()).max((self.d + other.d).abs());
        same.min(flip)
    }

    pub fn approx_eq(&self, other: &GeneralizedCircle, tol: f64) -> bool {
        self.coefficient_distance(other) <= tol
    }
}

impl fmt::Display for GeneralizedCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.center_radius() {
            Some((c, r)) => write!(f, "|z - ({c})| = {r}"),
            None => write!(f, "line {}|z|^2 + ({})z + c.c. + {} = 0", self.a, self.b, self.d),
        }
    }
}
