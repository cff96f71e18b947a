use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use super::{MoebiusMap, SpherePoint};

type C2 = Complex<TwoFloat>;

fn lift(z: Complex64) -> C2 {
    C2::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn round(z: C2) -> Complex64 {
    Complex64::new(f64::from(z.re), f64::from(z.im))
}

/// A sphere point in double-double homogeneous coordinates `[u : v]`.
///
/// Reduction is expanding: one ulp of error in a point at nesting depth 8
/// can grow to a visible chordal error after the point is pulled back. Orbit
/// points are therefore built and reduced in roughly 32 significant digits
/// and rounded to [`SpherePoint`] only for reporting and location.
#[derive(Clone, Copy, Debug)]
pub struct PrecisePoint {
    u: C2,
    v: C2,
}

impl PrecisePoint {
    /// The image under `f`, computed from the exact `f64` matrix entries.
    pub fn apply(&self, f: &MoebiusMap) -> Self {
        let [a, b, c, d] = f.entries().map(lift);
        let u = a * self.u + b * self.v;
        let v = c * self.u + d * self.v;
        // rescale by a power of two so magnitudes stay bounded without rounding
        let m = f64::from(u.norm_sqr()).max(f64::from(v.norm_sqr()));
        let shift = if m > 0.0 && m.is_finite() { -(m.log2() / 2.0).round() as i32 } else { 0 };
        let s = TwoFloat::from(2f64.powi(shift));
        Self { u: u.scale(s), v: v.scale(s) }
    }

    pub fn to_point(&self) -> SpherePoint {
        let nu = f64::from(self.u.norm_sqr());
        let nv = f64::from(self.v.norm_sqr());
        if nv == 0.0 {
            SpherePoint::Infinity
        } else if nv >= nu {
            SpherePoint::new(round(self.u / self.v))
        } else {
            let w = round(self.v / self.u);
            if w.norm() == 0.0 {
                SpherePoint::Infinity
            } else {
                SpherePoint::new(w.inv())
            }
        }
    }
}

impl From<SpherePoint> for PrecisePoint {
    fn from(p: SpherePoint) -> Self {
        let (u, v) = p.homogeneous();
        Self { u: lift(u), v: lift(v) }
    }
}
