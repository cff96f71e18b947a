use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::SpherePoint;
use super::MoebiusError;
use crate::tol;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

type Mat2 = [Complex64; 4];

fn mat_mul(f: &Mat2, g: &Mat2) -> Mat2 {
    [
        f[0] * g[0] + f[1] * g[2],
        f[0] * g[1] + f[1] * g[3],
        f[2] * g[0] + f[3] * g[2],
        f[2] * g[1] + f[3] * g[3],
    ]
}

fn mat_conj(m: &Mat2) -> Mat2 {
    [m[0].conj(), m[1].conj(), m[2].conj(), m[3].conj()]
}

fn is_finite(m: &Mat2) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Scales a matrix to determinant one. When the determinant is numerically
/// zero (entries far beyond what f64 can balance) the matrix is scaled to unit
/// max-norm instead; the projective action is unchanged either way.
fn normalize(m: Mat2) -> Mat2 {
    let det = m[0] * m[3] - m[1] * m[2];
    let scale = if det.norm() > 0.0 && det.re.is_finite() && det.im.is_finite() {
        det.sqrt().inv()
    } else {
        let max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Complex64::new(1.0 / max, 0.0)
    };
    let out = [m[0] * scale, m[1] * scale, m[2] * scale, m[3] * scale];
    if is_finite(&out) {
        out
    } else {
        m
    }
}

fn check_matrix(m: Mat2) -> Result<Mat2, MoebiusError> {
    if !is_finite(&m) {
        return Err(MoebiusError::NonFinite);
    }
    let det = m[0] * m[3] - m[1] * m[2];
    if det.norm() == 0.0 {
        return Err(MoebiusError::Singular);
    }
    Ok(normalize(m))
}

/// Applies the linear fractional map with matrix `m` to `z`.
fn act(m: &Mat2, p: SpherePoint) -> SpherePoint {
    match p {
        SpherePoint::Infinity => {
            if m[2] == ZERO {
                SpherePoint::Infinity
            } else {
                SpherePoint::new(m[0] / m[2])
            }
        }
        SpherePoint::Finite(z) if z.norm() <= 1.0 => {
            let den = m[2] * z + m[3];
            if den == ZERO {
                SpherePoint::Infinity
            } else {
                SpherePoint::new((m[0] * z + m[1]) / den)
            }
        }
        SpherePoint::Finite(z) => {
            // divide numerator and denominator by z
            let w = z.inv();
            let den = m[2] + m[3] * w;
            if den == ZERO {
                SpherePoint::Infinity
            } else {
                SpherePoint::new((m[0] + m[1] * w) / den)
            }
        }
    }
}

fn conj_point(p: SpherePoint) -> SpherePoint {
    match p {
        SpherePoint::Finite(z) => SpherePoint::Finite(z.conj()),
        SpherePoint::Infinity => SpherePoint::Infinity,
    }
}

/// Any map of the Riemann sphere built from a 2x2 complex matrix.
pub trait SphereMap {
    fn apply(&self, p: SpherePoint) -> SpherePoint;

    /// `true` for Möbius maps, `false` for reflections and other anti-maps.
    fn preserves_orientation(&self) -> bool;
}

/// Conjugacy class of a Möbius map, read off from the squared trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// Fixed points of a non-identity Möbius map.
#[derive(Clone, Copy, Debug)]
pub enum FixedPoints {
    /// Parabolic maps have a single (double) fixed point.
    Single(SpherePoint),
    Pair {
        attracting: SpherePoint,
        repelling: SpherePoint,
    },
    /// Two fixed points with unit multiplier (elliptic maps).
    Neutral(SpherePoint, SpherePoint),
}

impl FixedPoints {
    pub fn points(&self) -> Vec<SpherePoint> {
        match *self {
            FixedPoints::Single(p) => vec![p],
            FixedPoints::Pair { attracting, repelling } => vec![attracting, repelling],
            FixedPoints::Neutral(p, q) => vec![p, q],
        }
    }

    pub fn attracting(&self) -> Option<SpherePoint> {
        match *self {
            FixedPoints::Pair { attracting, .. } => Some(attracting),
            _ => None,
        }
    }

    pub fn repelling(&self) -> Option<SpherePoint> {
        match *self {
            FixedPoints::Pair { repelling, .. } => Some(repelling),
            _ => None,
        }
    }
}

/// An element of PSL(2, C), stored as a determinant-one matrix
/// `[[a, b], [c, d]]` acting by `z -> (a z + b) / (c z + d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MoebiusMap {
    #[serde(rename = "matrix")]
    m: Mat2,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MoebiusError> {
        Ok(Self { m: check_matrix([a, b, c, d])? })
    }

    /// Real-entry convenience constructor.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, MoebiusError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// For products of normalized matrices, whose determinant is 1 up to
    /// rounding. Renormalizes only when `ad - bc` is computed accurately; for
    /// long words it cancels catastrophically and would corrupt the entries.
    pub(crate) fn from_matrix_unchecked(m: Mat2) -> Self {
        let (ad, bc) = (m[0] * m[3], m[1] * m[2]);
        let rounding = (ad.norm() + bc.norm()) * f64::EPSILON;
        if (ad - bc).norm() > 1e6 * rounding {
            Self { m: normalize(m) }
        } else {
            Self { m }
        }
    }

    pub fn identity() -> Self {
        Self { m: [ONE, ZERO, ZERO, ONE] }
    }

    /// `z -> z + t`
    pub fn translation(t: Complex64) -> Self {
        Self { m: [ONE, t, ZERO, ONE] }
    }

    /// `z -> k z`
    pub fn scaling(k: Complex64) -> Result<Self, MoebiusError> {
        Self::new(k, ZERO, ZERO, ONE)
    }

    /// `z -> 1/z`, the half-turn of the sphere about the real axis.
    pub fn inversion() -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self { m: [ZERO, i, i, ZERO] }
    }

    /// A rotation of the sphere taking 0 to `q`.
    pub fn rotation_from_origin(q: SpherePoint) -> Self {
        match q {
            SpherePoint::Infinity => Self::inversion(),
            SpherePoint::Finite(q) if q.norm() <= 1.0 => Self::from_matrix_unchecked([ONE, q, -q.conj(), ONE]),
            SpherePoint::Finite(q) => {
                let w = q.conj().inv();
                Self::from_matrix_unchecked([w, q * w, -ONE, w])
            }
        }
    }

    pub fn a(&self) -> Complex64 {
        self.m[0]
    }
    pub fn b(&self) -> Complex64 {
        self.m[1]
    }
    pub fn c(&self) -> Complex64 {
        self.m[2]
    }
    pub fn d(&self) -> Complex64 {
        self.m[3]
    }

    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    pub fn trace_squared(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        Self::from_matrix_unchecked(mat_mul(&self.m, &other.m))
    }

    /// `self ∘ g` for an anti-Möbius `g`.
    pub fn compose_anti(&self, g: &AntiMoebiusMap) -> AntiMoebiusMap {
        AntiMoebiusMap { m: normalize(mat_mul(&self.m, &g.m)) }
    }

    pub fn inverse(&self) -> MoebiusMap {
        let [a, b, c, d] = self.m;
        Self { m: [d, -b, -c, a] }
    }

    /// `g ∘ self ∘ g⁻¹`
    pub fn conjugate_by(&self, g: &MoebiusMap) -> MoebiusMap {
        g.compose(self).compose(&g.inverse())
    }

    /// Entrywise max-distance to the identity, minimized over the sign of the
    /// representative.
    pub fn distance_to_identity(&self) -> f64 {
        let plus = Self::identity();
        let minus = Self { m: [-ONE, ZERO, ZERO, -ONE] };
        self.entry_distance_raw(&plus).min(self.entry_distance_raw(&minus))
    }

    fn entry_distance_raw(&self, other: &MoebiusMap) -> f64 {
        self.m.iter().zip(other.m.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Entrywise max-distance between normalized representatives, minimized
    /// over the global sign.
    pub fn entry_distance(&self, other: &MoebiusMap) -> f64 {
        let neg = Self { m: other.m.map(|z| -z) };
        self.entry_distance_raw(other).min(self.entry_distance_raw(&neg))
    }

    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.entry_distance(other) <= tol
    }

    pub fn is_identity(&self) -> bool {
        self.distance_to_identity() <= tol::ALGEBRAIC
    }

    /// Classifies by `tr^2`. Values within `tol::TRACE_BOUNDARY` of 4 that are
    /// not exactly 4 are reported as [`MoebiusError::NearBoundary`].
    pub fn classify(&self) -> Result<Classification, MoebiusError> {
        if self.is_identity() {
            return Ok(Classification::Identity);
        }
        let t2 = self.trace_squared();
        let gap = (t2 - Complex64::new(4.0, 0.0)).norm();
        if gap == 0.0 {
            return Ok(Classification::Parabolic);
        }
        if gap < tol::TRACE_BOUNDARY {
            return Err(MoebiusError::NearBoundary { trace_squared: t2 });
        }
        if t2.im.abs() <= tol::TRACE_BOUNDARY && t2.re >= 0.0 && t2.re < 4.0 {
            Ok(Classification::Elliptic)
        } else {
            Ok(Classification::Loxodromic)
        }
    }

    /// Derivative `1/(cz+d)^2` at a finite point.
    fn multiplier_at(&self, z: Complex64) -> Complex64 {
        let den = self.m[2] * z + self.m[3];
        (den * den).inv()
    }

    pub fn fixed_points(&self) -> Result<FixedPoints, MoebiusError> {
        if self.is_identity() {
            return Err(MoebiusError::IdentityInput);
        }
        let [a, b, c, d] = self.m;
        if c == ZERO {
            // infinity is fixed; the other root solves (d - a) z = b
            let diff = d - a;
            if diff == ZERO {
                return Ok(FixedPoints::Single(SpherePoint::Infinity));
            }
            let z0 = SpherePoint::new(b / diff);
            // derivative at z0 is a/d, at infinity d/a
            let k = (a / d).norm();
            return Ok(if k > 1.0 {
                FixedPoints::Pair { attracting: SpherePoint::Infinity, repelling: z0 }
            } else if k < 1.0 {
                FixedPoints::Pair { attracting: z0, repelling: SpherePoint::Infinity }
            } else {
                FixedPoints::Neutral(z0, SpherePoint::Infinity)
            });
        }
        // c z^2 + (d - a) z - b = 0, discriminant tr^2 - 4
        let p = d - a;
        let disc = self.trace_squared() - Complex64::new(4.0, 0.0);
        if disc == ZERO {
            return Ok(FixedPoints::Single(SpherePoint::new(-p / (c * 2.0))));
        }
        let root = disc.sqrt();
        let s = if (p + root).norm() >= (p - root).norm() { p + root } else { p - root };
        let q = s * -0.5;
        let z1 = q / c;
        let z2 = if q == ZERO { -p / c - z1 } else { -b / q };
        let (m1, m2) = (self.multiplier_at(z1).norm(), self.multiplier_at(z2).norm());
        let (p1, p2) = (SpherePoint::new(z1), SpherePoint::new(z2));
        Ok(if m1 < m2 {
            FixedPoints::Pair { attracting: p1, repelling: p2 }
        } else if m2 < m1 {
            FixedPoints::Pair { attracting: p2, repelling: p1 }
        } else {
            FixedPoints::Neutral(p1, p2)
        })
    }
}

impl SphereMap for MoebiusMap {
    fn apply(&self, p: SpherePoint) -> SpherePoint {
        act(&self.m, p)
    }

    fn preserves_orientation(&self) -> bool {
        true
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: MoebiusMap) -> MoebiusMap {
        self.compose(&rhs)
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "z -> ({a} z + {b}) / ({c} z + {d})")
    }
}

/// An orientation-reversing map `z -> (a conj(z) + b) / (c conj(z) + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntiMoebiusMap {
    m: Mat2,
}

impl AntiMoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MoebiusError> {
        Ok(Self { m: check_matrix([a, b, c, d])? })
    }

    pub(crate) fn from_matrix_unchecked(m: Mat2) -> Self {
        Self { m: normalize(m) }
    }

    /// Scales `m` by `1 / sqrt(det)` for a determinant known more accurately
    /// than `ad - bc` would give it.
    pub(crate) fn with_known_det(m: Mat2, det: Complex64) -> Self {
        let s = det.sqrt().inv();
        let out = m.map(|z| z * s);
        if det.norm() > 0.0 && is_finite(&out) {
            Self { m: out }
        } else {
            Self::from_matrix_unchecked(m)
        }
    }

    /// `z -> conj(z)`
    pub fn conjugation() -> Self {
        Self { m: [ONE, ZERO, ZERO, ONE] }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    /// `self ∘ other`; two reflections compose to a Möbius map.
    pub fn compose(&self, other: &AntiMoebiusMap) -> MoebiusMap {
        MoebiusMap::from_matrix_unchecked(mat_mul(&self.m, &mat_conj(&other.m)))
    }

    /// `self ∘ g` for a Möbius `g`.
    pub fn compose_moebius(&self, g: &MoebiusMap) -> AntiMoebiusMap {
        AntiMoebiusMap { m: normalize(mat_mul(&self.m, &mat_conj(&g.m))) }
    }
}

impl SphereMap for AntiMoebiusMap {
    fn apply(&self, p: SpherePoint) -> SpherePoint {
        act(&self.m, conj_point(p))
    }

    fn preserves_orientation(&self) -> bool {
        false
    }
}
