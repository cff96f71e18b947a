use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::schedule::NEpsilon;
use super::{ConfigError, OrientedCircle};
use crate::moebius::{GeneralizedCircle, MoebiusMap, Relative, SphereMap, SpherePoint};
use crate::pairing::{synthesize_general, synthesize_reflection, verify_pairing, PairingCertificate};
use crate::tol;

/// Names one circle of a configuration: `C_k` or `C'_k` (1-based in display).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CircleRef {
    pub pair: usize,
    pub primed: bool,
}

impl CircleRef {
    pub fn new(pair: usize, primed: bool) -> Self {
        Self { pair, primed }
    }

    /// Position in the flat list `C_1, C'_1, C_2, C'_2, ...`.
    pub fn flat_index(&self) -> usize {
        2 * self.pair + self.primed as usize
    }

    pub fn from_flat_index(k: usize) -> Self {
        Self { pair: k / 2, primed: k % 2 == 1 }
    }
}

impl fmt::Display for CircleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}{}", if self.primed { "'" } else { "" }, self.pair + 1)
    }
}

/// How the generator of a pair is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingMethod {
    Reflection,
    General { twist: f64 },
    Explicit(MoebiusMap),
}

/// An unoriented pair of circles with the recipe for its generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirclePair {
    pub circle: GeneralizedCircle,
    pub partner: GeneralizedCircle,
    pub pairing: PairingMethod,
}

/// `C_i`, `C'_i` and a generator `A_i` with `A_i(Ext(C_i)) = Int(C'_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairedCircles {
    pub circle: OrientedCircle,
    pub partner: OrientedCircle,
    pub generator: MoebiusMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    /// In `Ext(𝔠)⁰`.
    Exterior,
    OnCircle(CircleRef),
    Interior(CircleRef),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Result of running every admissibility check on a configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub verdict: Verdict,
    pub pairs: usize,
    pub s1: Verdict,
    pub n_epsilon: Option<NEpsilon>,
    pub max_diameter_excess: Option<f64>,
    pub s2: Verdict,
    pub s3: Verdict,
    /// Minimum chordal gap between two circles.
    pub s3_margin: f64,
    pub s3_witness: Option<(CircleRef, CircleRef)>,
    pub pairings: Verdict,
    pub max_boundary_error: f64,
    pub base_point: SpherePoint,
    /// Chordal distance from the base point to the nearest closed interior disk.
    pub base_point_margin: f64,
    pub failures: Vec<ConfigError>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// The verdicts alone, for comparisons that should ignore margins.
    pub fn verdicts(&self) -> [Verdict; 5] {
        [self.verdict, self.s1, self.s2, self.s3, self.pairings]
    }

    pub(crate) fn refresh_verdict(&mut self) {
        self.verdict = Verdict::from_bool(self.failures.is_empty());
    }
}

/// A finite Schottky configuration: oriented paired circles, generators and
/// a base point `z₀ ∈ Ext(𝔠)⁰`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchottkyConfiguration {
    pairs: Vec<PairedCircles>,
    base_point: SpherePoint,
}

fn chord(angle: f64) -> f64 {
    2.0 * (angle.abs() / 2.0).sin()
}

/// Chooses Int/Ext for every circle so that each Ext side contains all other
/// circles. Input order is `C_1, C'_1, C_2, C'_2, ...`.
pub fn orient(circles: &[GeneralizedCircle]) -> Result<Vec<OrientedCircle>, ConfigError> {
    if circles.len() < 2 {
        return Err(ConfigError::Empty);
    }
    if let Some((first, second, gap)) = min_gap(circles) {
        if gap <= tol::DISJOINTNESS {
            return Err(ConfigError::Disjointness { first, second, gap });
        }
    }
    circles
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut inside = None;
            let mut outside = None;
            for (j, other) in circles.iter().enumerate() {
                if j == k {
                    continue;
                }
                match c.relative(other) {
                    Relative::Inside(_) => inside = inside.or(Some(j)),
                    Relative::Outside(_) => outside = outside.or(Some(j)),
                    Relative::Crossing => {
                        return Err(ConfigError::Disjointness {
                            first: CircleRef::from_flat_index(k),
                            second: CircleRef::from_flat_index(j),
                            gap: 0.0,
                        })
                    }
                }
            }
            match (inside, outside) {
                (Some(i), Some(o)) => Err(ConfigError::S2 {
                    separator: CircleRef::from_flat_index(k),
                    first: CircleRef::from_flat_index(i),
                    second: CircleRef::from_flat_index(o),
                }),
                // everything else sits on the negative side, so that side is Ext
                (Some(_), None) => Ok(OrientedCircle::from_negative_side(c.flipped())),
                _ => Ok(OrientedCircle::from_negative_side(*c)),
            }
        })
        .collect()
}

/// Smallest pairwise chordal gap, with the pair attaining it. Ties go to the
/// lexicographically first pair so the result does not depend on scheduling.
fn min_gap(circles: &[GeneralizedCircle]) -> Option<(CircleRef, CircleRef, f64)> {
    let n = circles.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| (circles[i].gap(&circles[j]), i, j))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)))
        .map(|(g, i, j)| (CircleRef::from_flat_index(i), CircleRef::from_flat_index(j), g))
}

/// `(S3)` margin: the minimum over circles of the chordal gap to the union of
/// the others.
pub fn check_s3(config: &SchottkyConfiguration) -> f64 {
    let circles: Vec<_> = config.circles().iter().map(|c| *c.circle()).collect();
    min_gap(&circles).map_or(2.0, |(_, _, g)| g)
}

/// Where `p` lies relative to `Ext(𝔠)`.
pub fn locate(config: &SchottkyConfiguration, p: &SpherePoint) -> Location {
    config.locate(p)
}

/// Signed angular distance from `p` to the union of the closed interiors;
/// positive means `p ∈ Ext(𝔠)⁰`.
fn exterior_margin(circles: &[OrientedCircle], p: &SpherePoint) -> f64 {
    circles
        .iter()
        .map(|c| {
            let cap = c.interior_cap();
            cap.angle_to(p) - cap.angle
        })
        .fold(PI, f64::min)
}

fn fibonacci_sphere(count: usize) -> impl Iterator<Item = SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count).map(move |k| {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
        let r = (1.0 - z * z).sqrt();
        let t = golden * k as f64;
        SpherePoint::from_unit_sphere([r * t.cos(), r * t.sin(), z])
    })
}

/// A point of `Ext(𝔠)⁰` with a comfortable margin: the first of `∞, 0, ±1,
/// ±i` clearing every disk by `1e-3`, otherwise the best point of a
/// Fibonacci lattice. Returns the point and its chordal margin.
pub fn choose_base_point(circles: &[OrientedCircle]) -> Option<(SpherePoint, f64)> {
    let canonical = [
        SpherePoint::Infinity,
        SpherePoint::from_re_im(0.0, 0.0),
        SpherePoint::from_re_im(1.0, 0.0),
        SpherePoint::from_re_im(-1.0, 0.0),
        SpherePoint::from_re_im(0.0, 1.0),
        SpherePoint::from_re_im(0.0, -1.0),
    ];
    for p in canonical {
        let m = exterior_margin(circles, &p);
        if m > 0.0 && chord(m) >= 1e-3 {
            return Some((p, chord(m)));
        }
    }
    let (p, m) = fibonacci_sphere(4096)
        .chain(canonical)
        .map(|p| (p, exterior_margin(circles, &p)))
        .max_by(|a, b| a.1.total_cmp(&b.1))?;
    (m > 0.0 && chord(m) > tol::GEOMETRIC).then(|| (p, chord(m)))
}

impl SchottkyConfiguration {
    /// Orients the circles, synthesizes and certifies every generator, and
    /// picks a base point unless one is given.
    pub fn new(pairs: &[CirclePair], base_point: Option<SpherePoint>) -> Result<Self, ConfigError> {
        let raw: Vec<_> = pairs.iter().flat_map(|p| [p.circle, p.partner]).collect();
        let oriented = orient(&raw)?;
        let mut paired = Vec::with_capacity(pairs.len());
        for (index, (pair, sides)) in pairs.iter().zip(oriented.chunks(2)).enumerate() {
            let (c, cp) = (sides[0], sides[1]);
            let generator = match pair.pairing {
                PairingMethod::Reflection => {
                    synthesize_reflection(&c, &cp).map_err(|e| ConfigError::synthesis(index, e))?
                }
                PairingMethod::General { twist } => {
                    synthesize_general(&c, &cp, twist).map_err(|e| ConfigError::synthesis(index, e))?
                }
                PairingMethod::Explicit(m) => m,
            };
            paired.push(PairedCircles { circle: c, partner: cp, generator });
        }
        Self::from_oriented(paired, base_point)
    }

    /// Validates already oriented pairs with their generators; fails with the
    /// first violation found.
    pub fn from_oriented(pairs: Vec<PairedCircles>, base_point: Option<SpherePoint>) -> Result<Self, ConfigError> {
        if pairs.is_empty() {
            return Err(ConfigError::Empty);
        }
        let circles: Vec<_> = pairs.iter().flat_map(|p| [p.circle, p.partner]).collect();
        let base_point = match base_point {
            Some(p) => p,
            None => choose_base_point(&circles).ok_or(ConfigError::NoBasePoint)?.0,
        };
        let config = Self { pairs, base_point };
        let report = config.validate();
        match report.failures.into_iter().next() {
            Some(e) => Err(e),
            None => Ok(config),
        }
    }

    /// Assembles a configuration without any checks. Meant for truncations
    /// too deep for double precision to certify; run [`Self::validate`] to
    /// see what holds.
    pub fn from_parts(pairs: Vec<PairedCircles>, base_point: SpherePoint) -> Self {
        Self { pairs, base_point }
    }

    pub fn pairs(&self) -> &[PairedCircles] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn base_point(&self) -> SpherePoint {
        self.base_point
    }

    pub fn generator(&self, k: usize) -> Option<&MoebiusMap> {
        self.pairs.get(k).map(|p| &p.generator)
    }

    /// Circles in flat order `C_1, C'_1, C_2, C'_2, ...`.
    pub fn circles(&self) -> Vec<OrientedCircle> {
        self.pairs.iter().flat_map(|p| [p.circle, p.partner]).collect()
    }

    pub fn circle(&self, r: CircleRef) -> &OrientedCircle {
        let p = &self.pairs[r.pair];
        if r.primed {
            &p.partner
        } else {
            &p.circle
        }
    }

    pub fn locate(&self, p: &SpherePoint) -> Location {
        for (k, pair) in self.pairs.iter().enumerate() {
            for (primed, c) in [(false, &pair.circle), (true, &pair.partner)] {
                let r = CircleRef::new(k, primed);
                if c.on_circle(p) {
                    return Location::OnCircle(r);
                }
                if c.interior_contains(p) {
                    return Location::Interior(r);
                }
            }
        }
        Location::Exterior
    }

    /// Runs disjointness, `(S2)`, `(S3)`, pairing certification and the base
    /// point check, collecting every failure.
    pub fn validate(&self) -> ValidationReport {
        let circles = self.circles();
        let raw: Vec<_> = circles.iter().map(|c| *c.circle()).collect();
        let mut failures = Vec::new();

        let gap = min_gap(&raw);
        let (s3_margin, s3_witness) = match gap {
            Some((a, b, g)) => (g, Some((a, b))),
            None => (2.0, None),
        };
        if let Some((first, second, g)) = gap {
            if g <= tol::DISJOINTNESS {
                failures.push(ConfigError::Disjointness { first, second, gap: g });
            }
        }

        let s2_failure = (0..circles.len()).into_par_iter().find_map_first(|k| {
            // Int(C_k) must hold no other circle
            let inside = (0..circles.len())
                .find(|&j| j != k && matches!(circles[k].circle().relative(&raw[j]), Relative::Inside(_)))?;
            let outside = (0..circles.len())
                .find(|&j| j != k && !matches!(circles[k].circle().relative(&raw[j]), Relative::Inside(_)))
                .unwrap_or(k);
            Some(ConfigError::S2 {
                separator: CircleRef::from_flat_index(k),
                first: CircleRef::from_flat_index(inside),
                second: CircleRef::from_flat_index(outside),
            })
        });
        let s2_ok = s2_failure.is_none();
        failures.extend(s2_failure);

        let certificates: Vec<PairingCertificate> = self
            .pairs
            .par_iter()
            .map(|p| verify_pairing(&p.generator, &p.circle, &p.partner))
            .collect();
        let max_boundary_error = certificates.iter().map(|c| c.boundary_error).fold(0.0, f64::max);
        let mut pairings_ok = true;
        for (index, cert) in certificates.into_iter().enumerate() {
            if !cert.valid {
                pairings_ok = false;
                if failures.iter().all(|f| !matches!(f, ConfigError::Pairing { .. })) {
                    failures.push(ConfigError::Pairing { index, certificate: Box::new(cert) });
                }
            }
        }

        let m = exterior_margin(&circles, &self.base_point);
        let base_point_margin = if m > 0.0 { chord(m) } else { -chord(m) };
        if base_point_margin <= tol::GEOMETRIC {
            failures.push(ConfigError::BasePoint { point: self.base_point });
        }

        let mut report = ValidationReport {
            verdict: Verdict::Pass,
            pairs: self.pairs.len(),
            s1: Verdict::Pass,
            n_epsilon: Some(NEpsilon::FiniteSupport),
            max_diameter_excess: None,
            s2: Verdict::from_bool(s2_ok),
            s3: Verdict::from_bool(s3_margin > tol::DISJOINTNESS),
            s3_margin,
            s3_witness,
            pairings: Verdict::from_bool(pairings_ok),
            max_boundary_error,
            base_point: self.base_point,
            base_point_margin,
            failures,
        };
        report.refresh_verdict();
        report
    }

    /// The configuration `g(𝔠)` with generators `g A_i g⁻¹` and base point
    /// `g(z₀)`. Unchecked; validate the result to compare verdicts.
    pub fn conjugate(&self, g: &MoebiusMap) -> Self {
        let pairs = self
            .pairs
            .iter()
            .map(|p| PairedCircles {
                circle: p.circle.transform(g),
                partner: p.partner.transform(g),
                generator: g.compose(&p.generator).compose(&g.inverse()),
            })
            .collect();
        Self { pairs, base_point: g.apply(self.base_point) }
    }

    /// The same circles with generator `k` replaced, unchecked. Useful for
    /// negative controls.
    pub fn with_generator(&self, k: usize, generator: MoebiusMap) -> Self {
        let mut out = self.clone();
        out.pairs[k].generator = generator;
        out
    }

    /// The same configuration with pair `k`'s partner circle replaced, unchecked.
    pub fn with_partner(&self, k: usize, partner: OrientedCircle) -> Self {
        let mut out = self.clone();
        out.pairs[k].partner = partner;
        out
    }

    /// Keeps the first `n` pairs, unchecked.
    pub fn prefix(&self, n: usize) -> Self {
        Self { pairs: self.pairs[..n.min(self.pairs.len())].to_vec(), base_point: self.base_point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn circle(re: f64, im: f64, r: f64) -> GeneralizedCircle {
        GeneralizedCircle::from_center_radius(Complex64::new(re, im), r).unwrap()
    }

    fn reflection_pair(a: GeneralizedCircle, b: GeneralizedCircle) -> CirclePair {
        CirclePair { circle: a, partner: b, pairing: PairingMethod::Reflection }
    }

    #[test]
    fn orient_two_disks() {
        let o = orient(&[circle(-3.0, 0.0, 1.0), circle(3.0, 0.0, 1.0)]).unwrap();
        assert!(o[0].interior_contains(&SpherePoint::from_re_im(-3.0, 0.0)));
        assert!(o[1].interior_contains(&SpherePoint::from_re_im(3.0, 0.0)));
        assert!(!o[0].interior_contains(&SpherePoint::Infinity));
    }

    #[test]
    fn orient_concentric_fails_s2() {
        let err = orient(&[circle(0.0, 0.0, 1.0), circle(0.0, 0.0, 2.0), circle(0.0, 0.0, 3.0), circle(9.0, 0.0, 1.0)])
            .unwrap_err();
        match err {
            ConfigError::S2 { separator, .. } => assert_eq!(separator.flat_index(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orient_nested_pair_is_fine() {
        // Int(C) = inner disk, Int(C') = outside of the bigger circle
        let o = orient(&[circle(0.0, 0.0, 1.0), circle(0.0, 0.0, 4.0)]).unwrap();
        assert!(o[0].interior_contains(&SpherePoint::from_re_im(0.0, 0.0)));
        assert!(o[1].interior_contains(&SpherePoint::Infinity));
    }

    #[test]
    fn overlapping_circles_rejected() {
        let err = orient(&[circle(0.0, 0.0, 1.0), circle(1.0, 0.0, 1.0)]).unwrap_err();
        assert!(matches!(err, ConfigError::Disjointness { .. }));
    }

    #[test]
    fn build_and_locate() {
        let config =
            SchottkyConfiguration::new(&[reflection_pair(circle(-3.0, 0.0, 1.0), circle(3.0, 0.0, 1.0))], None).unwrap();
        assert_eq!(config.base_point(), SpherePoint::Infinity);
        assert_eq!(config.locate(&SpherePoint::Infinity), Location::Exterior);
        assert_eq!(config.locate(&SpherePoint::from_re_im(-3.0, 0.0)), Location::Interior(CircleRef::new(0, false)));
        assert_eq!(config.locate(&SpherePoint::from_re_im(4.0, 0.0)), Location::OnCircle(CircleRef::new(0, true)));
        let report = config.validate();
        assert!(report.passed(), "{report:?}");
        assert!((check_s3(&config) - report.s3_margin).abs() < 1e-15);
    }

    #[test]
    fn s3_margin_shrinks_as_circles_approach() {
        // chordal gaps shrink as the circles close in on 0 (moving them apart
        // along the real line would bring them together through infinity)
        let margins: Vec<f64> = [1.0, 0.5, 0.2]
            .iter()
            .map(|&x| {
                let c = SchottkyConfiguration::new(&[reflection_pair(circle(-x, 0.0, 0.1), circle(x, 0.0, 0.1))], None)
                    .unwrap();
                check_s3(&c)
            })
            .collect();
        assert!(margins[0] > margins[1] && margins[1] > margins[2] && margins[2] > 0.0, "{margins:?}");
    }

    #[test]
    fn bad_explicit_generator_is_rejected() {
        let pair = CirclePair {
            circle: circle(-3.0, 0.0, 1.0),
            partner: circle(3.0, 0.0, 1.0),
            pairing: PairingMethod::Explicit(MoebiusMap::from_real(1.0, 1.0, 0.0, 1.0).unwrap()),
        };
        assert!(matches!(SchottkyConfiguration::new(&[pair], None), Err(ConfigError::Pairing { index: 0, .. })));
    }

    #[test]
    fn base_point_inside_a_disk_is_rejected() {
        let pair = reflection_pair(circle(-3.0, 0.0, 1.0), circle(3.0, 0.0, 1.0));
        let err = SchottkyConfiguration::new(&[pair], Some(SpherePoint::from_re_im(3.0, 0.0))).unwrap_err();
        assert!(matches!(err, ConfigError::BasePoint { .. }));
    }

    #[test]
    fn base_point_avoids_infinity_when_needed() {
        let pair = CirclePair {
            circle: circle(0.0, 0.0, 1.0),
            partner: circle(0.0, 0.0, 4.0),
            pairing: PairingMethod::General { twist: 0.0 },
        };
        let config = SchottkyConfiguration::new(&[pair], None).unwrap();
        assert_eq!(config.locate(&config.base_point()), Location::Exterior);
        assert!(config.base_point().finite().unwrap().norm() > 1.0);
    }
}
