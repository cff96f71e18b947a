//! Built-in constructions: the classical rank-`g` group on the real line, a
//! family of pairs shrinking to a single accumulation point, and the
//! unit-circle example whose circles accumulate on all of `|z| = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{
    ConfigError, ConfigurationSchedule, OrientedCircle, PairedCircles, SchottkyConfiguration,
};
use crate::moebius::{GeneralizedCircle, SpherePoint};
use crate::pairing::synthesize_reflection;

/// Closed-form description of the pairs `(C_i, C'_i, A_i)`, `i ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ScheduleFamily {
    ClassicalRankG { g: usize, spacing: f64 },
    AccumulatingPoint { re: f64, im: f64 },
    UnitCircleCounterexample,
    Finite { config: SchottkyConfiguration },
}

/// Radius of `C_i` in the accumulating family, relative to `2^-i`.
const ACCUMULATING_RADIUS: f64 = 0.002;
/// Distances of the centers of `C_i` and `C'_i` from `p`, relative to `2^-i`.
/// `C_i` stays within `b(i)` of `p`; `C'_i` sits on the opposite side, far
/// enough out that every gap at level 32 still clears `1e-9`.
const ACCUMULATING_OFFSET: f64 = 0.99;
const ACCUMULATING_PARTNER_OFFSET: f64 = 1.9;

fn dyadic(i: usize) -> f64 {
    (-(i as f64)).exp2()
}

fn disk(center: Complex64, radius: f64) -> Result<OrientedCircle, ConfigError> {
    OrientedCircle::disk(center, radius)
}

fn reflection_pair(index: usize, c: OrientedCircle, cp: OrientedCircle) -> Result<PairedCircles, ConfigError> {
    let generator = synthesize_reflection(&c, &cp).map_err(|e| ConfigError::synthesis(index, e))?;
    Ok(PairedCircles { circle: c, partner: cp, generator })
}

/// Centers of `C_k` and `C'_k` in the classical family.
fn classical_centers(g: usize, spacing: f64, k: usize) -> (f64, f64) {
    if g == 1 {
        let x = spacing / 2.0 + 1.0;
        return (-x, x);
    }
    // pairs alternate sides; slot m holds C at 1.5 s and C' at 0.5 s beyond 2 s (m - 1)
    let m = k.div_ceil(2) as f64;
    let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
    let base = 2.0 * spacing * (m - 1.0);
    (sign * (base + 1.5 * spacing), sign * (base + 0.5 * spacing))
}

impl ScheduleFamily {
    /// Number of pairs, or `None` for an infinite family.
    pub fn support(&self) -> Option<usize> {
        match self {
            ScheduleFamily::ClassicalRankG { g, .. } => Some(*g),
            ScheduleFamily::Finite { config } => Some(config.rank()),
            _ => None,
        }
    }

    /// The diameter bound `b(i)`.
    pub fn bound(&self, i: usize) -> f64 {
        match self {
            ScheduleFamily::AccumulatingPoint { .. } => 2.0 * dyadic(i),
            ScheduleFamily::UnitCircleCounterexample => dyadic(i),
            _ => {
                if i <= self.support().unwrap_or(0) {
                    2.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn base_point(&self) -> SpherePoint {
        match self {
            ScheduleFamily::Finite { config } => config.base_point(),
            _ => SpherePoint::Infinity,
        }
    }

    /// The `i`-th pair (1-based).
    pub fn pair(&self, i: usize) -> Result<PairedCircles, ConfigError> {
        if i == 0 {
            return Err(ConfigError::BadParameters("pair indices start at 1".into()));
        }
        if let Some(support) = self.support() {
            if i > support {
                return Err(ConfigError::BadLevel { level: i, support });
            }
        }
        let index = i - 1;
        match self {
            ScheduleFamily::ClassicalRankG { g, spacing } => {
                let (c, cp) = classical_centers(*g, *spacing, i);
                reflection_pair(index, disk(Complex64::new(c, 0.0), 1.0)?, disk(Complex64::new(cp, 0.0), 1.0)?)
            }
            ScheduleFamily::AccumulatingPoint { re, im } => {
                let p = Complex64::new(*re, *im);
                let u = if i % 2 == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
                let r = ACCUMULATING_RADIUS * dyadic(i);
                let c = p + u * (ACCUMULATING_OFFSET * dyadic(i));
                let cp = p - u * (ACCUMULATING_PARTNER_OFFSET * dyadic(i));
                reflection_pair(index, disk(c, r)?, disk(cp, r)?)
            }
            ScheduleFamily::UnitCircleCounterexample => {
                let golden = (1.0 + 5f64.sqrt()) / 2.0;
                let angle = 2.0 * PI * (i as f64 * golden).fract();
                let c = Complex64::from_polar(1.0 - dyadic(i), angle);
                let r = dyadic(i) / 4.0;
                // image of |z - c| = r under z -> 1/conj(z)
                let k = c.norm_sqr() - r * r;
                let circle = disk(c, r)?;
                let partner = disk(c / k, r / k)?;
                let tau = GeneralizedCircle::unit().reflection();
                let generator = tau.compose(&circle.circle().reflection());
                Ok(PairedCircles { circle, partner, generator })
            }
            ScheduleFamily::Finite { config } => Ok(config.pairs()[index]),
        }
    }
}

/// `2g` radius-1 circles on the real line, paired by the reflection recipe.
///
/// For `g = 1` the circles sit at `∓(spacing/2 + 1)`. For `g ≥ 2` pair `k`
/// lives on the negative axis for odd `k` and the positive axis for even
/// `k`, in slot `m = ⌈k/2⌉`, with `C_k` at `±(2s(m-1) + 1.5s)` and `C'_k` at
/// `±(2s(m-1) + 0.5s)`; `g = 2, s = 4` gives centers `-6, -2, 2, 6`.
pub fn build_classical_rank_g(g: usize, spacing: f64) -> Result<SchottkyConfiguration, ConfigError> {
    classical_schedule(g, spacing)?.truncate(g)
}

pub fn classical_schedule(g: usize, spacing: f64) -> Result<ConfigurationSchedule, ConfigError> {
    if g == 0 {
        return Err(ConfigError::BadParameters("g must be at least 1".into()));
    }
    if !(spacing >= 4.0 && spacing.is_finite()) {
        return Err(ConfigError::BadParameters(format!("spacing must be finite and at least 4, got {spacing}")));
    }
    ConfigurationSchedule::new(ScheduleFamily::ClassicalRankG { g, spacing }, g)
}

/// Pairs of radius `0.002·2^-i` with `C_i` centered at `p + 0.99·2^-i u_i` and
/// `C'_i` at `p - 1.9·2^-i u_i`, where `u_i` alternates between `1` and `i`;
/// they shrink to `p` with `b(i) = 2^(1-i)`.
pub fn build_accumulating_point(p: SpherePoint, n_max: usize) -> Result<ConfigurationSchedule, ConfigError> {
    let z = p.finite().ok_or_else(|| ConfigError::BadParameters("accumulation point must be finite".into()))?;
    ConfigurationSchedule::new(ScheduleFamily::AccumulatingPoint { re: z.re, im: z.im }, n_max)
}

/// Disks `D_i` of radius `2^-i/4` centered at `(1 - 2^-i) e^{2πi frac(iφ)}`,
/// their reflections `C'_i` in the unit circle, and `A_i = τ ∘ τ_i` with `τ`
/// the reflection in `|z| = 1` and `τ_i` the reflection in `C_i`.
pub fn build_unit_circle_counterexample(n_max: usize) -> Result<ConfigurationSchedule, ConfigError> {
    ConfigurationSchedule::new(ScheduleFamily::UnitCircleCounterexample, n_max)
}

/// A finite configuration viewed as a schedule with `b(i) = 2` on its
/// support and `0` beyond.
pub fn finite_schedule(config: SchottkyConfiguration) -> Result<ConfigurationSchedule, ConfigError> {
    let levels = config.rank();
    ConfigurationSchedule::new(ScheduleFamily::Finite { config }, levels)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: &'static str,
    pub default: &'static str,
    pub doc: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyDescriptor {
    pub name: &'static str,
    pub params: Vec<ParamSpec>,
    pub doc: &'static str,
}

pub fn descriptors() -> Vec<FamilyDescriptor> {
    vec![
        FamilyDescriptor {
            name: "classical-rank-g",
            params: vec![
                ParamSpec { name: "g", kind: "integer >= 1", default: "2", doc: "number of pairs" },
                ParamSpec { name: "spacing", kind: "real >= 4", default: "4", doc: "slot width on the real line" },
            ],
            doc: "2g radius-1 circles on the real line with reflection-recipe generators; a finite-rank Schottky group",
        },
        FamilyDescriptor {
            name: "accumulating-point",
            params: vec![
                ParamSpec { name: "re", kind: "real", default: "0", doc: "real part of the accumulation point" },
                ParamSpec { name: "im", kind: "real", default: "0", doc: "imaginary part of the accumulation point" },
                ParamSpec { name: "levels", kind: "integer >= 1", default: "8", doc: "number of pairs" },
            ],
            doc: "infinite-rank schedule whose circles shrink to a single point p, with b(i) = 2^(1-i)",
        },
        FamilyDescriptor {
            name: "unit-circle-counterexample",
            params: vec![ParamSpec { name: "levels", kind: "integer >= 1", default: "16", doc: "number of pairs" }],
            doc: "disks accumulating densely on |z| = 1, paired with their reflections; no invariant component",
        },
    ]
}
