//! The JSON configuration file format.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::config::{
    choose_base_point, orient, ConfigError, ConfigurationSchedule, PairedCircles, SchottkyConfiguration,
};
use crate::families::{build_accumulating_point, build_unit_circle_counterexample, classical_schedule, ScheduleFamily};
use crate::moebius::{GeneralizedCircle, MoebiusMap, SpherePoint};
use crate::pairing::{synthesize_general, synthesize_reflection, verify_pairing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FileKind {
    Finite,
    Schedule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub kind: FileKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub circles: Vec<CircleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairings: Vec<PairingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
}

/// Either `center` and `radius`, or `line`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub point: [f64; 2],
    pub normal: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingSpec {
    pub from: String,
    pub to: String,
    pub map: MapSpec,
}

/// `"auto-reflection"`, `"auto-general"` or `{"matrix": [[re, im], ...]}`
/// with entries `a, b, c, d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Auto(String),
    Matrix { matrix: [[f64; 2]; 4] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub family: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub levels: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassicalParams {
    g: usize,
    #[serde(default = "default_spacing")]
    spacing: f64,
}

fn default_spacing() -> f64 {
    4.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointParams {
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

/// A file that could not be turned into a configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Error)]
#[error("{message}")]
pub struct InputError {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        Self { message: message.into(), detail: None }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum LoadError {
    /// Malformed or inconsistent input.
    #[error(transparent)]
    Input(InputError),
    /// Well-formed circles that admit no orientation (overlap, `(S2)`).
    #[error(transparent)]
    Orientation(ConfigError),
}

impl From<InputError> for LoadError {
    fn from(e: InputError) -> Self {
        LoadError::Input(e)
    }
}

/// How explicit pairing matrices are treated on load.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Matrices failing `verify_pairing` are input errors.
    Required,
    /// Matrices are loaded as given, so checks can run on broken groups.
    Lenient,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Loaded {
    Finite(SchottkyConfiguration),
    Schedule(ConfigurationSchedule),
}

/// Parses JSON into `T`, naming the path of the first fault.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        InputError::new(format!("at {path}: {}", e.inner()))
    })
}

fn parse_params<T: DeserializeOwned>(params: &Map<String, Value>) -> Result<T, InputError> {
    serde_path_to_error::deserialize(Value::Object(params.clone()))
        .map_err(|e| InputError::new(format!("at schedule.params.{}: {}", e.path(), e.inner())))
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn config_error(e: ConfigError) -> InputError {
    InputError { message: e.to_string(), detail: serde_json::to_value(&e).ok() }
}

fn build_circle(k: usize, spec: &CircleSpec) -> Result<GeneralizedCircle, InputError> {
    let at = |msg: &str| InputError::new(format!("at circles[{k}] ({}): {msg}", spec.id));
    match (spec.center, spec.radius, &spec.line) {
        (Some(c), Some(r), None) => {
            GeneralizedCircle::from_center_radius(complex(c), r).map_err(|e| at(&e.to_string()))
        }
        (None, None, Some(line)) => {
            GeneralizedCircle::line(complex(line.point), complex(line.normal)).map_err(|e| at(&e.to_string()))
        }
        _ => Err(at("expected either center and radius, or line")),
    }
}

impl ConfigFile {
    /// Reads a configuration file's text.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        parse_json(text)
    }

    pub fn load(&self, certification: Certification) -> Result<Loaded, LoadError> {
        match self.kind {
            FileKind::Finite => {
                if self.schedule.is_some() {
                    return Err(InputError::new("a finite file has no schedule section").into());
                }
                self.load_finite(certification).map(Loaded::Finite)
            }
            FileKind::Schedule => {
                if !self.circles.is_empty() || !self.pairings.is_empty() || self.base_point.is_some() {
                    return Err(InputError::new("a schedule file has only a schedule section").into());
                }
                let spec = self.schedule.as_ref().ok_or_else(|| InputError::new("missing schedule section"))?;
                Ok(Loaded::Schedule(spec.build()?))
            }
        }
    }

    fn load_finite(&self, certification: Certification) -> Result<SchottkyConfiguration, LoadError> {
        if self.pairings.is_empty() {
            return Err(InputError::new("at least one pairing is needed").into());
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (k, c) in self.circles.iter().enumerate() {
            if index.insert(c.id.as_str(), k).is_some() {
                return Err(InputError::new(format!("at circles[{k}]: duplicate id {:?}", c.id)).into());
            }
        }
        let mut used = HashSet::new();
        let mut flat = Vec::with_capacity(2 * self.pairings.len());
        for (k, p) in self.pairings.iter().enumerate() {
            for (field, id) in [("from", &p.from), ("to", &p.to)] {
                let &j = index
                    .get(id.as_str())
                    .ok_or_else(|| InputError::new(format!("at pairings[{k}].{field}: unknown circle id {id:?}")))?;
                if !used.insert(j) {
                    return Err(InputError::new(format!("at pairings[{k}].{field}: circle {id:?} is already paired"))
                        .into());
                }
                flat.push(build_circle(j, &self.circles[j])?);
            }
        }
        if let Some(c) = self.circles.iter().enumerate().find(|(k, _)| !used.contains(k)) {
            return Err(InputError::new(format!("at circles[{}]: circle {:?} is not paired", c.0, c.1.id)).into());
        }
        let oriented = orient(&flat).map_err(LoadError::Orientation)?;
        let mut pairs = Vec::with_capacity(self.pairings.len());
        for (k, (spec, sides)) in self.pairings.iter().zip(oriented.chunks(2)).enumerate() {
            let (c, cp) = (sides[0], sides[1]);
            let synthesis = |r: Result<MoebiusMap, _>| {
                r.map_err(|e: crate::pairing::PairingError| InputError::new(format!("at pairings[{k}].map: {e}")))
            };
            let generator = match &spec.map {
                MapSpec::Auto(name) if name == "auto-reflection" => synthesis(synthesize_reflection(&c, &cp))?,
                MapSpec::Auto(name) if name == "auto-general" => synthesis(synthesize_general(&c, &cp, 0.0))?,
                MapSpec::Auto(name) => {
                    return Err(InputError::new(format!(
                        "at pairings[{k}].map: unknown map {name:?} (expected auto-reflection, auto-general or a matrix)"
                    ))
                    .into())
                }
                MapSpec::Matrix { matrix } => {
                    let [a, b, cc, d] = matrix.map(complex);
                    let m = MoebiusMap::new(a, b, cc, d)
                        .map_err(|e| InputError::new(format!("at pairings[{k}].map.matrix: {e}")))?;
                    let certificate = verify_pairing(&m, &c, &cp);
                    if !certificate.valid && certification == Certification::Required {
                        return Err(InputError {
                            message: format!("at pairings[{k}].map.matrix: the matrix does not pair {} with {}", spec.from, spec.to),
                            detail: serde_json::to_value(&certificate).ok(),
                        }
                        .into());
                    }
                    m
                }
            };
            pairs.push(PairedCircles { circle: c, partner: cp, generator });
        }
        let circles: Vec<_> = pairs.iter().flat_map(|p| [p.circle, p.partner]).collect();
        let base_point = match self.base_point {
            Some(p) => SpherePoint::new(complex(p)),
            // without an exterior point validation reports the failure
            None => choose_base_point(&circles).map_or(SpherePoint::Infinity, |(p, _)| p),
        };
        Ok(SchottkyConfiguration::from_parts(pairs, base_point))
    }

    /// A finite file listing every circle by center and radius (or line).
    /// With `explicit` the generators are written as matrices, otherwise as
    /// `auto-reflection`.
    pub fn from_configuration(config: &SchottkyConfiguration, explicit: bool) -> Self {
        let mut circles = Vec::new();
        let mut pairings = Vec::new();
        for (k, pair) in config.pairs().iter().enumerate() {
            let ids = [format!("C{}", k + 1), format!("C{}'", k + 1)];
            for (id, c) in ids.iter().zip([pair.circle, pair.partner]) {
                circles.push(circle_spec(id.clone(), c.circle()));
            }
            let map = if explicit {
                MapSpec::Matrix { matrix: pair.generator.entries().map(|z| [z.re, z.im]) }
            } else {
                MapSpec::Auto("auto-reflection".into())
            };
            pairings.push(PairingSpec { from: ids[0].clone(), to: ids[1].clone(), map });
        }
        let base_point = config.base_point().finite().map(|z| [z.re, z.im]);
        ConfigFile { kind: FileKind::Finite, circles, pairings, base_point, schedule: None }
    }

    pub fn from_schedule(spec: ScheduleSpec) -> Self {
        ConfigFile { kind: FileKind::Schedule, circles: vec![], pairings: vec![], base_point: None, schedule: Some(spec) }
    }
}

fn circle_spec(id: String, c: &GeneralizedCircle) -> CircleSpec {
    match c.center_radius() {
        Some((center, radius)) => CircleSpec { id, center: Some([center.re, center.im]), radius: Some(radius), line: None },
        None => {
            // A z z̄ + B z + B̄ z̄ + D = 0 with A = 0 is Re(2 B z) = -D; normal ∝ conj(B)
            let (_, b, d) = c.coefficients();
            let normal = b.conj();
            let point = -normal * (d / (2.0 * normal.norm_sqr()));
            CircleSpec { id, center: None, radius: None, line: Some(LineSpec { point: [point.re, point.im], normal: [normal.re, normal.im] }) }
        }
    }
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<ConfigurationSchedule, InputError> {
        let schedule = match self.family.as_str() {
            "classical-rank-g" => {
                let p: ClassicalParams = parse_params(&self.params)?;
                let full = classical_schedule(p.g, p.spacing).map_err(config_error)?;
                ConfigurationSchedule::new(full.family, self.levels)
            }
            "accumulating-point" => {
                let p: PointParams = parse_params(&self.params)?;
                build_accumulating_point(SpherePoint::new(Complex64::new(p.re, p.im)), self.levels)
            }
            "unit-circle-counterexample" => {
                let _: NoParams = parse_params(&self.params)?;
                build_unit_circle_counterexample(self.levels)
            }
            other => {
                return Err(InputError::new(format!(
                    "at schedule.family: unknown family {other:?} (expected classical-rank-g, accumulating-point or unit-circle-counterexample)"
                )))
            }
        };
        schedule.map_err(config_error)
    }

    pub fn from_family(family: &ScheduleFamily, levels: usize) -> Option<Self> {
        let (name, params) = match family {
            ScheduleFamily::ClassicalRankG { g, spacing } => {
                ("classical-rank-g", serde_json::json!({ "g": g, "spacing": spacing }))
            }
            ScheduleFamily::AccumulatingPoint { re, im } => ("accumulating-point", serde_json::json!({ "re": re, "im": im })),
            ScheduleFamily::UnitCircleCounterexample => ("unit-circle-counterexample", serde_json::json!({})),
            ScheduleFamily::Finite { .. } => return None,
        };
        let Value::Object(params) = params else { unreachable!("json! object literal") };
        Some(ScheduleSpec { family: name.to_string(), params, levels })
    }
}
