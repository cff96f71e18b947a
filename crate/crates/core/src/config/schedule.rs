use serde::Serialize;

use super::{ConfigError, PairedCircles, SchottkyConfiguration, ValidationReport, Verdict};
use crate::families::ScheduleFamily;
use crate::moebius::SpherePoint;

/// `N_ε` of `(S1)`, or the marker for schedules with finitely many pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NEpsilon {
    Index(usize),
    FiniteSupport,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct S1Outcome {
    pub epsilon: f64,
    pub level: usize,
    pub n_epsilon: NEpsilon,
    /// Largest `diameter / b(i)` over the checked circles (at most 1).
    pub max_ratio: f64,
}

/// One accumulation point estimate with the indices whose circles gather there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub point: SpherePoint,
    pub indices: Vec<usize>,
}

/// An infinite (or finitely supported) family of paired circles given by
/// closed formulas, with a nonincreasing bound `b(i) → 0` on the chordal
/// diameters of `C_i` and `C'_i`. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationSchedule {
    pub family: ScheduleFamily,
    pub levels: usize,
}

const MAX_N_EPSILON_SEARCH: usize = 1 << 20;

impl ConfigurationSchedule {
    pub fn new(family: ScheduleFamily, levels: usize) -> Result<Self, ConfigError> {
        if levels == 0 {
            return Err(ConfigError::BadParameters("levels must be at least 1".into()));
        }
        if let Some(support) = family.support() {
            if levels > support {
                return Err(ConfigError::BadLevel { level: levels, support });
            }
        }
        Ok(Self { family, levels })
    }

    pub fn bound(&self, i: usize) -> f64 {
        self.family.bound(i)
    }

    pub fn pair(&self, i: usize) -> Result<PairedCircles, ConfigError> {
        self.family.pair(i)
    }

    fn check_level(&self, n: usize) -> Result<(), ConfigError> {
        if n == 0 {
            return Err(ConfigError::BadParameters("level must be at least 1".into()));
        }
        match self.family.support() {
            Some(support) if n > support => Err(ConfigError::BadLevel { level: n, support }),
            _ => Ok(()),
        }
    }

    /// The first `n` pairs as a validated configuration.
    pub fn truncate(&self, n: usize) -> Result<SchottkyConfiguration, ConfigError> {
        self.check_level(n)?;
        let pairs = (1..=n).map(|i| self.pair(i)).collect::<Result<Vec<_>, _>>()?;
        SchottkyConfiguration::from_oriented(pairs, Some(self.family.base_point()))
    }

    /// The first `n` pairs without validation, for levels whose circles are
    /// too small or too close for double precision to certify.
    pub fn truncate_unvalidated(&self, n: usize) -> Result<SchottkyConfiguration, ConfigError> {
        self.check_level(n)?;
        let pairs = (1..=n).map(|i| self.pair(i)).collect::<Result<Vec<_>, _>>()?;
        Ok(SchottkyConfiguration::from_parts(pairs, self.family.base_point()))
    }

    /// Checks `diam(C_i), diam(C'_i) ≤ b(i)` for `i ≤ n`, that `b` is
    /// nonincreasing there, and finds the least `N` with `b(N) < ε`.
    pub fn check_s1(&self, n: usize, epsilon: f64) -> Result<S1Outcome, ConfigError> {
        self.check_level(n)?;
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(ConfigError::BadParameters("epsilon must be positive".into()));
        }
        let mut max_ratio: f64 = 0.0;
        for i in 1..=n {
            let b = self.bound(i);
            if i > 1 && b > self.bound(i - 1) {
                return Err(ConfigError::BoundNotMonotone { index: i - 1 });
            }
            let pair = self.pair(i)?;
            for c in [pair.circle, pair.partner] {
                let diameter = c.circle().chordal_diameter();
                if diameter > b {
                    return Err(ConfigError::BoundViolated { index: i, diameter, bound: b });
                }
                max_ratio = max_ratio.max(diameter / b);
            }
        }
        let n_epsilon = match self.family.support() {
            Some(_) => NEpsilon::FiniteSupport,
            None => {
                let n = (1..MAX_N_EPSILON_SEARCH).find(|&i| self.bound(i) < epsilon).ok_or_else(|| {
                    ConfigError::BadParameters(format!("bound stays above {epsilon:e} for {MAX_N_EPSILON_SEARCH} indices"))
                })?;
                NEpsilon::Index(n)
            }
        };
        Ok(S1Outcome { epsilon, level: n, n_epsilon, max_ratio })
    }

    /// Full validation of the level-`n` truncation together with `(S1)`.
    pub fn validate(&self, n: usize, epsilon: f64) -> Result<ValidationReport, ConfigError> {
        let config = self.truncate_unvalidated(n)?;
        let mut report = config.validate();
        match self.check_s1(n, epsilon) {
            Ok(s1) => {
                report.n_epsilon = Some(s1.n_epsilon);
                report.max_diameter_excess = Some(s1.max_ratio - 1.0);
            }
            Err(e @ (ConfigError::BoundViolated { .. } | ConfigError::BoundNotMonotone { .. })) => {
                report.s1 = Verdict::Fail;
                report.n_epsilon = None;
                report.failures.push(e);
            }
            Err(e) => return Err(e),
        }
        report.refresh_verdict();
        Ok(report)
    }

    /// Estimates the accumulation set `𝔠'` from the circles of indices
    /// `⌈n/2⌉..=n`: interior poles are grouped by single linkage at distance
    /// `4 b(⌈n/2⌉)`, and each group is represented by the first circle of its deepest pair.
    pub fn limit_points_estimate(&self, n: usize) -> Result<Vec<Cluster>, ConfigError> {
        self.check_level(n)?;
        if n < 2 {
            return Err(ConfigError::BadParameters("limit point estimate needs level at least 2".into()));
        }
        if self.family.support().is_some() {
            return Ok(Vec::new());
        }
        let start = n.div_ceil(2);
        let threshold = 4.0 * self.bound(start);
        let mut points = Vec::new();
        for i in start..=n {
            let pair = self.pair(i)?;
            for c in [pair.circle, pair.partner] {
                points.push((i, c.interior_cap().pole_point()));
            }
        }
        // union-find over the close pairs
        let mut parent: Vec<usize> = (0..points.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in 0..points.len() {
            for b in (a + 1)..points.len() {
                if points[a].1.chordal_distance(&points[b].1) <= threshold {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
        for k in 0..points.len() {
            let root = find(&mut parent, k);
            match clusters.iter_mut().find(|(r, _)| *r == root) {
                Some((_, members)) => members.push(k),
                None => clusters.push((root, vec![k])),
            }
        }
        Ok(clusters
            .into_iter()
            .map(|(_, members)| {
                let depth = members.iter().map(|&k| points[k].0).max().expect("nonempty cluster");
                let deepest = *members.iter().find(|&&k| points[k].0 == depth).expect("deepest member");
                let mut indices: Vec<usize> = members.iter().map(|&k| points[k].0).collect();
                indices.dedup();
                Cluster { point: points[deepest].1, indices }
            })
            .collect())
    }
}

pub fn truncate(schedule: &ConfigurationSchedule, n: usize) -> Result<SchottkyConfiguration, ConfigError> {
    schedule.truncate(n)
}

pub fn check_s1(schedule: &ConfigurationSchedule, n: usize, epsilon: f64) -> Result<S1Outcome, ConfigError> {
    schedule.check_s1(n, epsilon)
}

pub fn limit_points_estimate(schedule: &ConfigurationSchedule, n: usize) -> Result<Vec<Cluster>, ConfigError> {
    schedule.limit_points_estimate(n)
}
