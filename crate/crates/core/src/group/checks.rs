use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::cloud::{limit_cloud, CloudParams};
use super::reduce::{reduce_precise, ReductionVerdict, DEFAULT_MAX_STEPS};
use super::word::{letter_from_key, Alphabet, ReducedWord};
use super::GroupError;
use crate::config::{Location, SchottkyConfiguration};
use crate::moebius::{Classification, GeneralizedCircle, MoebiusMap, PrecisePoint, SphereMap, SpherePoint};
use crate::tol;

/// Witness lists in reports are cut to this many entries; totals stay exact.
pub const MAX_WITNESSES: usize = 32;

/// Calls `visit(letters, A_w)` for every nonempty reduced word of length at
/// most `max_len` starting with `first`, in lexicographic (depth-first) order.
fn walk_from<F: FnMut(&[i32], &MoebiusMap)>(alphabet: &Alphabet, max_len: usize, first: i32, visit: &mut F) {
    let keys = 2 * alphabet.rank() as u32;
    let mut letters = vec![first];
    let mut maps = vec![*alphabet.letter(first).expect("first letter within rank")];
    // per depth, the next key to try
    let mut next_key = vec![0u32];
    visit(&letters, &maps[0]);
    while !letters.is_empty() {
        let depth = letters.len();
        if depth == max_len {
            letters.pop();
            maps.pop();
            next_key.pop();
            continue;
        }
        let k = next_key[depth - 1];
        if k >= keys {
            letters.pop();
            maps.pop();
            next_key.pop();
            continue;
        }
        next_key[depth - 1] = k + 1;
        let l = letter_from_key(k);
        if l == -letters[depth - 1] {
            continue;
        }
        let map = maps[depth - 1].compose(alphabet.letter(l).expect("letter within rank"));
        letters.push(l);
        maps.push(map);
        next_key.push(0);
        visit(&letters, &map);
    }
}

/// Runs `walk_from` for every first letter in parallel and returns the
/// per-letter results in canonical letter order.
fn par_walk<T, I, F>(alphabet: &Alphabet, max_len: usize, init: I, visit: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[i32], &MoebiusMap) + Sync,
{
    if max_len == 0 {
        return Vec::new();
    }
    (0..2 * alphabet.rank() as u32)
        .into_par_iter()
        .map(|k| {
            let mut acc = init();
            walk_from(alphabet, max_len, letter_from_key(k), &mut |w, m| visit(&mut acc, w, m));
            acc
        })
        .collect()
}

fn word(letters: &[i32]) -> ReducedWord {
    ReducedWord::from_letters_unchecked(letters.to_vec())
}

fn is_cyclically_reduced(letters: &[i32]) -> bool {
    letters.first() != letters.last().map(|l| -l).as_ref()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointEntry {
    pub point: SpherePoint,
    pub word: ReducedWord,
    pub attracting: bool,
}

/// Calls `visit(letters, attracting, repelling)` for every nontrivial
/// cyclically reduced word of length at most `max_len`, in parallel.
/// Accumulators are returned per first letter, in canonical order.
pub fn fold_word_fixed_points<T, I, F>(config: &SchottkyConfiguration, max_len: usize, init: I, visit: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[i32], SpherePoint, SpherePoint) + Sync,
{
    let alphabet = Alphabet::new(config);
    par_walk(&alphabet, max_len, init, |acc, letters, map| {
        if !is_cyclically_reduced(letters) {
            return;
        }
        if let Ok(fp) = map.fixed_points() {
            let points = fp.points();
            let (a, r) = match (fp.attracting(), fp.repelling()) {
                (Some(a), Some(r)) => (a, r),
                _ => (points[0], *points.last().expect("at least one fixed point")),
            };
            visit(acc, letters, a, r);
        }
    })
}

/// Fixed points of every nontrivial cyclically reduced word up to
/// `max_len`, deduplicated within `tol::GEOMETRIC` (first occurrence in
/// canonical word order wins).
pub fn word_fixed_points(config: &SchottkyConfiguration, max_len: usize) -> Vec<FixedPointEntry> {
    let per_letter = fold_word_fixed_points(config, max_len, Vec::new, |acc: &mut Vec<FixedPointEntry>, w, a, r| {
        acc.push(FixedPointEntry { point: a, word: word(w), attracting: true });
        acc.push(FixedPointEntry { point: r, word: word(w), attracting: false });
    });
    let mut all: Vec<FixedPointEntry> = per_letter.into_iter().flatten().collect();
    all.sort_by(|a, b| a.word.cmp(&b.word).then(b.attracting.cmp(&a.attracting)));
    dedup_points(all)
}

fn dedup_points(entries: Vec<FixedPointEntry>) -> Vec<FixedPointEntry> {
    let cell = tol::GEOMETRIC;
    let mut grid: HashMap<[i64; 3], Vec<[f64; 3]>> = HashMap::new();
    let mut out = Vec::new();
    for e in entries {
        let x = e.point.to_unit_sphere();
        let key = x.map(|v| (v / cell).floor() as i64);
        let mut duplicate = false;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(pts) = grid.get(&[key[0] + dx, key[1] + dy, key[2] + dz]) {
                        if pts.iter().any(|y| {
                            ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt() <= cell
                        }) {
                            duplicate = true;
                            break 'search;
                        }
                    }
                }
            }
        }
        if !duplicate {
            grid.entry(key).or_default().push(x);
            out.push(e);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreenessViolation {
    pub word: ReducedWord,
    pub classification: Option<Classification>,
    pub identity_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreenessReport {
    pub max_len: usize,
    pub words_checked: u64,
    pub violations_total: u64,
    pub violations: Vec<FreenessViolation>,
    pub min_identity_distance: f64,
}

impl FreenessReport {
    pub fn passed(&self) -> bool {
        self.violations_total == 0
    }
}

/// Every nontrivial reduced word of length at most `max_len` must be
/// loxodromic and at least `tol::IDENTITY_DISTANCE` from `±I`.
pub fn check_free_loxodromic(config: &SchottkyConfiguration, max_len: usize) -> FreenessReport {
    #[derive(Default)]
    struct Acc {
        words: u64,
        total: u64,
        violations: Vec<FreenessViolation>,
        min_distance: f64,
    }
    let alphabet = Alphabet::new(config);
    let per_letter = par_walk(
        &alphabet,
        max_len,
        || Acc { min_distance: f64::INFINITY, ..Acc::default() },
        |acc, letters, map| {
            acc.words += 1;
            let distance = map.distance_to_identity();
            acc.min_distance = acc.min_distance.min(distance);
            let classification = map.classify().ok();
            if classification != Some(Classification::Loxodromic) || distance <= tol::IDENTITY_DISTANCE {
                acc.total += 1;
                acc.violations.push(FreenessViolation { word: word(letters), classification, identity_distance: distance });
            }
        },
    );
    let mut violations: Vec<FreenessViolation> = Vec::new();
    let (mut words_checked, mut violations_total, mut min_identity_distance) = (0, 0, f64::INFINITY);
    for acc in per_letter {
        words_checked += acc.words;
        violations_total += acc.total;
        min_identity_distance = min_identity_distance.min(acc.min_distance);
        violations.extend(acc.violations);
    }
    violations.sort_by(|a, b| a.word.cmp(&b.word));
    violations.truncate(MAX_WITNESSES);
    FreenessReport { max_len, words_checked, violations_total, violations, min_identity_distance }
}

/// Point at angle `theta` from `pole`, at azimuth `t` around it.
fn point_around(pole: [f64; 3], theta: f64, t: f64) -> SpherePoint {
    let helper = if pole[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = helper[0] * pole[0] + helper[1] * pole[1] + helper[2] * pole[2];
    let mut u = [0, 1, 2].map(|j| helper[j] - dot * pole[j]);
    let len = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u = u.map(|x| x / len);
    let v = [
        pole[1] * u[2] - pole[2] * u[1],
        pole[2] * u[0] - pole[0] * u[2],
        pole[0] * u[1] - pole[1] * u[0],
    ];
    let (s, c) = theta.sin_cos();
    let (st, ct) = t.sin_cos();
    SpherePoint::from_unit_sphere([0, 1, 2].map(|j| c * pole[j] + s * (ct * u[j] + st * v[j])))
}

/// Seeded points of `Ext(𝔠)⁰`. Even draws are uniform on the sphere; odd
/// draws sit just outside a random circle, within one angular radius of it,
/// where a broken pairing would show first.
pub fn sample_exterior(config: &SchottkyConfiguration, samples: usize, seed: u64) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circles = config.circles();
    let mut out = Vec::with_capacity(samples);
    let mut draws = 0usize;
    while out.len() < samples && draws < 1000 * samples.max(1) {
        let candidate = if out.len() % 2 == 0 {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let r = (1.0 - z * z).sqrt();
            SpherePoint::from_unit_sphere([r * phi.cos(), r * phi.sin(), z])
        } else {
            let cap = circles[rng.gen_range(0..circles.len())].interior_cap();
            let theta = cap.angle + rng.gen_range(0.0..1.0) * cap.angle.min(PI - cap.angle);
            point_around(cap.pole, theta, rng.gen_range(0.0..2.0 * PI))
        };
        draws += 1;
        if config.locate(&candidate) == Location::Exterior {
            out.push(candidate);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceWitness {
    pub word: ReducedWord,
    pub point: SpherePoint,
    pub image: SpherePoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub max_len: usize,
    pub samples: usize,
    pub seed: u64,
    pub words: u64,
    pub checks: u64,
    pub violations_total: u64,
    pub witnesses: Vec<InvarianceWitness>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.violations_total == 0 && self.checks > 0
    }
}

/// No nontrivial word of length at most `max_len` may send a sampled point
/// of `Ext(𝔠)⁰` back into `Ext(𝔠)⁰`.
pub fn check_precise_invariance(
    config: &SchottkyConfiguration,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> InvarianceReport {
    let points = sample_exterior(config, samples, seed);
    let alphabet = Alphabet::new(config);
    let per_letter = par_walk(
        &alphabet,
        max_len,
        || (0u64, 0u64, Vec::new()),
        |(words, total, witnesses): &mut (u64, u64, Vec<InvarianceWitness>), letters, map| {
            *words += 1;
            for p in &points {
                let image = map.apply(*p);
                if config.locate(&image) == Location::Exterior {
                    *total += 1;
                    if witnesses.len() < MAX_WITNESSES {
                        witnesses.push(InvarianceWitness { word: word(letters), point: *p, image });
                    }
                }
            }
        },
    );
    let mut words = 0;
    let mut violations_total = 0;
    let mut witnesses = Vec::new();
    for (w, t, wit) in per_letter {
        words += w;
        violations_total += t;
        witnesses.extend(wit);
    }
    witnesses.sort_by(|a, b| a.word.cmp(&b.word));
    witnesses.truncate(MAX_WITNESSES);
    InvarianceReport {
        max_len,
        samples: points.len(),
        seed,
        words,
        checks: words * points.len() as u64,
        violations_total,
        witnesses,
    }
}

/// Largest chordal error accepted when a round trip returns to its start.
pub const ROUND_TRIP_TOLERANCE: f64 = tol::LONG_WORD;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripFailure {
    pub word: ReducedWord,
    pub point: SpherePoint,
    pub recovered_word: ReducedWord,
    pub terminal: SpherePoint,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub max_len: usize,
    pub trials: usize,
    pub seed: u64,
    pub successes: usize,
    pub max_point_error: f64,
    pub failures: Vec<RoundTripFailure>,
}

impl RoundTripReport {
    pub fn passed(&self) -> bool {
        self.trials > 0 && self.successes == self.trials
    }
}

/// Random reduced word on `rank` generators with length uniform in `0..=max_len`.
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> ReducedWord {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = letter_from_key(rng.gen_range(0..2 * rank as u32));
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    ReducedWord::from_letters_unchecked(letters)
}

/// Fundamental-domain round trips: for seeded `p ∈ Ext(𝔠)⁰` and random
/// words `w`, `reduce(w(p))` must return the word `w⁻¹` and a point within
/// [`ROUND_TRIP_TOLERANCE`] of `p`. Orbit points are built letter by letter
/// in double-double arithmetic.
pub fn check_round_trips(config: &SchottkyConfiguration, max_len: usize, trials: usize, seed: u64) -> RoundTripReport {
    let points = sample_exterior(config, trials, seed);
    let alphabet = Alphabet::new(config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut successes = 0;
    let mut max_point_error: f64 = 0.0;
    let mut failures = Vec::new();
    for p in &points {
        let w = random_word(&mut rng, config.rank(), max_len);
        let image = alphabet.apply_word(&w, PrecisePoint::from(*p)).expect("letters within rank");
        let trace = reduce_precise(config, image, max_len.max(DEFAULT_MAX_STEPS));
        let terminal = trace.terminal();
        let error = terminal.chordal_distance(p);
        max_point_error = max_point_error.max(error);
        let recovered_word = trace.word();
        if trace.verdict == ReductionVerdict::ReducedToExt && recovered_word == w.inverse() && error <= ROUND_TRIP_TOLERANCE
        {
            successes += 1;
        } else if failures.len() < MAX_WITNESSES {
            failures.push(RoundTripFailure { word: w, point: *p, recovered_word, terminal, error });
        }
    }
    RoundTripReport { max_len, trials: points.len(), seed, successes, max_point_error, failures }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// The negative side of the test circle (for `|z| = 1`, the unit disk).
    Negative,
    Positive,
    OnCircle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeCrossing {
    pub word: ReducedWord,
    pub image: SpherePoint,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub max_len: usize,
    pub base: SpherePoint,
    pub base_side: Side,
    pub orbit_points: u64,
    pub negative_side: u64,
    pub positive_side: u64,
    pub on_circle: u64,
    /// First word in canonical order moving the base point to the other side.
    pub crossing: Option<ProbeCrossing>,
    /// Minimum chordal distance from limit-cloud points to the test circle.
    pub min_cloud_distance: Option<f64>,
}

pub const PROBE_CLOUD: CloudParams = CloudParams { epsilon: 1e-2, max_depth: 12, max_points: 50_000 };

fn side_of(circle: &GeneralizedCircle, p: &SpherePoint) -> Side {
    if circle.distance_to(p) <= tol::GEOMETRIC {
        Side::OnCircle
    } else if circle.form_value(p) < 0.0 {
        Side::Negative
    } else {
        Side::Positive
    }
}

/// Evidence about a `Γ`-invariant component on one side of `test_circle`:
/// sides of the orbit points `w(base)`, `|w| ≤ max_len`, the first crossing,
/// and how close the limit set comes to the circle.
pub fn invariant_component_probe(
    config: &SchottkyConfiguration,
    test_circle: &GeneralizedCircle,
    base: SpherePoint,
    max_len: usize,
) -> Result<ProbeReport, GroupError> {
    invariant_component_probe_with_cloud(config, test_circle, base, max_len, Some(PROBE_CLOUD))
}

pub fn invariant_component_probe_with_cloud(
    config: &SchottkyConfiguration,
    test_circle: &GeneralizedCircle,
    base: SpherePoint,
    max_len: usize,
    cloud: Option<CloudParams>,
) -> Result<ProbeReport, GroupError> {
    let base_side = side_of(test_circle, &base);
    if base_side == Side::OnCircle {
        return Err(GroupError::BaseOnTestCircle);
    }
    let alphabet = Alphabet::new(config);
    let per_letter = par_walk(
        &alphabet,
        max_len,
        || ([0u64; 3], None::<ProbeCrossing>),
        |(counts, crossing), letters, map| {
            let image = map.apply(base);
            let side = side_of(test_circle, &image);
            counts[side as usize] += 1;
            if side != base_side && side != Side::OnCircle {
                let candidate = word(letters);
                if crossing.as_ref().is_none_or(|c| candidate < c.word) {
                    *crossing = Some(ProbeCrossing { word: candidate, image, side });
                }
            }
        },
    );
    let mut counts = [0u64; 3];
    counts[base_side as usize] += 1;
    let mut crossing: Option<ProbeCrossing> = None;
    for (c, x) in per_letter {
        for k in 0..3 {
            counts[k] += c[k];
        }
        if let Some(x) = x {
            if crossing.as_ref().is_none_or(|c| x.word < c.word) {
                crossing = Some(x);
            }
        }
    }
    let min_cloud_distance = match cloud {
        Some(params) => Some(limit_cloud(config, params)?.min_distance_to_circle(test_circle)),
        None => None,
    };
    Ok(ProbeReport {
        max_len,
        base,
        base_side,
        orbit_points: counts.iter().sum(),
        negative_side: counts[Side::Negative as usize],
        positive_side: counts[Side::Positive as usize],
        on_circle: counts[Side::OnCircle as usize],
        crossing,
        min_cloud_distance,
    })
}
