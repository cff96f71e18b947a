//! Acceptance suite. Runs every criterion in sequence (so the timings are not
//! skewed by other tests), prints one PASS/FAIL line each and exits non-zero
//! if any fails.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schottky::cli::{run, EXIT_PASS};
use schottky::config::{OrientedCircle, SchottkyConfiguration};
use schottky::families::{build_accumulating_point, build_classical_rank_g, build_unit_circle_counterexample};
use schottky::group::{
    check_disk_cover, check_free_loxodromic, check_precise_invariance, check_round_trips, fold_word_fixed_points,
    invariant_component_probe, limit_cloud, CloudParams, PointIndex, PROBE_CLOUD,
};
use schottky::moebius::{Classification, GeneralizedCircle, MoebiusMap, SpherePoint};
use schottky::pairing::{isometric_circle, synthesize_general, synthesize_reflection};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn reference() -> SchottkyConfiguration {
    build_classical_rank_g(2, 4.0).expect("reference group")
}

fn random_map(rng: &mut ChaCha8Rng, spread: f64) -> MoebiusMap {
    loop {
        let mut z = || c(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread));
        let (a, b, cc, d) = (z(), z(), z(), z());
        if (a * d - b * cc).norm() > 0.25 {
            return MoebiusMap::new(a, b, cc, d).unwrap();
        }
    }
}

/// Two disks with disjoint closures: random centers, log-uniform radii.
fn random_disk_pair(rng: &mut ChaCha8Rng) -> (OrientedCircle, OrientedCircle) {
    loop {
        let r1 = 10f64.powf(rng.gen_range(-2.0..1.0));
        let r2 = 10f64.powf(rng.gen_range(-2.0..1.0));
        let c1 = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let c2 = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if (c1 - c2).norm() > (r1 + r2) * 1.01 + 1e-3 {
            return (OrientedCircle::disk(c1, r1).unwrap(), OrientedCircle::disk(c2, r2).unwrap());
        }
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut loxodromic = 0;
    let total = 10_000;
    for k in 0..total {
        let (d1, d2) = random_disk_pair(&mut rng);
        let map = if k % 4 == 0 {
            // equal radii for the reflection recipe
            let r = 10f64.powf(rng.gen_range(-2.0..0.5));
            let c1 = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let dir = C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            let c2 = c1 + dir * (2.0 * r + rng.gen_range(0.01..5.0));
            synthesize_reflection(&OrientedCircle::disk(c1, r).unwrap(), &OrientedCircle::disk(c2, r).unwrap())
        } else {
            // move the pair around the sphere so lines and outer disks occur too
            let g = random_map(&mut rng, 2.0);
            synthesize_general(&d1.transform(&g), &d2.transform(&g), rng.gen_range(-3.0..3.0))
        };
        if map.ok().and_then(|m| m.classify().ok()) == Some(Classification::Loxodromic) {
            loxodromic += 1;
        }
    }
    outcome(loxodromic == total, format!("{loxodromic}/{total} loxodromic"))
}

/// Anti-Möbius matrix of the reflection in `|z - center| = r`:
/// `z ↦ (center z̄ + r² − |center|²) / (z̄ − conj(center))`.
fn circle_reflection(center: C, r: f64) -> [C; 4] {
    [center, c(r * r - center.norm_sqr(), 0.0), c(1.0, 0.0), -center.conj()]
}

/// `(M ∘ conj) ∘ (N ∘ conj)` is the Möbius map `M · conj(N)`.
fn anti_compose(m: [C; 4], n: [C; 4]) -> [C; 4] {
    let n = n.map(|z| z.conj());
    [m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3], m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3]]
}

fn criterion_2() -> Outcome {
    let (cc, cp) = (OrientedCircle::disk(c(-3.0, 0.0), 1.0).unwrap(), OrientedCircle::disk(c(3.0, 0.0), 1.0).unwrap());
    let Ok(a) = synthesize_reflection(&cc, &cp) else {
        return outcome(false, "synthesis failed".into());
    };
    // reflect in |z + 3| = 1, then in the bisector Re z = 0 (z ↦ −z̄)
    let mut oracle = anti_compose([c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], circle_reflection(c(-3.0, 0.0), 1.0));
    let det = (oracle[0] * oracle[3] - oracle[1] * oracle[2]).sqrt();
    oracle = oracle.map(|z| z / det);
    let expected = [c(3.0, 0.0), c(8.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)];
    let oracle_agrees = oracle.iter().zip(expected).all(|(x, y)| (x - y).norm() <= 1e-12)
        || oracle.iter().zip(expected).all(|(x, y)| (x + y).norm() <= 1e-12);
    let got = a.entries();
    let sign = if (got[0] - expected[0]).norm() < (got[0] + expected[0]).norm() { 1.0 } else { -1.0 };
    let entry_err = got.iter().zip(expected).map(|(x, y)| (x * sign - y).norm()).fold(0.0, f64::max);

    // |c z + d| = 1 with c = 1, d = 3
    let iso_oracle = GeneralizedCircle::from_center_radius(-expected[3] / expected[2], 1.0 / expected[2].norm()).unwrap();
    let coeff_err = isometric_circle(&a).map(|iso| iso.coefficient_distance(&iso_oracle)).unwrap_or(f64::INFINITY);
    outcome(
        oracle_agrees && entry_err <= 1e-10 && coeff_err <= 1e-9,
        format!("entry error {entry_err:.1e}, isometric circle error {coeff_err:.1e}"),
    )
}

fn criterion_3() -> Outcome {
    let r = check_free_loxodromic(&reference(), 8);
    let expected = 4 * (0..8).map(|k| 3u64.pow(k)).sum::<u64>();
    outcome(
        r.words_checked == expected && r.violations_total == 0 && r.min_identity_distance >= 1e-6,
        format!(
            "{} words (expected {expected}), {} violations, min distance to identity {:.3e}",
            r.words_checked, r.violations_total, r.min_identity_distance
        ),
    )
}

fn criterion_4() -> Outcome {
    let r = check_precise_invariance(&reference(), 6, 200, 4);
    outcome(
        r.passed() && r.samples == 200,
        format!("{} samples, {} word checks, {} returns to Ext", r.samples, r.checks, r.violations_total),
    )
}

fn criterion_5() -> Outcome {
    let r = check_round_trips(&reference(), 8, 1000, 5);
    outcome(
        r.passed() && r.trials == 1000,
        format!("{}/{} round trips, max point error {:.1e}", r.successes, r.trials, r.max_point_error),
    )
}

fn criterion_6() -> Outcome {
    match check_disk_cover(&reference(), 7) {
        Ok(r) => outcome(
            r.passed() && r.disks == 2916 && r.overlapping_pairs == 0 && r.nesting_violations == 0,
            format!(
                "{} disks, {} overlapping pairs, {} nesting violations, min parent margin {:.1e}",
                r.disks, r.overlapping_pairs, r.nesting_violations, r.min_parent_margin
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_7() -> Outcome {
    let config = reference();
    let epsilon = 1e-3;
    let cloud = match limit_cloud(&config, CloudParams { epsilon, max_depth: 40, max_points: 10_000_000 }) {
        Ok(cloud) => cloud,
        Err(e) => return outcome(false, e.to_string()),
    };
    let index = PointIndex::new(cloud.points(), epsilon);
    // stream the fixed points instead of materializing all of them
    let per_letter = fold_word_fixed_points(&config, 14, || (0u64, 0.0f64), |acc, _, att, rep| {
        acc.0 += 2;
        acc.1 = acc.1.max(index.nearest(&att)).max(index.nearest(&rep));
    });
    let points: u64 = per_letter.iter().map(|a| a.0).sum();
    let hausdorff = per_letter.iter().map(|a| a.1).fold(0.0, f64::max);
    outcome(
        !cloud.truncated && hausdorff <= 2e-3,
        format!("{points} fixed points vs {} cloud points, directed Hausdorff {hausdorff:.3e}", cloud.len()),
    )
}

fn criterion_8() -> Outcome {
    let p = SpherePoint::from_re_im(0.0, 0.0);
    let schedule = match build_accumulating_point(p, 32) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut passed = true;
    let mut last = f64::INFINITY;
    let mut parts = Vec::new();
    for n in [4, 8, 16, 32] {
        let bound = schedule.bound(n);
        let params = CloudParams { epsilon: 1e-3f64.min(bound / 4.0), max_depth: 64, max_points: 1_000_000 };
        let d = schedule
            .truncate(n)
            .ok()
            .and_then(|config| limit_cloud(&config, params).ok())
            .map_or(f64::INFINITY, |cloud| cloud.min_distance_to(&p));
        passed &= d <= bound && d <= last;
        last = d;
        parts.push(format!("n={n}: {d:.3e} <= {bound:.3e}"));
    }
    outcome(passed, parts.join(", "))
}

fn criterion_9() -> Outcome {
    let schedule = match build_unit_circle_counterexample(64) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let validated = schedule.validate(16, 1e-3).is_ok_and(|r| r.passed());
    let unit = GeneralizedCircle::unit();
    let crossing = schedule
        .truncate(16)
        .ok()
        .and_then(|config| invariant_component_probe(&config, &unit, SpherePoint::from_re_im(0.0, 0.0), 2).ok())
        .and_then(|r| r.crossing);
    let crossing_len = crossing.as_ref().map(|x| x.word.len());
    let distance = schedule
        .truncate_unvalidated(64)
        .ok()
        .and_then(|config| limit_cloud(&config, PROBE_CLOUD).ok())
        .map_or(f64::INFINITY, |cloud| cloud.min_distance_to_circle(&unit));
    outcome(
        validated && crossing_len.is_some_and(|l| l <= 2) && distance <= 0.05,
        format!(
            "level 16 valid: {validated}, crossing word: {}, level-64 cloud to |z|=1: {distance:.3e}",
            crossing.map_or("none".to_string(), |x| x.word.to_string())
        ),
    )
}

fn criterion_10() -> Outcome {
    let config = reference();
    let verdicts = config.validate().verdicts();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let agree = (0..100).filter(|_| config.conjugate(&random_map(&mut rng, 2.0)).validate().verdicts() == verdicts).count();
    outcome(agree == 100 && verdicts[0].passed(), format!("{agree}/100 conjugates agree"))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reference.json");
    let path = path.to_str().unwrap();
    let made = run(["schottky", "example", "classical-rank-g", "--g", "2", "--spacing", "4", "--out", path]);
    let one = run(["schottky", "limitset", path, "--eps", "1e-2", "--threads", "1"]);
    let eight = run(["schottky", "limitset", path, "--eps", "1e-2", "--threads", "8"]);
    let rows = one.stdout.lines().count().saturating_sub(1);
    outcome(
        made.code == EXIT_PASS && one.code == EXIT_PASS && one.stdout == eight.stdout && rows > 0,
        format!("{rows} rows, {} bytes, identical: {}", one.stdout.len(), one.stdout == eight.stdout),
    )
}

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("pairing loxodromy", 5, criterion_1),
        ("reflection recipe", 1, criterion_2),
        ("freeness", 5, criterion_3),
        ("precise invariance", 10, criterion_4),
        ("fundamental-domain round trip", 5, criterion_5),
        ("disk cover", 10, criterion_6),
        ("fixed-point closure", 60, criterion_7),
        ("accumulation points in the limit set", 60, criterion_8),
        ("unit-circle counterexample", 120, criterion_9),
        ("Möbius covariance", 10, criterion_10),
        ("determinism", 30, criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let passed = result.passed && in_time;
        failed += usize::from(!passed);
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s / {budget}s{}]",
            if passed { "PASS" } else { "FAIL" },
            k + 1,
            result.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over budget" },
        );
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
