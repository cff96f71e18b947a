use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schottky::config::{orient, CirclePair, ConfigError, Location, OrientedCircle, PairingMethod, SchottkyConfiguration};
use schottky::families::{build_classical_rank_g, build_unit_circle_counterexample};
use schottky::moebius::{Classification, GeneralizedCircle, MoebiusMap, SphereMap, SpherePoint};
use schottky::pairing::{isometric_circle, synthesize_general, synthesize_reflection, verify_pairing};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Copy, Debug)]
struct Disk {
    center: Complex64,
    radius: f64,
}

impl Disk {
    fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    fn circle(&self) -> GeneralizedCircle {
        GeneralizedCircle::from_center_radius(self.center, self.radius).unwrap()
    }
}

/// `n` pairwise disjoint, non-nested disks with gaps of at least `gap`.
fn random_disks(rng: &mut ChaCha8Rng, n: usize, gap: f64) -> Vec<Disk> {
    let mut disks: Vec<Disk> = Vec::new();
    while disks.len() < n {
        let d = Disk { center: c(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0)), radius: rng.gen_range(0.2..1.5) };
        if disks.iter().all(|e| (d.center - e.center).norm() > d.radius + e.radius + gap) {
            disks.push(d);
        }
    }
    disks
}

#[test]
fn orientation_agrees_with_euclidean_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let n = 2 * rng.gen_range(1..4);
        let disks = random_disks(&mut rng, n, 0.1);
        // every other trial encloses everything in one big circle whose Int is the outside
        let enclose = trial % 2 == 1;
        let mut circles: Vec<GeneralizedCircle> = disks.iter().map(Disk::circle).collect();
        if enclose {
            circles[0] = GeneralizedCircle::from_center_radius(c(0.0, 0.0), 30.0).unwrap();
        }
        let oriented = orient(&circles).unwrap();
        for (k, o) in oriented.iter().enumerate() {
            let (inside, outside) = if k == 0 && enclose {
                (c(100.0, 0.0), c(0.0, 0.0))
            } else {
                (disks[k].center, disks[k].center + c(disks[k].radius * 1.5, 0.0))
            };
            assert!(o.interior_contains(&SpherePoint::new(inside)), "trial {trial} circle {k}");
            assert!(!o.interior_contains(&SpherePoint::new(outside)), "trial {trial} circle {k}");
            // no other circle touches Int
            for (j, other) in circles.iter().enumerate() {
                if j != k {
                    assert!(other.sample(12).iter().all(|p| !o.interior_contains(p)));
                }
            }
        }
    }
}

#[test]
fn orientation_rejects_separation_and_overlap() {
    let ring = |r| GeneralizedCircle::from_center_radius(c(0.0, 0.0), r).unwrap();
    match orient(&[ring(1.0), ring(2.0), ring(3.0), ring(4.0)]) {
        Err(ConfigError::S2 { separator, .. }) => assert!(separator.flat_index() == 1 || separator.flat_index() == 2),
        other => panic!("{other:?}"),
    }
    let a = GeneralizedCircle::from_center_radius(c(0.0, 0.0), 1.0).unwrap();
    let b = GeneralizedCircle::from_center_radius(c(1.5, 0.0), 1.0).unwrap();
    assert!(matches!(orient(&[a, b]), Err(ConfigError::Disjointness { .. })));
    assert!(matches!(orient(&[a]), Err(ConfigError::Empty)));
}

#[test]
fn locate_agrees_with_per_disk_tests() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let disks = random_disks(&mut rng, 6, 0.2);
    let pairs: Vec<CirclePair> = disks
        .chunks(2)
        .map(|d| CirclePair { circle: d[0].circle(), partner: d[1].circle(), pairing: PairingMethod::General { twist: 0.3 } })
        .collect();
    let config = SchottkyConfiguration::new(&pairs, None).unwrap();
    for _ in 0..5000 {
        let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let hit = disks.iter().position(|d| d.contains(z) && (z - d.center).norm() < d.radius - 1e-6);
        let boundary = disks.iter().any(|d| ((z - d.center).norm() - d.radius).abs() <= 1e-6);
        if boundary {
            continue;
        }
        match (config.locate(&SpherePoint::new(z)), hit) {
            (Location::Exterior, None) => {}
            (Location::Interior(r), Some(k)) => assert_eq!(r.flat_index(), k),
            (got, want) => panic!("{z}: {got:?} vs {want:?}"),
        }
    }
    let center = disks[3].center + c(disks[3].radius, 0.0);
    assert!(matches!(config.locate(&SpherePoint::new(center)), Location::OnCircle(r) if r.flat_index() == 3));
}

#[test]
fn reflection_recipe_on_the_worked_example() {
    // C: |z + 3| = 1, C': |z - 3| = 1 gives (3z + 8)/(z + 3)
    let cc = OrientedCircle::disk(c(-3.0, 0.0), 1.0).unwrap();
    let cp = OrientedCircle::disk(c(3.0, 0.0), 1.0).unwrap();
    let a = synthesize_reflection(&cc, &cp).unwrap();
    let want = MoebiusMap::from_real(3.0, 8.0, 1.0, 3.0).unwrap();
    assert!(a.entry_distance(&want) <= 1e-12 || a.entry_distance(&want.compose(&MoebiusMap::from_real(-1.0, 0.0, 0.0, -1.0).unwrap())) <= 1e-12);
    let iso = isometric_circle(&a).unwrap();
    let (center, radius) = iso.center_radius().unwrap();
    assert!((center - c(-3.0, 0.0)).norm() <= 1e-12 && (radius - 1.0).abs() <= 1e-12);
    assert!(verify_pairing(&a, &cc, &cp).valid);
    assert_eq!(a.classify().unwrap(), Classification::Loxodromic);
}

#[test]
fn synthesized_pairings_map_circles_by_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let d = random_disks(&mut rng, 2, 1e-3);
        let (cc, cp) = (OrientedCircle::disk(d[0].center, d[0].radius).unwrap(), OrientedCircle::disk(d[1].center, d[1].radius).unwrap());
        let twist = rng.gen_range(-3.0..3.0);
        let a = synthesize_general(&cc, &cp, twist).unwrap();
        let m = a.entries();
        for t in 0..32 {
            let z = d[0].center + Complex64::from_polar(d[0].radius, t as f64 * 0.196);
            let w = (m[0] * z + m[1]) / (m[2] * z + m[3]);
            assert!(((w - d[1].center).norm() - d[1].radius).abs() <= 1e-9 * (1.0 + d[1].radius));
        }
        // a point outside C lands inside C'
        let far = d[0].center + c(d[0].radius * 3.0, 0.0);
        if !d[1].contains(far) && (far - d[1].center).norm() > d[1].radius + 1e-6 {
            let w = (m[0] * far + m[1]) / (m[2] * far + m[3]);
            assert!(d[1].contains(w));
        }
        assert!(verify_pairing(&a, &cc, &cp).valid);
        assert_eq!(a.classify().unwrap(), Classification::Loxodromic);
    }
}

#[test]
fn swapped_generator_fails_certification() {
    let cc = OrientedCircle::disk(c(-3.0, 0.0), 1.0).unwrap();
    let cp = OrientedCircle::disk(c(3.0, 0.0), 1.0).unwrap();
    let a = synthesize_reflection(&cc, &cp).unwrap();
    let cert = verify_pairing(&a.inverse(), &cc, &cp);
    assert!(!cert.valid);
    assert!(synthesize_reflection(&cc, &OrientedCircle::disk(c(3.0, 0.0), 2.0).unwrap()).is_err());
}

#[test]
fn reference_group_validates_and_conjugation_preserves_verdicts() {
    let config = build_classical_rank_g(2, 4.0).unwrap();
    let report = config.validate();
    assert!(report.passed(), "{report:?}");
    assert!(report.s3_margin > 0.0);
    let g = MoebiusMap::new(c(1.0, 0.5), c(0.2, 0.0), c(0.1, -0.3), c(1.0, 0.0)).unwrap();
    assert_eq!(config.conjugate(&g).validate().verdicts(), report.verdicts());
}

#[test]
fn counterexample_truncations_validate() {
    let schedule = build_unit_circle_counterexample(16).unwrap();
    for n in [1, 4, 16] {
        let report = schedule.validate(n, 1e-3).unwrap();
        assert!(report.passed(), "level {n}: {:?}", report.failures);
    }
    let config = schedule.truncate(16).unwrap();
    assert_eq!(config.rank(), 16);
    let a1 = config.generator(0).unwrap();
    // the first generator moves the base of the probe off the unit disk
    assert!(a1.apply(SpherePoint::from_re_im(0.0, 0.0)).finite().is_none_or(|z| z.norm() > 1.0));
}
