//! The unit-circle example: every truncation is a valid Schottky
//! configuration, yet the orbit of 0 leaves the unit disk at once and the
//! limit set piles up on |z| = 1, so the exterior has no invariant
//! component on either side of the circle.
//!
//!     cargo run --release --example counterexample_probe

use schottky::families::build_unit_circle_counterexample;
use schottky::group::invariant_component_probe;
use schottky::moebius::{GeneralizedCircle, SpherePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = build_unit_circle_counterexample(64)?;
    let unit = GeneralizedCircle::unit();
    for level in [4, 8, 16] {
        let config = schedule.truncate(level)?;
        let probe = invariant_component_probe(&config, &unit, SpherePoint::from_re_im(0.0, 0.0), 2)?;
        let crossing = probe.crossing.as_ref().map_or("none".to_string(), |c| format!("{} -> {}", c.word, c.image));
        println!(
            "level {level:>2}: {} orbit points, inside {} outside {}, crossing {crossing}, cloud within {:.3e} of |z|=1",
            probe.orbit_points,
            probe.negative_side,
            probe.positive_side,
            probe.min_cloud_distance.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
