//! Infinite configurations as schedules: diameter bounds, `N_ε`, truncations
//! and accumulation point estimates for the built-in families.
//!
//!     cargo run --example schedules

use schottky::families::{build_accumulating_point, build_unit_circle_counterexample, descriptors};
use schottky::moebius::SpherePoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in descriptors() {
        let params: Vec<_> = d.params.iter().map(|p| p.name).collect();
        println!("{} ({})", d.name, params.join(", "));
    }

    let p = SpherePoint::from_re_im(0.0, 0.0);
    let acc = build_accumulating_point(p, 32)?;
    let s1 = acc.check_s1(32, 1e-3)?;
    println!("\naccumulating at {p}: N_eps(1e-3) = {:?}, max diameter/bound {:.3}", s1.n_epsilon, s1.max_ratio);
    for n in [4, 8, 16, 32] {
        let report = acc.validate(n, 1e-3)?;
        let clusters = acc.limit_points_estimate(n)?;
        let near = clusters.iter().map(|c| c.point.chordal_distance(&p)).fold(f64::INFINITY, f64::min);
        println!("level {n}: {:?}, {} cluster(s), nearest {near:.2e} from p", report.verdict, clusters.len());
    }

    let unit = build_unit_circle_counterexample(64)?;
    println!("\nunit-circle family, level 16: {:?}", unit.validate(16, 1e-3)?.verdict);
    // deep levels fall below double precision; the checked truncation says so
    match unit.truncate(64) {
        Ok(_) => println!("level 64 certified"),
        Err(e) => println!("level 64 not certified: {e}"),
    }
    let deep = unit.truncate_unvalidated(64)?;
    println!("unchecked level-64 truncation has rank {}", deep.rank());
    Ok(())
}
