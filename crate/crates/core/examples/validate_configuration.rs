//! Building a finite configuration from circle pairs and running the
//! admissibility checks on it, including a configuration that fails.
//!
//!     cargo run --example validate_configuration

use num_complex::Complex64;
use schottky::config::{orient, CirclePair, PairingMethod, SchottkyConfiguration};
use schottky::moebius::{GeneralizedCircle, SpherePoint};

fn circle(re: f64, im: f64, r: f64) -> GeneralizedCircle {
    GeneralizedCircle::from_center_radius(Complex64::new(re, im), r).expect("positive radius")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        CirclePair { circle: circle(-6.0, 0.0, 1.0), partner: circle(-2.0, 0.0, 1.0), pairing: PairingMethod::Reflection },
        CirclePair { circle: circle(0.0, 5.0, 0.5), partner: circle(0.0, -5.0, 2.0), pairing: PairingMethod::General { twist: 0.5 } },
    ];
    let config = SchottkyConfiguration::new(&pairs, None)?;
    let report = config.validate();
    println!("rank {} base point {}", config.rank(), config.base_point());
    println!(
        "verdict {:?}: S2 {:?}, S3 {:?} (margin {:.4}), pairings {:?}",
        report.verdict, report.s2, report.s3, report.s3_margin, report.pairings
    );
    for p in [SpherePoint::from_re_im(-6.0, 0.0), SpherePoint::from_re_im(0.0, 0.0), SpherePoint::from_re_im(0.0, -7.0)] {
        println!("{p} is {:?}", config.locate(&p));
    }

    // one circle nested between the others separates them
    let nested = [circle(0.0, 0.0, 1.0), circle(0.0, 0.0, 2.0), circle(0.0, 0.0, 3.0), circle(0.0, 0.0, 4.0)];
    match orient(&nested) {
        Ok(_) => println!("unexpectedly admissible"),
        Err(e) => println!("concentric circles: {e}"),
    }
    Ok(())
}
