//! Möbius maps on the Riemann sphere: action, classification, fixed points,
//! and how circles are carried along.
//!
//!     cargo run --example moebius_maps

use num_complex::Complex64;
use schottky::moebius::{GeneralizedCircle, MoebiusMap, SphereMap, SpherePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = MoebiusMap::from_real(3.0, 8.0, 1.0, 3.0)?;
    println!("A = {a}");
    println!("det A = {}, tr² A = {}", a.det(), a.trace_squared());
    println!("class: {:?}", a.classify()?);

    let fp = a.fixed_points()?;
    println!("attracting {}, repelling {}", fp.attracting().unwrap(), fp.repelling().unwrap());

    for p in [SpherePoint::from_re_im(0.0, 0.0), SpherePoint::Infinity, SpherePoint::from_re_im(-3.0, 0.0)] {
        println!("A({p}) = {}", a.apply(p));
    }

    let circle = GeneralizedCircle::from_center_radius(Complex64::new(-3.0, 0.0), 1.0)?;
    let image = circle.transform(&a);
    println!("A maps {circle} to {image}");
    println!("chordal diameters: {:.6} -> {:.6}", circle.chordal_diameter(), image.chordal_diameter());

    let sigma = circle.reflection();
    let z = SpherePoint::from_re_im(0.0, 0.0);
    println!("reflection of {z} in {circle}: {}", sigma.apply(z));
    Ok(())
}
