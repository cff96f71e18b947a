//! Side pairings `A(Ext C) = Int C'`: the reflection recipe for equal radii,
//! the general construction for any two disjoint disks, and certification.
//!
//!     cargo run --example pairings

use num_complex::Complex64;
use schottky::config::OrientedCircle;
use schottky::pairing::{isometric_circle, synthesize_general, synthesize_reflection, verify_pairing};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = OrientedCircle::disk(Complex64::new(-3.0, 0.0), 1.0)?;
    let cp = OrientedCircle::disk(Complex64::new(3.0, 0.0), 1.0)?;

    let a = synthesize_reflection(&c, &cp)?;
    println!("reflection recipe: {a}");
    println!("isometric circle: {}", isometric_circle(&a)?);
    let cert = verify_pairing(&a, &c, &cp);
    println!("certified: {} (boundary error {:.1e})", cert.valid, cert.boundary_error);

    // unequal radii need the general construction; the twist rotates the gluing
    let small = OrientedCircle::disk(Complex64::new(0.0, 4.0), 0.25)?;
    for twist in [0.0, 1.0] {
        let b = synthesize_general(&c, &small, twist)?;
        let cert = verify_pairing(&b, &c, &small);
        println!("general, twist {twist}: {b} {:?} certified {}", b.classify()?, cert.valid);
    }

    // the inverse pairs the circles the wrong way round
    let cert = verify_pairing(&a.inverse(), &c, &cp);
    println!("inverse certified: {} (failing probe {:?})", cert.valid, cert.failing_probe);
    Ok(())
}
