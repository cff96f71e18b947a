//! A limit-set point cloud for the reference rank-2 group, written as CSV.
//!
//!     cargo run --release --example limit_set -- 1e-3 > cloud.csv

use schottky::cli::cloud_csv;
use schottky::families::build_classical_rank_g;
use schottky::group::{limit_cloud, CloudParams};
use schottky::moebius::SpherePoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let epsilon = match std::env::args().nth(1) {
        Some(s) => s.parse()?,
        None => 1e-3,
    };
    let config = build_classical_rank_g(2, 4.0)?;
    let cloud = limit_cloud(&config, CloudParams { epsilon, max_depth: 40, max_points: 1_000_000 })?;
    eprintln!(
        "{} points, max disk diameter {:.2e}, truncated {}, nearest to 0: {:.4}",
        cloud.len(),
        cloud.max_disk_diameter(),
        cloud.truncated,
        cloud.min_distance_to(&SpherePoint::from_re_im(0.0, 0.0)),
    );
    print!("{}", cloud_csv(&cloud));
    Ok(())
}
