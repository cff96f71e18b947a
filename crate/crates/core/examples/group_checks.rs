//! The Schottky group checks on the reference group: freeness, precise
//! invariance of the exterior, fundamental-domain round trips, disk cover
//! and fixed points of words.
//!
//!     cargo run --release --example group_checks

use schottky::families::build_classical_rank_g;
use schottky::group::{
    check_disk_cover, check_free_loxodromic, check_precise_invariance, check_round_trips, word_fixed_points,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = build_classical_rank_g(2, 4.0)?;

    let free = check_free_loxodromic(&config, 8);
    println!(
        "freeness: {} words, {} violations, min distance to identity {:.2}",
        free.words_checked, free.violations_total, free.min_identity_distance
    );

    let inv = check_precise_invariance(&config, 6, 200, 1);
    println!("invariance: {} checks, {} returns to Ext", inv.checks, inv.violations_total);

    let trips = check_round_trips(&config, 8, 1000, 1);
    println!("round trips: {}/{} (max point error {:.1e})", trips.successes, trips.trials, trips.max_point_error);

    let cover = check_disk_cover(&config, 5)?;
    println!(
        "depth-5 cover: {} disks (expected {}), min separation {:.2e}, passed {}",
        cover.disks, cover.expected, cover.min_separation, cover.passed()
    );

    let fixed = word_fixed_points(&config, 3);
    println!("{} fixed points of cyclically reduced words up to length 3, e.g.", fixed.len());
    for e in fixed.iter().take(4) {
        let kind = if e.attracting { "attracting" } else { "repelling" };
        println!("  {} {kind} {}", e.word, e.point);
    }
    Ok(())
}
