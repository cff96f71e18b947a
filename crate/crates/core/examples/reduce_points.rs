//! Words in the generators and the reduction of points into the closed
//! exterior of the configuration.
//!
//!     cargo run --example reduce_points

use schottky::families::build_classical_rank_g;
use schottky::group::{enumerate_words, evaluate, reduce, ReducedWord, DEFAULT_MAX_STEPS};
use schottky::moebius::{SphereMap, SpherePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = build_classical_rank_g(2, 4.0)?;
    let words: Vec<String> = enumerate_words(2, 2).map(|w| w.to_string()).collect();
    println!("words of length <= 2: [{}]", words.join(", "));

    let w: ReducedWord = "1.-2.1".parse()?;
    let map = evaluate(&config, &w)?;
    let p = SpherePoint::from_re_im(0.0, 1.0);
    let image = map.apply(p);
    println!("{w} sends {p} to {image}");

    let trace = reduce(&config, image, DEFAULT_MAX_STEPS);
    for step in &trace.steps {
        println!("  apply {:>2} -> {}", step.letter, step.point);
    }
    println!("{:?}: recovered word {} (inverse of {w}), point {}", trace.verdict, trace.word(), trace.terminal());
    Ok(())
}
