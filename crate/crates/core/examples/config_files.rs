//! Configuration files and the command-line front end, driven in-process:
//! write a family to JSON, load it back, validate it and compute a cloud.
//!
//!     cargo run --example config_files

use schottky::cli::{run, Certification, ConfigFile, Loaded};
use schottky::families::build_classical_rank_g;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = build_classical_rank_g(2, 4.0)?;
    // explicit matrices instead of the auto-reflection recipe
    let file = ConfigFile::from_configuration(&config, true);
    let text = serde_json::to_string_pretty(&file)?;
    println!("{text}");

    match ConfigFile::parse(&text)?.load(Certification::Required) {
        Ok(Loaded::Finite(back)) => println!("reloaded rank {} configuration, valid {}", back.rank(), back.validate().passed()),
        Ok(Loaded::Schedule(_)) => println!("unexpected schedule"),
        Err(e) => println!("load failed: {e}"),
    }

    let dir = std::env::temp_dir().join("schottky-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("counterexample.json");
    let path = path.to_str().ok_or("non-UTF-8 temp dir")?;
    let made = run(["schottky", "example", "unit-circle-counterexample", "--levels", "16", "--out", path]);
    let checked = run(["schottky", "validate", path, "--level", "8"]);
    println!("example exit {}, validate exit {}", made.code, checked.code);
    let cloud = run(["schottky", "limitset", path, "--level", "8", "--eps", "0.05"]);
    println!("limitset exit {}, first rows:", cloud.code);
    for line in cloud.stdout.lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
