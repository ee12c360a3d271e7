// Classify the bundled synthetic robot census.
//
// ```text
// cargo run -p dustsim --example census_field_study [-- path/to/census.csv]
// ```

use std::error::Error;

use dustsim::census;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let load = match std::env::args().nth(1).filter(|a| a.ends_with(".csv")) {
        Some(path) => census::load_census_path(path)?,
        None => census::bundled_census(),
    };
    let s = census::summarize(&load.records);
    println!(
        "{} records, {} complete",
        load.records.len(),
        s.total_complete
    );
    println!(
        "official passive dust collectors (no mobility): {}",
        s.official_passive
    );
    println!(
        "wheeled, mostly parked:                         {}",
        s.wheeled
    );
    println!(
        "designed to collect dust actively:              {}",
        s.active_dust
    );
    for (mobility, n) in &s.continuum_note {
        println!("  {mobility:<8} {n}");
    }
    if load.unknown_mobility_rows > 0 {
        println!(
            "{} rows had an unrecognized mobility",
            load.unknown_mobility_rows
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
