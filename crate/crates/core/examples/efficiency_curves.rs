// Efficiency curves over speed for a few sweep heights, as CSV.
//
// ```text
// cargo run -p dustsim --example efficiency_curves -- curves.csv
// ```
//
// Without an argument only the crossover summary is printed.

use std::error::Error;
use std::fs::File;
use std::io::BufWriter;

use dustsim::sweep::{self, SweepSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = SweepSpec::default();
    let points = sweep::run_sweep(&spec)?;
    println!(
        "alpha = {}, {} speeds from {} to {}",
        spec.alpha(),
        spec.beta_grid().len(),
        spec.beta_grid()[0],
        spec.beta_grid()[spec.beta_grid().len() - 1]
    );

    for &h in spec.h_values() {
        let curve: Vec<_> = points.iter().copied().filter(|p| p.h == h).collect();
        let s = sweep::annotate_crossover(&points, spec.alpha(), h);
        println!(
            "h = {h}: unimodal {}, active minimum at beta {:.4}, analytic interval {:?}, grid interval {:?}",
            sweep::is_unimodal(&curve),
            s.active_min_speed.unwrap_or(f64::NAN),
            s.passive_interval,
            s.grid_interval
        );
    }

    if let Some(path) = std::env::args().nth(1).filter(|a| a.ends_with(".csv")) {
        sweep::write_csv(&points, BufWriter::new(File::create(&path)?))?;
        println!("wrote {} rows to {path}", points.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
