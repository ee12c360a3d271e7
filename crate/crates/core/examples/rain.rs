// Stand still or run? The same comparison with rain in place of dust.
//
// ```text
// cargo run -p dustsim --example rain
// ```

use std::error::Error;

use dustsim::model::{self, Winner};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (rain, speed, body) in [
        (17.0, 2.0, 1.0),
        (7.0, 1.0, 1.0),
        (0.0, 2.0, 0.0),
        (40.0, 1.5, 0.5),
    ] {
        let v = model::rain_verdict(rain, speed, body, model::DEFAULT_EPSILON)?;
        let advice = match v.winner {
            Winner::PassiveWins => "stand still",
            Winner::ActiveWins => "run",
            Winner::Tie => "either",
        };
        println!(
            "rain {rain:>5}, speed {speed}, body {body}: {advice} (margin {:+.4})",
            v.margin
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
