// Where do passive and active robots tie, and how fast should an active
// robot drive to do worst?
//
// ```text
// cargo run -p dustsim --example break_even
// ```

use std::error::Error;

use dustsim::model::{self, DustParams};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let h = 1.0;
    let critical = model::critical_alpha(h)?;
    println!("h = {h}: passive can only ever win when alpha >= {critical:.6} (256h/27)");

    for alpha in [5.0, 256.0 / 27.0, 16.0, 48.0] {
        let dust = DustParams::new(alpha)?;
        let be = model::break_even_speeds(dust, h)?;
        let star = model::active_min_speed(dust, h)?;
        let verdict = match (be.passive_interval(), be.roots.as_slice()) {
            (Some((lo, hi)), _) => format!("passive wins for beta in ({lo:.6}, {hi:.6})"),
            (None, [tangent]) => format!("tangent at beta = {tangent:.6}, no open interval"),
            _ => "active always wins".to_string(),
        };
        println!("alpha {alpha:>9.4}: {verdict}; active rate bottoms out at beta {star:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
