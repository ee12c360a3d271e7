// Compare a passive robot against active robots at a few speeds.
//
// ```text
// cargo run -p dustsim --example passive_vs_active
// ```

use std::error::Error;

use dustsim::model::{self, ActiveRobotParams, DustParams};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dust = DustParams::new(17.0)?;
    println!("dust falls at alpha = {}", dust.alpha());
    println!(
        "passive robot collects {}",
        model::passive_rate(dust).value()
    );

    for beta in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let robot = ActiveRobotParams::new(beta, 1.0)?;
        let verdict = model::compare(dust, robot, model::DEFAULT_EPSILON);
        let threshold = match model::threshold_alpha(robot) {
            Ok(t) => format!("{t:.4}"),
            Err(_) => "n/a (beta <= 1)".to_string(),
        };
        println!(
            "beta {beta:>4}: active collects {:>8.4}  -> {:?} (margin {:+.4}, threshold alpha {threshold})",
            verdict.d_active, verdict.winner, verdict.margin
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
