// Cross-check the closed-form rates with the seeded deposition simulator.
//
// ```text
// cargo run --release -p dustsim --example monte_carlo_validation
// ```

use std::error::Error;

use dustsim::model::ActiveRobotParams;
use dustsim::sim::{self, DepositionProcess, SimConfig, SimMode, SimResult};

fn show(label: &str, r: &SimResult) {
    let inside = r.ci95[0] <= r.analytic_prediction && r.analytic_prediction <= r.ci95[1];
    println!(
        "{label:<24} simulated {:>12.4}  95% CI [{:.4}, {:.4}]  analytic {:>10.4}  {}",
        r.mean,
        r.ci95[0],
        r.ci95[1],
        r.analytic_prediction,
        if inside { "covered" } else { "outside CI" }
    );
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let seed = 42;

    let dep = DepositionProcess::new(10.0, 1.0, seed)?;
    let cfg = SimConfig::new(
        SimMode::PassiveFootprint,
        1000.0,
        30,
        ActiveRobotParams::new(1.0, 0.0)?,
    )?;
    show("passive footprint", &sim::run_passive(&dep, &cfg)?);

    let dep = DepositionProcess::new(8.0, 1.0, seed)?;
    let robot = ActiveRobotParams::new(2.0, 0.0)?;
    let cfg = SimConfig::new(SimMode::OcclusionCrossing, 5000.0, 30, robot)?;
    let occ = sim::run_occlusion(&dep, &cfg)?;
    show("pickup per crossing", &occ);
    println!(
        "{:<24} {:?} per crossing over {:?} crossings (1/beta = {})",
        "occlusion time",
        occ.occlusion_time,
        occ.crossings_per_trial,
        1.0 / robot.beta()
    );

    let robot = ActiveRobotParams::new(2.0, 0.1)?;
    let cfg = SimConfig::new(SimMode::ActiveModelFaithful, 1000.0, 30, robot)?;
    let r = sim::run_active_model_faithful(&dep, &cfg)?;
    show("active (model-faithful)", &r);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
