//! Dust-collection modeling: closed-form passive/active collection rates,
//! break-even speeds, a seeded Monte Carlo cross-check, efficiency-curve
//! sweeps, and robot census classification.
//!
//! ```
//! use dustsim::model::{self, ActiveRobotParams, DustParams, Winner};
//!
//! let dust = DustParams::new(17.0).unwrap();
//! let robot = ActiveRobotParams::new(2.0, 1.0).unwrap();
//! let verdict = model::compare(dust, robot, model::DEFAULT_EPSILON);
//! assert_eq!(verdict.winner, Winner::PassiveWins);
//! assert_eq!(verdict.margin, 0.5);
//! ```

pub mod census;
pub mod cli;
pub mod error;
pub mod model;
pub mod sim;
pub mod stats;
pub mod sweep;

pub use error::{DustError, Result};
