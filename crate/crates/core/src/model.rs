//! Closed-form dust-collection rates for passive and active robots.
//!
//! A passive robot sits still and collects whatever falls on its unit
//! footprint, so its rate is the deposition intensity `alpha`. An active robot
//! driving at speed `beta` with a sweep-height cap `h` collects
//! `h * beta^3 + alpha / beta`. Passive beats active exactly when
//! `alpha > h * beta^4 / (beta - 1)` for `beta > 1`; for `beta <= 1` the active
//! robot always wins whenever `h > 0`.
//!
//! All quantities are dimensionless model units. The formulas are implemented
//! as written, including the sweep term's unusual `beta^3` scaling.

use serde::Serialize;

use crate::error::{DustError, Result};

/// Speed at which `h * beta^4 / (beta - 1)` attains its minimum over `beta > 1`.
pub const CRITICAL_SPEED: f64 = 4.0 / 3.0;

/// Default relative tie band used by [`compare`].
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Relative tolerance on `|g(root) - alpha|` for break-even roots, scaled by `max(1, alpha)`.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Dust deposition intensity: mass per unit area per unit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DustParams {
    alpha: f64,
}

impl DustParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(DustError::invalid("alpha", "must be finite"));
        }
        if alpha < 0.0 {
            return Err(DustError::invalid("alpha", "must be non-negative"));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Speed and sweep-height cap of an active robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActiveRobotParams {
    beta: f64,
    h: f64,
}

impl ActiveRobotParams {
    /// `beta` must be strictly positive (the occlusion term `alpha / beta`
    /// diverges at zero speed); `h` must be non-negative. Both finite.
    pub fn new(beta: f64, h: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(DustError::invalid("beta", "must be finite"));
        }
        if beta <= 0.0 {
            return Err(DustError::invalid("beta", "must be > 0"));
        }
        if !h.is_finite() {
            return Err(DustError::invalid("h", "must be finite"));
        }
        if h < 0.0 {
            return Err(DustError::invalid("h", "must be non-negative"));
        }
        Ok(Self { beta, h })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

/// Dust collected per unit model time.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Rate(f64);

impl Rate {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Winner {
    PassiveWins,
    ActiveWins,
    Tie,
}

/// Outcome of a passive-vs-active comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub winner: Winner,
    /// `D_passive - D_active`.
    pub margin: f64,
    pub epsilon: f64,
    pub d_passive: f64,
    pub d_active: f64,
}

/// Speeds `beta > 1` at which passive and active robots collect equally.
///
/// Roots are strictly increasing. With two roots, passive wins strictly
/// between them and active wins outside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakEven {
    pub roots: Vec<f64>,
    /// `|g(root) - alpha|` for each root, `g(beta) = h * beta^4 / (beta - 1)`.
    pub residuals: Vec<f64>,
}

impl BreakEven {
    /// Open speed interval on which the passive robot wins, if non-degenerate.
    pub fn passive_interval(&self) -> Option<(f64, f64)> {
        match self.roots.as_slice() {
            [lo, hi] => Some((*lo, *hi)),
            _ => None,
        }
    }
}

pub fn passive_rate(dust: DustParams) -> Rate {
    Rate(dust.alpha)
}

pub fn active_rate(dust: DustParams, robot: ActiveRobotParams) -> Rate {
    let beta = robot.beta;
    Rate(robot.h * beta * beta * beta + dust.alpha / beta)
}

/// Smallest deposition rate at which the passive robot beats the active one
/// at this speed. Only defined for `beta > 1`.
pub fn threshold_alpha(robot: ActiveRobotParams) -> Result<f64> {
    if robot.beta <= 1.0 {
        return Err(DustError::Domain(format!(
            "threshold_alpha requires beta > 1, got {}",
            robot.beta
        )));
    }
    Ok(threshold_curve(robot.h, robot.beta))
}

/// `h * beta^4 / (beta - 1)` with no domain checks.
fn threshold_curve(h: f64, beta: f64) -> f64 {
    h * beta.powi(4) / (beta - 1.0)
}

pub fn compare(dust: DustParams, robot: ActiveRobotParams, epsilon: f64) -> Verdict {
    let d_passive = passive_rate(dust).value();
    let d_active = active_rate(dust, robot).value();
    let margin = d_passive - d_active;
    let band = epsilon * 1f64.max(d_passive.abs()).max(d_active.abs());
    let winner = if margin.abs() <= band {
        Winner::Tie
    } else if margin > 0.0 {
        Winner::PassiveWins
    } else {
        Winner::ActiveWins
    };
    Verdict {
        winner,
        margin,
        epsilon,
        d_passive,
        d_active,
    }
}

/// Minimum of `h * beta^4 / (beta - 1)` over `beta > 1`, i.e. `256 h / 27`.
pub fn critical_alpha(h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(DustError::Domain(format!(
            "critical_alpha requires finite h > 0, got {h}"
        )));
    }
    Ok(256.0 * h / 27.0)
}

/// Solve `h * beta^4 / (beta - 1) = alpha` for `beta > 1`.
///
/// The curve is decreasing on `(1, 4/3]` and increasing on `[4/3, inf)`, so
/// each branch is bisected on its own bracket.
pub fn break_even_speeds(dust: DustParams, h: f64) -> Result<BreakEven> {
    let alpha = dust.alpha;
    if alpha <= 0.0 {
        return Err(DustError::Domain(format!(
            "break_even_speeds requires alpha > 0, got {alpha}"
        )));
    }
    let floor = critical_alpha(h)?;
    let tol = ROOT_TOLERANCE * alpha.max(1.0);
    let g = |beta: f64| threshold_curve(h, beta);

    if (alpha - floor).abs() <= tol {
        return Ok(BreakEven {
            roots: vec![CRITICAL_SPEED],
            residuals: vec![(g(CRITICAL_SPEED) - alpha).abs()],
        });
    }
    if alpha < floor {
        return Ok(BreakEven {
            roots: Vec::new(),
            residuals: Vec::new(),
        });
    }

    // Lower branch: g(1+) = +inf, g(4/3) < alpha.
    let lower = bisect(|b| g(b) - alpha, 1.0, CRITICAL_SPEED, tol);

    // Upper branch: expand the bracket until g exceeds alpha.
    let mut hi = 2.0 * CRITICAL_SPEED;
    while g(hi) <= alpha {
        hi *= 2.0;
    }
    let upper = bisect(|b| g(b) - alpha, CRITICAL_SPEED, hi, tol);

    let roots = vec![lower, upper];
    let residuals = roots.iter().map(|&r| (g(r) - alpha).abs()).collect();
    Ok(BreakEven { roots, residuals })
}

/// Bisection for a sign change between `lo` and `hi`.
///
/// Stops once the bracket is narrower than `1e-12 * max(1, beta)` and the
/// residual is within `tol`, or when the bracket cannot be split further in
/// f64. Returns whichever of the final candidates has the smallest residual.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let lo_positive = f(lo) > 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
        let width = hi - lo;
        if width <= 1e-12 * mid.abs().max(1.0) && f_mid.abs() <= tol {
            break;
        }
    }
    [lo, 0.5 * (lo + hi), hi]
        .into_iter()
        .filter(|x| x.is_finite() && *x > 1.0)
        .min_by(|a, b| f(*a).abs().total_cmp(&f(*b).abs()))
        .unwrap_or(hi)
}

/// Speed minimizing the active rate `h * beta^3 + alpha / beta`: `(alpha / (3h))^(1/4)`.
pub fn active_min_speed(dust: DustParams, h: f64) -> Result<f64> {
    let alpha = dust.alpha;
    if !(h.is_finite() && h > 0.0) {
        return Err(DustError::Domain(format!(
            "active_min_speed requires h > 0, got {h}"
        )));
    }
    if alpha <= 0.0 {
        return Err(DustError::Domain(format!(
            "active_min_speed requires alpha > 0, got {alpha}"
        )));
    }
    Ok((alpha / (3.0 * h)).powf(0.25))
}

/// Standing still versus running through the rain, with the same arithmetic
/// as [`compare`]: rain rate plays `alpha`, running speed plays `beta`, body
/// height plays `h`.
///
/// `PassiveWins` reads as "stand still", `ActiveWins` as "run".
pub fn rain_verdict(rain_rate: f64, run_speed: f64, body_h: f64, epsilon: f64) -> Result<Verdict> {
    let dust = DustParams::new(rain_rate)?;
    let robot = ActiveRobotParams::new(run_speed, body_h)?;
    Ok(compare(dust, robot, epsilon))
}
