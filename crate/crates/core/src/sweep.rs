//! Efficiency curves over robot speed, one per sweep height.
//!
//! The passive curve is the flat line at `alpha`; the active curve
//! `h * beta^3 + alpha / beta` dips to a minimum at `(alpha / 3h)^(1/4)` and
//! then climbs. Where the passive line sits above the active curve, the
//! passive robot wins.

use std::io::Write;

use serde::Serialize;

use crate::error::{DustError, Result};
use crate::model::{
    self, active_min_speed, break_even_speeds, critical_alpha, ActiveRobotParams, DustParams,
    Winner,
};

pub const CSV_HEADER: &str = "h,beta,d_active,d_passive,passive_wins";

pub const DEFAULT_ALPHA: f64 = 16.0;
pub const DEFAULT_H_VALUES: [f64; 3] = [0.1, 0.5, 1.0];
pub const DEFAULT_BETA_MIN: f64 = 0.2;
pub const DEFAULT_BETA_MAX: f64 = 5.0;
pub const DEFAULT_BETA_STEP: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    beta_grid: Vec<f64>,
    h_values: Vec<f64>,
    alpha: f64,
    epsilon: f64,
}

impl SweepSpec {
    pub fn new(alpha: f64, h_values: Vec<f64>, beta_grid: Vec<f64>) -> Result<Self> {
        DustParams::new(alpha)?;
        if beta_grid.is_empty() {
            return Err(DustError::invalid("beta_grid", "must not be empty"));
        }
        if beta_grid.iter().any(|b| !b.is_finite() || *b <= 0.0) {
            return Err(DustError::invalid(
                "beta_grid",
                "all speeds must be finite and > 0",
            ));
        }
        if beta_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DustError::invalid(
                "beta_grid",
                "must be strictly increasing",
            ));
        }
        if h_values.is_empty() {
            return Err(DustError::invalid("h_values", "must not be empty"));
        }
        if h_values.iter().any(|h| !h.is_finite() || *h < 0.0) {
            return Err(DustError::invalid(
                "h_values",
                "must be finite and non-negative",
            ));
        }
        for (i, a) in h_values.iter().enumerate() {
            if h_values[i + 1..].contains(a) {
                return Err(DustError::invalid(
                    "h_values",
                    format!("duplicate value {a}"),
                ));
            }
        }
        Ok(Self {
            beta_grid,
            h_values,
            alpha,
            epsilon: model::DEFAULT_EPSILON,
        })
    }

    /// Evenly spaced grid from `min` to `max` inclusive (the endpoint is kept
    /// when it lies within a millionth of a step of the last point).
    pub fn uniform_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(DustError::invalid(
                "beta_grid",
                "bounds and step must be finite",
            ));
        }
        if min <= 0.0 {
            return Err(DustError::invalid("beta_min", "must be > 0"));
        }
        if step <= 0.0 {
            return Err(DustError::invalid("beta_step", "must be > 0"));
        }
        if max < min {
            return Err(DustError::invalid("beta_max", "must be >= beta_min"));
        }
        let count = ((max - min) / step + 1e-6).floor() as usize;
        Ok((0..=count).map(|i| min + i as f64 * step).collect())
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(DustError::invalid("epsilon", "must be finite and >= 0"));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn beta_grid(&self) -> &[f64] {
        &self.beta_grid
    }

    pub fn h_values(&self) -> &[f64] {
        &self.h_values
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for SweepSpec {
    fn default() -> Self {
        let grid = Self::uniform_grid(DEFAULT_BETA_MIN, DEFAULT_BETA_MAX, DEFAULT_BETA_STEP)
            .expect("default grid");
        Self::new(DEFAULT_ALPHA, DEFAULT_H_VALUES.to_vec(), grid).expect("default sweep")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub h: f64,
    pub beta: f64,
    pub d_active: f64,
    pub d_passive: f64,
    pub passive_wins: bool,
}

/// One point per `(h, beta)` pair, sorted by `h` then `beta`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<CurvePoint>> {
    let dust = DustParams::new(spec.alpha)?;
    let mut hs = spec.h_values.clone();
    hs.sort_by(f64::total_cmp);
    let mut points = Vec::with_capacity(hs.len() * spec.beta_grid.len());
    for &h in &hs {
        for &beta in &spec.beta_grid {
            let robot = ActiveRobotParams::new(beta, h)?;
            let verdict = model::compare(dust, robot, spec.epsilon);
            points.push(CurvePoint {
                h,
                beta,
                d_active: verdict.d_active,
                d_passive: verdict.d_passive,
                passive_wins: verdict.winner == Winner::PassiveWins,
            });
        }
    }
    Ok(points)
}

/// Analytic landmarks of one efficiency curve checked against its grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverSummary {
    pub alpha: f64,
    pub h: f64,
    pub break_even: Option<Vec<f64>>,
    pub passive_interval: Option<(f64, f64)>,
    pub tangent_speed: Option<f64>,
    pub interval_exists: bool,
    pub active_min_speed: Option<f64>,
    pub critical_alpha: Option<f64>,
    /// First and last grid speeds where the passive robot wins.
    pub grid_interval: Option<(f64, f64)>,
    /// Grid verdicts match the analytic interval up to one grid step at its ends.
    pub grid_agrees: Option<bool>,
    /// Set when the analytic sub-calls were out of domain.
    pub analytic_error: Option<String>,
}

/// Summarize the crossover structure for points of a single `h`.
pub fn annotate_crossover(points: &[CurvePoint], alpha: f64, h: f64) -> CrossoverSummary {
    let curve: Vec<&CurvePoint> = points.iter().filter(|p| p.h == h).collect();
    let wins: Vec<f64> = curve
        .iter()
        .filter(|p| p.passive_wins)
        .map(|p| p.beta)
        .collect();
    let grid_interval = match (wins.first(), wins.last()) {
        (Some(a), Some(b)) => Some((*a, *b)),
        _ => None,
    };

    let mut summary = CrossoverSummary {
        alpha,
        h,
        break_even: None,
        passive_interval: None,
        tangent_speed: None,
        interval_exists: false,
        active_min_speed: None,
        critical_alpha: None,
        grid_interval,
        grid_agrees: None,
        analytic_error: None,
    };

    let analytic = DustParams::new(alpha).and_then(|dust| {
        let be = break_even_speeds(dust, h)?;
        let star = active_min_speed(dust, h)?;
        let crit = critical_alpha(h)?;
        Ok((be, star, crit))
    });
    let (be, star, crit) = match analytic {
        Ok(v) => v,
        Err(e) => {
            summary.analytic_error = Some(e.to_string());
            return summary;
        }
    };

    summary.active_min_speed = Some(star);
    summary.critical_alpha = Some(crit);
    summary.passive_interval = be.passive_interval();
    summary.interval_exists = summary.passive_interval.is_some();
    if be.roots.len() == 1 {
        summary.tangent_speed = Some(be.roots[0]);
    }

    let step = grid_step(&curve);
    let agrees = curve.iter().all(|p| {
        let expected = match summary.passive_interval {
            Some((lo, hi)) => p.beta > lo && p.beta < hi,
            None => false,
        };
        if p.passive_wins == expected {
            return true;
        }
        be.roots.iter().any(|r| (p.beta - r).abs() <= step)
    });
    summary.grid_agrees = Some(agrees);
    summary.break_even = Some(be.roots);
    summary
}

fn grid_step(curve: &[&CurvePoint]) -> f64 {
    curve
        .windows(2)
        .map(|w| w[1].beta - w[0].beta)
        .fold(0.0, f64::max)
}

/// True when `d_active` strictly falls to a single minimum and then strictly
/// rises (either side may be empty).
pub fn is_unimodal(points: &[CurvePoint]) -> bool {
    let Some(min_idx) = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.d_active.total_cmp(&b.1.d_active))
        .map(|(i, _)| i)
    else {
        return true;
    };
    let falling = points[..=min_idx]
        .windows(2)
        .all(|w| w[1].d_active < w[0].d_active);
    let rising = points[min_idx..]
        .windows(2)
        .all(|w| w[1].d_active > w[0].d_active);
    falling && rising
}

/// Render like C's `%.9g`: 9 significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-4, 1e9)`.
pub fn format_sig9(x: f64) -> String {
    const SIG: i32 = 9;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIG).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(points: &[CurvePoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_sig9(p.h),
            format_sig9(p.beta),
            format_sig9(p.d_active),
            format_sig9(p.d_passive),
            p.passive_wins
        )?;
    }
    Ok(())
}

pub fn to_csv_string(points: &[CurvePoint]) -> String {
    let mut buf = Vec::new();
    write_csv(points, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(2.0), "2");
        assert_eq!(format_sig9(0.1), "0.1");
        assert_eq!(format_sig9(2.0000000000000004), "2");
        assert_eq!(format_sig9(256.0 / 27.0), "9.48148148");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1234567890.0), "1.23456789e+09");
        assert_eq!(format_sig9(0.00012345), "0.00012345");
        assert_eq!(format_sig9(0.000012345), "1.2345e-05");
        assert_eq!(format_sig9(-3.25), "-3.25");
        assert_eq!(format_sig9(0.0), "0");
    }

    #[test]
    fn default_grid_shape() {
        let spec = SweepSpec::default();
        assert_eq!(spec.beta_grid().len(), 241);
        assert_eq!(spec.beta_grid()[0], 0.2);
        assert!((spec.beta_grid()[240] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(SweepSpec::new(1.0, vec![1.0], vec![1.0, 1.0]).is_err());
        assert!(SweepSpec::new(1.0, vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(SweepSpec::new(1.0, vec![1.0, 1.0], vec![1.0]).is_err());
        assert!(SweepSpec::new(-1.0, vec![1.0], vec![1.0]).is_err());
        assert!(SweepSpec::new(1.0, vec![-1.0], vec![1.0]).is_err());
        assert!(SweepSpec::uniform_grid(0.0, 1.0, 0.1).is_err());
        assert!(SweepSpec::uniform_grid(1.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn points_sorted_by_h_then_beta() {
        let spec = SweepSpec::new(16.0, vec![1.0, 0.1], vec![1.0, 2.0, 3.0]).unwrap();
        let pts = run_sweep(&spec).unwrap();
        let keys: Vec<(f64, f64)> = pts.iter().map(|p| (p.h, p.beta)).collect();
        assert_eq!(
            keys,
            vec![
                (0.1, 1.0),
                (0.1, 2.0),
                (0.1, 3.0),
                (1.0, 1.0),
                (1.0, 2.0),
                (1.0, 3.0)
            ]
        );
    }

    #[test]
    fn zero_alpha_never_passive() {
        let spec = SweepSpec::new(
            0.0,
            vec![0.0, 1.0],
            SweepSpec::uniform_grid(0.2, 5.0, 0.1).unwrap(),
        )
        .unwrap();
        let pts = run_sweep(&spec).unwrap();
        assert!(pts.iter().all(|p| p.d_passive == 0.0 && !p.passive_wins));
    }

    #[test]
    fn active_minimum_near_two_for_alpha_48() {
        let spec =
            SweepSpec::new(48.0, vec![1.0], SweepSpec::default().beta_grid().to_vec()).unwrap();
        let pts = run_sweep(&spec).unwrap();
        let best = pts
            .iter()
            .min_by(|a, b| a.d_active.total_cmp(&b.d_active))
            .unwrap();
        assert!((best.beta - 2.0).abs() < 0.01);
        assert!(is_unimodal(&pts));
    }

    #[test]
    fn annotate_examples() {
        let spec =
            SweepSpec::new(16.0, vec![1.0], SweepSpec::default().beta_grid().to_vec()).unwrap();
        let pts = run_sweep(&spec).unwrap();
        let s = annotate_crossover(&pts, 16.0, 1.0);
        assert!(s.interval_exists);
        let (lo, hi) = s.passive_interval.unwrap();
        assert!((lo - 1.0874).abs() < 1e-3 && (hi - 2.0).abs() < 1e-9);
        assert_eq!(s.grid_agrees, Some(true));

        let s = annotate_crossover(&pts, 5.0, 1.0);
        assert!(!s.interval_exists);

        let s = annotate_crossover(&pts, 256.0 / 27.0, 1.0);
        assert_eq!(s.tangent_speed, Some(4.0 / 3.0));
        assert!(!s.interval_exists);
    }

    #[test]
    fn annotate_out_of_domain_keeps_grid_data() {
        let spec = SweepSpec::new(16.0, vec![0.0], vec![1.5, 2.0]).unwrap();
        let pts = run_sweep(&spec).unwrap();
        let s = annotate_crossover(&pts, 16.0, 0.0);
        assert!(s.analytic_error.is_some());
        assert_eq!(s.grid_interval, Some((1.5, 2.0)));
        assert_eq!(s.grid_agrees, None);
    }
}
