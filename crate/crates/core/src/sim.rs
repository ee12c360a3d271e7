//! Seeded Monte Carlo dust deposition.
//!
//! Dust arrives as a space-time Poisson point process of particles with
//! intensity `alpha / particle_mass` per unit area per unit time. Arrivals are
//! sampled directly per region and interval; there is no fixed time step.
//!
//! Three experiments check the pieces of the closed-form model:
//!
//! * [`run_passive`]: a stationary 1x1 footprint collects `alpha * T`.
//! * [`run_occlusion`]: a unit-square robot crossing a fixed transverse line
//!   covers each point of it for `1 / beta`, and picks up `alpha / beta` per
//!   unit line width per crossing.
//! * [`run_active_model_faithful`]: the sweep term `h * beta^3` is injected
//!   as given, plus the per-crossing pickup summed over a crossing-rate
//!   convention.
//!
//! Every trial draws from its own ChaCha8 stream selected by
//! `(seed, trial_index)`, so results do not depend on scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DustError, Result};
use crate::model::ActiveRobotParams;
use crate::stats::Summary;

/// Fewest crossings per trial the crossing experiments accept.
pub const MIN_CROSSINGS: u64 = 10;

/// Periodic rectangular arena. The robot travels along the width axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arena {
    width: f64,
    height: f64,
}

impl Arena {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        for (name, v) in [("arena_width", width), ("arena_height", height)] {
            if !v.is_finite() || v < 1.0 {
                return Err(DustError::invalid(
                    name,
                    format!("must be finite and at least the robot footprint side (1), got {v}"),
                ));
            }
        }
        Ok(Self { width, height })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

impl Default for Arena {
    fn default() -> Self {
        Self {
            width: 10.0,
            height: 10.0,
        }
    }
}

/// Poisson dust deposition with a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepositionProcess {
    alpha: f64,
    particle_mass: f64,
    seed: u64,
}

impl DepositionProcess {
    pub fn new(alpha: f64, particle_mass: f64, seed: u64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(DustError::invalid(
                "alpha",
                "must be finite and non-negative",
            ));
        }
        if !particle_mass.is_finite() || particle_mass <= 0.0 {
            return Err(DustError::invalid(
                "particle_mass",
                "must be finite and > 0",
            ));
        }
        Ok(Self {
            alpha,
            particle_mass,
            seed,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn particle_mass(&self) -> f64 {
        self.particle_mass
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Particle arrivals per unit area per unit time.
    pub fn intensity(&self) -> f64 {
        self.alpha / self.particle_mass
    }

    /// Random stream for one trial. Depends only on `(seed, trial)`.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }

    /// Number of particles landing on a region of `area` during `duration`.
    pub fn sample_arrivals<R: Rng + ?Sized>(&self, rng: &mut R, area: f64, duration: f64) -> u64 {
        poisson(rng, self.intensity() * area * duration)
    }
}

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("finite positive Poisson mean");
    dist.sample(rng) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    PassiveFootprint,
    OcclusionCrossing,
    ActiveModelFaithful,
}

impl SimMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SimMode::PassiveFootprint => "passive_footprint",
            SimMode::OcclusionCrossing => "occlusion_crossing",
            SimMode::ActiveModelFaithful => "active_model_faithful",
        }
    }
}

/// How per-crossing pickup converts into a per-time rate in the
/// model-faithful mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CrossingConvention {
    /// One crossing per unit distance travelled (`beta` crossings per unit time).
    #[default]
    PerUnitDistance,
    /// One crossing per lap of the torus (`beta / width` crossings per unit time).
    PerCircumference,
}

impl CrossingConvention {
    fn spacing(self, arena: &Arena) -> f64 {
        match self {
            CrossingConvention::PerUnitDistance => 1.0,
            CrossingConvention::PerCircumference => arena.width,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    duration: f64,
    trials: u32,
    mode: SimMode,
    robot: ActiveRobotParams,
    arena: Arena,
    probe_width: f64,
    convention: CrossingConvention,
    threads: Option<usize>,
}

impl SimConfig {
    /// Defaults: 10x10 arena, probe strip width 1, one crossing per unit distance,
    /// global rayon pool.
    pub fn new(
        mode: SimMode,
        duration: f64,
        trials: u32,
        robot: ActiveRobotParams,
    ) -> Result<Self> {
        if !duration.is_finite() || duration <= 0.0 {
            return Err(DustError::invalid("duration", "must be finite and > 0"));
        }
        if trials == 0 {
            return Err(DustError::invalid("trials", "must be positive"));
        }
        Ok(Self {
            duration,
            trials,
            mode,
            robot,
            arena: Arena::default(),
            probe_width: 1.0,
            convention: CrossingConvention::default(),
            threads: None,
        })
    }

    pub fn with_arena(mut self, arena: Arena) -> Self {
        self.arena = arena;
        self
    }

    /// Width of the strip around the reference line used to catch falling dust.
    /// Must lie in `(0, 1]`.
    pub fn with_probe_width(mut self, width: f64) -> Result<Self> {
        if !width.is_finite() || width <= 0.0 || width > 1.0 {
            return Err(DustError::invalid("probe_width", "must lie in (0, 1]"));
        }
        self.probe_width = width;
        Ok(self)
    }

    pub fn with_convention(mut self, convention: CrossingConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Cap on worker threads. Does not change results.
    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn trials(&self) -> u32 {
        self.trials
    }

    pub fn mode(&self) -> SimMode {
        self.mode
    }

    pub fn robot(&self) -> ActiveRobotParams {
        self.robot
    }

    pub fn arena(&self) -> Arena {
        self.arena
    }

    pub fn probe_width(&self) -> f64 {
        self.probe_width
    }

    pub fn convention(&self) -> CrossingConvention {
        self.convention
    }
}

/// Effective parameters of a run, echoed into the JSON document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimParams {
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
    pub particle_mass: f64,
    pub duration: f64,
    pub trials: u32,
    pub arena_width: f64,
    pub arena_height: f64,
    pub probe_width: f64,
    pub crossing_convention: CrossingConvention,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub mode: SimMode,
    pub params: SimParams,
    /// Footprint mass per trial (passive), mean pickup per crossing (occlusion),
    /// or total collected mass (model-faithful).
    pub per_trial_mass: Vec<f64>,
    pub mean: f64,
    pub std_error: f64,
    pub ci95: [f64; 2],
    pub analytic_prediction: f64,
    pub seed: u64,
    pub crossing_convention: Option<CrossingConvention>,
    pub crossings_per_trial: Option<u64>,
    /// Mean time a point of the reference line stays covered per crossing.
    pub occlusion_time: Option<f64>,
    /// Mass that fell on the sampled region in each trial, in the same units
    /// as `per_trial_mass` (stochastic component only).
    pub deposited_per_trial: Vec<f64>,
}

struct TrialOutcome {
    collected: f64,
    deposited: f64,
    occlusion_time: f64,
}

pub fn run_passive(dep: &DepositionProcess, cfg: &SimConfig) -> Result<SimResult> {
    expect_mode(cfg, SimMode::PassiveFootprint)?;
    let area = cfg.arena.area();
    let outcomes = run_trials(cfg, |trial| {
        let mut rng = dep.trial_rng(trial);
        let total = dep.sample_arrivals(&mut rng, area, cfg.duration);
        // Each arena arrival lands uniformly; the unit footprint keeps a 1/area share.
        let on_footprint = if area == 1.0 || total == 0 {
            total
        } else {
            Binomial::new(total, 1.0 / area)
                .expect("valid binomial")
                .sample(&mut rng)
        };
        TrialOutcome {
            collected: on_footprint as f64 * dep.particle_mass,
            deposited: total as f64 * dep.particle_mass,
            occlusion_time: 0.0,
        }
    });
    Ok(assemble(
        dep,
        cfg,
        outcomes,
        dep.alpha * cfg.duration,
        None,
        None,
        None,
    ))
}

pub fn run_occlusion(dep: &DepositionProcess, cfg: &SimConfig) -> Result<SimResult> {
    expect_mode(cfg, SimMode::OcclusionCrossing)?;
    let spacing = cfg.arena.width;
    if spacing < 1.0 + cfg.probe_width {
        return Err(DustError::Config(format!(
            "arena width {spacing} must be at least robot length + probe width ({})",
            1.0 + cfg.probe_width
        )));
    }
    let crossings = crossing_count(cfg, spacing)?;
    let beta = cfg.robot.beta();
    let outcomes = run_trials(cfg, |trial| {
        let mut rng = dep.trial_rng(trial);
        let (mut picked, mut fell, mut occluded) = (0.0, 0.0, 0.0);
        for k in 0..crossings {
            let c = simulate_crossing(&mut rng, dep, beta, cfg.probe_width, k as f64 * spacing);
            picked += c.pickup;
            fell += c.deposited;
            occluded += c.occlusion_time;
        }
        let n = crossings as f64;
        TrialOutcome {
            collected: picked / n,
            deposited: fell / n,
            occlusion_time: occluded / n,
        }
    });
    let occlusion_time =
        outcomes.iter().map(|o| o.occlusion_time).sum::<f64>() / outcomes.len() as f64;
    Ok(assemble(
        dep,
        cfg,
        outcomes,
        dep.alpha / beta,
        None,
        Some(crossings),
        Some(occlusion_time),
    ))
}

pub fn run_active_model_faithful(dep: &DepositionProcess, cfg: &SimConfig) -> Result<SimResult> {
    expect_mode(cfg, SimMode::ActiveModelFaithful)?;
    let spacing = cfg.convention.spacing(&cfg.arena);
    if cfg.convention == CrossingConvention::PerCircumference && spacing < 1.0 + cfg.probe_width {
        return Err(DustError::Config(format!(
            "arena width {spacing} must be at least robot length + probe width ({})",
            1.0 + cfg.probe_width
        )));
    }
    let crossings = crossing_count(cfg, spacing)?;
    let beta = cfg.robot.beta();
    let h = cfg.robot.h();
    let sweep = h * beta.powi(3) * cfg.duration;
    let outcomes = run_trials(cfg, |trial| {
        let mut rng = dep.trial_rng(trial);
        let (mut picked, mut fell, mut occluded) = (0.0, 0.0, 0.0);
        for k in 0..crossings {
            let c = simulate_crossing(&mut rng, dep, beta, cfg.probe_width, k as f64 * spacing);
            picked += c.pickup;
            fell += c.deposited;
            occluded += c.occlusion_time;
        }
        TrialOutcome {
            collected: sweep + picked,
            deposited: fell,
            occlusion_time: occluded / crossings as f64,
        }
    });
    let occlusion_time =
        outcomes.iter().map(|o| o.occlusion_time).sum::<f64>() / outcomes.len() as f64;
    let crossing_rate = beta / spacing;
    let prediction = (h * beta.powi(3) + dep.alpha / beta * crossing_rate) * cfg.duration;
    Ok(assemble(
        dep,
        cfg,
        outcomes,
        prediction,
        Some(cfg.convention),
        Some(crossings),
        Some(occlusion_time),
    ))
}

/// Run whichever experiment `cfg.mode` names. Identical inputs give
/// bit-identical results regardless of thread count.
pub fn seed_replay(cfg: &SimConfig, dep: &DepositionProcess) -> Result<SimResult> {
    match cfg.mode {
        SimMode::PassiveFootprint => run_passive(dep, cfg),
        SimMode::OcclusionCrossing => run_occlusion(dep, cfg),
        SimMode::ActiveModelFaithful => run_active_model_faithful(dep, cfg),
    }
}

fn expect_mode(cfg: &SimConfig, mode: SimMode) -> Result<()> {
    if cfg.mode != mode {
        return Err(DustError::Config(format!(
            "config mode is {}, expected {}",
            cfg.mode.as_str(),
            mode.as_str()
        )));
    }
    Ok(())
}

/// `floor(duration * beta / spacing)`, rejected below [`MIN_CROSSINGS`].
fn crossing_count(cfg: &SimConfig, spacing: f64) -> Result<u64> {
    let n = (cfg.duration * cfg.robot.beta() / spacing).floor();
    if n < MIN_CROSSINGS as f64 {
        return Err(DustError::Config(format!(
            "only {n} crossings in duration {} at speed {}; need at least {MIN_CROSSINGS}",
            cfg.duration,
            cfg.robot.beta()
        )));
    }
    if n > u32::MAX as f64 {
        return Err(DustError::Config(format!(
            "{n} crossings per trial is too many"
        )));
    }
    Ok(n as u64)
}

struct Crossing {
    pickup: f64,
    deposited: f64,
    occlusion_time: f64,
}

/// One pass of the unit-length robot over the reference line at `line_x`.
///
/// The robot's front edge reaches the line at local time 0 and the robot
/// spans `[front - 1, front]`. Dust is sampled on the strip
/// `[line_x, line_x + probe]` for as long as any part of the robot is over it;
/// a particle counts as picked up if the robot covers its landing point at
/// landing time. Masses are normalized by the strip width.
fn simulate_crossing<R: Rng + ?Sized>(
    rng: &mut R,
    dep: &DepositionProcess,
    beta: f64,
    probe: f64,
    line_x: f64,
) -> Crossing {
    let enter = line_x / beta;
    let exit = (line_x + 1.0) / beta;

    let window = (1.0 + probe) / beta;
    let arrivals = dep.sample_arrivals(rng, probe, window);
    let mut caught = 0u64;
    for _ in 0..arrivals {
        let x = rng.random::<f64>() * probe;
        let t = rng.random::<f64>() * window;
        let front = beta * t;
        if x <= front && x >= front - 1.0 {
            caught += 1;
        }
    }
    Crossing {
        pickup: caught as f64 * dep.particle_mass / probe,
        deposited: arrivals as f64 * dep.particle_mass / probe,
        occlusion_time: exit - enter,
    }
}

fn run_trials<F>(cfg: &SimConfig, trial: F) -> Vec<TrialOutcome>
where
    F: Fn(u64) -> TrialOutcome + Sync + Send,
{
    let work = || {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(&trial)
            .collect::<Vec<_>>()
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    }
}

fn assemble(
    dep: &DepositionProcess,
    cfg: &SimConfig,
    outcomes: Vec<TrialOutcome>,
    analytic_prediction: f64,
    crossing_convention: Option<CrossingConvention>,
    crossings_per_trial: Option<u64>,
    occlusion_time: Option<f64>,
) -> SimResult {
    let per_trial_mass: Vec<f64> = outcomes.iter().map(|o| o.collected).collect();
    let deposited_per_trial = outcomes.iter().map(|o| o.deposited).collect();
    let summary = Summary::of(&per_trial_mass);
    let robot = cfg.robot;
    SimResult {
        mode: cfg.mode,
        params: SimParams {
            alpha: dep.alpha,
            beta: robot.beta(),
            h: robot.h(),
            particle_mass: dep.particle_mass,
            duration: cfg.duration,
            trials: cfg.trials,
            arena_width: cfg.arena.width,
            arena_height: cfg.arena.height,
            probe_width: cfg.probe_width,
            crossing_convention: cfg.convention,
            seed: dep.seed,
        },
        per_trial_mass,
        mean: summary.mean,
        std_error: summary.std_error,
        ci95: summary.ci95(),
        analytic_prediction,
        seed: dep.seed,
        crossing_convention,
        crossings_per_trial,
        occlusion_time,
        deposited_per_trial,
    }
}
