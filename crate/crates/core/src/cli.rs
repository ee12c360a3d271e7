//! Command-line front end.
//!
//! Exit codes: 0 success, 2 argument errors, 3 domain errors, 4 parse errors.
//! Failures print one JSON line `{"error":<kind>,"message":<text>}` to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::census;
use crate::error::DustError;
use crate::model::{self, ActiveRobotParams, DustParams, Winner};
use crate::sim::{self, Arena, CrossingConvention, DepositionProcess, SimConfig, SimMode};
use crate::sweep::{self, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

pub const SEED_ENV: &str = "DUSTSIM_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "dustsim",
    version,
    about = "Passive vs. active dust-collection model, simulator, sweeps and census counts"
)]
struct Cli {
    /// Cap on worker threads for parallel trials. Never changes output.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form model queries.
    Model {
        #[command(subcommand)]
        query: ModelQuery,
    },
    /// Monte Carlo deposition experiment.
    Sim(SimArgs),
    /// Efficiency curves over speed (CSV by default).
    Sweep(SweepArgs),
    /// Classify a robot census.
    Census(CensusArgs),
    /// Stand still or run through the rain.
    Rain(RainArgs),
}

#[derive(Debug, Subcommand)]
enum ModelQuery {
    /// Passive vs. active verdict at one operating point.
    Compare(CompareArgs),
    /// Speeds at which passive and active robots tie.
    Breakeven(BreakevenArgs),
    /// Smallest alpha for which passive wins at this speed (beta > 1).
    Threshold(ThresholdArgs),
    /// Smallest alpha admitting any passive-wins speed.
    Critical(CriticalArgs),
    /// Speed minimizing the active rate.
    MinSpeed(BreakevenArgs),
    /// Both collection rates.
    Rates(RatesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CompareArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    h: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = model::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct BreakevenArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    h: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ThresholdArgs {
    #[arg(long)]
    h: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CriticalArgs {
    #[arg(long)]
    h: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct RatesArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    h: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(alias = "passive_footprint")]
    Passive,
    #[value(alias = "occlusion_crossing")]
    Occlusion,
    #[value(alias = "active_model_faithful")]
    Active,
}

impl From<ModeArg> for SimMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Passive => SimMode::PassiveFootprint,
            ModeArg::Occlusion => SimMode::OcclusionCrossing,
            ModeArg::Active => SimMode::ActiveModelFaithful,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    PerUnitDistance,
    PerCircumference,
}

impl From<ConventionArg> for CrossingConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::PerUnitDistance => CrossingConvention::PerUnitDistance,
            ConventionArg::PerCircumference => CrossingConvention::PerCircumference,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SimArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, default_value_t = 10.0)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    h: f64,
    #[arg(long, default_value_t = 1000.0)]
    duration: f64,
    #[arg(long, default_value_t = 30)]
    trials: u32,
    /// Master seed; falls back to $DUSTSIM_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    particle_mass: f64,
    #[arg(long, default_value_t = 10.0)]
    arena_width: f64,
    #[arg(long, default_value_t = 10.0)]
    arena_height: f64,
    #[arg(long, default_value_t = 1.0)]
    probe_width: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::PerUnitDistance)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[arg(long, default_value_t = sweep::DEFAULT_ALPHA)]
    alpha: f64,
    /// Comma-separated sweep heights.
    #[arg(long, value_delimiter = ',', default_values_t = sweep::DEFAULT_H_VALUES.to_vec())]
    h: Vec<f64>,
    #[arg(long, default_value_t = sweep::DEFAULT_BETA_MIN)]
    beta_min: f64,
    #[arg(long, default_value_t = sweep::DEFAULT_BETA_MAX)]
    beta_max: f64,
    #[arg(long, default_value_t = sweep::DEFAULT_BETA_STEP)]
    beta_step: f64,
    #[arg(long, default_value_t = model::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Census CSV; the bundled synthetic fixture is used when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct RainArgs {
    #[arg(long)]
    rain_rate: f64,
    #[arg(long)]
    run_speed: f64,
    #[arg(long)]
    body_h: f64,
    #[arg(long, default_value_t = model::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn argument(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_ARGUMENT,
            kind: "argument",
            message: message.into(),
        }
    }
}

impl From<DustError> for Failure {
    fn from(e: DustError) -> Self {
        let (code, kind) = match &e {
            DustError::InvalidParameter { .. } => (EXIT_ARGUMENT, "argument"),
            DustError::Config(_) => (EXIT_ARGUMENT, "config"),
            DustError::Domain(_) => (EXIT_DOMAIN, "domain"),
            DustError::Parse { .. } => (EXIT_PARSE, "parse"),
            DustError::Io(_) => (EXIT_PARSE, "io"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Run with the process environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    run_with_env(args, env_seed.as_deref(), out, err)
}

/// Run with an explicit value standing in for `$DUSTSIM_SEED`.
pub fn run_with_env<I, T>(
    args: I,
    env_seed: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            return report(err, Failure::argument(first));
        }
    };
    match dispatch(cli, env_seed) {
        Ok(doc) => {
            let _ = out.write_all(doc.as_bytes());
            if !doc.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            EXIT_OK
        }
        Err(f) => report(err, f),
    }
}

fn report(err: &mut dyn Write, f: Failure) -> i32 {
    let line = json!({ "error": f.kind, "message": f.message });
    let _ = writeln!(err, "{line}");
    f.code
}

fn dispatch(cli: Cli, env_seed: Option<&str>) -> Outcome {
    match cli.command {
        Command::Model { query } => model_query(query),
        Command::Sim(args) => run_sim(args, cli.threads, env_seed),
        Command::Sweep(args) => run_sweep(args),
        Command::Census(args) => run_census(args),
        Command::Rain(args) => run_rain(args),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable document")
}

fn json_or_plain(format: Format, doc: Value, plain: impl FnOnce() -> String) -> Outcome {
    match format {
        Format::Json => Ok(to_json(&doc)),
        Format::Plain => Ok(plain()),
        Format::Csv => Err(Failure::argument(
            "csv output is only available for `sweep`",
        )),
    }
}

fn winner_name(w: Winner) -> &'static str {
    match w {
        Winner::PassiveWins => "PassiveWins",
        Winner::ActiveWins => "ActiveWins",
        Winner::Tie => "Tie",
    }
}

fn check_epsilon(epsilon: f64) -> std::result::Result<(), Failure> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Failure::argument(
            "invalid parameter `epsilon`: must be finite and >= 0",
        ));
    }
    Ok(())
}

fn model_query(query: ModelQuery) -> Outcome {
    match query {
        ModelQuery::Compare(a) => {
            check_epsilon(a.epsilon)?;
            let dust = DustParams::new(a.alpha)?;
            let robot = ActiveRobotParams::new(a.beta, a.h)?;
            let v = model::compare(dust, robot, a.epsilon);
            let threshold = model::threshold_alpha(robot).ok();
            let doc = json!({
                "params": { "alpha": a.alpha, "h": a.h, "beta": a.beta, "epsilon": a.epsilon },
                "verdict": winner_name(v.winner),
                "margin": v.margin,
                "d_passive": v.d_passive,
                "d_active": v.d_active,
                "threshold_alpha": threshold,
            });
            json_or_plain(a.format, doc, || {
                format!(
                    "{} margin={} (passive {}, active {})",
                    winner_name(v.winner),
                    v.margin,
                    v.d_passive,
                    v.d_active
                )
            })
        }
        ModelQuery::Breakeven(a) => {
            let dust = DustParams::new(a.alpha)?;
            let be = model::break_even_speeds(dust, a.h)?;
            let critical = model::critical_alpha(a.h)?;
            let doc = json!({
                "params": { "alpha": a.alpha, "h": a.h },
                "roots": be.roots,
                "residuals": be.residuals,
                "critical_alpha": critical,
                "passive_interval": be.passive_interval(),
            });
            json_or_plain(a.format, doc, || {
                if be.roots.is_empty() {
                    format!(
                        "no break-even speed: alpha {} is below the critical {critical}",
                        a.alpha
                    )
                } else {
                    let roots: Vec<String> = be.roots.iter().map(|r| r.to_string()).collect();
                    format!("break-even speeds: {}", roots.join(", "))
                }
            })
        }
        ModelQuery::Threshold(a) => {
            let robot = ActiveRobotParams::new(a.beta, a.h)?;
            let t = model::threshold_alpha(robot)?;
            let doc = json!({
                "params": { "h": a.h, "beta": a.beta },
                "threshold_alpha": t,
            });
            json_or_plain(a.format, doc, || format!("passive wins for alpha > {t}"))
        }
        ModelQuery::Critical(a) => {
            let c = model::critical_alpha(a.h)?;
            let doc = json!({
                "params": { "h": a.h },
                "critical_alpha": c,
                "critical_speed": model::CRITICAL_SPEED,
            });
            json_or_plain(a.format, doc, || format!("critical alpha {c} at beta 4/3"))
        }
        ModelQuery::MinSpeed(a) => {
            let dust = DustParams::new(a.alpha)?;
            let star = model::active_min_speed(dust, a.h)?;
            let robot = ActiveRobotParams::new(star, a.h)?;
            let d_min = model::active_rate(dust, robot).value();
            let doc = json!({
                "params": { "alpha": a.alpha, "h": a.h },
                "active_min_speed": star,
                "d_active_min": d_min,
            });
            json_or_plain(a.format, doc, || {
                format!("active rate bottoms out at beta {star} ({d_min})")
            })
        }
        ModelQuery::Rates(a) => {
            let dust = DustParams::new(a.alpha)?;
            let robot = ActiveRobotParams::new(a.beta, a.h)?;
            let p = model::passive_rate(dust).value();
            let q = model::active_rate(dust, robot).value();
            let doc = json!({
                "params": { "alpha": a.alpha, "h": a.h, "beta": a.beta },
                "d_passive": p,
                "d_active": q,
            });
            json_or_plain(a.format, doc, || format!("passive {p}, active {q}"))
        }
    }
}

fn resolve_seed(flag: Option<u64>, env_seed: Option<&str>) -> std::result::Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env_seed {
        Some(raw) => raw.trim().parse().map_err(|_| {
            Failure::argument(format!(
                "{SEED_ENV}=`{raw}` is not an unsigned 64-bit integer"
            ))
        }),
        None => Ok(DEFAULT_SEED),
    }
}

fn run_sim(a: SimArgs, threads: Option<usize>, env_seed: Option<&str>) -> Outcome {
    if threads == Some(0) {
        return Err(Failure::argument("--threads must be at least 1"));
    }
    let seed = resolve_seed(a.seed, env_seed)?;
    let dep = DepositionProcess::new(a.alpha, a.particle_mass, seed)?;
    let robot = ActiveRobotParams::new(a.beta, a.h)?;
    let cfg = SimConfig::new(a.mode.into(), a.duration, a.trials, robot)?
        .with_arena(Arena::new(a.arena_width, a.arena_height)?)
        .with_probe_width(a.probe_width)?
        .with_convention(a.convention.into())
        .with_threads(threads);
    let result = sim::seed_replay(&cfg, &dep)?;
    json_or_plain(
        a.format,
        serde_json::to_value(&result).expect("sim result"),
        || {
            format!(
                "{} mean {} (95% CI {}..{}), analytic {}",
                result.mode.as_str(),
                result.mean,
                result.ci95[0],
                result.ci95[1],
                result.analytic_prediction
            )
        },
    )
}

fn run_sweep(a: SweepArgs) -> Outcome {
    let grid = SweepSpec::uniform_grid(a.beta_min, a.beta_max, a.beta_step)?;
    let spec = SweepSpec::new(a.alpha, a.h.clone(), grid)?.with_epsilon(a.epsilon)?;
    let points = sweep::run_sweep(&spec)?;
    match a.format {
        Format::Csv => Ok(sweep::to_csv_string(&points)),
        Format::Json => {
            let mut hs = a.h.clone();
            hs.sort_by(f64::total_cmp);
            let crossovers: Vec<_> = hs
                .iter()
                .map(|&h| sweep::annotate_crossover(&points, a.alpha, h))
                .collect();
            Ok(to_json(&json!({
                "params": {
                    "alpha": a.alpha,
                    "h": a.h,
                    "beta_min": a.beta_min,
                    "beta_max": a.beta_max,
                    "beta_step": a.beta_step,
                    "epsilon": a.epsilon,
                },
                "points": points,
                "crossovers": crossovers,
            })))
        }
        Format::Plain => {
            let mut s = String::new();
            for p in &points {
                s.push_str(&format!(
                    "h={:<6} beta={:<6} active={:<14} passive={:<10} {}\n",
                    p.h,
                    sweep::format_sig9(p.beta),
                    sweep::format_sig9(p.d_active),
                    p.d_passive,
                    if p.passive_wins {
                        "passive"
                    } else {
                        "active/tie"
                    }
                ));
            }
            Ok(s)
        }
    }
}

fn run_census(a: CensusArgs) -> Outcome {
    let (load, input) = match &a.input {
        Some(path) => (census::load_census_path(path)?, path.display().to_string()),
        None => (
            census::bundled_census(),
            "bundled:census_synthetic.csv".to_string(),
        ),
    };
    let summary = census::summarize(&load.records);
    let doc = json!({
        "params": { "input": input },
        "total_complete": summary.total_complete,
        "official_passive": summary.official_passive,
        "wheeled": summary.wheeled,
        "active_dust": summary.active_dust,
        "continuum_note": summary.continuum_note,
        "records": load.records.len(),
        "unknown_mobility_rows": load.unknown_mobility_rows,
    });
    json_or_plain(a.format, doc, || {
        format!(
            "{} complete records: {} immobile (official passive), {} wheeled, {} active dust collectors",
            summary.total_complete, summary.official_passive, summary.wheeled, summary.active_dust
        )
    })
}

fn rain_advice(w: Winner) -> &'static str {
    match w {
        Winner::PassiveWins => "stand still",
        Winner::ActiveWins => "run",
        Winner::Tie => "either",
    }
}

fn run_rain(a: RainArgs) -> Outcome {
    check_epsilon(a.epsilon)?;
    let v = model::rain_verdict(a.rain_rate, a.run_speed, a.body_h, a.epsilon)?;
    let doc = json!({
        "params": {
            "rain_rate": a.rain_rate,
            "run_speed": a.run_speed,
            "body_h": a.body_h,
            "epsilon": a.epsilon,
        },
        "verdict": winner_name(v.winner),
        "margin": v.margin,
        "advice": rain_advice(v.winner),
    });
    json_or_plain(a.format, doc, || {
        format!("{} (margin {})", rain_advice(v.winner), v.margin)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(7), Some("9")).unwrap(), 7);
        assert_eq!(resolve_seed(None, Some("9")).unwrap(), 9);
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert_eq!(
            resolve_seed(None, Some("nope")).unwrap_err().code,
            EXIT_ARGUMENT
        );
    }

    #[test]
    fn error_codes_by_kind() {
        let f: Failure = DustError::Domain("x".into()).into();
        assert_eq!(f.code, EXIT_DOMAIN);
        let f: Failure = DustError::Parse {
            line: 1,
            message: "x".into(),
        }
        .into();
        assert_eq!(f.code, EXIT_PARSE);
        let f: Failure = DustError::invalid("beta", "must be > 0").into();
        assert_eq!(f.code, EXIT_ARGUMENT);
    }
}
