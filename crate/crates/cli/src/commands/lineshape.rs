use std::path::PathBuf;

use besselrules::spectroscopy::{modulated_power_exact, modulated_power_perturbative, time_domain_oracle};
use besselrules::{Harmonics64, Modulation64, Params64};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{emit, num, pretty_json, Format};

pub const THREADS_ENV: &str = "BESSELRULES_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Perturbative,
    Ode,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Perturbative => "perturbative",
        Method::Ode => "ode",
    }
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// Resonance frequency omega0 (rad/s)
    #[arg(long, default_value_t = 1e6)]
    pub omega0: f64,
    /// Linewidth gamma (rad/s)
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Modulation frequency Omega (rad/s, or units of gamma with --normalized)
    #[arg(long = "Omega", id = "omega_mod", default_value_t = 0.01)]
    pub omega_mod: f64,
    /// Modulation index M
    #[arg(long = "M", id = "m", default_value_t = 1.0)]
    pub m: f64,
    /// Drive amplitude per unit mass
    #[arg(long, default_value_t = 1.0)]
    pub force: f64,
    /// Take gamma = 1 and read omega0 from --omega0-over-gamma and Omega in units of gamma
    #[arg(long)]
    pub normalized: bool,
    #[arg(long, default_value_t = 1e6)]
    pub omega0_over_gamma: f64,
    /// Single physical detuning delta = omega - omega0 (rad/s); replaces the sweep
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["delta_start", "delta_stop", "points"])]
    pub delta: Option<f64>,
    /// First normalized detuning Delta = 2 delta / gamma of the sweep
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub delta_start: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub delta_stop: f64,
    /// Number of sweep points (inclusive of both ends)
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Harmonics reported per point
    #[arg(long, default_value_t = 2)]
    pub harmonics: usize,
    /// Modulation periods integrated by the ode method
    #[arg(long, default_value_t = 2)]
    pub periods: usize,
    #[arg(long, default_value_t = 256)]
    pub samples_per_period: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Point {
    delta: f64,
    dc: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
    valid: bool,
}

#[derive(Serialize)]
struct ParamsDoc {
    omega0: f64,
    gamma: f64,
    omega_mod: f64,
    m: f64,
    force: f64,
    eta: f64,
}

#[derive(Serialize)]
struct Document {
    method: Method,
    params: ParamsDoc,
    harmonics: usize,
    n_max: usize,
    points: Vec<Point>,
}

fn sweep(args: &Args) -> CliResult<Vec<f64>> {
    if let Some(d) = args.delta {
        let gamma = if args.normalized { 1.0 } else { args.gamma };
        if !d.is_finite() || !(gamma > 0.0) {
            return Err(CliError::Usage("--delta must be finite and gamma positive".into()));
        }
        return Ok(vec![2.0 * d / gamma]);
    }
    if args.points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if !args.delta_start.is_finite() || !args.delta_stop.is_finite() {
        return Err(CliError::Usage("sweep bounds must be finite".into()));
    }
    if args.points == 1 {
        return Ok(vec![args.delta_start]);
    }
    let step = (args.delta_stop - args.delta_start) / (args.points - 1) as f64;
    Ok((0..args.points).map(|i| args.delta_start + step * i as f64).collect())
}

fn params_at(args: &Args, big_delta: f64) -> CliResult<Params64> {
    let p = if args.normalized {
        Params64::normalized(args.omega0_over_gamma, big_delta, args.omega_mod, args.m, args.force)
    } else {
        Params64::new(args.omega0, args.gamma, args.force, big_delta * args.gamma / 2.0, args.omega_mod, args.m)
    };
    p.map_err(|e| CliError::lib("parameters", e))
}

fn evaluate(args: &Args, p: &Params64) -> CliResult<(Harmonics64, bool)> {
    let ctx = |e| CliError::lib(format!("{} method at Delta = {}", method_name(args.method), p.big_delta()), e);
    match args.method {
        Method::Exact => Ok((modulated_power_exact(p, args.harmonics).map_err(ctx)?, true)),
        Method::Perturbative => {
            let f = modulated_power_perturbative(p);
            let mut h = f.value;
            h.cos_amps.resize(args.harmonics, 0.0);
            h.sin_amps.resize(args.harmonics, 0.0);
            Ok((h, f.valid))
        }
        Method::Ode => {
            let m = Modulation64::sinusoidal(p.m, p.omega_mod).map_err(ctx)?;
            let h = time_domain_oracle(p, &m, args.periods, args.samples_per_period, args.harmonics)
                .map_err(ctx)?;
            Ok((h, true))
        }
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CliError::Usage(format!("{THREADS_ENV} must be at least 1")));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))
}

pub fn run(args: &Args) -> CliResult<()> {
    let deltas = sweep(args)?;
    let params: Vec<Params64> = deltas.iter().map(|&d| params_at(args, d)).collect::<CliResult<_>>()?;
    let pool = thread_pool()?;
    let results: Vec<(Harmonics64, bool)> =
        pool.install(|| params.par_iter().map(|p| evaluate(args, p)).collect::<CliResult<_>>())?;

    let points: Vec<Point> = deltas
        .iter()
        .zip(results)
        .map(|(&delta, (h, valid))| Point {
            delta,
            dc: h.dc,
            cos: h.cos_amps,
            sin: h.sin_amps,
            valid,
        })
        .collect();
    let body = match args.format {
        Format::Csv => {
            let mut out = String::from("delta,dc");
            for h in 1..=args.harmonics {
                out.push_str(&format!(",h{h}_cos,h{h}_sin"));
            }
            out.push('\n');
            for p in &points {
                out.push_str(&format!("{},{}", num(p.delta), num(p.dc)));
                for (c, s) in p.cos.iter().zip(&p.sin) {
                    out.push_str(&format!(",{},{}", num(*c), num(*s)));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let first = &params[0];
            pretty_json(&Document {
                method: args.method,
                params: ParamsDoc {
                    omega0: first.omega0,
                    gamma: first.gamma,
                    omega_mod: first.omega_mod,
                    m: first.m,
                    force: first.force,
                    eta: first.eta(),
                },
                harmonics: args.harmonics,
                n_max: first.n_max(),
                points,
            })
        }
    };
    emit(args.output.as_deref(), &body)
}
