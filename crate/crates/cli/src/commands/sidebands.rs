use std::collections::BTreeMap;
use std::path::PathBuf;

use besselrules::sum_rules::{general_sidebands, general_sidebands_resolved};
use besselrules::{Complex64, Modulation64};
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::output::{emit, num, pretty_json, Format};

/// Amplitudes below this are treated as outside the spectrum when `--n-max` is omitted.
const AUTO_CUTOFF: f64 = 1e-15;

#[derive(clap::Args, Debug)]
#[command(group(clap::ArgGroup::new("modulation").required(true).args(["m", "y1", "phi_coeffs"])))]
pub struct Args {
    /// Sinusoidal modulation phi = M sin(Omega t)
    #[arg(long = "M", id = "m")]
    pub m: Option<f64>,
    /// Two-tone modulation phi = y1 sin(Omega t) + y2 sin(2 Omega t)
    #[arg(long, requires = "y2")]
    pub y1: Option<f64>,
    #[arg(long, requires = "y1")]
    pub y2: Option<f64>,
    /// General modulation as a JSON list of [n, re, im] Fourier coefficients of phi;
    /// when no negative n is listed the conjugates are filled in
    #[arg(long)]
    pub phi_coeffs: Option<String>,
    /// Largest |n| to report (default: last sideband above 1e-15)
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn parse_phi_coeffs(text: &str) -> CliResult<Modulation64> {
    let bad = |msg: String| CliError::Usage(format!("--phi-coeffs: {msg}"));
    let value: Value = serde_json::from_str(text).map_err(|e| bad(format!("not valid JSON ({e})")))?;
    let list = value
        .as_array()
        .ok_or_else(|| bad("expected a list of [n, re, im] entries".into()))?;
    let mut entries = Vec::with_capacity(list.len());
    for (i, item) in list.iter().enumerate() {
        let triple = item.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
            bad(format!("entry {i} ({item}) is not a [n, re, im] triple"))
        })?;
        let n = triple[0]
            .as_i64()
            .ok_or_else(|| bad(format!("entry {i} ({item}): harmonic n must be an integer")))?;
        let re = triple[1]
            .as_f64()
            .ok_or_else(|| bad(format!("entry {i} ({item}): re must be a number")))?;
        let im = triple[2]
            .as_f64()
            .ok_or_else(|| bad(format!("entry {i} ({item}): im must be a number")))?;
        entries.push((n, Complex64::new(re, im)));
    }
    let lib = |e| CliError::lib("--phi-coeffs", e);
    if entries.iter().any(|(n, _)| *n < 0) {
        let mut map = BTreeMap::new();
        for (i, (n, c)) in entries.into_iter().enumerate() {
            if map.insert(n, c).is_some() {
                return Err(bad(format!("entry {i}: harmonic {n} given twice")));
            }
        }
        Modulation64::new(map, 1.0).map_err(lib)
    } else {
        Modulation64::from_nonnegative(entries, 1.0).map_err(lib)
    }
}

fn modulation(args: &Args) -> CliResult<Modulation64> {
    let lib = |e| CliError::lib("modulation", e);
    if let Some(m) = args.m {
        return Modulation64::sinusoidal(m, 1.0).map_err(lib);
    }
    if let (Some(y1), Some(y2)) = (args.y1, args.y2) {
        return Modulation64::two_tone(y1, y2, 1.0).map_err(lib);
    }
    match &args.phi_coeffs {
        Some(text) => parse_phi_coeffs(text),
        None => Err(CliError::Usage("one of --M, --y1/--y2, --phi-coeffs is required".into())),
    }
}

#[derive(Serialize)]
struct Row {
    n: i64,
    re: f64,
    im: f64,
    abs2: f64,
}

#[derive(Serialize)]
struct Document {
    n_max: usize,
    samples: usize,
    tail_estimate: f64,
    energy_sum: f64,
    sidebands: Vec<Row>,
}

pub fn run(args: &Args) -> CliResult<()> {
    let m = modulation(args)?;
    let lib = |e| CliError::lib("sidebands", e);
    let n_max = match args.n_max {
        Some(n) => n,
        None => {
            let full = general_sidebands_resolved(&m).map_err(lib)?;
            full.iter()
                .filter(|(_, g)| g.norm() > AUTO_CUTOFF)
                .map(|(n, _)| n.unsigned_abs() as usize)
                .max()
                .unwrap_or(0)
        }
    };
    let spec = general_sidebands(&m, n_max).map_err(lib)?;
    let rows: Vec<Row> = spec
        .iter()
        .map(|(n, g)| Row {
            n,
            re: g.re,
            im: g.im,
            abs2: g.norm_sqr(),
        })
        .collect();
    let energy: f64 = rows.iter().map(|r| r.abs2).sum();
    let body = match args.format {
        Format::Json => pretty_json(&Document {
            n_max,
            samples: spec.samples,
            tail_estimate: spec.tail_estimate,
            energy_sum: energy,
            sidebands: rows,
        }),
        Format::Csv => {
            let mut out = String::from("n,re,im,abs2\n");
            for r in &rows {
                out.push_str(&format!("{},{},{},{}\n", r.n, num(r.re), num(r.im), num(r.abs2)));
            }
            out.push_str(&format!("# energy_sum={}\n", num(energy)));
            out
        }
    };
    emit(args.output.as_deref(), &body)
}
