use std::path::PathBuf;
use std::str::FromStr;

use besselrules::build_coeff_table;
use besselrules::spectroscopy::{a_s_direct, a_s_geometric, a_s_newberger, a_s_series, eta_expansion};
use besselrules::Complex64;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{emit, num, pretty_json, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Newberger,
    Series,
    Geometric,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Newberger => "newberger",
            Method::Series => "series",
            Method::Geometric => "geometric",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "direct" => Ok(Method::Direct),
            "newberger" => Ok(Method::Newberger),
            "series" => Ok(Method::Series),
            "geometric" => Ok(Method::Geometric),
            other => Err(format!(
                "unknown method {other:?} (expected direct, newberger, series or geometric)"
            )),
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Sideband offset s
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub s: i64,
    /// Modulation index M
    #[arg(long = "M", id = "m", default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long = "Omega", id = "omega_mod", default_value_t = 0.1)]
    pub omega_mod: f64,
    /// Comma-separated list of methods
    #[arg(long, value_delimiter = ',', default_value = "direct,newberger,series")]
    pub method: Vec<Method>,
    /// Expansion order of the geometric method
    #[arg(long, default_value_t = 3)]
    pub order: u32,
    /// Term cap of the factorial series
    #[arg(long, default_value_t = 40)]
    pub k_max: usize,
    /// Truncation tolerance of the direct sum
    #[arg(long, default_value_t = 1e-17)]
    pub tol: f64,
    /// Also emit the exact eta-expansion coefficients up to --order
    #[arg(long)]
    pub expand: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Value {
    method: Method,
    re: f64,
    im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    valid: Option<bool>,
}

#[derive(Serialize)]
struct Residual {
    a: Method,
    b: Method,
    abs: f64,
    rel: f64,
}

#[derive(Serialize)]
struct Term {
    power: u32,
    unit: &'static str,
    coefficient: String,
    value: f64,
}

#[derive(Serialize)]
struct Document {
    s: i64,
    m: f64,
    gamma: f64,
    omega_mod: f64,
    values: Vec<Value>,
    residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expansion: Option<Vec<Term>>,
}

fn compute(args: &Args, method: Method) -> CliResult<(Complex64, Option<bool>)> {
    let ctx = |e| CliError::lib(format!("method {}", method.name()), e);
    let (s, m, g, w) = (args.s, args.m, args.gamma, args.omega_mod);
    Ok(match method {
        Method::Direct => (a_s_direct(s, m, g, w, args.tol).map_err(ctx)?.value, None),
        Method::Newberger => (a_s_newberger(s, m, g, w).map_err(ctx)?, None),
        Method::Series => (a_s_series(s, m, g, w, args.k_max).map_err(ctx)?.value, None),
        Method::Geometric => {
            let table = build_coeff_table(args.order).map_err(ctx)?;
            let f = a_s_geometric(&table, s, m, g, w, args.order).map_err(ctx)?;
            (f.value, Some(f.valid))
        }
    })
}

fn expansion(args: &Args) -> CliResult<Vec<Term>> {
    let ctx = |e| CliError::lib("eta expansion", e);
    let table = build_coeff_table(args.order).map_err(ctx)?;
    Ok(eta_expansion(&table, args.s, args.order)
        .map_err(ctx)?
        .into_iter()
        .map(|t| Term {
            power: t.power,
            unit: if t.imaginary { "i" } else { "1" },
            coefficient: t.coefficient.to_string(),
            value: t.coefficient_at(args.m),
        })
        .collect())
}

pub fn run(args: &Args) -> CliResult<()> {
    if args.method.is_empty() {
        return Err(CliError::Usage("--method needs at least one entry".into()));
    }
    let mut methods = args.method.clone();
    methods.dedup();
    let mut values = Vec::with_capacity(methods.len());
    for &method in &methods {
        let (v, valid) = compute(args, method)?;
        values.push(Value {
            method,
            re: v.re,
            im: v.im,
            valid,
        });
    }
    let mut residuals = Vec::new();
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let za = Complex64::new(a.re, a.im);
            let zb = Complex64::new(b.re, b.im);
            let abs = (za - zb).norm();
            let scale = za.norm().max(zb.norm());
            residuals.push(Residual {
                a: a.method,
                b: b.method,
                abs,
                rel: if scale > 0.0 { abs / scale } else { 0.0 },
            });
        }
    }
    let expansion = if args.expand { Some(expansion(args)?) } else { None };

    let body = match args.format {
        Format::Json => pretty_json(&Document {
            s: args.s,
            m: args.m,
            gamma: args.gamma,
            omega_mod: args.omega_mod,
            values,
            residuals,
            expansion,
        }),
        Format::Csv => {
            let mut out = String::from("kind,method,other,re,im,abs_residual,rel_residual\n");
            for v in &values {
                out.push_str(&format!("value,{},,{},{},,\n", v.method.name(), num(v.re), num(v.im)));
            }
            for r in &residuals {
                out.push_str(&format!(
                    "residual,{},{},,,{},{}\n",
                    r.a.name(),
                    r.b.name(),
                    num(r.abs),
                    num(r.rel)
                ));
            }
            if let Some(terms) = &expansion {
                out.push_str("power,unit,coefficient,value\n");
                for t in terms {
                    out.push_str(&format!("{},{},{},{}\n", t.power, t.unit, t.coefficient, num(t.value)));
                }
            }
            out
        }
    };
    emit(args.output.as_deref(), &body)
}
