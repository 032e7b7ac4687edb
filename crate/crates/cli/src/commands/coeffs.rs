use std::hash::Hasher;
use std::path::PathBuf;

use besselrules::coefficients::{
    build_coeff_table, coeff_faa_di_bruno, poly_to_terms, TermDocument, MAX_FAA_DI_BRUNO_ORDER,
};
use besselrules::CoeffTable;
use fnv::FnvHasher;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{emit, pretty_json, Format};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Largest k in the table
    #[arg(long, default_value_t = 4)]
    pub k_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (stdout when omitted)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Entry {
    k: u32,
    n: i64,
    poly: Vec<TermDocument>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    mismatch: bool,
}

#[derive(Serialize)]
struct DualPath {
    /// "ok", "mismatch", or "skipped" when k_max is beyond the closed-form cap.
    status: &'static str,
    checked_up_to: u32,
    recursion_checksum: String,
    closed_form_checksum: String,
    mismatches: Vec<(u32, i64)>,
}

#[derive(Serialize)]
struct Document {
    k_max: u32,
    entries: Vec<Entry>,
    dual_path: DualPath,
}

fn hash_terms(h: &mut FnvHasher, k: u32, n: i64, terms: &[TermDocument]) {
    h.write(format!("{k},{n}:").as_bytes());
    for t in terms {
        h.write(format!("{}/{}^{};", t.num, t.exp2, t.power).as_bytes());
    }
}

fn dual_path(table: &CoeffTable) -> CliResult<DualPath> {
    let k_max = table.k_max();
    let checked = k_max.min(MAX_FAA_DI_BRUNO_ORDER);
    let mut rec = FnvHasher::default();
    let mut fdb = FnvHasher::default();
    let mut mismatches = Vec::new();
    for k in 1..=checked {
        for n in -(k as i64)..=k as i64 {
            let a = table.entry(k, n).expect("entry inside support");
            let b = coeff_faa_di_bruno(k, n).map_err(|e| CliError::lib("closed-form path", e))?;
            hash_terms(&mut rec, k, n, &poly_to_terms(a));
            hash_terms(&mut fdb, k, n, &poly_to_terms(&b));
            if *a != b {
                mismatches.push((k, n));
            }
        }
    }
    let status = if !mismatches.is_empty() {
        "mismatch"
    } else if checked < k_max {
        "skipped"
    } else {
        "ok"
    };
    Ok(DualPath {
        status,
        checked_up_to: checked,
        recursion_checksum: format!("{:016x}", rec.finish()),
        closed_form_checksum: format!("{:016x}", fdb.finish()),
        mismatches,
    })
}

pub fn run(args: &Args) -> CliResult<()> {
    let table = build_coeff_table(args.k_max).map_err(|e| CliError::lib("coeffs", e))?;
    let dual = dual_path(&table)?;
    let failed = !dual.mismatches.is_empty();
    let body = match args.format {
        Format::Json => {
            let entries = table
                .nonzero_entries()
                .map(|(k, n, p)| Entry {
                    k,
                    n,
                    poly: poly_to_terms(p),
                    mismatch: dual.mismatches.contains(&(k, n)),
                })
                .collect();
            pretty_json(&Document {
                k_max: table.k_max(),
                entries,
                dual_path: dual,
            })
        }
        Format::Csv => csv(&table, &dual),
    };
    emit(args.output.as_deref(), &body)?;
    if failed {
        return Err(CliError::Verification(
            "recursion and closed-form coefficient paths disagree".into(),
        ));
    }
    Ok(())
}

fn csv(table: &CoeffTable, dual: &DualPath) -> String {
    let mut out = String::from("k,n,power,num,exp2,mismatch\n");
    for (k, n, p) in table.nonzero_entries() {
        let bad = dual.mismatches.contains(&(k, n));
        for t in poly_to_terms(p) {
            out.push_str(&format!("{k},{n},{},{},{},{bad}\n", t.power, t.num, t.exp2));
        }
    }
    out.push_str(&format!(
        "# dual_path status={} checked_up_to={} recursion_checksum={} closed_form_checksum={}\n",
        dual.status, dual.checked_up_to, dual.recursion_checksum, dual.closed_form_checksum
    ));
    out
}
