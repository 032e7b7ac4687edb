//! Acceptance suite: one PASS/FAIL line per criterion, with wall time against
//! its budget. Runs as a plain binary so every line is printed even when an
//! earlier criterion fails. The run is a report: it exits nonzero on a FAIL
//! only when `BESSELRULES_STRICT_ACCEPTANCE=1` is set.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use besselrules::coefficients::{build_coeff_table, coeff_faa_di_bruno};
use besselrules::dyadic::{DyadicPoly, DyadicRational};
use besselrules::spectroscopy::{
    a_s_direct, a_s_geometric, a_s_newberger, a_s_series, eta_expansion, modulated_power_exact,
    modulated_power_perturbative, time_domain_oracle,
};
use besselrules::sum_rules::{
    addition_formula_sides, b_ks_brute, b_ks_closed, default_truncation_tol, general_modulation_rules,
    jbar_sum_rule_sides, jcs_sum_rule_sides, recursion_residual, ModulationRuleSums,
};
use besselrules::{Complex64, GeneralModulation, Params64};

type Outcome = Result<String, String>;

fn poly(terms: &[(u32, i64, u32)]) -> DyadicPoly {
    DyadicPoly::from_terms(terms.iter().map(|&(p, num, e)| (p, DyadicRational::new(num, e))))
}

/// The printed table of `C_{k,n} / i^k` for `k <= 4`, entry by entry.
fn printed_listing() -> Vec<(u32, i64, DyadicPoly)> {
    let mut v = vec![(0, 0, poly(&[(0, 1, 0)]))];
    v.push((1, 1, poly(&[(1, 1, 1)])));
    v.push((1, 0, DyadicPoly::zero()));
    v.push((1, -1, poly(&[(1, 1, 1)])));

    v.push((2, 2, poly(&[(2, 1, 2)])));
    v.push((2, 1, poly(&[(1, 1, 1)])));
    v.push((2, 0, poly(&[(2, 1, 1)])));
    v.push((2, -1, poly(&[(1, -1, 1)])));
    v.push((2, -2, poly(&[(2, 1, 2)])));

    v.push((3, 3, poly(&[(3, 1, 3)])));
    v.push((3, 2, poly(&[(2, 3, 2)])));
    v.push((3, 1, poly(&[(3, 3, 3), (1, 1, 1)])));
    v.push((3, 0, DyadicPoly::zero()));
    v.push((3, -1, poly(&[(3, 3, 3), (1, 1, 1)])));
    v.push((3, -2, poly(&[(2, -3, 2)])));
    v.push((3, -3, poly(&[(3, 1, 3)])));

    v.push((4, 4, poly(&[(4, 1, 4)])));
    v.push((4, 3, poly(&[(3, 3, 2)])));
    v.push((4, 2, poly(&[(4, 1, 2), (2, 7, 2)])));
    v.push((4, 1, poly(&[(3, 3, 2), (1, 1, 1)])));
    v.push((4, 0, poly(&[(4, 3, 3), (2, 1, 2)])));
    v.push((4, -1, poly(&[(3, -3, 2), (1, -1, 1)])));
    v.push((4, -2, poly(&[(4, 1, 2), (2, 7, 2)])));
    v.push((4, -3, poly(&[(3, -3, 2)])));
    v.push((4, -4, poly(&[(4, 1, 4)])));
    v
}

fn criterion_1() -> Outcome {
    let table = build_coeff_table(4).map_err(|e| e.to_string())?;
    let listing = printed_listing();
    let mut bad = Vec::new();
    for (k, n, expected) in &listing {
        let got = table.entry(*k, *n).cloned().unwrap_or_else(DyadicPoly::zero);
        if &got != expected {
            bad.push(format!("({k},{n}) table {got} vs listing {expected}"));
        }
    }
    if bad.is_empty() {
        Ok(format!("{} entries identical", listing.len()))
    } else {
        Err(format!("{} of {} entries differ: {}", bad.len(), listing.len(), bad.join("; ")))
    }
}

fn criterion_2() -> Outcome {
    let table = build_coeff_table(10).map_err(|e| e.to_string())?;
    if table.entry(0, 0) != Some(&DyadicPoly::one()) {
        return Err("(0,0) entry is not 1".into());
    }
    let mut count = 1;
    for k in 1..=10u32 {
        for n in -(k as i64)..=k as i64 {
            let fdb = coeff_faa_di_bruno(k, n).map_err(|e| e.to_string())?;
            let rec = table.entry(k, n).cloned().unwrap_or_else(DyadicPoly::zero);
            if fdb != rec {
                return Err(format!("({k},{n}) recursion {rec} vs closed form {fdb}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} polynomials identical"))
}

fn criterion_3() -> Outcome {
    let table = build_coeff_table(6).map_err(|e| e.to_string())?;
    let tol = default_truncation_tol::<f64>();
    let mut worst = 0.0_f64;
    for &m in &[0.5, 1.0, 2.0, 5.0] {
        for k in 0..=6u32 {
            for s in -8..=8_i64 {
                let c = b_ks_closed(&table, k, s, m).map_err(|e| e.to_string())?;
                let b = b_ks_brute(k, s, m, tol).map_err(|e| e.to_string())?.value;
                let r = (c - b).abs() / c.abs().max(1.0);
                worst = worst.max(r);
                if r >= 1e-10 {
                    return Err(format!("k={k} s={s} M={m}: closed {c} brute {b}"));
                }
            }
        }
    }
    let b00 = b_ks_brute(0, 0, 2.0, tol).map_err(|e| e.to_string())?.value;
    if (b00 - 1.0).abs() >= 1e-12 {
        return Err(format!("B_00 = {b00}"));
    }
    Ok(format!("worst residual {worst:.2e}, |B_00 - 1| = {:.2e}", (b00 - 1.0).abs()))
}

fn criterion_4() -> Outcome {
    let table = build_coeff_table(6).map_err(|e| e.to_string())?;
    let pairs = [(1.0_f64, 0.7), (0.5, 2.0), (2.0, -2.0), (0.0, 1.5), (3.0, 1.0), (-1.2, 0.4)];
    let mut worst = 0.0_f64;
    for &(y1, y2) in &pairs {
        for k in 0..=6u32 {
            for q in -6..=6_i64 {
                let p = addition_formula_sides(&table, k, q, y1, y2).map_err(|e| e.to_string())?;
                let r = (p.lhs - p.rhs).norm() / p.rhs.norm().max(1.0);
                worst = worst.max(r);
                if r >= 1e-10 {
                    return Err(format!("k={k} q={q} y1={y1} y2={y2}: {} vs {}", p.lhs, p.rhs));
                }
            }
        }
    }
    Ok(format!("worst residual {worst:.2e}"))
}

fn three_harmonic() -> GeneralModulation<f64> {
    GeneralModulation::from_nonnegative(
        [
            (0, Complex64::new(0.3, 0.0)),
            (1, Complex64::new(0.4, -0.6)),
            (2, Complex64::new(-0.25, 0.1)),
            (3, Complex64::new(0.05, 0.2)),
        ],
        1.0,
    )
    .unwrap()
}

fn criterion_5() -> Outcome {
    let args = [0.0, 0.5, 1.0, 2.0, -1.5, 4.0];
    let mut worst = 0.0_f64;
    for &x in &args {
        for &y in &args {
            for q in -3..=3_i64 {
                let p = jcs_sum_rule_sides(q, x, y).map_err(|e| e.to_string())?;
                let r = (p.lhs - p.rhs).norm();
                worst = worst.max(r);
                if r >= 1e-10 {
                    return Err(format!("jcs rule q={q} x={x} y={y}: {} vs {}", p.lhs, p.rhs));
                }
                let p = jbar_sum_rule_sides(q, x, y).map_err(|e| e.to_string())?;
                let r = (p.lhs - p.rhs).abs();
                worst = worst.max(r);
                if r >= 1e-10 {
                    return Err(format!("jbar rule s={q} y1={x} y2={y}: {} vs {}", p.lhs, p.rhs));
                }
            }
        }
    }
    let cases = [
        ("sinusoidal", GeneralModulation::sinusoidal(1.5, 1.0).unwrap()),
        ("two-tone", GeneralModulation::two_tone(1.0, 0.5, 1.0).unwrap()),
        ("three-harmonic", three_harmonic()),
    ];
    for (name, m) in &cases {
        for s in -4..=4_i64 {
            let sums = general_modulation_rules(m, s).map_err(|e| e.to_string())?;
            let e = (sums.energy - ModulationRuleSums::<f64>::expected_energy(s)).norm();
            let f = (sums.first_moment - sums.expected_first_moment).norm();
            worst = worst.max(e).max(f);
            if e >= 1e-10 || f >= 1e-10 {
                return Err(format!("{name} s={s}: energy residual {e:.2e}, first moment residual {f:.2e}"));
            }
        }
    }
    Ok(format!("worst residual {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let table = build_coeff_table(2).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for &y in &[0.3, 1.0, 2.0, 5.0] {
        for k in 1..=2u32 {
            for q in -10..=10_i64 {
                let r = recursion_residual(&table, k, q, y).map_err(|e| e.to_string())?;
                worst = worst.max(r);
                if r >= 1e-12 {
                    return Err(format!("order {k} q={q} y={y}: residual {r:.2e}"));
                }
            }
        }
    }
    Ok(format!("worst residual {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0_f64;
    for &m in &[0.5_f64, 1.0, 2.0] {
        for &ratio in &[0.5, 1.0, 3.0, 10.0] {
            let (gamma, omega) = (1.0, 1.0 / ratio);
            for s in 0..=3_i64 {
                let d = a_s_direct(s, m, gamma, omega, 1e-17).map_err(|e| e.to_string())?.value;
                let n = a_s_newberger(s, m, gamma, omega).map_err(|e| e.to_string())?;
                let q = a_s_series(s, m, gamma, omega, 40).map_err(|e| e.to_string())?.value;
                for (a, b) in [(d, n), (d, q), (n, q)] {
                    let r = (a - b).norm() / a.norm().max(b.norm());
                    worst = worst.max(r);
                    if r >= 1e-8 {
                        return Err(format!("M={m} gamma/Omega={ratio} s={s}: {a} vs {b}"));
                    }
                }
            }
        }
    }
    Ok(format!("worst relative disagreement {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let table = build_coeff_table(3).map_err(|e| e.to_string())?;
    let terms = eta_expansion(&table, 1, 3).map_err(|e| e.to_string())?;
    let expected = [
        (false, DyadicPoly::zero()),
        (true, poly(&[(1, -1, 1)])),
        (false, poly(&[(1, -1, 1)])),
        (true, poly(&[(1, 1, 1), (3, 3, 3)])),
    ];
    for (t, (imag, coeff)) in terms.iter().zip(&expected) {
        if t.imaginary != *imag || &t.coefficient != coeff {
            return Err(format!("eta^{} coefficient {} (imaginary={})", t.power, t.coefficient, t.imaginary));
        }
    }
    let mut slopes = Vec::new();
    for &m in &[0.5, 1.0, 2.0] {
        let pts: Vec<(f64, f64)> = (0..6)
            .map(|i| {
                let eta = 0.005 * 10f64.powf(i as f64 / 5.0);
                let g = a_s_geometric(&table, 1, m, 1.0, eta, 3).unwrap().value;
                let d = a_s_direct(1, m, 1.0, eta, 1e-17).unwrap().value;
                (eta.ln(), (g - d).norm().ln())
            })
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        if (slope - 4.0).abs() > 0.2 {
            return Err(format!("M={m}: remainder slope {slope:.3}"));
        }
        slopes.push(format!("{slope:.3}"));
    }
    Ok(format!("coefficients exact, remainder slopes {}", slopes.join(", ")))
}

/// Time-domain run, refining the step until the integrator's own
/// step-doubling check is satisfied.
fn resolved_oracle(
    p: &Params64,
    modulation: &GeneralModulation<f64>,
) -> Result<besselrules::Harmonics64, String> {
    let mut spp = 256;
    loop {
        match time_domain_oracle(p, modulation, 2, spp, 2) {
            Ok(h) => return Ok(h),
            Err(besselrules::Error::OracleFailure(_)) if spp < 8192 => spp *= 2,
            Err(e) => return Err(e.to_string()),
        }
    }
}

/// Harmonics below this fraction of `f^2/(2 gamma)` are not dominant.
const DOMINANT_HARMONIC: f64 = 1e-6;

fn criterion_9() -> Outcome {
    let mut worst_pert = 0.0_f64;
    let mut worst_ode = 0.0_f64;
    let mut breaches = Vec::new();
    for &m in &[0.5, 1.0, 2.0] {
        for &eta in &[0.005, 0.01, 0.02] {
            for &d in &[-3.0, -1.3, -0.4, 0.0, 0.4, 0.7, 1.0, 2.5] {
                let p = Params64::normalized(1e6, d, eta, m, 1.0).map_err(|e| e.to_string())?;
                let eps = p.epsilon_magnitude();
                if eps > 0.05 {
                    continue;
                }
                let exact = modulated_power_exact(&p, 2).map_err(|e| e.to_string())?;
                let pert = modulated_power_perturbative(&p).value;
                let gap = (exact.harmonic_complex(1) - pert.harmonic_complex(1)).norm() / p.power_scale();
                worst_pert = worst_pert.max(gap / eps.powi(3));
                if gap > 5.0 * eps.powi(3) {
                    breaches.push(format!("perturbative h1 at M={m} eta={eta} Delta={d} is {:.2} eps^3", gap / eps.powi(3)));
                }
                let modulation = GeneralModulation::sinusoidal(p.m, p.omega_mod).map_err(|e| e.to_string())?;
                let ode = resolved_oracle(&p, &modulation)?;
                let dc = (ode.dc - exact.dc).abs() / exact.dc;
                worst_ode = worst_ode.max(dc);
                if dc > 1e-6 {
                    breaches.push(format!("ode dc at M={m} eta={eta} Delta={d} off by {dc:.2e}"));
                }
                // At Delta = 0 the first harmonic is ~1e-11 of the power scale, so a
                // relative comparison would only measure rounding.
                let h = exact.harmonic_complex(1);
                if h.norm() >= DOMINANT_HARMONIC * p.power_scale() {
                    let r = (ode.harmonic_complex(1) - h).norm() / h.norm();
                    worst_ode = worst_ode.max(r);
                    if r > 1e-6 {
                        breaches.push(format!("ode h1 at M={m} eta={eta} Delta={d} off by {r:.2e}"));
                    }
                }
            }
        }
    }
    let summary = format!("perturbative h1 gap up to {worst_pert:.2} eps^3, ode relative gap up to {worst_ode:.2e}");
    if breaches.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {} breaches: {}", breaches.len(), breaches.join("; ")))
    }
}

fn criterion_10() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_besselrules"))
            .args(["verify", "--suite", "all", "--output"])
            .arg(&path)
            .stderr(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("verify exited with {status}"));
        }
        fs::read(&path).map_err(|e| e.to_string())
    };
    let a = run("verify_first.jsonl")?;
    let b = run("verify_second.jsonl")?;
    if a == b {
        Ok(format!("{} bytes identical", a.len()))
    } else {
        Err("reports differ".into())
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("coefficient table matches the printed listing", Duration::from_secs(1), criterion_1),
        ("recursion and closed-form coefficients agree", Duration::from_secs(30), criterion_2),
        ("moment sums B_ks closed vs brute force", Duration::from_secs(5), criterion_3),
        ("addition formula", Duration::from_secs(5), criterion_4),
        ("generalized and general-modulation rules", Duration::from_secs(10), criterion_5),
        ("three-term and second-order relations", Duration::from_secs(1), criterion_6),
        ("A_s direct, closed form and series agree", Duration::from_secs(10), criterion_7),
        ("eta expansion coefficients and remainder order", Duration::from_secs(10), criterion_8),
        ("lineshape perturbative, exact and time-domain", Duration::from_secs(120), criterion_9),
        ("verify reports are byte-identical", Duration::from_secs(60), criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {}: {name} [{:.3}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    let strict = std::env::var("BESSELRULES_STRICT_ACCEPTANCE").is_ok_and(|v| v == "1");
    if failures > 0 && strict {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
