//! Parameter grids that exercise every identity and collect the residuals.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::coefficients::build_coeff_table;
use crate::error::{invalid, Error, Result};
use crate::spectroscopy::{
    a_s_direct, a_s_geometric, a_s_newberger, a_s_series, average_power_unmodulated,
    modulated_power_exact, time_domain_oracle, OscillatorParams,
};
use crate::sum_rules::report::{RuleId, SumRuleReport};
use crate::sum_rules::{
    addition_formula_sides, alternating_sum_sides, b_ks_brute, b_ks_closed, general_modulation_rules,
    jbar_sum_rule_sides, jcs_sum_rule_sides, recursion_residual, GeneralModulation, ModulationRuleSums,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Generalized,
    Spectroscopy,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Suite::Core),
            "generalized" => Ok(Suite::Generalized),
            "spectroscopy" => Ok(Suite::Spectroscopy),
            "all" => Ok(Suite::All),
            other => Err(invalid(format!("unknown suite '{other}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Core => "core",
            Suite::Generalized => "generalized",
            Suite::Spectroscopy => "spectroscopy",
            Suite::All => "all",
        })
    }
}

const MOMENT_ARGS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const ADDITION_PAIRS: [(f64, f64); 3] = [(1.0, 0.7), (2.0, -1.3), (0.5, 0.5)];
const RECURSION_ARGS: [f64; 4] = [0.3, 1.0, 2.0, 5.0];
const BRUTE_TOL: f64 = 1e-16;

pub fn core_reports() -> Result<Vec<SumRuleReport>> {
    let table = build_coeff_table(6)?;
    let mut out = Vec::new();
    for &m in &MOMENT_ARGS {
        for k in 0..=6u32 {
            for s in -8..=8_i64 {
                let closed = b_ks_closed(&table, k, s, m)?;
                let brute = b_ks_brute(k, s, m, BRUTE_TOL)?;
                let params = [("k", k as f64), ("s", s as f64), ("M", m)];
                out.push(SumRuleReport::real(RuleId::BksMoment, params, closed, brute.value, brute.order));
            }
        }
    }
    for &m in &MOMENT_ARGS {
        for k in 0..=6u32 {
            for s in 1..=8_i64 {
                let sign = if (k as i64 + s) % 2 == 0 { 1.0 } else { -1.0 };
                let plus = b_ks_brute(k, s, m, BRUTE_TOL)?;
                let minus = b_ks_brute(k, -s, m, BRUTE_TOL)?;
                let params = [("k", k as f64), ("s", s as f64), ("M", m)];
                out.push(SumRuleReport::real(
                    RuleId::BksParity,
                    params,
                    sign * plus.value,
                    minus.value,
                    plus.order,
                ));
            }
        }
    }
    for &(y1, y2) in &ADDITION_PAIRS {
        for k in 0..=4u32 {
            for q in -4..=4_i64 {
                let p = addition_formula_sides(&table, k, q, y1, y2)?;
                let params = [("k", k as f64), ("q", q as f64), ("y1", y1), ("y2", y2)];
                out.push(SumRuleReport::new(RuleId::AdditionFormula, params, p.lhs, p.rhs, p.order));
            }
        }
    }
    for &y in &RECURSION_ARGS {
        for k in 0..=4u32 {
            for q in -4..=4_i64 {
                let p = alternating_sum_sides(&table, k, q, y)?;
                let params = [("k", k as f64), ("q", q as f64), ("y", y)];
                out.push(SumRuleReport::new(RuleId::AlternatingSum, params, p.rhs, p.lhs, p.order));
            }
        }
    }
    for &y in &RECURSION_ARGS {
        for k in 1..=4u32 {
            for q in -10..=10_i64 {
                let r = recursion_residual(&table, k, q, y)?;
                let params = [("k", k as f64), ("q", q as f64), ("y", y)];
                out.push(SumRuleReport::real(RuleId::RecursionRelation, params, 0.0, r, k as usize));
            }
        }
    }
    Ok(out)
}

fn three_harmonic() -> Result<GeneralModulation<f64>> {
    GeneralModulation::from_nonnegative(
        [
            (0, Complex64::new(0.3, 0.0)),
            (1, Complex64::new(0.4, -0.6)),
            (2, Complex64::new(-0.25, 0.1)),
            (3, Complex64::new(0.05, 0.2)),
        ],
        1.0,
    )
}

pub fn generalized_reports() -> Result<Vec<SumRuleReport>> {
    let args = [0.0, 0.5, 1.0, 2.0, -1.5];
    let mut out = Vec::new();
    for &x in &args {
        for &y in &args {
            for q in -3..=3_i64 {
                let p = jcs_sum_rule_sides(q, x, y)?;
                let params = [("q", q as f64), ("x", x), ("y", y)];
                out.push(SumRuleReport::new(RuleId::JcsSumRule, params, p.rhs, p.lhs, p.order));
            }
        }
    }
    for &y1 in &args {
        for &y2 in &args {
            for s in -3..=3_i64 {
                let p = jbar_sum_rule_sides(s, y1, y2)?;
                let params = [("s", s as f64), ("y1", y1), ("y2", y2)];
                out.push(SumRuleReport::real(RuleId::JbarSumRule, params, p.rhs, p.lhs, p.order));
            }
        }
    }
    // case 0: sinusoidal, 1: two-tone, 2: three harmonics
    let cases = [
        GeneralModulation::sinusoidal(1.5, 1.0)?,
        GeneralModulation::two_tone(1.0, 0.5, 1.0)?,
        three_harmonic()?,
    ];
    for (tag, m) in cases.iter().enumerate() {
        for s in -4..=4_i64 {
            let r = general_modulation_rules(m, s)?;
            let params = [("case", tag as f64), ("s", s as f64)];
            out.push(SumRuleReport::new(
                RuleId::ModulationEnergy,
                params,
                ModulationRuleSums::<f64>::expected_energy(s),
                r.energy,
                r.order,
            ));
            out.push(SumRuleReport::new(
                RuleId::ModulationFirstMoment,
                params,
                r.expected_first_moment,
                r.first_moment,
                r.order,
            ));
        }
    }
    Ok(out)
}

pub fn spectroscopy_reports() -> Result<Vec<SumRuleReport>> {
    let mut out = Vec::new();
    for &m in &[0.5, 1.0, 2.0] {
        for &ratio in &[0.5, 1.0, 3.0, 10.0] {
            let (gamma, omega) = (1.0, 1.0 / ratio);
            for s in 0..=3_i64 {
                let direct = a_s_direct(s, m, gamma, omega, BRUTE_TOL)?;
                let params = [("s", s as f64), ("M", m), ("gamma_over_Omega", ratio)];
                let newberger = a_s_newberger(s, m, gamma, omega)?;
                out.push(SumRuleReport::new(RuleId::ASumNewberger, params, newberger, direct.value, direct.order));
                let series = a_s_series(s, m, gamma, omega, 40)?;
                out.push(SumRuleReport::new(RuleId::ASumSeries, params, series.value, direct.value, direct.order));
                if s > 0 {
                    let neg = a_s_direct(-s, m, gamma, omega, BRUTE_TOL)?;
                    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                    out.push(SumRuleReport::new(
                        RuleId::ASumNegativeOrder,
                        params,
                        direct.value.conj() * sign,
                        neg.value,
                        neg.order,
                    ));
                }
            }
        }
    }
    let table = build_coeff_table(3)?;
    for &m in &[0.5, 1.0, 2.0] {
        for &eta in &[0.005, 0.01, 0.05] {
            let h = m / 2.0;
            let closed = Complex64::new(-h * eta * eta, -h * eta + h * (1.0 + 0.75 * m * m) * eta.powi(3));
            let geo = a_s_geometric(&table, 1, m, 1.0, eta, 3)?;
            let params = [("M", m), ("eta", eta), ("order", 3.0)];
            out.push(SumRuleReport::new(RuleId::ASumGeometric, params, closed, geo.value, 3));
        }
    }
    for &d in &[-2.5, -0.75, 0.0, 0.5, 2.0] {
        let p = OscillatorParams::new(1e6, 1.0, 1.0, d, 0.01, 0.0)?;
        let h = modulated_power_exact(&p, 2)?;
        let params = [("delta", d)];
        out.push(SumRuleReport::real(
            RuleId::PowerUnmodulated,
            params,
            average_power_unmodulated(&p, p.carrier()),
            h.dc,
            0,
        ));
    }
    for &big_delta in &[-1.3, 0.7] {
        let p = OscillatorParams::normalized(1e6, big_delta, 0.01, 1.0, 1.0)?;
        let exact = modulated_power_exact(&p, 2)?;
        let m = GeneralModulation::sinusoidal(p.m, p.omega_mod)?;
        let ode = time_domain_oracle(&p, &m, 2, 256, 2)?;
        let params = [("Delta", big_delta), ("eta", 0.01), ("M", 1.0)];
        out.push(SumRuleReport::real(RuleId::LineshapeOdeDc, params, exact.dc, ode.dc, 512));
        out.push(SumRuleReport::new(
            RuleId::LineshapeOdeFirstHarmonic,
            params,
            exact.harmonic_complex(1),
            ode.harmonic_complex(1),
            512,
        ));
    }
    Ok(out)
}

pub fn run_suite(suite: Suite) -> Result<Vec<SumRuleReport>> {
    match suite {
        Suite::Core => core_reports(),
        Suite::Generalized => generalized_reports(),
        Suite::Spectroscopy => spectroscopy_reports(),
        Suite::All => {
            let mut v = core_reports()?;
            v.extend(generalized_reports()?);
            v.extend(spectroscopy_reports()?);
            Ok(v)
        }
    }
}
