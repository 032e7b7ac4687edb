//! Serializable record of one identity check.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which identity a report row checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    BksMoment,
    BksParity,
    AdditionFormula,
    AlternatingSum,
    JcsSumRule,
    JbarSumRule,
    ModulationEnergy,
    ModulationFirstMoment,
    RecursionRelation,
    ASumNewberger,
    ASumSeries,
    ASumNegativeOrder,
    ASumGeometric,
    PowerUnmodulated,
    LineshapeOdeDc,
    LineshapeOdeFirstHarmonic,
}

impl RuleId {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::BksMoment => "bks_moment",
            RuleId::BksParity => "bks_parity",
            RuleId::AdditionFormula => "addition_formula",
            RuleId::AlternatingSum => "alternating_sum",
            RuleId::JcsSumRule => "jcs_sum_rule",
            RuleId::JbarSumRule => "jbar_sum_rule",
            RuleId::ModulationEnergy => "modulation_energy",
            RuleId::ModulationFirstMoment => "modulation_first_moment",
            RuleId::RecursionRelation => "recursion_relation",
            RuleId::ASumNewberger => "a_sum_newberger",
            RuleId::ASumSeries => "a_sum_series",
            RuleId::ASumNegativeOrder => "a_sum_negative_order",
            RuleId::ASumGeometric => "a_sum_geometric",
            RuleId::PowerUnmodulated => "power_unmodulated",
            RuleId::LineshapeOdeDc => "lineshape_ode_dc",
            RuleId::LineshapeOdeFirstHarmonic => "lineshape_ode_first_harmonic",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One closed-form versus brute-force comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct SumRuleReport {
    pub rule_id: RuleId,
    pub parameters: BTreeMap<String, f64>,
    pub closed_form: Complex64,
    pub brute_force: Complex64,
    pub truncation_order: usize,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

/// Flat serialized form of a report, one JSON object per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub rule_id: RuleId,
    pub parameters: BTreeMap<String, f64>,
    pub closed_re: f64,
    pub closed_im: f64,
    pub brute_re: f64,
    pub brute_im: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub truncation_order: usize,
    pub pass: bool,
}

pub const CSV_HEADER: &str =
    "rule_id,params,closed_re,closed_im,brute_re,brute_im,abs_residual,rel_residual,truncation_order,pass";

impl SumRuleReport {
    pub fn new<'a, P>(
        rule_id: RuleId,
        parameters: P,
        closed_form: Complex64,
        brute_force: Complex64,
        truncation_order: usize,
    ) -> Self
    where
        P: IntoIterator<Item = (&'a str, f64)>,
    {
        let abs_residual = (closed_form - brute_force).norm();
        Self {
            rule_id,
            parameters: parameters
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            closed_form,
            brute_force,
            truncation_order,
            abs_residual,
            rel_residual: abs_residual / closed_form.norm().max(1e-300),
        }
    }

    pub fn real<'a, P>(rule_id: RuleId, parameters: P, closed: f64, brute: f64, order: usize) -> Self
    where
        P: IntoIterator<Item = (&'a str, f64)>,
    {
        Self::new(
            rule_id,
            parameters,
            Complex64::new(closed, 0.0),
            Complex64::new(brute, 0.0),
            order,
        )
    }

    /// Residual test: `abs_residual <= tol * max(1, |closed_form|)`.
    pub fn passes(&self, tol: f64) -> bool {
        self.abs_residual <= tol * self.closed_form.norm().max(1.0)
    }

    pub fn record(&self, tol: f64) -> ReportRecord {
        ReportRecord {
            rule_id: self.rule_id,
            parameters: self.parameters.clone(),
            closed_re: self.closed_form.re,
            closed_im: self.closed_form.im,
            brute_re: self.brute_force.re,
            brute_im: self.brute_force.im,
            abs_residual: self.abs_residual,
            rel_residual: self.rel_residual,
            truncation_order: self.truncation_order,
            pass: self.passes(tol),
        }
    }

    pub fn to_json_line(&self, tol: f64) -> String {
        serde_json::to_string(&self.record(tol)).expect("report serializes")
    }

    /// Parameters joined as `name=value;...` in name order.
    pub fn params_field(&self) -> String {
        self.parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn to_csv_row(&self, tol: f64) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            self.rule_id,
            self.params_field(),
            self.closed_form.re,
            self.closed_form.im,
            self.brute_force.re,
            self.brute_force.im,
            self.abs_residual,
            self.rel_residual,
            self.truncation_order,
            self.passes(tol)
        )
    }
}
