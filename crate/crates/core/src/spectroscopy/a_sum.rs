use num_complex::Complex;

use super::{perturbative_validity, Flagged};
use crate::bessel::{bessel_j_row, complex_order_reduced, truncation_bound};
use crate::coefficients::{eval_coeff, CoeffTable};
use crate::dyadic::DyadicPoly;
use crate::error::{invalid, Error, Result};
use crate::scalar::{int, lit, parity_sign, ComplexSum, Real};
use crate::sum_rules::Truncated;

/// Largest `pi gamma / Omega` accepted by the complex-order closed form.
pub const NEWBERGER_GUARD: f64 = 700.0;

/// Cap on the number of terms of the factorial series.
pub const MAX_SERIES_TERMS: usize = 60;

fn check_rates<T: Real>(m: T, gamma: T, omega_mod: T) -> Result<()> {
    if !m.is_finite() || !(gamma > T::zero()) || !(omega_mod > T::zero()) {
        return Err(invalid(format!(
            "need finite M, gamma > 0 and Omega > 0; got M={m}, gamma={gamma}, Omega={omega_mod}"
        )));
    }
    if !gamma.is_finite() || !omega_mod.is_finite() {
        return Err(invalid("gamma and Omega must be finite"));
    }
    Ok(())
}

/// Truncated `sum_n J_n(M) J_{n-s}(M) / (gamma + i n Omega)`.
pub fn a_s_direct<T: Real>(s: i64, m: T, gamma: T, omega_mod: T, tol: T) -> Result<Truncated<Complex<T>>> {
    check_rates(m, gamma, omega_mod)?;
    let n = truncation_bound(m, tol) + s.unsigned_abs() as usize;
    let row = bessel_j_row(n, m)?;
    let reach = n as i64;
    let mut acc = ComplexSum::new();
    for k in -reach..=reach {
        let p = row.get_or_zero(k) * row.get_or_zero(k - s);
        if p != T::zero() {
            acc.add(Complex::new(p, T::zero()) / Complex::new(gamma, int::<T>(k) * omega_mod));
        }
    }
    Ok(Truncated {
        value: acc.value(),
        order: n,
    })
}

/// Closed form through complex-order Bessel functions,
/// `A_s = ((-1)^s / gamma) (pi a / sinh(pi a)) J_{s-ia}(M) J_{ia}(M)` with
/// `a = gamma / Omega`. Negative `s` uses `A_{-s} = (-1)^s conj(A_s)`.
pub fn a_s_newberger<T: Real>(s: i64, m: T, gamma: T, omega_mod: T) -> Result<Complex<T>> {
    check_rates(m, gamma, omega_mod)?;
    if m < T::zero() {
        return Err(invalid(format!("complex-order closed form needs M >= 0, got {m}")));
    }
    if s < 0 {
        let a = a_s_newberger(-s, m, gamma, omega_mod)?;
        return Ok(a.conj() * parity_sign::<T>(s));
    }
    let a = gamma / omega_mod;
    let pa = T::PI() * a;
    if pa > lit(NEWBERGER_GUARD) {
        return Err(Error::Range(format!(
            "pi gamma/Omega = {pa} exceeds {NEWBERGER_GUARD}; use the series or direct sum"
        )));
    }
    // J_{s-ia} J_{ia} = (M/2)^s S(s-ia) S(ia): the (M/2)^{+-ia} phases cancel.
    let nu1 = Complex::new(int::<T>(s), -a);
    let nu2 = Complex::new(T::zero(), a);
    let product = complex_order_reduced(nu1, m)? * complex_order_reduced(nu2, m)?;
    let power = (m * lit(0.5)).powi(s as i32);
    let ratio = if pa == T::zero() { T::one() } else { pa / pa.sinh() };
    Ok(product * (parity_sign::<T>(s) * ratio * power / gamma))
}

/// Partial sum of the factorial series with the size of its last term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSum<T> {
    pub value: Complex<T>,
    pub last_term: T,
    pub terms: usize,
}

/// `A_s = ((-1)^s/gamma) (M/2)^s sum_{k<=k_max} (-M^2/4)^k (s+2k)!/((s+k)! k!)
///  prod_{p=1..s} 1/(k+p-ia) prod_{p=1..k} 1/(p^2+a^2)`.
pub fn a_s_series<T: Real>(s: i64, m: T, gamma: T, omega_mod: T, k_max: usize) -> Result<SeriesSum<T>> {
    check_rates(m, gamma, omega_mod)?;
    if k_max > MAX_SERIES_TERMS {
        return Err(invalid(format!("k_max = {k_max} exceeds {MAX_SERIES_TERMS}")));
    }
    if s < 0 {
        let r = a_s_series(-s, m, gamma, omega_mod, k_max)?;
        return Ok(SeriesSum {
            value: r.value.conj() * parity_sign::<T>(s),
            ..r
        });
    }
    let a = gamma / omega_mod;
    let ia = Complex::new(T::zero(), a);
    let sf = int::<T>(s);
    let mut term = Complex::new(T::one(), T::zero());
    for p in 1..=s {
        term /= Complex::new(int::<T>(p), T::zero()) - ia;
    }
    let q = -(m * m) * lit(0.25);
    let mut acc = ComplexSum::new();
    acc.add(term);
    for k in 1..=k_max as i64 {
        let kf = int::<T>(k);
        let factorials = (sf + lit::<T>(2.0) * kf) * (sf + lit::<T>(2.0) * kf - T::one()) / ((sf + kf) * kf);
        let shift = (Complex::new(kf, T::zero()) - ia) / (Complex::new(kf + sf, T::zero()) - ia);
        term = term * shift * (q * factorials / (kf * kf + a * a));
        acc.add(term);
    }
    let prefactor = parity_sign::<T>(s) * (m * lit(0.5)).powi(s as i32) / gamma;
    Ok(SeriesSum {
        value: acc.value() * prefactor,
        last_term: term.norm() * prefactor.abs(),
        terms: k_max + 1,
    })
}

/// One term `coefficient(M) * (i if imaginary) * eta^power / gamma` of the
/// expansion of `A_s` in `eta = Omega/gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaTerm {
    pub power: u32,
    pub imaginary: bool,
    pub coefficient: DyadicPoly,
}

impl EtaTerm {
    pub fn coefficient_at<T: Real>(&self, m: T) -> T {
        self.coefficient.eval(m)
    }

    /// The term's contribution in units of `1/gamma`.
    pub fn value<T: Real>(&self, m: T, eta: T) -> Complex<T> {
        let v = self.coefficient_at(m) * eta.powi(self.power as i32);
        if self.imaginary {
            Complex::new(T::zero(), v)
        } else {
            Complex::new(v, T::zero())
        }
    }
}

/// Exact coefficients of `gamma A_s = sum_k (-i eta)^k B_{k,s}(M)` for
/// `k <= order`, with `(-i)^k` split into a sign and a power of `i`.
pub fn eta_expansion(table: &CoeffTable, s: i64, order: u32) -> Result<Vec<EtaTerm>> {
    if order > table.k_max() {
        return Err(invalid(format!(
            "expansion order {order} exceeds the table order {}",
            table.k_max()
        )));
    }
    (0..=order)
        .map(|k| {
            let b = table.entry(k, s).cloned().unwrap_or_else(DyadicPoly::zero);
            // (-i)^k = (-1)^(k + k/2) i^(k mod 2)
            let sign = if (k + k / 2) % 2 == 0 { 1 } else { -1 };
            Ok(EtaTerm {
                power: k,
                imaginary: k % 2 == 1,
                coefficient: b.scale_int(sign),
            })
        })
        .collect()
}

/// Geometric expansion `(1/gamma) sum_{k<=order} (-i Omega/gamma)^k B_{k,s}(M)`,
/// flagged invalid when `|2 N_MAX Omega/gamma| >= 1`.
pub fn a_s_geometric<T: Real>(
    table: &CoeffTable,
    s: i64,
    m: T,
    gamma: T,
    omega_mod: T,
    order: u32,
) -> Result<Flagged<Complex<T>>> {
    check_rates(m, gamma, omega_mod)?;
    if order > table.k_max() {
        return Err(invalid(format!(
            "expansion order {order} exceeds the table order {}",
            table.k_max()
        )));
    }
    let eta = omega_mod / gamma;
    let step = Complex::new(T::zero(), -eta);
    let mut weight = Complex::new(T::one(), T::zero());
    let mut acc = ComplexSum::new();
    for k in 0..=order {
        let b = eval_coeff(table, k, s, m)?;
        acc.add(weight * b);
        weight *= step;
    }
    Ok(Flagged {
        value: acc.value() / gamma,
        valid: perturbative_validity(m, eta),
    })
}
