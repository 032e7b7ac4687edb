//! Moment sums of Bessel products and the identities they satisfy.
//!
//! Every identity is exposed as a pair of independently computed sides: a
//! closed form assembled from the exact coefficient table, and a truncated
//! brute-force sum over Bessel products.

mod generalized;
mod modulation;
pub mod report;

pub use generalized::{jbar, jbar_spectrum, jbar_sum_rule_sides, jcs, jcs_spectrum, jcs_sum_rule_sides};
pub use modulation::{
    general_modulation_rules, general_sidebands, general_sidebands_resolved,
    general_sidebands_with_samples,
    GeneralModulation, ModulationRuleSums, SidebandSpectrum, MAX_SIDEBAND_SAMPLES,
    SIDEBAND_TAIL_TOLERANCE,
};

use num_complex::Complex;

use crate::bessel::{bessel_j_int, bessel_j_row, truncation_bound, BesselRow};
use crate::coefficients::{eval_coeff, CoeffTable};
use crate::error::Result;
use crate::scalar::{i_pow, int, lit, parity_sign, CompensatedSum, Real};

/// Truncated sum together with the order at which it was cut.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncated<V> {
    pub value: V,
    pub order: usize,
}

/// Both sides of an identity, evaluated independently.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SidePair<V> {
    pub lhs: V,
    pub rhs: V,
    pub order: usize,
}

/// Tolerance used to size brute-force truncations.
pub fn default_truncation_tol<T: Real>() -> T {
    T::epsilon() * lit(0.01)
}

/// Extra orders added past the Bessel truncation bound: `n^k` inflates the tail.
pub fn moment_margin(k: u32) -> usize {
    (2 * k as usize).max(8)
}

pub(crate) fn padded_row<T: Real>(y: T, k: u32, tol: T, extra: usize) -> Result<(BesselRow<T>, usize)> {
    let n = truncation_bound(y, tol) + moment_margin(k);
    Ok((bessel_j_row(n + extra, y)?, n))
}

/// `n^k` as a scalar, with `0^0 = 1`.
pub(crate) fn int_pow<T: Real>(n: i64, k: u32) -> T {
    int::<T>(n).powi(k as i32)
}

/// `B_{k,s}(M) = D_{k,s}(M)`, the closed form of `sum_n n^k J_n(M) J_{n-s}(M)`.
pub fn b_ks_closed<T: Real>(table: &CoeffTable, k: u32, s: i64, m: T) -> Result<T> {
    eval_coeff(table, k, s, m)
}

/// Truncated `sum_n n^k J_n(M) J_{n-s}(M)`.
pub fn b_ks_brute<T: Real>(k: u32, s: i64, m: T, tol: T) -> Result<Truncated<T>> {
    let extra = s.unsigned_abs() as usize;
    let (row, n_max) = padded_row(m, k, tol, extra)?;
    let reach = (n_max + extra) as i64;
    let mut acc = CompensatedSum::new();
    for n in -reach..=reach {
        let a = row.get_or_zero(n);
        let b = row.get_or_zero(n - s);
        if a == T::zero() || b == T::zero() {
            continue;
        }
        acc.add(int_pow::<T>(n, k) * a * b);
    }
    Ok(Truncated {
        value: acc.value(),
        order: reach as usize,
    })
}

/// Both sides of the generalised addition theorem
/// `sum_m C_{k,q-m}(y1) J_m(y1+y2) = sum_n (i n)^k J_n(y1) J_{q-n}(y2)`.
pub fn addition_formula_sides<T: Real>(
    table: &CoeffTable,
    k: u32,
    q: i64,
    y1: T,
    y2: T,
) -> Result<SidePair<Complex<T>>> {
    let phase = i_pow::<T>(k as i64);
    let mut lhs = CompensatedSum::new();
    for m in (q - k as i64)..=(q + k as i64) {
        let c = eval_coeff(table, k, q - m, y1)?;
        if c != T::zero() {
            lhs.add(c * bessel_j_int(m, y1 + y2)?);
        }
    }
    let tol = default_truncation_tol::<T>();
    let (row1, n1) = padded_row(y1, k, tol, 0)?;
    let (row2, n2) = padded_row(y2, 0, tol, q.unsigned_abs() as usize)?;
    let mut rhs = CompensatedSum::new();
    for n in -(n1 as i64)..=(n1 as i64) {
        let b = row2.get_or_zero(q - n);
        if b == T::zero() {
            continue;
        }
        rhs.add(int_pow::<T>(n, k) * row1.get_or_zero(n) * b);
    }
    Ok(SidePair {
        lhs: phase * lhs.value(),
        rhs: phase * rhs.value(),
        order: n1.max(n2),
    })
}

/// Both sides of
/// `sum_n (-1)^n n^k J_n(y) J_{n-q}(y) = ((-1)^q / i^k) sum_m C_{k,q-m}(y) J_m(2y)`.
pub fn alternating_sum_sides<T: Real>(
    table: &CoeffTable,
    k: u32,
    q: i64,
    y: T,
) -> Result<SidePair<Complex<T>>> {
    let tol = default_truncation_tol::<T>();
    let extra = q.unsigned_abs() as usize;
    let (row, n_max) = padded_row(y, k, tol, extra)?;
    let reach = (n_max + extra) as i64;
    let mut lhs = CompensatedSum::new();
    for n in -reach..=reach {
        let a = row.get_or_zero(n);
        let b = row.get_or_zero(n - q);
        if a == T::zero() || b == T::zero() {
            continue;
        }
        lhs.add(parity_sign::<T>(n) * int_pow::<T>(n, k) * a * b);
    }
    // C_{k,q-m}/i^k = D_{k,q-m}: the phase cancels exactly.
    let mut rhs = CompensatedSum::new();
    for m in (q - k as i64)..=(q + k as i64) {
        let c = eval_coeff(table, k, q - m, y)?;
        if c != T::zero() {
            rhs.add(c * bessel_j_int(m, y + y)?);
        }
    }
    let rhs = parity_sign::<T>(q) * rhs.value();
    Ok(SidePair {
        lhs: Complex::new(lhs.value(), T::zero()),
        rhs: Complex::new(rhs, T::zero()),
        order: reach as usize,
    })
}

/// `|q^k J_q(y) - sum_{|n| <= k} D_{k,n}(y) J_{q-n}(y)|`.
pub fn recursion_residual<T: Real>(table: &CoeffTable, k: u32, q: i64, y: T) -> Result<T> {
    if k == 0 {
        return Ok(T::zero());
    }
    let lhs = int_pow::<T>(q, k) * bessel_j_int(q, y)?;
    let mut rhs = CompensatedSum::new();
    for n in -(k as i64)..=k as i64 {
        let c = eval_coeff(table, k, n, y)?;
        if c != T::zero() {
            rhs.add(c * bessel_j_int(q - n, y)?);
        }
    }
    Ok((lhs - rhs.value()).abs())
}
