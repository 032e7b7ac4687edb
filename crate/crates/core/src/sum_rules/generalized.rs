//! Two-argument generalised Bessel functions and their first-moment rules.

use num_complex::Complex;

use super::{default_truncation_tol, SidePair, Truncated};
use crate::bessel::{bessel_j_row, truncation_bound, BesselRow};
use crate::error::Result;
use crate::scalar::{i_pow, int, lit, ComplexSum, CompensatedSum, Real};

fn row_and_bound<T: Real>(y: T, tol: T) -> Result<(BesselRow<T>, i64)> {
    let n = truncation_bound(y, tol);
    Ok((bessel_j_row(n, y)?, n as i64))
}

fn jcs_from_rows<T: Real>(n: i64, rx: &BesselRow<T>, nx: i64, ry: &BesselRow<T>, ny: i64) -> Complex<T> {
    let lo = (-nx).max(n - ny);
    let hi = nx.min(n + ny);
    let mut acc = ComplexSum::new();
    for q in lo..=hi {
        let a = rx.get_or_zero(q);
        let b = ry.get_or_zero(n - q);
        if a != T::zero() && b != T::zero() {
            acc.add(i_pow::<T>(q) * (a * b));
        }
    }
    acc.value()
}

/// `J^cs_n(x, y) = sum_q i^q J_q(x) J_{n-q}(y)`, the sideband amplitudes of
/// `exp(i (x cos t + y sin t))`.
pub fn jcs<T: Real>(n: i64, x: T, y: T) -> Result<Truncated<Complex<T>>> {
    let tol = default_truncation_tol::<T>();
    let (rx, nx) = row_and_bound(x, tol)?;
    let (ry, ny) = row_and_bound(y, tol)?;
    Ok(Truncated {
        value: jcs_from_rows(n, &rx, nx, &ry, ny),
        order: (nx + ny) as usize,
    })
}

/// Every `J^cs_n` with `|n| <= order`; index `n + order`.
pub fn jcs_spectrum<T: Real>(x: T, y: T) -> Result<Truncated<Vec<Complex<T>>>> {
    let tol = default_truncation_tol::<T>();
    let (rx, nx) = row_and_bound(x, tol)?;
    let (ry, ny) = row_and_bound(y, tol)?;
    let order = nx + ny;
    let value = (-order..=order)
        .map(|n| jcs_from_rows(n, &rx, nx, &ry, ny))
        .collect();
    Ok(Truncated {
        value,
        order: order as usize,
    })
}

/// `2 sum_n n J^cs_n conj(J^cs_{n-q})` against `(y + ix) d_{q,1} + (y - ix) d_{q,-1}`.
pub fn jcs_sum_rule_sides<T: Real>(q: i64, x: T, y: T) -> Result<SidePair<Complex<T>>> {
    let spec = jcs_spectrum(x, y)?;
    let order = spec.order as i64;
    let at = |n: i64| -> Complex<T> {
        if n.abs() > order {
            Complex::new(T::zero(), T::zero())
        } else {
            spec.value[(n + order) as usize]
        }
    };
    let mut acc = ComplexSum::new();
    for n in -order..=order {
        acc.add(at(n) * at(n - q).conj() * int::<T>(n));
    }
    let rhs = match q {
        1 => Complex::new(y, x),
        -1 => Complex::new(y, -x),
        _ => Complex::new(T::zero(), T::zero()),
    };
    Ok(SidePair {
        lhs: acc.value() * lit::<T>(2.0),
        rhs,
        order: spec.order,
    })
}

fn jbar_from_rows<T: Real>(n: i64, r1: &BesselRow<T>, n1: i64, r2: &BesselRow<T>, n2: i64) -> T {
    // need |q| <= n2 and |n - 2q| <= n1
    let lo = (-n2).max((n - n1 + 1).div_euclid(2));
    let hi = n2.min((n + n1).div_euclid(2));
    let mut acc = CompensatedSum::new();
    for q in lo..=hi {
        let a = r2.get_or_zero(q);
        let b = r1.get_or_zero(n - 2 * q);
        if a != T::zero() && b != T::zero() {
            acc.add(a * b);
        }
    }
    acc.value()
}

/// `Jbar_n(y1, y2) = sum_q J_q(y2) J_{n-2q}(y1)`, the sideband amplitudes of
/// `exp(i (y1 sin t + y2 sin 2t))`.
pub fn jbar<T: Real>(n: i64, y1: T, y2: T) -> Result<Truncated<T>> {
    let tol = default_truncation_tol::<T>();
    let (r1, n1) = row_and_bound(y1, tol)?;
    let (r2, n2) = row_and_bound(y2, tol)?;
    Ok(Truncated {
        value: jbar_from_rows(n, &r1, n1, &r2, n2),
        order: (n1 + 2 * n2) as usize,
    })
}

/// Every `Jbar_n` with `|n| <= order`; index `n + order`.
pub fn jbar_spectrum<T: Real>(y1: T, y2: T) -> Result<Truncated<Vec<T>>> {
    let tol = default_truncation_tol::<T>();
    let (r1, n1) = row_and_bound(y1, tol)?;
    let (r2, n2) = row_and_bound(y2, tol)?;
    let order = n1 + 2 * n2;
    let value = (-order..=order)
        .map(|n| jbar_from_rows(n, &r1, n1, &r2, n2))
        .collect();
    Ok(Truncated {
        value,
        order: order as usize,
    })
}

/// `sum_n n Jbar_n Jbar_{n-s}` against `(y1/2)(d_{s,1} + d_{s,-1}) + y2 (d_{s,2} + d_{s,-2})`.
pub fn jbar_sum_rule_sides<T: Real>(s: i64, y1: T, y2: T) -> Result<SidePair<T>> {
    let spec = jbar_spectrum(y1, y2)?;
    let order = spec.order as i64;
    let at = |n: i64| -> T {
        if n.abs() > order {
            T::zero()
        } else {
            spec.value[(n + order) as usize]
        }
    };
    let mut acc = CompensatedSum::new();
    for n in -order..=order {
        acc.add(int::<T>(n) * at(n) * at(n - s));
    }
    let rhs = match s.abs() {
        1 => y1 * lit(0.5),
        2 => y2,
        _ => T::zero(),
    };
    Ok(SidePair {
        lhs: acc.value(),
        rhs,
        order: spec.order,
    })
}
