//! Bessel functions of the first kind.
//!
//! Integer orders are evaluated with the ascending series when the argument is
//! small compared to the order and with Miller's downward recursion otherwise;
//! the recursion is normalised by `J_0 + 2 sum_m J_{2m} = 1`. Complex orders
//! with a real argument use the ascending series with a complex log-Gamma
//! prefactor.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::quadrature::CompositeGauss;
use crate::scalar::{int, lit, parity_sign, Real};

/// Largest argument magnitude accepted by the integer-order kernels.
pub const MAX_ARGUMENT: f64 = 1e6;

/// Lanczos approximation, g = 7 with nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Hard cap on the complex-order series length.
pub const COMPLEX_ORDER_MAX_TERMS: usize = 500;
/// Relative size of the last term at which the complex-order series stops.
const COMPLEX_ORDER_CUTOFF: f64 = 1e-18;
/// Largest `|Im nu|` accepted by [`bessel_j_complex_order`].
pub const MAX_IMAG_ORDER: f64 = 50.0;

/// Values `J_0(y) ..= J_{order_max}(y)` for one argument.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselRow<T> {
    pub order_max: usize,
    pub argument: T,
    pub values: Vec<T>,
}

impl<T: Real> BesselRow<T> {
    /// `J_n(y)` for any integer `n` inside the stored range, using
    /// `J_{-n} = (-1)^n J_n` for negative orders.
    pub fn get(&self, n: i64) -> Option<T> {
        let idx = n.unsigned_abs() as usize;
        let v = *self.values.get(idx)?;
        Some(if n < 0 { parity_sign::<T>(n) * v } else { v })
    }

    /// Like [`BesselRow::get`] but treats orders past `order_max` as zero.
    /// Callers size the row with [`truncation_bound`] so the dropped tail is
    /// below their tolerance.
    pub fn get_or_zero(&self, n: i64) -> T {
        self.get(n).unwrap_or_else(T::zero)
    }
}

fn check_argument<T: Real>(y: T) -> Result<()> {
    if !y.is_finite() {
        return Err(invalid(format!("Bessel argument must be finite, got {y}")));
    }
    if y.abs() > lit(MAX_ARGUMENT) {
        return Err(invalid(format!(
            "Bessel argument |{y}| exceeds {MAX_ARGUMENT:e}"
        )));
    }
    Ok(())
}

/// `J_n(y)` for integer order `n` and real argument `y`.
pub fn bessel_j_int<T: Real>(n: i64, y: T) -> Result<T> {
    check_argument(y)?;
    let mut sign = T::one();
    if n < 0 {
        sign *= parity_sign::<T>(n);
    }
    let order = n.unsigned_abs();
    let mut x = y;
    if x < T::zero() {
        x = -x;
        sign *= parity_sign::<T>(order as i64);
    }
    if x == T::zero() {
        return Ok(if order == 0 { sign } else { T::zero() });
    }
    let value = if use_series(order, x) {
        series_single(order, x)?
    } else {
        miller_single(order, x)
    };
    Ok(sign * value)
}

/// Ascending series is free of cancellation once `y^2 <= n + 1`.
fn use_series<T: Real>(order: u64, x: T) -> bool {
    x * x <= T::from_u64(order).unwrap_or_else(T::max_value) + T::one()
}

fn series_single<T: Real>(order: u64, x: T) -> Result<T> {
    let half = x * lit(0.5);
    // (x/2)^n / n!, built incrementally so it underflows gracefully.
    let mut prefactor = T::one();
    for j in 1..=order {
        prefactor = prefactor * half / T::from_u64(j).unwrap();
        if prefactor == T::zero() {
            return Ok(T::zero());
        }
    }
    Ok(prefactor * series_tail(order, x)?)
}

/// `sum_k (-x^2/4)^k n! / (k! (n+k)!)`.
fn series_tail<T: Real>(order: u64, x: T) -> Result<T> {
    let q = -(x * x) * lit(0.25);
    let n = T::from_u64(order).unwrap();
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..=COMPLEX_ORDER_MAX_TERMS {
        let kf = int::<T>(k as i64);
        term = term * q / (kf * (n + kf));
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() * lit(0.5) {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        terms: COMPLEX_ORDER_MAX_TERMS,
        context: format!("integer-order series n={order}, y={x}"),
    })
}

/// Even starting order for the downward recursion.
fn miller_start(order: usize, x: f64) -> usize {
    let top = (order as f64).max(x);
    let start = top + 20.0 + (40.0 * top).sqrt();
    let s = start.ceil() as usize;
    s + (s & 1)
}

fn rescale_threshold<T: Real>() -> T {
    T::max_value().sqrt()
}

fn miller_single<T: Real>(order: u64, x: T) -> T {
    let xf = x.to_f64().unwrap();
    let start = miller_start(order as usize, xf);
    let big = rescale_threshold::<T>();
    let tiny = big.recip();
    let two_over_x = lit::<T>(2.0) / x;

    let mut next = T::zero(); // J_{k+1}
    let mut cur = tiny; // J_k
    let mut norm = T::zero();
    let mut picked = if start as u64 == order { cur } else { T::zero() };
    if start.is_multiple_of(2) {
        norm += lit::<T>(2.0) * cur;
    }
    for k in (1..=start).rev() {
        let prev = int::<T>(k as i64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx as u64 == order {
            picked = cur;
        }
        if idx % 2 == 0 {
            norm += if idx == 0 { cur } else { lit::<T>(2.0) * cur };
        }
        if cur.abs() > big {
            cur *= tiny;
            next *= tiny;
            norm *= tiny;
            picked *= tiny;
        }
    }
    picked / norm
}

/// All orders `0..=order_max` at argument `y`.
pub fn bessel_j_row<T: Real>(order_max: usize, y: T) -> Result<BesselRow<T>> {
    check_argument(y)?;
    let x = y.abs();
    let mut values = vec![T::zero(); order_max + 1];
    if x == T::zero() {
        values[0] = T::one();
    } else if x <= T::one() {
        series_row(x, &mut values)?;
    } else {
        miller_row(x, &mut values);
    }
    if y < T::zero() {
        for (n, v) in values.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(BesselRow {
        order_max,
        argument: y,
        values,
    })
}

fn series_row<T: Real>(x: T, values: &mut [T]) -> Result<()> {
    let half = x * lit(0.5);
    let mut prefactor = T::one();
    for (n, slot) in values.iter_mut().enumerate() {
        if n > 0 {
            prefactor = prefactor * half / int::<T>(n as i64);
        }
        if prefactor == T::zero() {
            break;
        }
        *slot = prefactor * series_tail(n as u64, x)?;
    }
    Ok(())
}

fn miller_row<T: Real>(x: T, values: &mut [T]) {
    let order_max = values.len() - 1;
    let start = miller_start(order_max, x.to_f64().unwrap());
    let big = rescale_threshold::<T>();
    let tiny = big.recip();
    let two_over_x = lit::<T>(2.0) / x;

    let mut next = T::zero();
    let mut cur = tiny;
    let mut norm = if start.is_multiple_of(2) {
        lit::<T>(2.0) * cur
    } else {
        T::zero()
    };
    if start <= order_max {
        values[start] = cur;
    }
    for k in (1..=start).rev() {
        let prev = int::<T>(k as i64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx <= order_max {
            values[idx] = cur;
        }
        if idx % 2 == 0 {
            norm += if idx == 0 { cur } else { lit::<T>(2.0) * cur };
        }
        if cur.abs() > big {
            cur *= tiny;
            next *= tiny;
            norm *= tiny;
            if idx <= order_max {
                let upper = order_max.min(start);
                for v in values[idx..=upper].iter_mut() {
                    *v *= tiny;
                }
            }
        }
    }
    for v in values.iter_mut() {
        *v /= norm;
    }
}

/// Order `N` past which `|J_n(y)| < tol` for every `|n| >= N`.
///
/// Starts from `ceil(|y| + 4 |y|^(1/3) + max(10, ceil(-log10 tol)))` and, when
/// that estimate is too small, scans upward through a recursion row. Beyond
/// `n >= |y|` the magnitude is monotone in `n`, so the first order in that
/// region under `tol` is a valid bound.
pub fn truncation_bound<T: Real>(y: T, tol: T) -> usize {
    let x = y.abs().to_f64().unwrap_or(0.0);
    let tol = tol.to_f64().unwrap_or(1e-15);
    assert!(
        tol > 0.0 && tol < 1.0,
        "truncation tolerance must lie in (0, 1), got {tol}"
    );
    let digits = (-tol.log10()).ceil().max(10.0);
    let estimate = (x + 4.0 * x.cbrt() + digits).ceil() as usize;
    if x == 0.0 {
        return estimate.max(1);
    }
    let monotone_from = x.ceil() as usize;
    let mut hi = estimate.max(monotone_from) + 16;
    loop {
        let row = match bessel_j_row(hi, x) {
            Ok(r) => r,
            Err(_) => return estimate,
        };
        if let Some(n) =
            (monotone_from..=hi).find(|&n| row.values[n].abs() < tol)
        {
            return estimate.max(n);
        }
        hi *= 2;
    }
}

/// `(1/pi) * integral_0^pi cos(n t - y sin t) dt`, by composite
/// Gauss-Legendre quadrature. Independent of the recursion kernels.
pub fn bessel_j_quadrature_oracle(n: i64, y: f64) -> Result<f64> {
    if n.abs() > 200 || !(y.abs() <= 100.0) {
        return Err(invalid(format!(
            "quadrature oracle needs |n| <= 200 and |y| <= 100, got n={n}, y={y}"
        )));
    }
    let nf = n as f64;
    let panels = ((nf.abs() + y.abs()) / 2.0).ceil().max(2.0) as usize;
    let q = CompositeGauss::default();
    let v = q.integrate(
        |t| (nf * t - y * t.sin()).cos(),
        0.0,
        std::f64::consts::PI,
        panels,
        1e-15,
    )?;
    Ok(v / std::f64::consts::PI)
}

/// Principal log-Gamma for complex `z` (Lanczos, with reflection for
/// `Re z < 1/2`).
pub fn ln_gamma_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(invalid(format!("log-gamma argument must be finite, got {z}")));
    }
    if z.im == T::zero() && z.re <= T::zero() && z.re.fract() == T::zero() {
        return Err(Error::Pole(z.re.to_f64().unwrap_or(f64::NAN)));
    }
    let half = lit::<T>(0.5);
    if z.re < half {
        let pi = T::PI();
        let one = Complex::new(T::one(), T::zero());
        let reflected = ln_gamma_complex(one - z)?;
        let s = (z * pi).sin();
        return Ok(Complex::new(pi.ln(), T::zero()) - s.ln() - reflected);
    }
    let zm = z - T::one();
    let mut acc = Complex::new(lit::<T>(LANCZOS_COEFFS[0]), T::zero());
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += Complex::new(lit::<T>(c), T::zero()) / (zm + int::<T>(i as i64));
    }
    let t = zm + lit::<T>(LANCZOS_G) + half;
    let ln_sqrt_two_pi = lit::<T>(0.918_938_533_204_672_8);
    Ok(Complex::new(ln_sqrt_two_pi, T::zero()) + (zm + half) * t.ln() - t + acc.ln())
}

/// `J_nu(z)` for complex order and real `z >= 0`.
pub fn bessel_j_complex_order<T: Real>(nu: Complex<T>, z: T) -> Result<Complex<T>> {
    if !(z >= T::zero()) || !z.is_finite() {
        return Err(invalid(format!(
            "complex-order Bessel needs finite z >= 0, got {z}"
        )));
    }
    if nu.im.abs() > lit(MAX_IMAG_ORDER) {
        return Err(invalid(format!(
            "|Im nu| = {} exceeds {MAX_IMAG_ORDER}",
            nu.im.abs()
        )));
    }
    if nu.im == T::zero() && nu.re.fract() == T::zero() && nu.re < T::zero() {
        let n = nu.re.to_i64().unwrap();
        return Ok(Complex::new(bessel_j_int(n, z)?, T::zero()));
    }
    if z == T::zero() {
        if nu.re == T::zero() && nu.im == T::zero() {
            return Ok(Complex::new(T::one(), T::zero()));
        }
        if nu.re > T::zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        return Err(invalid(format!("J_nu(0) is undefined for nu = {nu}")));
    }
    let prefactor = (nu * (z * lit(0.5)).ln()).exp();
    Ok(prefactor * complex_order_reduced(nu, z)?)
}

/// `J_nu(z) / (z/2)^nu = sum_k (-z^2/4)^k / (k! Gamma(nu+k+1))`.
///
/// Entire in `nu`; products such as `J_{s-ia}(z) J_{ia}(z)` are assembled from
/// this so the oscillating phases `(z/2)^{+-ia}` cancel analytically.
pub fn complex_order_reduced<T: Real>(nu: Complex<T>, z: T) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let shifted = nu + one;
    let is_pole = shifted.im == T::zero()
        && shifted.re <= T::zero()
        && shifted.re.fract() == T::zero();
    // At a pole of Gamma(nu+1) the leading terms vanish; start the series at
    // the first index where nu+k+1 is a positive integer.
    let q = -(z * z) * lit(0.25);
    let (first_k, mut term) = if is_pole {
        // nu = -m: the first surviving term is q^m / m!.
        let m = (-shifted.re).to_usize().unwrap() + 1;
        let mut t = Complex::new(T::one(), T::zero());
        for k in 1..=m {
            t = t * q / int::<T>(k as i64);
        }
        (m, t)
    } else {
        (0, (-ln_gamma_complex(shifted)?).exp())
    };
    let mut sum = term;
    let mut small_run = 0;
    let cutoff = lit::<T>(COMPLEX_ORDER_CUTOFF);
    for k in (first_k + 1)..=(first_k + COMPLEX_ORDER_MAX_TERMS) {
        let kf = int::<T>(k as i64);
        term = term * q / ((nu + kf) * kf);
        sum += term;
        if term.norm() < cutoff * sum.norm() || term.norm() == T::zero() {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence {
        terms: COMPLEX_ORDER_MAX_TERMS,
        context: format!("complex-order series nu={nu}, z={z}"),
    })
}
