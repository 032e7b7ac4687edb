//! Direct time integration of the modulated oscillator.
//!
//! The complex drive `f exp(i(omega t + phi(t)))` is integrated in a frame
//! rotating at the carrier `omega`, split into the two normal modes
//! `r = -gamma/2 +- i omega1`. Each mode obeys `b' = L b + f exp(i phi(t))` and
//! is advanced with an exponential integrator: the linear part is propagated
//! exactly and the forcing is replaced by its cubic interpolant on four
//! equally spaced nodes per step. The absorbed power is averaged over the
//! optical period analytically: only the slow part
//! `(1/2) Re(f exp(i phi) conj(z'_slow))` survives, the `2 omega` part drops.

use num_complex::Complex;

use super::power::check_fundamental;
use super::{HarmonicDecomposition, OscillatorParams};
use crate::error::{invalid, Error, Result};
use crate::scalar::{int, lit, CompensatedSum, Real};
use crate::sum_rules::GeneralModulation;

/// Step-doubling tolerance, in units of `f^2/(2 gamma)`.
pub const ODE_SELF_CONSISTENCY: f64 = 1e-9;

/// Settling time before the measurement window, in units of `1/gamma`.
const SETTLE_WIDTHS: f64 = 50.0;

/// `phi_0 .. phi_4` at `z`, with `phi_{j+1}(z) = (phi_j(z) - 1/j!)/z`.
fn phi_functions<T: Real>(z: Complex<T>) -> [Complex<T>; 5] {
    let mut out = [Complex::new(T::zero(), T::zero()); 5];
    if z.norm() < lit(2.0) {
        const TERMS: usize = 40;
        let mut inv_fact = [T::one(); TERMS + 6];
        for i in 1..inv_fact.len() {
            inv_fact[i] = inv_fact[i - 1] / int::<T>(i as i64);
        }
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for m in (0..=TERMS).rev() {
                acc = acc * z + inv_fact[m + j];
            }
            *slot = acc;
        }
    } else {
        out[0] = z.exp();
        let mut inv_fact = T::one();
        for j in 0..4 {
            if j > 0 {
                inv_fact /= int::<T>(j as i64);
            }
            out[j + 1] = (out[j] - inv_fact) / z;
        }
    }
    out
}

/// Exact propagator and forcing weights of one mode for step `h`.
struct ModeStep<T> {
    decay: Complex<T>,
    weights: [Complex<T>; 4],
}

impl<T: Real> ModeStep<T> {
    fn new(rate: Complex<T>, h: T) -> Self {
        let phi = phi_functions(rate * h);
        // Forcing as a cubic in v = 3u on v = 0,1,2,3; a u^j coefficient is
        // c_j 3^j and integrates against h j! phi_{j+1}.
        let mut weights = [Complex::new(T::zero(), T::zero()); 4];
        let mut scale = h;
        for j in 0..4 {
            if j > 0 {
                scale *= int::<T>(3 * j as i64);
            }
            weights[j] = phi[j + 1] * scale;
        }
        Self {
            decay: phi[0],
            weights,
        }
    }

    fn advance(&self, b: Complex<T>, c: &[Complex<T>; 4]) -> Complex<T> {
        let mut next = self.decay * b;
        for j in 0..4 {
            next += self.weights[j] * c[j];
        }
        next
    }
}

fn run<T: Real>(
    p: &OscillatorParams<T>,
    modulation: &GeneralModulation<T>,
    periods: usize,
    spp: usize,
    harmonics: usize,
) -> Result<HarmonicDecomposition<T>> {
    let half_gamma = p.gamma * lit(0.5);
    if !(p.omega0 > half_gamma) {
        return Err(Error::InvalidRegime(format!(
            "time integration needs an underdamped oscillator, omega0 = {} <= gamma/2",
            p.omega0
        )));
    }
    let omega1 = ((p.omega0 - half_gamma) * (p.omega0 + half_gamma)).sqrt();
    let carrier = p.carrier();
    // omega1 - omega without cancellation
    let slow_freq = -(half_gamma * half_gamma) / (omega1 + p.omega0) - p.delta;
    let rate_plus = Complex::new(-half_gamma, slow_freq);
    let rate_minus = Complex::new(-half_gamma, -(omega1 + carrier));
    let kappa_plus = Complex::new(lit(0.5), p.gamma / (lit::<T>(4.0) * omega1));
    let kappa_minus = kappa_plus.conj();

    let period = T::TAU() / p.omega_mod;
    let h = period / int::<T>(spp as i64);
    let plus = ModeStep::new(rate_plus, h);
    let minus = ModeStep::new(rate_minus, h);

    let settle = (lit::<T>(SETTLE_WIDTHS) / p.gamma / period).ceil().to_usize().unwrap_or(1).max(1);
    let total = (settle + periods) * spp;
    let window = periods * spp;
    let spp_t = int::<T>(spp as i64);
    let forcing = |k: usize, node: usize| -> Complex<T> {
        let pos = int::<T>((k % spp) as i64) + int::<T>(node as i64) / lit(3.0);
        let theta = T::TAU() * pos / spp_t;
        Complex::from_polar(p.force, modulation.phase_at_angle(theta))
    };

    let mut b_plus = Complex::new(T::zero(), T::zero());
    let mut b_minus = Complex::new(T::zero(), T::zero());
    let mut samples = Vec::with_capacity(window);
    let mut g0 = forcing(0, 0);
    for k in 0..total {
        if k >= settle * spp {
            let v = kappa_plus * b_plus + kappa_minus * b_minus;
            samples.push((g0 * v.conj()).re * lit(0.5));
        }
        let g1 = forcing(k, 1);
        let g2 = forcing(k, 2);
        let g3 = forcing(k + 1, 0);
        let d1 = g1 - g0;
        let (two, three, half) = (lit::<T>(2.0), lit::<T>(3.0), lit::<T>(0.5));
        let d2 = g2 - g1 * two + g0;
        let d3 = g3 - g2 * three + g1 * three - g0;
        let c = [g0, d1 - d2 * half + d3 / three, (d2 - d3) * half, d3 / lit::<T>(6.0)];
        b_plus = plus.advance(b_plus, &c);
        b_minus = minus.advance(b_minus, &c);
        g0 = g3;
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::OracleFailure("time integration produced non-finite power".into()));
    }

    let n = int::<T>(window as i64);
    let mut dc = CompensatedSum::new();
    for v in &samples {
        dc.add(*v);
    }
    let mut cos_amps = Vec::with_capacity(harmonics);
    let mut sin_amps = Vec::with_capacity(harmonics);
    for hm in 1..=harmonics {
        let mut cs = CompensatedSum::new();
        let mut sn = CompensatedSum::new();
        for (j, v) in samples.iter().enumerate() {
            let theta = T::TAU() * int::<T>(((hm * j) % spp) as i64) / spp_t;
            cs.add(*v * theta.cos());
            sn.add(*v * theta.sin());
        }
        cos_amps.push(cs.value() * lit(2.0) / n);
        sin_amps.push(sn.value() * lit(2.0) / n);
    }
    Ok(HarmonicDecomposition {
        dc: dc.value() / n,
        cos_amps,
        sin_amps,
    })
}

/// Harmonics of the optical-period-averaged absorbed power obtained by
/// integrating the equation of motion. The measurement window of
/// `periods` modulation periods starts after at least `50/gamma` of settling.
/// The run is repeated at twice the sampling density; disagreement beyond
/// [`ODE_SELF_CONSISTENCY`] is an oracle failure, otherwise the finer result
/// is returned.
pub fn time_domain_oracle<T: Real>(
    p: &OscillatorParams<T>,
    modulation: &GeneralModulation<T>,
    periods: usize,
    samples_per_period: usize,
    harmonics: usize,
) -> Result<HarmonicDecomposition<T>> {
    check_fundamental(p, modulation)?;
    if periods == 0 || samples_per_period < 8 {
        return Err(invalid(format!(
            "need periods >= 1 and samples_per_period >= 8, got {periods} and {samples_per_period}"
        )));
    }
    if 2 * harmonics >= samples_per_period {
        return Err(invalid(format!(
            "{harmonics} harmonics are not resolved by {samples_per_period} samples per period"
        )));
    }
    let coarse = run(p, modulation, periods, samples_per_period, harmonics)?;
    let fine = run(p, modulation, periods, 2 * samples_per_period, harmonics)?;
    let gap = coarse.max_difference(&fine, harmonics);
    let allowed = lit::<T>(ODE_SELF_CONSISTENCY) * p.power_scale().abs();
    if !(gap <= allowed) {
        return Err(Error::OracleFailure(format!(
            "step doubling changed the harmonics by {gap}, above {allowed}; increase samples_per_period"
        )));
    }
    Ok(fine)
}
