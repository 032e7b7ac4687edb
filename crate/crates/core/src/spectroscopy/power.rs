use num_complex::Complex;

use super::{Flagged, HarmonicDecomposition, OscillatorParams};
use crate::bessel::{bessel_j_row, truncation_bound};
use crate::error::{invalid, Error, Result};
use crate::scalar::{int, lit, ComplexSum, Real};
use crate::sum_rules::{default_truncation_tol, general_sidebands_resolved, GeneralModulation};

/// `f / (omega0^2 - omega^2 + i gamma omega)`.
pub fn steady_state_amplitude<T: Real>(p: &OscillatorParams<T>, omega: T) -> Complex<T> {
    let re = (p.omega0 - omega) * (p.omega0 + omega);
    Complex::new(p.force, T::zero()) / Complex::new(re, p.gamma * omega)
}

/// Optical-period average of the absorbed power for an unmodulated drive,
/// `(f^2/2) omega^2 gamma / ((omega^2 - omega0^2)^2 + omega^2 gamma^2)`.
pub fn average_power_unmodulated<T: Real>(p: &OscillatorParams<T>, omega: T) -> T {
    let split = (omega - p.omega0) * (omega + p.omega0);
    let w2 = omega * omega;
    let den = split * split + w2 * p.gamma * p.gamma;
    if den == T::zero() {
        return T::zero();
    }
    p.force * p.force * lit(0.5) * w2 * p.gamma / den
}

/// `S_s = sum_n omega_n G_n conj(G_{n-s}) / (omega0^2 - omega_n^2 + i gamma omega_n)`
/// assembled into real harmonic amplitudes of `-(f^2/2) Im sum_s S_s e^{i s Omega t}`.
fn assemble<T: Real, G: Fn(i64) -> Complex<T>>(
    p: &OscillatorParams<T>,
    amp: G,
    reach: i64,
    s_max: usize,
) -> Result<HarmonicDecomposition<T>> {
    let mut weights = Vec::with_capacity((2 * reach + 1) as usize);
    for n in -reach..=reach {
        let w = p.sideband(n);
        if !(w > T::zero()) {
            return Err(Error::InvalidRegime(format!(
                "sideband frequency omega_{n} = {w} is not positive; need omega0 + delta > {reach} Omega"
            )));
        }
        let detune = p.delta + int::<T>(n) * p.omega_mod;
        let den = Complex::new(-detune * (p.omega0 + w), p.gamma * w);
        weights.push(Complex::new(w, T::zero()) / den);
    }
    let s_sum = |s: i64| -> Complex<T> {
        let mut acc = ComplexSum::new();
        for n in -reach..=reach {
            let g = amp(n);
            if g.re == T::zero() && g.im == T::zero() {
                continue;
            }
            let h = amp(n - s);
            if h.re == T::zero() && h.im == T::zero() {
                continue;
            }
            acc.add(weights[(n + reach) as usize] * g * h.conj());
        }
        acc.value()
    };
    let scale = -p.force * p.force * lit(0.5);
    let dc = scale * s_sum(0).im;
    let mut cos_amps = Vec::with_capacity(s_max);
    let mut sin_amps = Vec::with_capacity(s_max);
    for h in 1..=s_max as i64 {
        let up = s_sum(h);
        let down = s_sum(-h);
        cos_amps.push(scale * (up.im + down.im));
        sin_amps.push(scale * (up.re - down.re));
    }
    Ok(HarmonicDecomposition {
        dc,
        cos_amps,
        sin_amps,
    })
}

/// Harmonics `0..=s_max` of the absorbed power for `phi(t) = M sin(Omega t)`,
/// summed over sidebands with the full resonance factor.
pub fn modulated_power_exact<T: Real>(p: &OscillatorParams<T>, s_max: usize) -> Result<HarmonicDecomposition<T>> {
    let reach = truncation_bound(p.m, default_truncation_tol::<T>());
    let row = bessel_j_row(reach, p.m)?;
    let amp = |n: i64| Complex::new(row.get_or_zero(n), T::zero());
    assemble(p, amp, reach as i64, s_max)
}

/// As [`modulated_power_exact`] for an arbitrary periodic phase; the
/// modulation fundamental must equal `p.omega_mod` (`p.m` is ignored).
pub fn general_modulation_power_exact<T: Real>(
    p: &OscillatorParams<T>,
    modulation: &GeneralModulation<T>,
    s_max: usize,
) -> Result<HarmonicDecomposition<T>> {
    check_fundamental(p, modulation)?;
    let spec = general_sidebands_resolved(modulation)?;
    let amp = |n: i64| spec.get(n).unwrap_or_else(|| Complex::new(T::zero(), T::zero()));
    assemble(p, amp, spec.n_max as i64, s_max)
}

pub(crate) fn check_fundamental<T: Real>(p: &OscillatorParams<T>, modulation: &GeneralModulation<T>) -> Result<()> {
    let w = modulation.fundamental();
    if (w - p.omega_mod).abs() > lit::<T>(1e-12) * p.omega_mod {
        return Err(invalid(format!(
            "modulation fundamental {w} differs from Omega = {}",
            p.omega_mod
        )));
    }
    Ok(())
}

/// Second-order closed form in `2 M Omega / gamma`:
/// dc `1/(1+D^2)`, first harmonic `A (-2D/(1+D^2)^2) cos + (A^2/M) D(D^2-3)/(1+D^2)^3 sin`,
/// plus `(A^2/2) (3D^2-1)/(1+D^2)^3 (1 + cos 2 Omega t)`, all times `f^2/(2 gamma)`.
pub fn modulated_power_perturbative<T: Real>(p: &OscillatorParams<T>) -> Flagged<HarmonicDecomposition<T>> {
    let d = p.big_delta();
    let eta = p.eta();
    let a = lit::<T>(2.0) * p.m * eta;
    let l = T::one() + d * d;
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let second = a * a * lit(0.5) * (three * d * d - T::one()) / (l * l * l);
    // A^2 / M written without the division so that M = 0 stays finite.
    let a2_over_m = lit::<T>(4.0) * p.m * eta * eta;
    let h1_cos = a * (-two * d / (l * l));
    let h1_sin = a2_over_m * d * (d * d - three) / (l * l * l);
    let shape = HarmonicDecomposition {
        dc: T::one() / l + second,
        cos_amps: vec![h1_cos, second],
        sin_amps: vec![h1_sin, T::zero()],
    };
    Flagged {
        value: shape.scaled(p.power_scale()),
        valid: p.perturbative_valid(),
    }
}

/// Leading-order instantaneous absorbed power for an arbitrary modulation,
/// `(f^2/2)(1/gamma)[1/(1+D^2) + (2/gamma)(-2D/(1+D^2)^2) dphi/dt]`.
pub fn general_modulation_power<T: Real>(p: &OscillatorParams<T>, modulation: &GeneralModulation<T>, t: T) -> T {
    let d = p.big_delta();
    let l = T::one() + d * d;
    let two = lit::<T>(2.0);
    let rate = modulation.phase_rate(t);
    p.power_scale() * (T::one() / l + (two / p.gamma) * (-two * d / (l * l)) * rate)
}
