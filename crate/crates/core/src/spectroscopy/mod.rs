//! Absorption of a phase-modulated drive by a damped harmonic oscillator.
//!
//! The oscillator `z'' + gamma z' + omega0^2 z = f cos(omega t + phi(t))`
//! absorbs power whose optical-period average is periodic in the modulation
//! period. This module evaluates that average exactly (sideband sums), in
//! closed perturbative form, and by direct time integration, together with
//! the family of sums `A_s = sum_n J_n J_{n-s} / (gamma + i n Omega)`.

mod a_sum;
mod ode;
mod power;

pub use a_sum::{
    a_s_direct, a_s_geometric, a_s_newberger, a_s_series, eta_expansion, EtaTerm, SeriesSum,
    MAX_SERIES_TERMS, NEWBERGER_GUARD,
};
pub use ode::{time_domain_oracle, ODE_SELF_CONSISTENCY};
pub use power::{
    average_power_unmodulated, general_modulation_power, general_modulation_power_exact,
    modulated_power_exact, modulated_power_perturbative, steady_state_amplitude,
};

use num_complex::Complex;
use serde::Serialize;

use crate::bessel::truncation_bound;
use crate::error::{invalid, Result};
use crate::scalar::{lit, Real};

/// Tolerance defining the sideband cutoff `N_MAX` used by the validity flag.
pub const N_MAX_TOLERANCE: f64 = 1e-6;

/// Physical parameters of the driven oscillator and its modulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OscillatorParams<T> {
    pub omega0: T,
    pub gamma: T,
    pub force: T,
    pub delta: T,
    pub omega_mod: T,
    pub m: T,
}

impl<T: Real> OscillatorParams<T> {
    pub fn new(omega0: T, gamma: T, force: T, delta: T, omega_mod: T, m: T) -> Result<Self> {
        let all = [omega0, gamma, force, delta, omega_mod, m];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("oscillator parameters must be finite"));
        }
        if !(omega0 > T::zero()) || !(gamma > T::zero()) || !(omega_mod > T::zero()) {
            return Err(invalid(format!(
                "need omega0 > 0, gamma > 0, Omega > 0; got omega0={omega0}, gamma={gamma}, Omega={omega_mod}"
            )));
        }
        if m < T::zero() {
            return Err(invalid(format!("modulation index must be >= 0, got {m}")));
        }
        Ok(Self {
            omega0,
            gamma,
            force,
            delta,
            omega_mod,
            m,
        })
    }

    /// Parameters in units of `gamma`: `gamma = 1`, `delta = Delta/2`,
    /// `Omega = eta`.
    pub fn normalized(omega0_over_gamma: T, big_delta: T, eta: T, m: T, force: T) -> Result<Self> {
        Self::new(omega0_over_gamma, T::one(), force, big_delta * lit(0.5), eta, m)
    }

    /// Carrier frequency `omega0 + delta`.
    pub fn carrier(&self) -> T {
        self.omega0 + self.delta
    }

    /// Sideband frequency `omega_n = omega0 + delta + n Omega`.
    pub fn sideband(&self, n: i64) -> T {
        self.carrier() + T::from_i64(n).unwrap() * self.omega_mod
    }

    /// Normalised detuning `Delta = 2 delta / gamma`.
    pub fn big_delta(&self) -> T {
        lit::<T>(2.0) * self.delta / self.gamma
    }

    /// `eta = Omega / gamma`.
    pub fn eta(&self) -> T {
        self.omega_mod / self.gamma
    }

    /// Geometric-expansion parameter `-i (2 Omega/gamma) / (1 + i Delta)`.
    pub fn epsilon(&self) -> Complex<T> {
        let num = Complex::new(T::zero(), -lit::<T>(2.0) * self.eta());
        num / Complex::new(T::one(), self.big_delta())
    }

    pub fn epsilon_magnitude(&self) -> T {
        self.epsilon().norm()
    }

    /// Sideband cutoff: `|J_n(M)| < 1e-6` for `|n| >= N_MAX`.
    pub fn n_max(&self) -> usize {
        truncation_bound(self.m, lit(N_MAX_TOLERANCE))
    }

    /// `|2 N_MAX Omega / gamma| < 1`.
    pub fn perturbative_valid(&self) -> bool {
        perturbative_validity(self.m, self.eta())
    }

    /// Resonant power scale `f^2 / (2 gamma)`.
    pub fn power_scale(&self) -> T {
        self.force * self.force / (lit::<T>(2.0) * self.gamma)
    }
}

pub(crate) fn perturbative_validity<T: Real>(m: T, eta: T) -> bool {
    let n = T::from_usize(truncation_bound(m, lit(N_MAX_TOLERANCE))).unwrap();
    (lit::<T>(2.0) * n * eta).abs() < T::one()
}

/// A value together with a domain-validity flag; `valid == false` means the
/// value was computed outside the regime where its approximation holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Flagged<V> {
    pub value: V,
    pub valid: bool,
}

/// Absorbed power as `dc + sum_h [cos_h cos(h Omega t) + sin_h sin(h Omega t)]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct HarmonicDecomposition<T> {
    pub dc: T,
    pub cos_amps: Vec<T>,
    pub sin_amps: Vec<T>,
}

impl<T: Real> HarmonicDecomposition<T> {
    pub fn harmonics(&self) -> usize {
        self.cos_amps.len()
    }

    /// `(cos, sin)` amplitudes of harmonic `h >= 1`; zero beyond the stored range.
    pub fn harmonic(&self, h: usize) -> (T, T) {
        if h == 0 {
            return (self.dc, T::zero());
        }
        (
            self.cos_amps.get(h - 1).copied().unwrap_or_else(T::zero),
            self.sin_amps.get(h - 1).copied().unwrap_or_else(T::zero),
        )
    }

    /// Harmonic `h` as the complex amplitude `cos_h + i sin_h`.
    pub fn harmonic_complex(&self, h: usize) -> Complex<T> {
        let (c, s) = self.harmonic(h);
        Complex::new(c, s)
    }

    /// The reconstructed (real) signal at modulation phase `theta = Omega t`.
    pub fn signal(&self, theta: T) -> T {
        let mut v = self.dc;
        for (i, (c, s)) in self.cos_amps.iter().zip(&self.sin_amps).enumerate() {
            let h = T::from_usize(i + 1).unwrap() * theta;
            v += *c * h.cos() + *s * h.sin();
        }
        v
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            dc: self.dc * factor,
            cos_amps: self.cos_amps.iter().map(|v| *v * factor).collect(),
            sin_amps: self.sin_amps.iter().map(|v| *v * factor).collect(),
        }
    }

    /// Largest absolute difference over dc and the first `harmonics` pairs.
    pub fn max_difference(&self, other: &Self, harmonics: usize) -> T {
        let mut d = (self.dc - other.dc).abs();
        for h in 1..=harmonics {
            let (a, b) = self.harmonic(h);
            let (c, e) = other.harmonic(h);
            d = d.max((a - c).abs()).max((b - e).abs());
        }
        d
    }
}
