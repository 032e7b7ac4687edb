//! Sidebands of an arbitrary real periodic phase modulation.

use std::collections::BTreeMap;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::scalar::{int, lit, ComplexSum, Real};

/// Largest sample count tried by the automatic sampler.
pub const MAX_SIDEBAND_SAMPLES: usize = 1 << 22;

/// Tail level above which a sampled spectrum is rejected, in units of the
/// scalar's machine epsilon.
pub const SIDEBAND_TAIL_TOLERANCE: f64 = 1000.0;

fn tail_tolerance<T: Real>() -> T {
    T::epsilon() * lit(SIDEBAND_TAIL_TOLERANCE)
}

/// Real periodic phase `phi(t) = sum_n phi_n exp(i n Omega t)` with finite
/// support.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralModulation<T> {
    coeffs: BTreeMap<i64, Complex<T>>,
    fundamental: T,
}

impl<T: Real> GeneralModulation<T> {
    /// Validates `phi_{-n} = conj(phi_n)` for every stored harmonic.
    pub fn new(coeffs: BTreeMap<i64, Complex<T>>, fundamental: T) -> Result<Self> {
        if !(fundamental > T::zero()) || !fundamental.is_finite() {
            return Err(invalid(format!(
                "modulation fundamental must be positive and finite, got {fundamental}"
            )));
        }
        let scale = coeffs.values().fold(T::one(), |m, c| m.max(c.norm()));
        let slack = T::epsilon() * lit(64.0) * scale;
        let zero = Complex::new(T::zero(), T::zero());
        for (&n, c) in &coeffs {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(invalid(format!("phi_{n} is not finite")));
            }
            let mirror = coeffs.get(&-n).copied().unwrap_or(zero);
            if (mirror - c.conj()).norm() > slack {
                return Err(invalid(format!(
                    "phase is not real: phi_{} = {} but conj(phi_{}) = {}",
                    -n,
                    mirror,
                    n,
                    c.conj()
                )));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| *c != zero).collect();
        Ok(Self {
            coeffs,
            fundamental,
        })
    }

    /// Builds the full coefficient set from `phi_n` with `n >= 0`; negative
    /// harmonics are filled in by conjugation and `phi_0` must be real.
    pub fn from_nonnegative<I>(coeffs: I, fundamental: T) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex<T>)>,
    {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            if n < 0 {
                return Err(invalid(format!("expected n >= 0, got harmonic {n}")));
            }
            if n == 0 && c.im != T::zero() {
                return Err(invalid(format!("phi_0 must be real, got {c}")));
            }
            if map.insert(n, c).is_some() {
                return Err(invalid(format!("harmonic {n} given twice")));
            }
            if n > 0 {
                map.insert(-n, c.conj());
            }
        }
        Self::new(map, fundamental)
    }

    /// `phi(t) = M sin(Omega t)`, i.e. `phi_{+-1} = -+ i M/2`.
    pub fn sinusoidal(m: T, fundamental: T) -> Result<Self> {
        let half = m * lit(0.5);
        Self::from_nonnegative([(1, Complex::new(T::zero(), -half))], fundamental)
    }

    /// `phi(t) = y1 sin(Omega t) + y2 sin(2 Omega t)`.
    pub fn two_tone(y1: T, y2: T, fundamental: T) -> Result<Self> {
        let h = lit::<T>(0.5);
        Self::from_nonnegative(
            [
                (1, Complex::new(T::zero(), -y1 * h)),
                (2, Complex::new(T::zero(), -y2 * h)),
            ],
            fundamental,
        )
    }

    pub fn zero(fundamental: T) -> Result<Self> {
        Self::new(BTreeMap::new(), fundamental)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex<T>> {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> Complex<T> {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn fundamental(&self) -> T {
        self.fundamental
    }

    /// Largest `|n|` with a nonzero coefficient.
    pub fn support(&self) -> usize {
        self.coeffs.keys().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// `phi` as a function of the phase angle `theta = Omega t`.
    pub fn phase_at_angle(&self, theta: T) -> T {
        let mut acc = ComplexSum::new();
        for (&n, c) in &self.coeffs {
            acc.add(*c * Complex::from_polar(T::one(), int::<T>(n) * theta));
        }
        acc.value().re
    }

    pub fn phase(&self, t: T) -> T {
        self.phase_at_angle(self.fundamental * t)
    }

    /// `dphi/dt = sum_n i n Omega phi_n exp(i n Omega t)`.
    pub fn phase_rate(&self, t: T) -> T {
        let theta = self.fundamental * t;
        let mut acc = ComplexSum::new();
        for (&n, c) in &self.coeffs {
            let w = int::<T>(n) * self.fundamental;
            acc.add(*c * Complex::new(T::zero(), w) * Complex::from_polar(T::one(), int::<T>(n) * theta));
        }
        acc.value().re
    }

    /// Upper bound on `|dphi/dtheta|`, which sets the sideband bandwidth.
    pub fn peak_rate(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |s, (&n, c)| s + int::<T>(n.abs()) * c.norm())
    }
}

/// Sideband amplitudes `G_n` for `|n| <= n_max`, with sampling metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct SidebandSpectrum<T> {
    pub n_max: usize,
    pub samples: usize,
    /// Largest `|G_n|` seen in the band `samples/4 <= |n| <= samples/2`.
    pub tail_estimate: T,
    /// `|sum_{|n| <= n_max} |G_n|^2 - 1|`.
    pub energy_defect: T,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> SidebandSpectrum<T> {
    pub fn get(&self, n: i64) -> Option<Complex<T>> {
        if n.unsigned_abs() as usize > self.n_max {
            return None;
        }
        Some(self.amplitudes[(n + self.n_max as i64) as usize])
    }

    /// `(n, G_n)` in ascending `n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        let off = self.n_max as i64;
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, g)| (i as i64 - off, *g))
    }
}

struct Sampled<T> {
    /// `bins[k] = G_k` for `k < S/2`, `G_{k-S}` above.
    bins: Vec<Complex<T>>,
    tail: T,
}

impl<T: Real> Sampled<T> {
    fn at(&self, n: i64) -> Complex<T> {
        let s = self.bins.len() as i64;
        if 2 * n.abs() >= s {
            return Complex::new(T::zero(), T::zero());
        }
        self.bins[n.rem_euclid(s) as usize]
    }

    fn reach(&self) -> i64 {
        self.bins.len() as i64 / 2 - 1
    }
}

fn sample<T: Real>(modulation: &GeneralModulation<T>, samples: usize) -> Sampled<T> {
    let step = T::TAU() / int::<T>(samples as i64);
    let mut buf: Vec<Complex<T>> = (0..samples)
        .map(|j| Complex::from_polar(T::one(), modulation.phase_at_angle(step * int::<T>(j as i64))))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(samples).process(&mut buf);
    let norm = int::<T>(samples as i64).recip();
    for v in buf.iter_mut() {
        *v *= norm;
    }
    let quarter = samples / 4;
    let mut tail = T::zero();
    for k in quarter..=samples - quarter {
        tail = tail.max(buf[k].norm());
    }
    Sampled { bins: buf, tail }
}

fn auto_sample<T: Real>(modulation: &GeneralModulation<T>, n_max: usize) -> Result<Sampled<T>> {
    let rate = modulation.peak_rate().to_f64().unwrap_or(f64::INFINITY);
    if !rate.is_finite() {
        return Err(invalid("modulation amplitude is not finite"));
    }
    let band = rate + modulation.support() as f64 + 1.0;
    let want = (8 * n_max).max((8.0 * band) as usize).max(64);
    let mut samples = want.next_power_of_two();
    loop {
        if samples > MAX_SIDEBAND_SAMPLES {
            return Err(Error::Accuracy {
                tail: f64::NAN,
                tolerance: tail_tolerance::<T>().to_f64().unwrap(),
            });
        }
        let s = sample(modulation, samples);
        if s.tail <= tail_tolerance::<T>() {
            return Ok(s);
        }
        if samples == MAX_SIDEBAND_SAMPLES {
            return Err(Error::Accuracy {
                tail: s.tail.to_f64().unwrap(),
                tolerance: tail_tolerance::<T>().to_f64().unwrap(),
            });
        }
        samples *= 2;
    }
}

fn to_spectrum<T: Real>(s: Sampled<T>, n_max: usize) -> SidebandSpectrum<T> {
    let amplitudes: Vec<Complex<T>> = (-(n_max as i64)..=n_max as i64).map(|n| s.at(n)).collect();
    let energy = amplitudes.iter().fold(T::zero(), |e, g| e + g.norm_sqr());
    SidebandSpectrum {
        n_max,
        samples: s.bins.len(),
        tail_estimate: s.tail,
        energy_defect: (energy - T::one()).abs(),
        amplitudes,
    }
}

/// `G_n` for `|n| <= n_max`, with the sample count chosen automatically and
/// doubled until the spectral tail is negligible.
pub fn general_sidebands<T: Real>(
    modulation: &GeneralModulation<T>,
    n_max: usize,
) -> Result<SidebandSpectrum<T>> {
    let s = auto_sample(modulation, n_max)?;
    Ok(to_spectrum(s, n_max))
}

/// Every sideband resolved by the automatic sampler, `|n| < samples/2`.
pub fn general_sidebands_resolved<T: Real>(modulation: &GeneralModulation<T>) -> Result<SidebandSpectrum<T>> {
    let s = auto_sample(modulation, 0)?;
    let reach = s.reach() as usize;
    Ok(to_spectrum(s, reach))
}

/// As [`general_sidebands`] with a caller-fixed power-of-two sample count
/// of at least `8 n_max`.
pub fn general_sidebands_with_samples<T: Real>(
    modulation: &GeneralModulation<T>,
    n_max: usize,
    samples: usize,
) -> Result<SidebandSpectrum<T>> {
    if !samples.is_power_of_two() || samples < (8 * n_max).max(8) {
        return Err(invalid(format!(
            "sample count must be a power of two >= max(8, 8 n_max) = {}, got {samples}",
            (8 * n_max).max(8)
        )));
    }
    let s = sample(modulation, samples);
    if s.tail > tail_tolerance::<T>() {
        return Err(Error::Accuracy {
            tail: s.tail.to_f64().unwrap(),
            tolerance: tail_tolerance::<T>().to_f64().unwrap(),
        });
    }
    Ok(to_spectrum(s, n_max))
}

/// Energy sum, first-moment sum and the expected first moment `i s phi_s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulationRuleSums<T> {
    pub energy: Complex<T>,
    pub first_moment: Complex<T>,
    pub expected_first_moment: Complex<T>,
    pub order: usize,
}

impl<T: Real> ModulationRuleSums<T> {
    /// `delta_{s,0}`.
    pub fn expected_energy(s: i64) -> Complex<T> {
        Complex::new(if s == 0 { T::one() } else { T::zero() }, T::zero())
    }
}

/// `sum_n G_n conj(G_{n-s})` and `sum_n n G_n conj(G_{n-s})` over the full
/// resolved band.
pub fn general_modulation_rules<T: Real>(
    modulation: &GeneralModulation<T>,
    s: i64,
) -> Result<ModulationRuleSums<T>> {
    let sampled = auto_sample(modulation, 0)?;
    let reach = sampled.reach();
    let mut energy = ComplexSum::new();
    let mut moment = ComplexSum::new();
    for n in -reach..=reach {
        let p = sampled.at(n) * sampled.at(n - s).conj();
        energy.add(p);
        moment.add(p * int::<T>(n));
    }
    let expected = Complex::new(T::zero(), int::<T>(s)) * modulation.coeff(s);
    Ok(ModulationRuleSums {
        energy: energy.value(),
        first_moment: moment.value(),
        expected_first_moment: expected,
        order: reach as usize,
    })
}
