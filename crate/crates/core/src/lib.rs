//! Sum rules for products of Bessel functions of the first kind.
//!
//! The moment sums `B_{k,s}(M) = sum_n n^k J_n(M) J_{n-s}(M)` are finite
//! polynomials in `M`. This crate computes those polynomials exactly, checks
//! them and their relatives against brute-force sums, and applies them to the
//! absorption of a phase-modulated drive by a damped oscillator.
//!
//! Numerical kernels are generic over [`Real`] (`f32` or `f64`); the coefficient
//! polynomials are exact dyadic rationals. The aliases below fix the scalar
//! to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod coefficients;
pub mod dyadic;
pub mod error;
pub mod quadrature;
pub mod scalar;
pub mod spectroscopy;
pub mod sum_rules;
pub mod verify;

pub use coefficients::{build_coeff_table, coeff_faa_di_bruno, eval_coeff, CoeffTable};
pub use dyadic::{DyadicPoly, DyadicRational};
pub use error::{Error, Result};
pub use scalar::Real;
pub use spectroscopy::{Flagged, HarmonicDecomposition, OscillatorParams};
pub use sum_rules::report::{RuleId, SumRuleReport};
pub use sum_rules::{GeneralModulation, SidebandSpectrum, SidePair, Truncated};

pub type BesselRow64 = bessel::BesselRow<f64>;
pub type Params64 = OscillatorParams<f64>;
pub type Harmonics64 = HarmonicDecomposition<f64>;
pub type Modulation64 = GeneralModulation<f64>;
pub type Spectrum64 = SidebandSpectrum<f64>;
pub type Complex64 = num_complex::Complex<f64>;
