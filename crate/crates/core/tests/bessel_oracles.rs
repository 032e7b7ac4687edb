use besselrules::bessel::{
    bessel_j_complex_order, bessel_j_int, bessel_j_quadrature_oracle, bessel_j_row,
    ln_gamma_complex, truncation_bound,
};
use num_complex::Complex64;
use proptest::prelude::*;

const GRID: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0];

#[test]
fn integer_order_matches_quadrature_oracle() {
    for &y in &GRID {
        for n in -30..=30_i64 {
            let oracle = bessel_j_quadrature_oracle(n, y).unwrap();
            let got = bessel_j_int(n, y).unwrap();
            assert!(
                (got - oracle).abs() <= 1e-11,
                "n={n} y={y}: {got} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn oracle_fixes_reference_values() {
    // Frozen from the quadrature oracle; mpmath agrees to all printed digits.
    let j1_2 = bessel_j_quadrature_oracle(1, 2.0).unwrap();
    assert!((j1_2 - 0.576_724_807_756_873_4).abs() < 1e-14);
    assert!((bessel_j_int(1, 2.0).unwrap() - j1_2).abs() < 1e-15);

    let j5_3 = bessel_j_quadrature_oracle(5, 3.0).unwrap();
    assert!((j5_3 - 0.043_028_434_877_047_58).abs() < 1e-14);
    let got = bessel_j_int(5, 3.0).unwrap();
    assert!((got - j5_3).abs() <= 1e-12 * j5_3);
}

#[test]
fn three_term_recursion_residual() {
    for &y in &GRID {
        let nb = truncation_bound(y, 1e-15) as i64;
        for n in -nb..=nb {
            let jm = bessel_j_int(n - 1, y).unwrap();
            let j = bessel_j_int(n, y).unwrap();
            let jp = bessel_j_int(n + 1, y).unwrap();
            let lhs = 2.0 * n as f64 * j;
            let rhs = y * (jp + jm);
            let scale = (y * jp).abs().max((y * jm).abs()).max(1.0);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * scale,
                "n={n} y={y}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn squares_sum_to_one() {
    for &y in &GRID {
        let nb = truncation_bound(y, 1e-15);
        let row = bessel_j_row(nb, y).unwrap();
        let mut s = row.values[0].powi(2);
        for v in &row.values[1..] {
            s += 2.0 * v * v;
        }
        assert!((s - 1.0).abs() < 1e-12, "y={y}: {s}");
    }
}

#[test]
fn row_recursion_invariant() {
    for &y in &[0.7_f64, 3.0, 12.0] {
        let row = bessel_j_row(40, y).unwrap();
        for n in 1..40 {
            let j = row.values[n];
            if j.abs() <= 1e-300 {
                continue;
            }
            let lhs = 2.0 * n as f64 * j;
            let rhs = y * (row.values[n + 1] + row.values[n - 1]);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(y * row.values[n - 1].abs()));
        }
    }
}

#[test]
fn truncation_bound_is_valid_on_grid() {
    for &y in &GRID {
        let nb = truncation_bound(y, 1e-15);
        for n in nb..nb + 40 {
            let v = bessel_j_int(n as i64, y).unwrap();
            assert!(v.abs() < 1e-15, "y={y} n={n}: {v:e}");
        }
    }
    // The physics heuristic N_MAX ~ 2M is looser than the certified bound.
    assert!(truncation_bound(2.0, 1e-15) >= 4);
}

#[test]
fn ln_gamma_matches_reference_gamma() {
    // Reference Gamma values from mpmath at 40 digits.
    let cases = [
        (Complex64::new(0.5, 1.0), Complex64::new(0.300_694_617_260_655_8, -0.424_967_879_433_123_8)),
        (Complex64::new(2.5, -3.0), Complex64::new(-0.218_118_971_081_122_9, -0.072_034_763_407_175_03)),
        (Complex64::new(0.1, 20.0), Complex64::new(-2.490_742_458_833_392_6e-16, 1.717_414_975_681_725_6e-14)),
        (Complex64::new(-2.5, 0.5), Complex64::new(-0.333_875_203_522_432_34, -0.206_457_307_963_608_4)),
        (Complex64::new(7.0, 45.0), Complex64::new(-1.652_303_730_990_457_6e-20, -2.333_090_482_569_166_8e-20)),
    ];
    for (z, gamma) in cases {
        let g = ln_gamma_complex(z).unwrap().exp();
        let rel = (g - gamma).norm() / gamma.norm();
        assert!(rel <= 1e-12, "z={z}: rel {rel:e}");
    }
}

#[test]
fn ln_gamma_reflection_identity() {
    let pi = std::f64::consts::PI;
    for z in [
        Complex64::new(0.5, 1.0),
        Complex64::new(0.25, -2.0),
        Complex64::new(1.7, 0.3),
        Complex64::new(-0.4, 4.0),
    ] {
        let one = Complex64::new(1.0, 0.0);
        let prod = (ln_gamma_complex(z).unwrap() + ln_gamma_complex(one - z).unwrap()).exp();
        let expect = pi / (z * pi).sin();
        let rel = (prod - expect).norm() / expect.norm();
        assert!(rel < 1e-12, "z={z}: {rel:e}");
    }
}

#[test]
fn complex_order_matches_extended_precision_reference() {
    // Reference values summed by mpmath at 40 significant digits.
    let cases = [
        (Complex64::new(1.0, -0.8), 2.0, Complex64::new(0.768_849_837_114_509_8, 0.125_940_079_336_68)),
        (Complex64::new(0.5, 2.5), 1.3, Complex64::new(-3.176_555_905_695_780_5, -5.042_876_288_124_516)),
        (Complex64::new(3.0, -10.0), 2.0, Complex64::new(402.878_820_573_971_8, -639.829_668_128_691_2)),
    ];
    for (nu, z, expect) in cases {
        let got = bessel_j_complex_order(nu, z).unwrap();
        let rel = (got - expect).norm() / expect.norm();
        assert!(rel <= 1e-11, "nu={nu} z={z}: rel {rel:e}");
    }
}

#[test]
fn complex_order_at_integer_orders_matches_integer_kernel() {
    for &y in &[0.3, 1.0, 2.0, 5.0] {
        for n in 0..8 {
            let c = bessel_j_complex_order(Complex64::new(n as f64, 0.0), y).unwrap();
            let r = bessel_j_int(n, y).unwrap();
            assert!((c.re - r).abs() <= 1e-11 * r.abs(), "n={n} y={y}");
            assert!(c.im.abs() <= 1e-11 * r.abs());
        }
    }
}

proptest! {
    #[test]
    fn parity_is_exact(n in 0_i64..60, y in -40.0_f64..40.0) {
        let a = bessel_j_int(-n, y).unwrap();
        let b = bessel_j_int(n, y).unwrap();
        let expect = if n % 2 == 0 { b } else { -b };
        prop_assert!((a - expect).abs() <= 1e-15 * b.abs().max(1e-300));
    }

    #[test]
    fn row_agrees_with_single(n in 0_usize..40, y in 0.01_f64..50.0) {
        let row = bessel_j_row(40, y).unwrap();
        let s = bessel_j_int(n as i64, y).unwrap();
        prop_assert!((row.values[n] - s).abs() <= 1e-13 * s.abs().max(1e-2));
    }
}
