use std::f64::consts::PI;

use besselrules::bessel::bessel_j_int;
use besselrules::coefficients::build_coeff_table;
use besselrules::quadrature::CompositeGauss;
use besselrules::sum_rules::{
    addition_formula_sides, alternating_sum_sides, b_ks_brute, b_ks_closed, general_modulation_rules,
    general_sidebands, jbar, jbar_sum_rule_sides, jcs, jcs_sum_rule_sides, recursion_residual,
    GeneralModulation,
};
use num_complex::Complex64;
use proptest::prelude::*;

const M_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

#[test]
fn moment_sums_closed_vs_brute() {
    let table = build_coeff_table(6).unwrap();
    for &m in &M_GRID {
        for k in 0..=6u32 {
            for s in -8..=8_i64 {
                let closed = b_ks_closed(&table, k, s, m).unwrap();
                let brute = b_ks_brute(k, s, m, 1e-16).unwrap().value;
                assert!(
                    (closed - brute).abs() <= 1e-10 * closed.abs().max(1.0),
                    "k={k} s={s} M={m}: {closed} vs {brute}"
                );
                if s.unsigned_abs() > k as u64 {
                    assert_eq!(closed, 0.0);
                    assert!(brute.abs() < 1e-12, "k={k} s={s} M={m}: {brute:e}");
                }
            }
        }
    }
    let b00 = b_ks_brute(0, 0, 2.0_f64, 1e-14).unwrap().value;
    assert!((b00 - 1.0).abs() < 1e-12);
}

#[test]
fn moment_sums_parity() {
    let table = build_coeff_table(6).unwrap();
    for &m in &M_GRID {
        for k in 0..=6u32 {
            for s in 0..=8_i64 {
                let sign = if (k as i64 + s) % 2 == 0 { 1.0 } else { -1.0 };
                let c = b_ks_closed(&table, k, s, m).unwrap();
                let cm = b_ks_closed(&table, k, -s, m).unwrap();
                assert_eq!(cm, sign * c);
                let b = b_ks_brute(k, s, m, 1e-16).unwrap().value;
                let bm = b_ks_brute(k, -s, m, 1e-16).unwrap().value;
                assert!((bm - sign * b).abs() <= 1e-10 * b.abs().max(1.0));
            }
        }
    }
}

#[test]
fn addition_formula_grid() {
    let table = build_coeff_table(4).unwrap();
    for (y1, y2) in [(1.0_f64, 0.7), (2.0, -1.3), (0.5, 0.5)] {
        for k in 0..=4u32 {
            for q in -4..=4_i64 {
                let p = addition_formula_sides(&table, k, q, y1, y2).unwrap();
                assert!(
                    (p.lhs - p.rhs).norm() < 1e-10,
                    "k={k} q={q} y=({y1},{y2}): {} vs {}",
                    p.lhs,
                    p.rhs
                );
            }
        }
    }
    let p = addition_formula_sides(&table, 2, 1, 1.0, 0.7).unwrap();
    assert!((p.lhs - p.rhs).norm() < 1e-10);
}

#[test]
fn alternating_sum_grid() {
    let table = build_coeff_table(5).unwrap();
    for &y in &[0.3_f64, 1.3, 2.0, 5.0] {
        for k in 0..=5u32 {
            for q in -5..=5_i64 {
                let p = alternating_sum_sides(&table, k, q, y).unwrap();
                let scale = p.rhs.norm().max(1.0);
                assert!((p.lhs - p.rhs).norm() < 1e-10 * scale, "k={k} q={q} y={y}");
            }
        }
    }
}

fn fourier_quadrature(n: i64, phase: impl Fn(f64) -> f64) -> Complex64 {
    let q = CompositeGauss::default();
    let re = q
        .integrate(|t| (phase(t) - n as f64 * t).cos(), 0.0, 2.0 * PI, 4, 1e-15)
        .unwrap();
    let im = q
        .integrate(|t| (phase(t) - n as f64 * t).sin(), 0.0, 2.0 * PI, 4, 1e-15)
        .unwrap();
    Complex64::new(re, im) / (2.0 * PI)
}

#[test]
fn jcs_matches_fourier_quadrature() {
    for (x, y) in [(1.0_f64, 1.0), (0.4, 2.5), (-1.2, 0.8)] {
        for n in -5..=5 {
            let got = jcs(n, x, y).unwrap().value;
            let want = fourier_quadrature(n, |t| x * t.cos() + y * t.sin());
            assert!((got - want).norm() < 1e-12, "n={n} x={x} y={y}: {got} vs {want}");
        }
    }
}

#[test]
fn jbar_matches_fourier_quadrature() {
    for (y1, y2) in [(1.0_f64, 0.5), (2.0, -0.7), (0.0, 1.5)] {
        for n in -6..=6 {
            let got = jbar(n, y1, y2).unwrap().value;
            let want = fourier_quadrature(n, |t| y1 * t.sin() + y2 * (2.0 * t).sin());
            assert!((got - want.re).abs() < 1e-12, "n={n}");
            assert!(want.im.abs() < 1e-12);
        }
    }
}

#[test]
fn generalized_rules_grid() {
    let args = [0.0_f64, 0.5, 1.0, 2.0, -1.5];
    for &x in &args {
        for &y in &args {
            for q in -3..=3 {
                let p = jcs_sum_rule_sides(q, x, y).unwrap();
                assert!((p.lhs - p.rhs).norm() < 1e-10, "jcs q={q} x={x} y={y}");
                let p = jbar_sum_rule_sides(q, x, y).unwrap();
                assert!((p.lhs - p.rhs).abs() < 1e-10, "jbar s={q} y=({x},{y})");
            }
        }
    }
    // x = 0 reduces to the first-moment rule for J_n
    let p = jcs_sum_rule_sides(1, 0.0, 1.7).unwrap();
    assert!((p.rhs - Complex64::new(1.7, 0.0)).norm() == 0.0);
}

fn three_harmonic() -> GeneralModulation<f64> {
    GeneralModulation::from_nonnegative(
        [
            (0, Complex64::new(0.3, 0.0)),
            (1, Complex64::new(0.4, -0.6)),
            (2, Complex64::new(-0.25, 0.1)),
            (3, Complex64::new(0.05, 0.2)),
        ],
        2.0,
    )
    .unwrap()
}

#[test]
fn general_modulation_rules_hold() {
    let cases = [
        GeneralModulation::sinusoidal(1.5, 1.0).unwrap(),
        GeneralModulation::two_tone(1.0, 0.5, 1.0).unwrap(),
        three_harmonic(),
    ];
    for m in &cases {
        for s in -4..=4 {
            let r = general_modulation_rules(m, s).unwrap();
            let e = if s == 0 { 1.0 } else { 0.0 };
            assert!((r.energy - Complex64::new(e, 0.0)).norm() < 1e-10, "s={s}");
            assert!((r.first_moment - r.expected_first_moment).norm() < 1e-10, "s={s}");
        }
    }
    let sin = GeneralModulation::sinusoidal(1.5, 1.0).unwrap();
    let r = general_modulation_rules(&sin, 1).unwrap();
    assert!((r.expected_first_moment - Complex64::new(0.75, 0.0)).norm() < 1e-15);
    let table = build_coeff_table(1).unwrap();
    assert!((r.first_moment.re - b_ks_closed(&table, 1, 1, 1.5).unwrap()).abs() < 1e-10);
}

#[test]
fn sidebands_match_closed_cases() {
    let spec = general_sidebands(&GeneralModulation::two_tone(1.0_f64, 0.5, 1.0).unwrap(), 10).unwrap();
    for (n, g) in spec.iter() {
        assert!((g.re - jbar(n, 1.0, 0.5).unwrap().value).abs() < 1e-10, "n={n}");
        assert!(g.im.abs() < 1e-10);
    }
    let spec = general_sidebands(&GeneralModulation::sinusoidal(7.0_f64, 1.0).unwrap(), 20).unwrap();
    for (n, g) in spec.iter() {
        assert!((g.re - bessel_j_int(n, 7.0).unwrap()).abs() < 1e-12, "n={n}");
    }
}

#[test]
fn recursion_relations_grid() {
    let table = build_coeff_table(4).unwrap();
    for &y in &[0.3_f64, 1.0, 2.0, 5.0] {
        for k in 1..=4u32 {
            for q in -10..=10 {
                let r = recursion_residual(&table, k, q, y).unwrap();
                assert!(r < 1e-12, "k={k} q={q} y={y}: {r:e}");
            }
        }
        for q in -10..=10_i64 {
            let j = |n: i64| bessel_j_int(n, y).unwrap();
            let qf = q as f64;
            let b3 = (y * y / 2.0 - qf * qf) * j(q)
                - ((y / 2.0) * (j(q + 1) - j(q - 1)) - (y * y / 4.0) * (j(q + 2) + j(q - 2)));
            assert!(b3.abs() < 1e-12, "second-order relation q={q} y={y}: {b3:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moment_sum_agrees_for_random_arguments(k in 0u32..6, s in -6i64..=6, m in 0.0f64..8.0) {
        let table = build_coeff_table(6).unwrap();
        let c = b_ks_closed(&table, k, s, m).unwrap();
        let b = b_ks_brute(k, s, m, 1e-16).unwrap().value;
        prop_assert!((c - b).abs() <= 1e-10 * c.abs().max(1.0));
    }

    #[test]
    fn addition_formula_random(k in 0u32..5, q in -5i64..=5, y1 in -3.0f64..3.0, y2 in -3.0f64..3.0) {
        let table = build_coeff_table(4).unwrap();
        let p = addition_formula_sides(&table, k.min(4), q, y1, y2).unwrap();
        prop_assert!((p.lhs - p.rhs).norm() < 1e-10 * p.lhs.norm().max(1.0));
    }
}
