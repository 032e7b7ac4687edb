use besselrules::coefficients::{
    build_coeff_table, coeff_faa_di_bruno, enumerate_derivative_partitions,
};
use besselrules::dyadic::{DyadicPoly, DyadicRational};

/// Brute force: every tuple with 0 <= m_j <= k/j, filtered by the weight sum.
fn brute_force_partitions(k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k as usize];
    loop {
        let total: u32 = cur.iter().enumerate().map(|(i, m)| (i as u32 + 1) * m).sum();
        if total == k {
            out.push(cur.clone());
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == k as usize {
                return out;
            }
            let cap = k / (i as u32 + 1);
            if cur[i] < cap {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn partitions_match_brute_force() {
    for k in 1..=8 {
        let mut fast = enumerate_derivative_partitions(k).unwrap();
        let mut slow = brute_force_partitions(k);
        assert_eq!(fast.len(), slow.len(), "k={k}");
        fast.sort();
        slow.sort();
        assert_eq!(fast, slow);
    }
    assert_eq!(enumerate_derivative_partitions(6).unwrap().len(), 11);
}

#[test]
fn partition_order_is_descending_lexicographic() {
    let parts = enumerate_derivative_partitions(7).unwrap();
    for w in parts.windows(2) {
        assert!(w[0] > w[1], "{:?} before {:?}", w[0], w[1]);
    }
}

#[test]
fn partition_counts_follow_partition_numbers() {
    // p(k) via the standard coin-change recurrence.
    let kmax = 25;
    let mut p = vec![0u64; kmax + 1];
    p[0] = 1;
    for part in 1..=kmax {
        for n in part..=kmax {
            p[n] += p[n - part];
        }
    }
    for k in 1..=kmax {
        let n = enumerate_derivative_partitions(k as u32).unwrap().len() as u64;
        assert_eq!(n, p[k], "k={k}");
    }
}

#[test]
fn recursion_and_faa_di_bruno_agree_exactly() {
    let table = build_coeff_table(10).unwrap();
    for k in 1..=10u32 {
        for n in -(k as i64)..=k as i64 {
            let fdb = coeff_faa_di_bruno(k, n).unwrap();
            assert_eq!(&fdb, table.entry(k, n).unwrap(), "k={k} n={n}");
        }
    }
}

fn half_y_pow(k: u32) -> DyadicPoly {
    DyadicPoly::monomial(k, DyadicRational::new(1, k))
}

#[test]
fn table_structural_invariants() {
    let table = build_coeff_table(12).unwrap();
    for k in 0..=12u32 {
        for n in -(k as i64)..=k as i64 {
            let p = table.entry(k, n).unwrap();
            // symmetry under n -> -n
            let mirror = table.entry(k, -n).unwrap();
            let sign = if (k as i64 + n) % 2 == 0 { 1 } else { -1 };
            assert_eq!(mirror, &p.scale_int(sign), "symmetry k={k} n={n}");
            if p.is_zero() {
                continue;
            }
            assert!(p.degree().unwrap() <= k);
            assert!(p.min_power().unwrap() as u64 >= n.unsigned_abs());
            for (power, _) in p.terms() {
                assert_eq!((power as i64 - n).rem_euclid(2), 0, "parity k={k} n={n}");
            }
        }
        assert_eq!(table.entry(k, k as i64).unwrap(), &half_y_pow(k));
        assert_eq!(table.entry(k, -(k as i64)).unwrap(), &half_y_pow(k));
        assert_eq!(table.entry(k, k as i64 + 1), None);
    }
}

#[test]
fn faa_di_bruno_reaches_its_cap() {
    let table = build_coeff_table(30).unwrap();
    for n in [-30_i64, -17, 0, 1, 29] {
        assert_eq!(&coeff_faa_di_bruno(30, n).unwrap(), table.entry(30, n).unwrap());
    }
}
