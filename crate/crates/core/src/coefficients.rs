//! Exact coefficient polynomials of the k-th angular derivative of
//! `exp(i y sin t)`.
//!
//! Writing `d^k/dt^k exp(i y sin t) = p_k(y, t) exp(i y sin t)` and expanding
//! `p_k = sum_n C_{k,n}(y) exp(i n t)`, every `C_{k,n}` equals `i^k` times a
//! real polynomial `D_{k,n}(y)` with dyadic coefficients. This module stores
//! `D_{k,n}` and computes it two independent ways:
//!
//! * the three-term recursion
//!   `D_{k+1,n} = n D_{k,n} + (y/2) (D_{k,n+1} + D_{k,n-1})`, `D_{0,n} = delta_{n,0}`;
//! * the Faa di Bruno closed form, summed over all tuples `(m_1..m_k)` with
//!   `sum_j j m_j = k`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::{DyadicPoly, DyadicRational};
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Largest order accepted by [`build_coeff_table`].
pub const MAX_TABLE_ORDER: u32 = 64;
/// Largest order accepted by [`coeff_faa_di_bruno`].
pub const MAX_FAA_DI_BRUNO_ORDER: u32 = 30;
/// Largest order accepted by [`enumerate_derivative_partitions`].
pub const MAX_PARTITION_ORDER: u32 = 64;

/// Immutable table of `D_{k,n}(y)` for `0 <= k <= k_max`, `|n| <= k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    k_max: u32,
    // rows[k][n + k]
    rows: Vec<Vec<DyadicPoly>>,
}

impl CoeffTable {
    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// `D_{k,n}`; `None` outside the support `|n| <= k <= k_max`.
    pub fn entry(&self, k: u32, n: i64) -> Option<&DyadicPoly> {
        if k > self.k_max || n.unsigned_abs() > k as u64 {
            return None;
        }
        Some(&self.rows[k as usize][(n + k as i64) as usize])
    }

    /// Non-zero entries in `(k, n)` order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (u32, i64, &DyadicPoly)> {
        self.rows.iter().enumerate().flat_map(|(k, row)| {
            row.iter().enumerate().filter_map(move |(i, p)| {
                (!p.is_zero()).then_some((k as u32, i as i64 - k as i64, p))
            })
        })
    }

    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            k_max: self.k_max,
            entries: self
                .nonzero_entries()
                .map(|(k, n, p)| EntryDocument {
                    k,
                    n,
                    poly: poly_to_terms(p),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("table serializes")
    }

    pub fn from_document(doc: &TableDocument) -> Result<Self> {
        if doc.k_max > MAX_TABLE_ORDER {
            return Err(invalid(format!("k_max {} exceeds {MAX_TABLE_ORDER}", doc.k_max)));
        }
        let mut rows: Vec<Vec<DyadicPoly>> = (0..=doc.k_max)
            .map(|k| vec![DyadicPoly::zero(); 2 * k as usize + 1])
            .collect();
        for e in &doc.entries {
            if e.k > doc.k_max || e.n.unsigned_abs() > e.k as u64 {
                return Err(invalid(format!("entry ({}, {}) outside support", e.k, e.n)));
            }
            let mut p = DyadicPoly::zero();
            for t in &e.poly {
                let num: BigInt = t
                    .num
                    .parse()
                    .map_err(|_| invalid(format!("bad numerator {:?}", t.num)))?;
                p.add_term(t.power, &DyadicRational::new(num, t.exp2));
            }
            rows[e.k as usize][(e.n + e.k as i64) as usize] = p;
        }
        Ok(Self {
            k_max: doc.k_max,
            rows,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TableDocument =
            serde_json::from_str(s).map_err(|e| invalid(format!("table JSON: {e}")))?;
        Self::from_document(&doc)
    }
}

/// JSON form of a [`CoeffTable`]; numerators are decimal strings so the
/// encoding is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub k_max: u32,
    pub entries: Vec<EntryDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDocument {
    pub k: u32,
    pub n: i64,
    pub poly: Vec<TermDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub power: u32,
    pub num: String,
    pub exp2: u32,
}

pub fn poly_to_terms(p: &DyadicPoly) -> Vec<TermDocument> {
    p.terms()
        .map(|(power, c)| TermDocument {
            power,
            num: c.numerator().to_string(),
            exp2: c.exponent(),
        })
        .collect()
}

/// Builds `D_{k,n}` for all `k <= k_max` by the three-term recursion.
pub fn build_coeff_table(k_max: u32) -> Result<CoeffTable> {
    if k_max > MAX_TABLE_ORDER {
        return Err(invalid(format!(
            "k_max must lie in 0..={MAX_TABLE_ORDER}, got {k_max}"
        )));
    }
    let mut rows: Vec<Vec<DyadicPoly>> = Vec::with_capacity(k_max as usize + 1);
    rows.push(vec![DyadicPoly::one()]);
    for k in 0..k_max as i64 {
        let prev = &rows[k as usize];
        let get = |n: i64| -> Option<&DyadicPoly> {
            if n.abs() > k {
                None
            } else {
                Some(&prev[(n + k) as usize])
            }
        };
        let next: Vec<DyadicPoly> = (-(k + 1)..=k + 1)
            .map(|n| {
                let mut p = match get(n) {
                    Some(c) => c.scale_int(n),
                    None => DyadicPoly::zero(),
                };
                let mut neighbours = DyadicPoly::zero();
                if let Some(c) = get(n + 1) {
                    neighbours = &neighbours + c;
                }
                if let Some(c) = get(n - 1) {
                    neighbours = &neighbours + c;
                }
                p = &p + &neighbours.mul_half_y();
                p
            })
            .collect();
        rows.push(next);
    }
    Ok(CoeffTable { k_max, rows })
}

/// `D_{k,n}(y)` in floating point.
pub fn eval_coeff<T: Real>(table: &CoeffTable, k: u32, n: i64, y: T) -> Result<T> {
    if k > table.k_max {
        return Err(invalid(format!(
            "order k={k} exceeds table k_max={}",
            table.k_max
        )));
    }
    Ok(table.entry(k, n).map_or_else(T::zero, |p| p.eval(y)))
}

/// Calls `visit` with every tuple `(m_1..m_k)` of non-negative integers with
/// `sum_j j m_j = k`, in descending lexicographic order.
pub fn for_each_derivative_partition<F: FnMut(&[u32])>(k: u32, mut visit: F) -> Result<()> {
    if k == 0 || k > MAX_PARTITION_ORDER {
        return Err(invalid(format!(
            "partition order must lie in 1..={MAX_PARTITION_ORDER}, got {k}"
        )));
    }
    let mut cur = vec![0u32; k as usize];
    fill(1, k, k, &mut cur, &mut visit);
    Ok(())
}

fn fill<F: FnMut(&[u32])>(j: u32, k: u32, rem: u32, cur: &mut [u32], visit: &mut F) {
    if rem == 0 {
        visit(cur);
        return;
    }
    if j > k || rem < j {
        return;
    }
    for m in (0..=rem / j).rev() {
        cur[(j - 1) as usize] = m;
        fill(j + 1, k, rem - m * j, cur, visit);
    }
    cur[(j - 1) as usize] = 0;
}

/// All tuples from [`for_each_derivative_partition`], collected.
pub fn enumerate_derivative_partitions(k: u32) -> Result<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    for_each_derivative_partition(k, |m| out.push(m.to_vec()))?;
    Ok(out)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * j)
}

fn binomial(n: u32, r: i64) -> BigInt {
    if r < 0 || r > n as i64 {
        return BigInt::zero();
    }
    let r = r as u32;
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Real sign of `i^(b-k) (-1)^phi`, or `None` if the phase is imaginary.
fn real_phase(b: u32, k: u32, phi: u32) -> Option<i64> {
    let e = (b as i64 - k as i64).rem_euclid(4);
    let base = match e {
        0 => 1,
        2 => -1,
        _ => return None,
    };
    Some(if phi.is_multiple_of(2) { base } else { -base })
}

/// `D_{k,n} = C_{k,n} / i^k` from the Faa di Bruno closed form.
///
/// Each partition contributes
/// `k! i^b (-1)^phi (y/2)^m / prod_j (m_j! j!^m_j) * sum_r (-1)^r C(a,r) C(b,(m-n)/2-r)`
/// with `m = sum m_j`, `a` the count over even `j`, `b` over odd `j`, and
/// `phi` the count over `j = 2, 3 (mod 4)`. The combined phase `i^(b-k)` is
/// checked to be real.
pub fn coeff_faa_di_bruno(k: u32, n: i64) -> Result<DyadicPoly> {
    if k == 0 || k > MAX_FAA_DI_BRUNO_ORDER {
        return Err(invalid(format!(
            "Faa di Bruno order must lie in 1..={MAX_FAA_DI_BRUNO_ORDER}, got {k}"
        )));
    }
    if n.unsigned_abs() > k as u64 {
        return Err(invalid(format!("|n| = {} exceeds k = {k}", n.abs())));
    }
    let k_fact = factorial(k);
    let j_facts: Vec<BigInt> = (0..=k).map(factorial).collect();
    let mut poly = DyadicPoly::zero();
    let mut failure = None;
    for_each_derivative_partition(k, |ms| {
        if failure.is_some() {
            return;
        }
        let mut m = 0u32;
        let mut a = 0u32;
        let mut b = 0u32;
        let mut phi = 0u32;
        let mut denom = BigInt::one();
        for (idx, &mj) in ms.iter().enumerate() {
            if mj == 0 {
                continue;
            }
            let j = idx as u32 + 1;
            m += mj;
            if j.is_multiple_of(2) {
                a += mj;
            } else {
                b += mj;
            }
            if matches!(j % 4, 2 | 3) {
                phi += mj;
            }
            denom *= factorial(mj) * num_traits::pow(j_facts[j as usize].clone(), mj as usize);
        }
        let Some(sign) = real_phase(b, k, phi) else {
            failure = Some(Error::PhaseNotReal {
                k,
                partition: ms.to_vec(),
            });
            return;
        };
        let diff = m as i64 - n;
        if diff % 2 != 0 {
            return;
        }
        let h = diff / 2;
        let mut binsum = BigInt::zero();
        for r in 0..=a {
            let term = binomial(a, r as i64) * binomial(b, h - r as i64);
            if r % 2 == 0 {
                binsum += term;
            } else {
                binsum -= term;
            }
        }
        if binsum.is_zero() {
            return;
        }
        let weight = &k_fact / &denom;
        let coeff = DyadicRational::new(weight * binsum * sign, m);
        poly.add_term(m, &coeff);
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(poly),
    }
}
