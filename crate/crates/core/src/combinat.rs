//! Exact combinatorial coefficients: binomials, Stirling numbers of the
//! second kind and the composition sums `A_d(i,n)`, `a(i_1..i_n; j)`,
//! `b(i,l;n)` that appear in the divided-power relations.
//!
//! Stirling numbers and `A_d(i,n)` are memoized in process-wide caches.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::report::Report;

/// An ordered list of positive parts with a fixed total.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    /// Returns `None` if some part is zero.
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        parts.iter().all(|&p| p >= 1).then_some(Composition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// All compositions of `total` into exactly `len` positive parts, in
/// lexicographic order.
pub fn compositions(total: u32, len: u32) -> Vec<Composition> {
    weak_compositions_with_min(total, len, 1)
        .into_iter()
        .map(|parts| Composition { parts })
        .collect()
}

/// All ways to write `total` as an ordered sum of `len` non-negative parts.
pub fn weak_compositions(total: u32, len: u32) -> Vec<Vec<u32>> {
    weak_compositions_with_min(total, len, 0)
}

fn weak_compositions_with_min(total: u32, len: u32, min: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, slots: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < min * slots {
            return;
        }
        let max = rest - min * (slots - 1);
        for p in min..=max {
            cur.push(p);
            go(rest - p, slots - 1, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, len, min, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n! / (n-k)!`, zero when `k > n`.
pub fn falling(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial with a possibly negative top index; zero when `n < 0`.
///
/// Every occurrence in this crate of a negative top index is multiplied by
/// a vanishing factor, so the convention never changes a result.
pub fn binomial_signed(n: i64, k: i64) -> BigInt {
    if n < 0 {
        BigInt::zero()
    } else {
        binomial(n as u64, k)
    }
}

type Cache<K> = OnceLock<RwLock<HashMap<K, BigInt>>>;

fn cached<K: std::hash::Hash + Eq + Copy>(
    cache: &'static Cache<K>,
    key: K,
    compute: impl FnOnce() -> BigInt,
) -> BigInt {
    let lock = cache.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = lock.read().expect("cache poisoned").get(&key) {
        return v.clone();
    }
    let v = compute();
    lock.write()
        .expect("cache poisoned")
        .insert(key, v.clone());
    v
}

static STIRLING: Cache<(u32, u32)> = OnceLock::new();
static A_COEFF: Cache<(u32, u32, u32)> = OnceLock::new();

/// Stirling number of the second kind, via the alternating sum
/// `S(m,i) = 1/i! * sum_j (-1)^j C(i,j) (i-j)^m`.
pub fn stirling2(m: u32, i: u32) -> BigInt {
    cached(&STIRLING, (m, i), || {
        let mut sum = BigInt::zero();
        for j in 0..=i {
            let term = binomial(i as u64, j as i64) * num_traits::pow(BigInt::from(i - j), m as usize);
            if j % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let (q, r) = sum.div_rem(&factorial(i as u64));
        assert!(r.is_zero(), "alternating sum for S({m},{i}) not divisible by {i}!");
        q
    })
}

/// `A_d(i,n)`: sum over compositions of `i` into `d` positive parts of
/// `prod_s C(n, i_s)`, with `A_0(i,n) = [i = 0]`.
pub fn composition_coeff(d: u32, i: u32, n: u32) -> BigInt {
    if d == 0 {
        return if i == 0 { BigInt::one() } else { BigInt::zero() };
    }
    if i < d {
        return BigInt::zero();
    }
    cached(&A_COEFF, (d, i, n), || {
        // peel off the first part
        let mut sum = BigInt::zero();
        for first in 1..=(i - (d - 1)) {
            let c = binomial(n as u64, first as i64);
            if !c.is_zero() {
                sum += c * composition_coeff(d - 1, i - first, n);
            }
        }
        sum
    })
}

/// `a(i_1, ..., i_n; j)` by the recursion on the first part; `a(i_1; j) = [j = 0]`.
pub fn nested_coeff(parts: &[u32], j: u32) -> BigInt {
    assert!(!parts.is_empty(), "nested_coeff needs at least one part");
    let total: u32 = parts.iter().sum();
    let max = *parts.iter().max().unwrap();
    if j > total - max {
        return BigInt::zero();
    }
    if parts.len() == 1 {
        return if j == 0 { BigInt::one() } else { BigInt::zero() };
    }
    let first = parts[0] as u64;
    let rest = &parts[1..];
    let rest_total: i64 = rest.iter().map(|&p| p as i64).sum();
    let mut sum = BigInt::zero();
    for k in 0..=j {
        let c1 = binomial(first, k as i64);
        if c1.is_zero() {
            continue;
        }
        let c2 = binomial_signed(rest_total - j as i64 + k as i64, k as i64);
        if c2.is_zero() {
            continue;
        }
        sum += factorial(k as u64) * c1 * c2 * nested_coeff(rest, j - k);
    }
    sum
}

/// `b(i,l;n) = sum over weak compositions (i_1..i_n) of i of
/// i!/(i_1!...i_n!) * a(i_1..i_n; l)`.
pub fn weighted_coeff(i: u32, l: u32, n: u32) -> BigInt {
    assert!(l <= i, "weighted_coeff requires l <= i");
    if n == 0 {
        return BigInt::zero();
    }
    let fi = factorial(i as u64);
    let mut sum = BigInt::zero();
    for parts in weak_compositions(i, n) {
        let a = nested_coeff(&parts, l);
        if a.is_zero() {
            continue;
        }
        let denom = parts
            .iter()
            .fold(BigInt::one(), |acc, &p| acc * factorial(p as u64));
        let (q, r) = fi.div_rem(&denom);
        debug_assert!(r.is_zero());
        sum += q * a;
    }
    sum
}

/// The kernel identities against independent oracles, for all indices up
/// to `bound`: Stirling numbers against their recurrence; `A_d(i,n)` against
/// direct enumeration and its recursion in `n`; the support bound of
/// `a(..; j)`; and `b(i,l;n) = i!/(i-l)! A_{i-l}(i,n)` together with the
/// recursion for `b` in `n`.
pub fn kernel_check(bound: u32) -> Report {
    let mut r = Report::new("combinat");
    // triangular recurrence S(m,i) = i S(m-1,i) + S(m-1,i-1)
    let mut table = vec![vec![BigInt::zero(); bound as usize + 1]; bound as usize + 1];
    table[0][0] = BigInt::one();
    for m in 1..=bound as usize {
        for i in 1..=m {
            table[m][i] = BigInt::from(i) * &table[m - 1][i] + &table[m - 1][i - 1];
        }
    }
    for m in 0..=bound {
        for i in 0..=bound {
            let got = stirling2(m, i);
            let want = &table[m as usize][i as usize];
            r.check("Stirling formula = recurrence", || format!("m={m} i={i}"), &got == want, || got.to_string(), || want.to_string());
        }
    }
    for n in 0..=bound {
        for d in 0..=bound {
            for i in 0..=bound {
                let got = composition_coeff(d, i, n);
                let direct: BigInt = if d == 0 {
                    BigInt::from((i == 0) as u32)
                } else {
                    compositions(i, d)
                        .iter()
                        .map(|c| c.parts().iter().fold(BigInt::one(), |acc, &p| acc * binomial(n as u64, p as i64)))
                        .sum()
                };
                r.check("A_d(i,n) = composition sum", || format!("d={d} i={i} n={n}"), got == direct, || got.to_string(), || direct.to_string());
                if n == 0 {
                    continue;
                }
                let mut rec = BigInt::zero();
                for rr in 0..=d {
                    for ss in 0..=(d - rr) {
                        let tt = d - rr - ss;
                        if rr + ss > i {
                            continue;
                        }
                        let multi = factorial(d as u64) / (factorial(rr as u64) * factorial(ss as u64) * factorial(tt as u64));
                        rec += multi * composition_coeff(d - rr, i - rr - ss, n - 1);
                    }
                }
                r.check("A_d(i,n) recursion in n", || format!("d={d} i={i} n={n}"), got == rec, || got.to_string(), || rec.to_string());
            }
        }
    }
    for len in 1..=3u32 {
        for total in 0..=bound {
            for parts in weak_compositions(total, len) {
                let max = *parts.iter().max().unwrap();
                for j in 0..=bound {
                    let v = nested_coeff(&parts, j);
                    let ok = if len == 1 { v == BigInt::from((j == 0) as u32) } else { j <= total - max || v.is_zero() };
                    r.check("a(..; j) support", || format!("parts={parts:?} j={j}"), ok, || v.to_string(), || "0 outside the support".into());
                }
            }
        }
    }
    for n in 1..=bound {
        for i in 0..=bound {
            for l in 0..=i {
                let got = weighted_coeff(i, l, n);
                let want = falling(i as u64, l as u64) * composition_coeff(i - l, i, n);
                r.check("b(i,l;n) = i!/(i-l)! A_{i-l}(i,n)", || format!("i={i} l={l} n={n}"), got == want, || got.to_string(), || want.to_string());
                let rec = if n == 1 {
                    BigInt::from((l == 0) as u32)
                } else {
                    let mut acc = BigInt::zero();
                    for i1 in 0..=i {
                        for k in 0..=l {
                            if k > i1 || i < i1 + l {
                                continue;
                            }
                            let num = factorial(i as u64) * factorial((i - i1 - l + k) as u64);
                            let den = factorial((i - i1) as u64)
                                * factorial((i1 - k) as u64)
                                * factorial((i - i1 - l) as u64)
                                * factorial(k as u64);
                            acc += num / den * weighted_coeff(i - i1, l - k, n - 1);
                        }
                    }
                    acc
                };
                r.check("b(i,l;n) recursion in n", || format!("i={i} l={l} n={n}"), got == rec, || got.to_string(), || rec.to_string());
            }
        }
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_identities() {
        let r = kernel_check(8);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(4, 4), BigInt::one());
        assert_eq!(binomial(2, 3), BigInt::zero());
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(0, 0), BigInt::one());
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        assert_eq!(stirling2(5, 0), BigInt::zero());
        assert_eq!(stirling2(3, 5), BigInt::zero());
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 2).len(), 2);
        assert_eq!(compositions(0, 0).len(), 1);
        assert!(compositions(2, 3).is_empty());
        assert_eq!(weak_compositions(2, 2).len(), 3);
        assert!(Composition::new(vec![1, 0]).is_none());
    }

    #[test]
    fn small_a_values() {
        assert_eq!(composition_coeff(2, 2, 1), BigInt::one());
        assert_eq!(composition_coeff(2, 3, 2), BigInt::from(4));
        assert_eq!(nested_coeff(&[1, 1], 1), BigInt::one());
        assert_eq!(nested_coeff(&[2, 1], 2), BigInt::zero());
        assert_eq!(nested_coeff(&[4], 0), BigInt::one());
        assert_eq!(weighted_coeff(3, 1, 2), BigInt::from(12));
    }
}
