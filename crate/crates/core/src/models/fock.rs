//! The Fock module `Gamma[t, u^[*]]`, where `Gamma` is free with basis
//! `gamma_0, gamma_1, ...`, acted on by `t`, `u^[d]`, `d_t^[d]` and `d_u`:
//!
//! `d_t^[d](t^i u^[j]) = C(i,d) t^(i-d) u^[j]`, `u^[d] u^[j] = C(d+j,d) u^[d+j]`,
//! `d_u u^[j] = u^[j-1]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;


use crate::combinat::binomial;
use crate::env::{Env, EnvElem, EnvGen, Flavor};
use crate::report::Report;
use crate::ring::Ring;
use crate::scalar::Scalar;

use super::ModelError;

/// `gamma_g t^m u^[n]`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockBasis {
    pub gamma: u32,
    pub m: u32,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector<S: Scalar> {
    terms: BTreeMap<FockBasis, S>,
}

impl<S: Scalar> Default for FockVector<S> {
    fn default() -> Self {
        FockVector { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> fmt::Display for FockVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (b, c)) in self.terms.iter().enumerate() {
            let mut parts = Vec::new();
            if b.gamma > 0 {
                parts.push(format!("g{}", b.gamma));
            }
            match b.m {
                0 => {}
                1 => parts.push("t".into()),
                m => parts.push(format!("t^{m}")),
            }
            if b.n > 0 {
                parts.push(format!("u^[{}]", b.n));
            }
            let body = parts.join("*");
            f.write_str(&crate::ring::show_term(c, &body, idx == 0))?;
        }
        Ok(())
    }
}

impl<S: Scalar> FockVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(gamma: u32, m: u32, n: u32) -> Self {
        let mut v = Self::zero();
        v.add_term(FockBasis { gamma, m, n }, S::one());
        v
    }

    /// `t^m u^[n]` on the first basis vector of `Gamma`.
    pub fn tu(m: u32, n: u32) -> Self {
        Self::basis(0, m, n)
    }

    pub fn terms(&self) -> &BTreeMap<FockBasis, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: FockBasis, c: S) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(S::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &S) {
        for (b, c) in &other.terms {
            self.add_term(*b, c.clone() * s.clone());
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_scaled(other, &S::one());
        v
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_scaled(other, &-S::one());
        v
    }

    pub fn scaled(&self, s: &S) -> Self {
        let mut v = Self::zero();
        v.add_scaled(self, s);
        v
    }
}

/// Generators of the Weyl algebra acting on the Fock module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FockOp {
    T,
    /// `u^[d]`
    U(u32),
    /// `d_t^[d]`
    Dt(u32),
    Du,
}

fn apply_basis<S: Scalar>(op: FockOp, b: FockBasis) -> Option<(FockBasis, S)> {
    match op {
        FockOp::T => Some((FockBasis { m: b.m + 1, ..b }, S::one())),
        FockOp::U(d) => Some((
            FockBasis { n: b.n + d, ..b },
            S::from_bigint(binomial((b.n + d) as u64, d as i64)),
        )),
        FockOp::Dt(d) => (b.m >= d).then(|| {
            (FockBasis { m: b.m - d, ..b }, S::from_bigint(binomial(b.m as u64, d as i64)))
        }),
        FockOp::Du => (b.n >= 1).then(|| (FockBasis { n: b.n - 1, ..b }, S::one())),
    }
}

pub fn fock_apply<S: Scalar>(op: FockOp, v: &FockVector<S>) -> FockVector<S> {
    let mut out = FockVector::zero();
    for (b, c) in &v.terms {
        if let Some((b2, s)) = apply_basis::<S>(op, *b) {
            out.add_term(b2, c.clone() * s);
        }
    }
    out
}

/// Apply an operator product; the rightmost letter acts first.
pub fn fock_apply_word<S: Scalar>(word: &[FockOp], v: &FockVector<S>) -> FockVector<S> {
    word.iter().rev().fold(v.clone(), |acc, op| fock_apply(*op, &acc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2 {
    E,
    F,
    H,
}

/// `e = t d_u`, `f = u d_t`, `h = t d_t - u d_u`.
pub fn fock_sl2<S: Scalar>(which: Sl2, v: &FockVector<S>) -> FockVector<S> {
    use FockOp::*;
    match which {
        Sl2::E => fock_apply_word(&[T, Du], v),
        Sl2::F => fock_apply_word(&[U(1), Dt(1)], v),
        Sl2::H => fock_apply_word(&[T, Dt(1)], v).minus(&fock_apply_word(&[U(1), Du], v)),
    }
}

/// `e^(n-m)(t^m u^[n])`, which equals `t^n u^[m]`.
pub fn lefschetz_power<S: Scalar>(m: u32, n: u32) -> Result<FockVector<S>, ModelError> {
    if n < m {
        return Err(ModelError::LefschetzRange { m, n });
    }
    let mut v = FockVector::tu(m, n);
    for _ in m..n {
        v = fock_sl2(Sl2::E, &v);
    }
    Ok(v)
}

fn fock_basis_upto(rank: u32, max_total: u32) -> Vec<FockBasis> {
    let mut out = Vec::new();
    for gamma in 0..rank {
        for m in 0..=max_total {
            for n in 0..=(max_total - m) {
                out.push(FockBasis { gamma, m, n });
            }
        }
    }
    out
}

/// sl2 relations on every basis vector with `m + n <= max_total`, the weight
/// of `h`, and bijectivity of `e^(n-m)` between `t^m u^[n]` and `t^n u^[m]`.
pub fn fock_sl2_check<S: Scalar>(max_total: u32) -> Report {
    let mut r = Report::new("fock-sl2");
    let two = S::from_i64(2);
    for b in fock_basis_upto(2, max_total) {
        let v = FockVector::basis(b.gamma, b.m, b.n);
        let params = || format!("gamma={} m={} n={}", b.gamma, b.m, b.n);
        let (e, f, h) = (
            |x: &FockVector<S>| fock_sl2(Sl2::E, x),
            |x: &FockVector<S>| fock_sl2(Sl2::F, x),
            |x: &FockVector<S>| fock_sl2(Sl2::H, x),
        );
        let ef = e(&f(&v)).minus(&f(&e(&v)));
        let hv = h(&v);
        r.check("[e,f] = h", params, ef == hv, || ef.to_string(), || hv.to_string());
        let he = h(&e(&v)).minus(&e(&h(&v)));
        let want = e(&v).scaled(&two);
        r.check("[h,e] = 2e", params, he == want, || he.to_string(), || want.to_string());
        let hf = h(&f(&v)).minus(&f(&h(&v)));
        let want = f(&v).scaled(&-two.clone());
        r.check("[h,f] = -2f", params, hf == want, || hf.to_string(), || want.to_string());
        let weight = S::from_i64(b.m as i64 - b.n as i64);
        let want = v.scaled(&weight);
        r.check("h = m - n", params, hv == want, || hv.to_string(), || want.to_string());
    }
    let mut images = BTreeMap::new();
    for m in 0..=max_total {
        for n in m..=(max_total - m) {
            let got = lefschetz_power::<S>(m, n).expect("n >= m");
            let want = FockVector::tu(n, m);
            r.check(
                "e^(n-m) t^m u^[n] = t^n u^[m]",
                || format!("m={m} n={n}"),
                got == want,
                || got.to_string(),
                || want.to_string(),
            );
            let prev = images.insert((n, m), (m, n));
            r.check(
                "e^(n-m) injective on basis",
                || format!("m={m} n={n}"),
                prev.is_none(),
                || format!("{prev:?}"),
                || "none".into(),
            );
        }
    }
    r.finish()
}

/// `u^[d1]` and `d_t^[d2]` commute on the Fock module, which is what the
/// rewriting axiom between row and column towers asserts.
pub fn row_column_commute_check<S: Scalar>(ring: &Arc<Ring<S>>, d1: u32, d2: u32, max_total: u32) -> Report {
    let mut r = Report::new("row-column-commute").with_ring(ring.fingerprint());
    for b in fock_basis_upto(1, max_total) {
        let v = FockVector::<S>::basis(b.gamma, b.m, b.n);
        let lhs = fock_apply_word(&[FockOp::U(d1), FockOp::Dt(d2)], &v);
        let rhs = fock_apply_word(&[FockOp::Dt(d2), FockOp::U(d1)], &v);
        r.check(
            "u^[d1] d_t^[d2] = d_t^[d2] u^[d1]",
            || format!("d1={d1} d2={d2} m={} n={}", b.m, b.n),
            lhs == rhs,
            || lhs.to_string(),
            || rhs.to_string(),
        );
    }
    let env = Env::new(ring, Flavor::Heisenberg);
    let mut letters = Vec::new();
    if d1 > 0 {
        letters.push(EnvGen::Row { n: 1, d: d1 });
    }
    let row = letters.clone();
    if d2 > 0 {
        letters.insert(0, EnvGen::Col { n: 1, d: d2 });
    }
    let mut swapped = row;
    if d2 > 0 {
        swapped.push(EnvGen::Col { n: 1, d: d2 });
    }
    match (EnvElem::word(&env, &letters), EnvElem::word(&env, &swapped)) {
        (Ok(a), Ok(b)) => r.check(
            "column tower times row tower rewrites to row times column",
            || format!("d1={d1} d2={d2}"),
            a == b,
            || a.to_string(),
            || b.to_string(),
        ),
        (Err(e), _) | (_, Err(e)) => r.check(
            "towers available",
            || format!("d1={d1} d2={d2}"),
            false,
            || e.to_string(),
            String::new,
        ),
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type V = FockVector<BigInt>;

    #[test]
    fn divided_time_derivative() {
        let v = fock_apply(FockOp::Dt(2), &V::tu(5, 3));
        assert_eq!(v, V::tu(3, 3).scaled(&BigInt::from(10)));
    }

    #[test]
    fn u_derivative_kills_pure_t() {
        assert!(fock_apply(FockOp::Du, &V::tu(4, 0)).is_zero());
    }

    #[test]
    fn u_times_divided_power() {
        let v = fock_apply(FockOp::U(1), &V::tu(0, 4));
        assert_eq!(v, V::tu(0, 5).scaled(&BigInt::from(5)));
    }

    #[test]
    fn h_weight() {
        let v = fock_sl2(Sl2::H, &V::tu(2, 5));
        assert_eq!(v, V::tu(2, 5).scaled(&BigInt::from(-3)));
    }

    #[test]
    fn lefschetz_examples() {
        assert_eq!(lefschetz_power::<BigInt>(0, 3).unwrap(), V::tu(3, 0));
        assert_eq!(
            lefschetz_power::<BigInt>(3, 1),
            Err(ModelError::LefschetzRange { m: 3, n: 1 })
        );
    }

    #[test]
    fn sl2_sweep() {
        let r = fock_sl2_check::<BigInt>(8);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn rows_and_columns_commute() {
        let ring = Ring::<BigInt>::curve_cohomology(2);
        for (d1, d2) in [(1, 1), (2, 3), (2, 0)] {
            let r = row_column_commute_check(&ring, d1, d2, 8);
            assert!(r.passed(), "{}", r.to_json());
        }
        let v = V::tu(2, 3);
        let a = fock_apply_word(&[FockOp::U(1), FockOp::Dt(1)], &v);
        let b = fock_apply_word(&[FockOp::Dt(1), FockOp::U(1)], &v);
        assert_eq!(a, b);
    }
}
