//! The zero-cycle model: a free commutative ring on `x_1..x_r`, truncated
//! above total `x`-degree `g`, with a free variable `t`. The derivations
//! `delta_m(x_p) = x_p^m`, `delta_m(t) = 0` span a copy of the positive Witt
//! algebra, and `P_{m,1}(C) = sum_{j<m} C(m,j) t^j delta_{m-j} + t^m d/dt`.
//!
//! Also the group algebra `Z[Z^r]` with the Pontryagin product.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::binomial;
use crate::poly::{Monomial, Poly};
use crate::report::Report;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroCycleModel {
    /// Number of generators `x_1..x_r`.
    pub rank: usize,
    /// Monomials of `x`-degree above this vanish.
    pub truncation: u32,
}

impl ZeroCycleModel {
    pub fn new(rank: usize, truncation: u32) -> Self {
        ZeroCycleModel { rank, truncation }
    }

    fn x_degree(&self, m: &Monomial) -> u32 {
        (0..self.rank).map(|i| m.exp(i) as u32).sum()
    }

    fn monomial_from(&self, xs: &[u16], t: u16) -> Monomial {
        let mut e = xs.to_vec();
        e.resize(self.rank, 0);
        e.push(t);
        Monomial::from_exponents(e)
    }

    pub fn truncate<S: Scalar>(&self, p: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            if self.x_degree(m) <= self.truncation {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// `x_p` for `1 <= p <= rank`.
    pub fn x<S: Scalar>(&self, p: usize) -> Poly<S> {
        assert!((1..=self.rank).contains(&p), "generator x_{p} out of range");
        self.truncate(&Poly::monomial(Monomial::generator(p - 1)))
    }

    pub fn t<S: Scalar>(&self) -> Poly<S> {
        Poly::monomial(Monomial::generator(self.rank))
    }

    pub fn mul<S: Scalar>(&self, a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                let m = m1.raw_product(m2);
                if self.x_degree(&m) <= self.truncation {
                    out.add_term(m, c1.clone() * c2.clone());
                }
            }
        }
        out
    }

    pub fn pow<S: Scalar>(&self, a: &Poly<S>, e: u32) -> Poly<S> {
        (0..e).fold(Poly::one(), |acc, _| self.mul(&acc, a))
    }

    /// The derivation with `delta_m(x_p) = x_p^m` and `delta_m(t) = 0`.
    pub fn delta<S: Scalar>(&self, m: u32, f: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (mono, c) in f.terms() {
            for p in 0..self.rank {
                let e = mono.exp(p);
                if e == 0 {
                    continue;
                }
                let mut ex = mono.exponents().to_vec();
                ex.resize(self.rank + 1, 0);
                ex[p] = e - 1 + m as u16;
                let image = Monomial::from_exponents(ex);
                if self.x_degree(&image) <= self.truncation {
                    out.add_term(image, c.clone() * S::from_i64(e as i64));
                }
            }
        }
        out
    }

    pub fn d_dt<S: Scalar>(&self, f: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (mono, c) in f.terms() {
            let e = mono.exp(self.rank);
            if e == 0 {
                continue;
            }
            let mut ex = mono.exponents().to_vec();
            ex.resize(self.rank + 1, 0);
            ex[self.rank] = e - 1;
            out.add_term(Monomial::from_exponents(ex), c.clone() * S::from_i64(e as i64));
        }
        out
    }

    /// `P_{m,1}(C) = delta_m + m t delta_{m-1} + ... + m t^{m-1} delta_1 + t^m d/dt`.
    pub fn p_m1<S: Scalar>(&self, m: u32, f: &Poly<S>) -> Poly<S> {
        let t = self.t::<S>();
        let mut out = self.mul(&self.pow(&t, m), &self.d_dt(f));
        for j in 0..m {
            let c = S::from_bigint(binomial(m as u64, j as i64));
            let term = self.mul(&self.pow(&t, j), &self.delta(m - j, f));
            out.add_scaled(&term, &c);
        }
        out
    }

    /// All monomials with `x`-degree at most the truncation and `t`-degree
    /// at most `max_t`.
    pub fn monomials(&self, max_t: u16) -> Vec<Monomial> {
        let mut out = Vec::new();
        fn go(rank: usize, budget: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            if cur.len() == rank {
                out.push(cur.clone());
                return;
            }
            for e in 0..=budget {
                cur.push(e as u16);
                go(rank, budget - e, cur, out);
                cur.pop();
            }
        }
        let mut xs = Vec::new();
        go(self.rank, self.truncation, &mut Vec::new(), &mut xs);
        for x in xs {
            for t in 0..=max_t {
                out.push(self.monomial_from(&x, t));
            }
        }
        out
    }

    pub fn show<S: Scalar>(&self, f: &Poly<S>) -> String {
        let mut names: Vec<String> = (1..=self.rank).map(|p| format!("x{p}")).collect();
        names.push("t".into());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        crate::ring::show_poly_with(&refs, f, |m| m.factor_count())
    }
}

/// Witt relations for the derivations, the grading, and the `P_{m,1}`
/// realization with its values on generators and its own brackets.
pub fn witt_check<S: Scalar>(model: &ZeroCycleModel, max_m: u32, max_p: u32) -> Report {
    let mut r = Report::new("witt");
    r.detail("rank", model.rank.to_string());
    r.detail("truncation", model.truncation.to_string());
    let monos = model.monomials(1);
    let test_vectors: Vec<Poly<S>> = monos.iter().map(|m| Poly::monomial(m.clone())).collect();
    for f in &test_vectors {
        for m in 1..=max_m {
            for m2 in 1..=max_m {
                let lhs = model
                    .delta(m, &model.delta(m2, f))
                    .minus(&model.delta(m2, &model.delta(m, f)));
                let rhs = model.delta(m + m2 - 1, f).scaled(&S::from_i64(m2 as i64 - m as i64));
                r.check(
                    "[delta_m, delta_m'] = (m'-m) delta_{m+m'-1}",
                    || format!("m={m} m'={m2} on {}", model.show(f)),
                    lhs == rhs,
                    || model.show(&lhs),
                    || model.show(&rhs),
                );
                let lhs = model
                    .p_m1(m, &model.p_m1(m2, f))
                    .minus(&model.p_m1(m2, &model.p_m1(m, f)));
                let rhs = model.p_m1(m + m2 - 1, f).scaled(&S::from_i64(m2 as i64 - m as i64));
                r.check(
                    "[P_{m,1}, P_{m',1}] = (m'-m) P_{m+m'-1,1}",
                    || format!("m={m} m'={m2} on {}", model.show(f)),
                    lhs == rhs,
                    || model.show(&lhs),
                    || model.show(&rhs),
                );
            }
        }
        let deg = f.terms().next().map(|(m, _)| model.x_degree(m)).unwrap_or(0);
        let lhs = model.delta(1, f);
        let rhs = model.truncate(&f.scaled(&S::from_i64(deg as i64)));
        r.check(
            "delta_1 is the grading",
            || model.show(f),
            lhs == rhs,
            || model.show(&lhs),
            || model.show(&rhs),
        );
    }
    let t = model.t::<S>();
    for m in 1..=max_p {
        for p in 1..=model.rank {
            let x = model.x::<S>(p);
            let lhs = model.p_m1(m, &x);
            let rhs = model.pow(&x.plus(&t), m).minus(&model.pow(&t, m));
            r.check(
                "P_{m,1}(x_p) = (x_p + t)^m - t^m",
                || format!("m={m} p={p}"),
                lhs == rhs,
                || model.show(&lhs),
                || model.show(&rhs),
            );
        }
        let lhs = model.p_m1(m, &t);
        let rhs = model.pow(&t, m);
        r.check("P_{m,1}(t) = t^m", || format!("m={m}"), lhs == rhs, || model.show(&lhs), || model.show(&rhs));
        let one = model.p_m1(m, &Poly::<S>::one());
        r.check("P_{m,1}(1) = 0", || format!("m={m}"), one.is_zero(), || model.show(&one), || "0".into());
    }
    r.finish()
}

/// An element of the group algebra `Z[Z^r]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupAlgebraElem {
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl fmt::Display for GroupAlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (v, c)) in self.terms.iter().enumerate() {
            let body = format!("[{}]", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
            let body = if c.is_one() || *c == -BigInt::one() { body } else { format!("{}*{body}", c.magnitude()) };
            let neg = *c < BigInt::zero();
            match (idx == 0, neg) {
                (true, false) => f.write_str(&body)?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl GroupAlgebraElem {
    pub fn point(v: Vec<i64>) -> Self {
        let mut x = Self::default();
        x.add_term(v, BigInt::one());
        x
    }

    pub fn unit(rank: usize) -> Self {
        Self::point(vec![0; rank])
    }

    fn add_term(&mut self, v: Vec<i64>, c: BigInt) {
        let e = self.terms.entry(v.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut x = self.clone();
        for (v, c) in &o.terms {
            x.add_term(v.clone(), c.clone());
        }
        x
    }

    pub fn scaled(&self, s: &BigInt) -> Self {
        let mut x = Self::default();
        for (v, c) in &self.terms {
            x.add_term(v.clone(), c * s);
        }
        x
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.scaled(&-BigInt::one()))
    }

    /// `[v] * [w] = [v + w]`
    pub fn pontryagin(&self, o: &Self) -> Self {
        let mut x = Self::default();
        for (v, c) in &self.terms {
            for (w, d) in &o.terms {
                let s: Vec<i64> = v.iter().zip(w).map(|(a, b)| a + b).collect();
                x.add_term(s, c * d);
            }
        }
        x
    }

    pub fn power(&self, m: u32, rank: usize) -> Self {
        (0..m).fold(Self::unit(rank), |acc, _| acc.pontryagin(self))
    }

    /// `[n]_*`, induced by `v -> n v`.
    pub fn multiply_by(&self, n: i64) -> Self {
        let mut x = Self::default();
        for (v, c) in &self.terms {
            x.add_term(v.iter().map(|a| a * n).collect(), c.clone());
        }
        x
    }
}

/// `([v]-[0])^{*m} = sum_{i<m} (-1)^i C(m,i) [m-i]_*([v]-[0])` for every
/// unit vector `v = +-e_j` in `Z^r` and `1 <= m <= max_m`.
pub fn pontryagin_identity_check(max_m: u32, rank: usize) -> Report {
    let mut r = Report::new("pontryagin");
    for j in 0..rank {
        for s in [1i64, -1] {
            let mut v = vec![0; rank];
            v[j] = s;
            let x = GroupAlgebraElem::point(v.clone()).minus(&GroupAlgebraElem::unit(rank));
            for m in 1..=max_m {
                let lhs = x.power(m, rank);
                let mut rhs = GroupAlgebraElem::default();
                for i in 0..m {
                    let c = binomial(m as u64, i as i64) * if i % 2 == 0 { 1 } else { -1 };
                    rhs = rhs.plus(&x.multiply_by((m - i) as i64).scaled(&c));
                }
                r.check(
                    "([v]-[0])^{*m} = sum (-1)^i C(m,i) [m-i]_*([v]-[0])",
                    || format!("v={v:?} m={m}"),
                    lhs == rhs,
                    || lhs.to_string(),
                    || rhs.to_string(),
                );
            }
        }
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<BigInt>;

    #[test]
    fn witt_example_on_x1() {
        let z = ZeroCycleModel::new(3, 4);
        let x1 = z.x::<BigInt>(1);
        let lhs = z.delta(2, &z.delta(3, &x1)).minus(&z.delta(3, &z.delta(2, &x1)));
        assert_eq!(lhs, z.delta(4, &x1));
        assert_eq!(lhs, z.pow(&x1, 4));
    }

    #[test]
    fn p21_on_generator() {
        let z = ZeroCycleModel::new(3, 4);
        let (x, t) = (z.x::<BigInt>(2), z.t::<BigInt>());
        let want = z.pow(&x, 2).plus(&z.mul(&x, &t).scaled(&BigInt::from(2)));
        assert_eq!(z.p_m1(2, &x), want);
        assert_eq!(z.p_m1(1, &t), t);
        assert!(z.p_m1(3, &P::one()).is_zero());
    }

    #[test]
    fn truncation_kills_high_degree() {
        let z = ZeroCycleModel::new(2, 2);
        let x = z.x::<BigInt>(1);
        assert!(z.pow(&x, 3).is_zero());
    }

    #[test]
    fn witt_sweep() {
        let r = witt_check::<BigInt>(&ZeroCycleModel::new(3, 4), 4, 5);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn pontryagin_small() {
        let x = GroupAlgebraElem::point(vec![1, 0]).minus(&GroupAlgebraElem::unit(2));
        let sq = x.power(2, 2);
        let want = GroupAlgebraElem::point(vec![2, 0])
            .minus(&GroupAlgebraElem::point(vec![1, 0]).scaled(&BigInt::from(2)))
            .plus(&GroupAlgebraElem::unit(2));
        assert_eq!(sq, want);
        assert!(pontryagin_identity_check(6, 2).passed());
    }
}
